#include <random>

#include "../vendor/doctest.h"
#include "fairscore/fairness.hpp"
#include "helpers.hpp"

using namespace fairscore;
using testutil::figure1;
using testutil::make_dataset;

TEST_CASE("group index counts members and classes") {
    // 3 + 3 members, 2 positives in group 0 and 1 in group 1.
    Dataset data = make_dataset({{1}, {0}, {1}, {0}, {1}, {0}},
                                {1, 1, -1, 1, -1, -1}, {0, 0, 0, 1, 1, 1});
    GroupIndex gi = group_index(data);
    CHECK(gi.c == 2);
    CHECK(gi.n_group == std::vector<long long>{3, 3});
    CHECK(gi.n_pos == std::vector<long long>{2, 1});
    CHECK(gi.n_neg == std::vector<long long>{1, 2});
    CHECK(gi.total_pos == 3);
    CHECK(gi.total_neg == 3);
    for (int p = 0; p < 2; ++p)
        CHECK(gi.n_group[p] == gi.n_pos[p] + gi.n_neg[p]);
}

TEST_CASE("all-positive group has no negatives") {
    Dataset data = make_dataset({{1}, {0}, {1}, {0}}, {1, 1, 1, -1},
                                {0, 0, 1, 1});
    GroupIndex gi = group_index(data);
    CHECK(gi.n_neg[0] == 0);
    CHECK(gi.n_pos[0] == gi.n_group[0]);
}

TEST_CASE("the six-patient fixture reproduces the worked gaps") {
    GroupIndex gi = group_index(figure1());
    CHECK(gap_sp(testutil::fig1_psi_d3(), gi, 0, 1) == rat(1, 3));
    CHECK(gap_eo(testutil::fig1_psi_d2(), gi, 0, 1) == rat(1, 2));
    CHECK(gap_eo(testutil::fig1_psi_d3(), gi, 0, 1) == rat(1, 2));
    CHECK(gap_omr(testutil::fig1_psi_d3(), gi, 0, 1) == rat(1, 3));
    CHECK(fairness_level(Notion::SP, testutil::fig1_psi_d3(), gi) ==
          rat(1, 3));
    // D1 treats everyone identically: every gap vanishes.
    CHECK(gap_sp(testutil::fig1_psi_d1(), gi, 0, 1) == 0);
    CHECK(gap_omr(testutil::fig1_psi_d1(), gi, 0, 1) == 0);
    CHECK(gap_eo(testutil::fig1_psi_d1(), gi, 0, 1) == 0);
}

TEST_CASE("omr gap extremes") {
    Dataset data = make_dataset({{1}, {0}, {1}, {0}}, {1, -1, 1, -1},
                                {0, 0, 1, 1});
    GroupIndex gi = group_index(data);
    CHECK(gap_omr({0, 0, 0, 0}, gi, 0, 1) == 0);
    CHECK(gap_omr({1, 1, 0, 0}, gi, 0, 1) == 1);
}

TEST_CASE("eo requires positives in both groups") {
    Dataset data = make_dataset({{1}, {0}, {1}, {0}}, {1, 1, -1, -1},
                                {0, 0, 1, 1});
    GroupIndex gi = group_index(data);
    CHECK_THROWS_AS(gap_eo({0, 0, 0, 0}, gi, 0, 1), MetricUndefinedError);
    try {
        gap_eo({0, 0, 0, 0}, gi, 0, 1);
    } catch (const MetricUndefinedError& e) {
        CHECK(e.group == 1);
    }
    CHECK_THROWS_AS(gap_pe({0, 0, 0, 0}, gi, 1, 0), MetricUndefinedError);
}

TEST_CASE("pe gap extremes and confusion-matrix oracle") {
    Dataset data = make_dataset({{1}, {0}, {1}, {0}}, {1, -1, 1, -1},
                                {0, 0, 1, 1});
    GroupIndex gi = group_index(data);
    CHECK(gap_pe({0, 0, 0, 0}, gi, 0, 1) == 0);
    CHECK(gap_pe({0, 1, 0, 0}, gi, 0, 1) == 1);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 16;
        std::vector<std::vector<int>> rows(n, {0});
        std::vector<int> labels(n), groups(n);
        std::vector<int> psi(n);
        for (int i = 0; i < n; ++i) {
            labels[i] = i % 4 < 2 ? 1 : -1;  // both classes in both groups
            groups[i] = i % 2;
            psi[i] = rng() % 2;
        }
        Dataset d = make_dataset(rows, labels, groups);
        GroupIndex g = group_index(d);
        // FPR per group counted directly from the confusion matrix.
        Rat fpr[2];
        for (int p = 0; p < 2; ++p) {
            long long fp = 0, neg = 0;
            for (int i = 0; i < n; ++i) {
                if (groups[i] != p || labels[i] != -1) continue;
                ++neg;
                fp += psi[i];
            }
            fpr[p] = rat_of_long(fp) / rat_of_long(neg);
        }
        CHECK(gap_pe(psi, g, 0, 1) == abs(fpr[0] - fpr[1]));
    }
}

TEST_CASE("sp gap equals the prediction-rate difference without ties") {
    // Coefficients with odd intercept and even feature weights give odd,
    // hence nonzero, scores on binary rows.
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 16, d = 3;
        std::vector<std::vector<int>> rows(n, std::vector<int>(d));
        std::vector<int> labels(n), groups(n);
        for (int i = 0; i < n; ++i) {
            for (int& v : rows[i]) v = rng() % 2;
            labels[i] = rng() % 2 ? 1 : -1;
            groups[i] = i % 2;
        }
        Dataset data = make_dataset(rows, labels, groups);
        std::vector<long long> w{1, 2, -2, 4};
        if (trial % 2) w = {-3, 2, 4, -2};
        std::vector<int> psi = loss_vector(w, data);
        GroupIndex gi = group_index(data);
        Rat rate[2];
        for (int p = 0; p < 2; ++p) {
            long long pos = 0;
            for (int i = 0; i < n; ++i) {
                if (groups[i] != p) continue;
                long long s = w[0];
                for (int j = 0; j < d; ++j) s += w[j + 1] * rows[i][j];
                pos += s > 0;
            }
            rate[p] = rat_of_long(pos) / rat_of_long(gi.n_group[p]);
        }
        CHECK(gap_sp(psi, gi, 0, 1) == abs(rate[0] - rate[1]));
        CHECK(gap_sp_signed(psi, gi, 0, 1) == rate[0] - rate[1]);
    }
}

TEST_CASE("identical patterns with identical base rates have zero sp gap") {
    Dataset data = make_dataset({{1}, {0}, {1}, {0}}, {1, -1, 1, -1},
                                {0, 0, 1, 1});
    GroupIndex gi = group_index(data);
    CHECK(gap_sp({0, 1, 0, 1}, gi, 0, 1) == 0);
}

TEST_CASE("fairness level is the pairwise maximum") {
    // Three groups of 20 with error counts 2, 7, 4: pairwise omr gaps are
    // 1/4, 1/10 and 3/20.
    std::vector<std::vector<int>> rows(60, {0});
    std::vector<int> labels(60, 1), groups(60);
    std::vector<int> psi(60, 0);
    for (int i = 0; i < 60; ++i) {
        groups[i] = i / 20;
        labels[i] = i % 2 ? 1 : -1;
    }
    for (int i = 0; i < 2; ++i) psi[i] = 1;
    for (int i = 20; i < 27; ++i) psi[i] = 1;
    for (int i = 40; i < 44; ++i) psi[i] = 1;
    Dataset data = make_dataset(rows, labels, groups);
    GroupIndex gi = group_index(data);
    CHECK(gap_omr(psi, gi, 0, 1) == rat(1, 4));
    CHECK(gap_omr(psi, gi, 0, 2) == rat(1, 10));
    CHECK(gap_omr(psi, gi, 1, 2) == rat(3, 20));
    CHECK(fairness_level(Notion::OMR, psi, gi) == rat(1, 4));

    // Two groups: the level is the single pairwise gap.
    GroupIndex gi2 = group_index(figure1());
    CHECK(fairness_level(Notion::OMR, testutil::fig1_psi_d3(), gi2) ==
          gap_omr(testutil::fig1_psi_d3(), gi2, 0, 1));
}

TEST_CASE("gap symmetry, range and replication invariance") {
    std::mt19937_64 rng(17);
    for (long long seed = 0; seed < 10; ++seed) {
        testutil::RandomInstance inst = testutil::random_instance(seed);
        const Dataset& data = inst.data;
        std::vector<int> psi(data.n);
        for (int& v : psi) v = rng() % 2;
        GroupIndex gi = group_index(data);

        for (int p = 0; p < data.c; ++p) {
            for (int q = p + 1; q < data.c; ++q) {
                for (auto gap : {gap_sp, gap_omr, gap_eo, gap_pe}) {
                    Rat g = gap(psi, gi, p, q);
                    CHECK(g == gap(psi, gi, q, p));
                    CHECK(g >= 0);
                    CHECK(g <= 1);
                }
            }
        }
        CHECK(fairness_level(Notion::EODDS, psi, gi) ==
              std::max(fairness_level(Notion::EO, psi, gi),
                       fairness_level(Notion::PE, psi, gi)));

        // Duplicating the whole dataset leaves every level unchanged.
        std::vector<std::vector<Rat>> x2;
        std::vector<int> y2, g2, psi2;
        for (int rep = 0; rep < 3; ++rep) {
            for (int i = 0; i < data.n; ++i) {
                x2.push_back(data.x[i]);
                y2.push_back(data.y[i]);
                g2.push_back(data.group[i]);
                psi2.push_back(psi[i]);
            }
        }
        Dataset tripled =
            Dataset::create(x2, y2, g2, data.feature_names,
                            data.sensitive_columns);
        GroupIndex gi3 = group_index(tripled);
        for (Notion notion : {Notion::SP, Notion::OMR, Notion::EO, Notion::PE,
                              Notion::EODDS})
            CHECK(fairness_level(notion, psi, gi) ==
                  fairness_level(notion, psi2, gi3));
    }
}

TEST_CASE("notion names round-trip") {
    for (Notion n : {Notion::SP, Notion::EO, Notion::OMR, Notion::PE,
                     Notion::EODDS})
        CHECK(notion_from_name(notion_name(n)) == n);
    CHECK_THROWS_AS(notion_from_name("nope"), std::invalid_argument);
}
