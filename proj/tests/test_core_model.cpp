#include <random>

#include "../vendor/doctest.h"
#include "fairscore/core_model.hpp"
#include "helpers.hpp"

using namespace fairscore;
using testutil::make_dataset;

namespace {

ScoringSystem make_system(std::vector<long long> w, long long omega = 10) {
    ScoringSystem sys;
    sys.omega.assign(w.size(), omega);
    sys.feature_names.assign(w.size(), "");
    sys.feature_names[0] = "(intercept)";
    for (size_t j = 1; j < w.size(); ++j)
        sys.feature_names[j] = "x" + std::to_string(j);
    sys.w = std::move(w);
    return sys;
}

std::vector<Rat> row(std::vector<int> v) {
    std::vector<Rat> r;
    for (int x : v) r.emplace_back(x);
    return r;
}

}  // namespace

TEST_CASE("score is the exact dot product") {
    CHECK(score(make_system({0, 0, 0}), row({1, 1, 1})) == 0);
    CHECK(score(make_system({1, 2, -3}), row({1, 1, 1})) == 0);
    CHECK(score(make_system({-2, 5}), row({1, 0})) == -2);
    CHECK_THROWS_AS(score(make_system({1, 2}), row({1, 0, 1})),
                    std::invalid_argument);
}

TEST_CASE("predict thresholds at zero with sign(0) = -1") {
    CHECK(predict(make_system({3}, 3), row({1})) == 1);
    CHECK(predict(make_system({-1}), row({1})) == -1);
    CHECK(predict(make_system({0}), row({1})) == -1);
}

TEST_CASE("loss vector on separable and degenerate systems") {
    // score = -1 + 2 x1 is never zero on binary rows and matches the labels.
    Dataset data = make_dataset({{1}, {0}, {1}, {0}}, {1, -1, 1, -1},
                                {0, 1, 0, 1});
    CHECK(loss_vector(make_system({-1, 2}), data) ==
          std::vector<int>{0, 0, 0, 0});
    CHECK(loss_vector(make_system({0, 0}), data) ==
          std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("loss vector matches per-example recomputation") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 20, d = 3;
        std::vector<std::vector<int>> rows(n, std::vector<int>(d));
        std::vector<int> labels(n), groups(n);
        for (int i = 0; i < n; ++i) {
            for (int& v : rows[i]) v = rng() % 2;
            labels[i] = rng() % 2 ? 1 : -1;
            groups[i] = i % 2;
        }
        Dataset data = make_dataset(rows, labels, groups);
        std::vector<long long> w(d + 1);
        for (auto& wj : w) wj = static_cast<long long>(rng() % 7) - 3;
        std::vector<int> psi = loss_vector(w, data);
        for (int i = 0; i < n; ++i) {
            long long s = w[0];
            for (int j = 0; j < d; ++j) s += w[j + 1] * rows[i][j];
            CHECK(psi[i] == (labels[i] * s <= 0 ? 1 : 0));
        }
    }
}

TEST_CASE("weighted error averages by n") {
    std::vector<Rat> ones(6, Rat(1));
    CHECK(weighted_error({0, 0, 0, 0, 0, 0}, ones) == 0);
    CHECK(weighted_error({1, 1, 1, 0, 0, 0}, ones) == rat(1, 2));
    // Cost-sensitive 4:1 weights (b = 8/5 on positives, 2/5 on negatives),
    // one false negative and one false positive out of n = 4.
    std::vector<Rat> b{rat(8, 5), rat(8, 5), rat(2, 5), rat(2, 5)};
    CHECK(weighted_error({1, 0, 1, 0}, b) == rat(1, 2));
    CHECK_THROWS_AS(weighted_error({0, 1}, {Rat(1), Rat(-1)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(weighted_error({0, 1, 0}, {Rat(1)}),
                    std::invalid_argument);
}

TEST_CASE("loss, prediction and accuracy stay consistent") {
    for (long long seed = 0; seed < 8; ++seed) {
        testutil::RandomInstance inst = testutil::random_instance(seed);
        std::mt19937_64 rng(100 + seed);
        ScoringSystem sys = make_system(std::vector<long long>(
            inst.data.d + 1, 0));
        for (auto& wj : sys.w) wj = static_cast<long long>(rng() % 5) - 2;
        std::vector<int> psi = loss_vector(sys, inst.data);
        long long correct = 0;
        for (int i = 0; i < inst.data.n; ++i) {
            Rat s = score(sys, inst.data.x[i]);
            CHECK(psi[i] == (rat_of_long(inst.data.y[i]) * s <= 0 ? 1 : 0));
            int pred = predict(sys, inst.data.x[i]);
            if (pred == 1) CHECK(psi[i] == (inst.data.y[i] == 1 ? 0 : 1));
            if (s != 0 && pred == -1)
                CHECK(psi[i] == (inst.data.y[i] == -1 ? 0 : 1));
            correct += rat_of_long(inst.data.y[i]) * s > 0 ? 1 : 0;
        }
        std::vector<Rat> ones(inst.data.n, Rat(1));
        CHECK(weighted_error(psi, ones) ==
              1 - rat_of_long(correct) / rat_of_long(inst.data.n));
    }
}

TEST_CASE("dataset construction validates its invariants") {
    CHECK_THROWS_AS(make_dataset({{1}, {0}}, {1, -1}, {0, 0}),
                    std::invalid_argument);  // single group
    CHECK_THROWS_AS(make_dataset({{1}, {0}}, {1, 2}, {0, 1}),
                    std::invalid_argument);  // bad label
    CHECK_THROWS_AS(make_dataset({{1}, {0}}, {1, -1}, {0, 2}),
                    std::invalid_argument);  // group id gap
    CHECK_THROWS_AS(
        Dataset::create({{Rat(0), Rat(1)}, {Rat(1), Rat(0)}}, {1, -1}, {0, 1},
                        {"(intercept)", "x1"}),
        std::invalid_argument);  // intercept column not all ones
}

TEST_CASE("scoring system validation and model size") {
    ScoringSystem sys = make_system({-2, 5, 0, -3});
    sys.validate();
    CHECK(sys.model_size() == 2);
    sys.w[1] = 11;
    CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
    sys.w[1] = 5;
    sys.gamma = 0;
    CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
}
