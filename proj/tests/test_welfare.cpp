#include <random>

#include "../vendor/doctest.h"
#include "fairscore/welfare.hpp"
#include "helpers.hpp"

using namespace fairscore;

TEST_CASE("data utility under both weight modes") {
    WelfareParams p = WelfareParams::uniform(4);
    CHECK(data_utility({0, 0, 0, 0}, p) == 1);
    CHECK(data_utility({1, 0, 0, 0}, p) == rat(3, 4));
    WelfareParams total = WelfareParams::uniform(10);
    total.weight_mode = WeightMode::Total;
    CHECK(data_utility({1, 1, 1, 0, 0, 0, 0, 0, 0, 0}, total) == 7);
    CHECK_THROWS_AS(data_utility({0, 0}, p), std::invalid_argument);
}

TEST_CASE("swf subtracts the weighted unfairness penalty") {
    WelfareParams p = WelfareParams::uniform(4, rat(1, 5));
    // accuracy 3/4, rho_bar 0.2, delta 0.05 -> 0.75 - 0.01 = 0.74
    CHECK(swf({1, 0, 0, 0}, rat(1, 20), p) == rat(37, 50));

    WelfareParams zero = WelfareParams::uniform(4);
    for (int k = 0; k <= 4; ++k)
        CHECK(swf({1, 0, 0, 0}, rat(k, 4), zero) ==
              data_utility({1, 0, 0, 0}, zero));
    CHECK_THROWS_AS(swf({0, 0, 0, 0}, Rat(2), p), std::invalid_argument);
    CHECK_THROWS_AS(swf({0, 0, 0, 0}, Rat(-1), p), std::invalid_argument);
}

TEST_CASE("swf total mode sums instead of averaging") {
    WelfareParams p = WelfareParams::uniform(4, rat(1, 5));
    p.weight_mode = WeightMode::Total;
    // 4 - 1 - 4 * (1/5) * (1/2) = 3 - 2/5
    CHECK(swf({1, 0, 0, 0}, rat(1, 2), p) == rat(13, 5));
}

TEST_CASE("erm objective on zero and penalty-free systems") {
    WelfareParams p = WelfareParams::uniform(5, rat(1, 4));
    p.b = {Rat(1), Rat(2), rat(1, 2), Rat(1), rat(3, 2)};
    std::vector<int> ones(5, 1);
    std::vector<int> alpha(3, 0);
    std::vector<Rat> beta(3, Rat(0));
    // w = 0: every example misclassified, no penalties, delta as given.
    CHECK(erm_objective(ones, alpha, beta, rat(1, 3), p) ==
          Rat(6) / 5 + rat(1, 4) * rat(1, 3));
    // lambda0 = epsilon = 0: objective is weighted error plus rho delta.
    std::vector<int> psi{1, 0, 1, 0, 0};
    CHECK(erm_objective(psi, {1, 1, 0}, {Rat(2), Rat(1), Rat(0)}, rat(1, 2),
                        p) == weighted_error(psi, p.b) + rat(1, 8));
}

TEST_CASE("erm objective applies per-feature overrides") {
    WelfareParams p = WelfareParams::uniform(2, Rat(0), rat(1, 10), rat(1, 100));
    p.lambda0_overrides[2] = Rat(1);
    CHECK(p.lambda0_for(1) == rat(1, 10));
    CHECK(p.lambda0_for(2) == 1);
    CHECK(erm_objective({0, 0}, {1, 1}, {Rat(1), Rat(3)}, Rat(0), p) ==
          rat(1, 10) + 1 + rat(4, 100));
}

TEST_CASE("normalized swf and the erm objective are affinely related") {
    std::mt19937_64 rng(23);
    for (long long seed = 0; seed < 10; ++seed) {
        testutil::RandomInstance inst = testutil::random_instance(seed);
        WelfareParams p = inst.params;
        p.lambda0 = 0;
        p.epsilon = 0;
        p.lambda0_overrides.clear();
        const int n = inst.data.n, d = inst.data.d;
        std::vector<int> psi(n);
        for (int& v : psi) v = rng() % 2;
        Rat delta = rat(static_cast<long long>(rng() % 5), 4);
        std::vector<int> alpha(d, 1);
        std::vector<Rat> beta(d, Rat(2));
        Rat sum_a = 0;
        for (const Rat& a : p.a) sum_a += a;
        CHECK(swf(psi, delta, p) ==
              sum_a / rat_of_long(n) -
                  erm_objective(psi, alpha, beta, delta, p));
    }
}

TEST_CASE("swf is monotone in delta according to the sign of rho") {
    WelfareParams pos = WelfareParams::uniform(4, rat(1, 2));
    WelfareParams neg = WelfareParams::uniform(4, rat(-1, 2));
    std::vector<int> psi{0, 1, 0, 0};
    for (int k = 0; k < 4; ++k) {
        CHECK(swf(psi, rat(k, 4), pos) > swf(psi, rat(k + 1, 4), pos));
        CHECK(swf(psi, rat(k, 4), neg) < swf(psi, rat(k + 1, 4), neg));
    }
}

TEST_CASE("params validation rejects bad weights") {
    WelfareParams p = WelfareParams::uniform(3);
    p.validate(3);
    CHECK_THROWS_AS(p.validate(4), std::invalid_argument);
    p.b[1] = Rat(-1);
    CHECK_THROWS_AS(p.validate(3), std::invalid_argument);
    p = WelfareParams::uniform(3);
    p.epsilon = Rat(-1);
    CHECK_THROWS_AS(p.validate(3), std::invalid_argument);
    p = WelfareParams::uniform(3);
    p.lambda0_overrides[1] = Rat(-1);
    CHECK_THROWS_AS(p.validate(3), std::invalid_argument);
    p = WelfareParams::uniform(3, rat(-1, 2));  // negative rho_bar is legal
    p.validate(3);
}
