#pragma once

#include <set>
#include <string>
#include <vector>

#include "fairscore/rational.hpp"

namespace fairscore {

// n examples with d features plus an intercept column of ones at index 0.
// Labels are -1/+1; groups are ids in {0..c-1}, each occurring at least once.
struct Dataset {
    int n = 0;
    int d = 0;  // non-intercept feature count; feature matrix is n x (d+1)
    int c = 0;  // group count
    std::vector<std::vector<Rat>> x;  // row-major, x[i][0] == 1
    std::vector<int> y;               // in {-1,+1}
    std::vector<int> group;           // in {0..c-1}
    std::vector<std::string> feature_names;  // size d+1
    std::set<int> sensitive_columns;         // indices in 1..d (may be empty)

    // True when every non-intercept entry is 0 or 1.
    bool all_binary() const;

    // Validates all invariants; throws std::invalid_argument on violation.
    static Dataset create(std::vector<std::vector<Rat>> features,
                          std::vector<int> labels, std::vector<int> groups,
                          std::vector<std::string> names,
                          std::set<int> sensitive = {});
};

struct SystemMetadata {
    std::string notion;     // empty when not applicable
    std::string mode;
    Rat delta = 0;          // achieved unfairness level
    Rat objective = 0;
    std::string status;
};

// Sparse linear classifier with small integer coefficients; predicts
// sign(w.x) with sign(0) = -1.
struct ScoringSystem {
    std::vector<long long> w;       // size d+1, w[0] is the intercept
    std::vector<long long> omega;   // per-coefficient bound, size d+1
    Rat gamma = rat(1, 10);         // margin constant, > 0
    std::vector<std::string> feature_names;  // size d+1
    SystemMetadata meta;

    // Validates |w_j| <= omega_j and gamma > 0; throws on violation.
    void validate() const;

    // Count of nonzero non-intercept coefficients.
    int model_size() const;
};

// Membership and count index per group; built by group_index() in
// fairness.hpp.
struct GroupIndex {
    int c = 0;
    std::vector<std::vector<int>> members;  // I_p
    std::vector<std::vector<int>> pos;      // I_p+ (y=+1)
    std::vector<std::vector<int>> neg;      // I_p- (y=-1)
    std::vector<long long> n_group;         // N_p
    std::vector<long long> n_pos;           // N_p+
    std::vector<long long> n_neg;           // N_p-
    long long total_pos = 0;                // N+
    long long total_neg = 0;                // N-
};

// w.x, exact. Throws on dimension mismatch.
Rat score(const ScoringSystem& sys, const std::vector<Rat>& x);

// +1 iff score > 0, else -1 (score 0 maps to -1).
int predict(const ScoringSystem& sys, const std::vector<Rat>& x);

// psi_i = 1 iff y_i * score(x_i) <= 0 (score 0 is an error for both classes,
// matching the Big-M indicator semantics).
std::vector<int> loss_vector(const ScoringSystem& sys, const Dataset& data);

// Same indicator for a plain integer coefficient vector.
std::vector<int> loss_vector(const std::vector<long long>& w,
                             const Dataset& data);

// (1/n) sum b_i psi_i. Throws on length mismatch or negative weight.
Rat weighted_error(const std::vector<int>& psi, const std::vector<Rat>& b);

}  // namespace fairscore
