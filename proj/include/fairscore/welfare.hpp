#pragma once

#include <map>
#include <vector>

#include "fairscore/core_model.hpp"

namespace fairscore {

enum class WeightMode { Normalized, Total };  // zeta_i = 1/n vs zeta_i = 1

// Welfare weights and regularization strengths.
struct WelfareParams {
    std::vector<Rat> a;  // per-example utility when classified correctly
    std::vector<Rat> b;  // per-example utility loss when misclassified
    Rat rho_bar = 0;     // mean fairness preference (may be negative)
    Rat lambda0 = 0;     // default l0 penalty per used feature
    std::map<int, Rat> lambda0_overrides;  // feature index (1..d) -> penalty
    Rat epsilon = 0;     // l1 penalty coefficient
    WeightMode weight_mode = WeightMode::Normalized;

    static WelfareParams uniform(int n, Rat rho = 0, Rat l0 = 0, Rat eps = 0,
                                 WeightMode mode = WeightMode::Normalized);

    Rat lambda0_for(int j) const;  // override if present, else default
    void validate(int n) const;    // throws on negative weights / lengths
};

// sum_i zeta_i (a_i - b_i psi_i)
Rat data_utility(const std::vector<int>& psi, const WelfareParams& params);

// data_utility - zeta * n * rho_bar * delta, i.e. total form
// sum a_i - sum b_i psi_i - n rho_bar delta; normalized form divides by n.
// Requires delta in [0,1].
Rat swf(const std::vector<int>& psi, const Rat& delta,
        const WelfareParams& params);

// (1/n) sum b_i psi_i + rho_bar delta + sum_j lambda0_j alpha_j
//   + epsilon sum_j beta_j,  j = 1..d (alpha/beta are indexed by j-1).
Rat erm_objective(const std::vector<int>& psi, const std::vector<int>& alpha,
                  const std::vector<Rat>& beta, const Rat& delta,
                  const WelfareParams& params);

}  // namespace fairscore
