#pragma once

#include <vector>

#include "fairscore/fairness.hpp"
#include "fairscore/welfare.hpp"

namespace fairscore {

// Discretization and welfare bounds for a real-coefficient reference
// classifier theta against integer scoring systems on {-Omega..Omega}^(d+1).
//
// Margins |theta.x_i| / ||theta||_2 are irrational in general; every
// comparison (sorting, membership in the small-margin set, the minimal
// integer resolution) is carried out exactly on squared quantities. The
// rational fields below are exact whenever the underlying square is a
// perfect rational square and double-precision approximations otherwise.
struct TheoryReport {
    std::vector<Rat> margins;  // sorted ascending
    int k = 1;
    Rat eta_k = 0;             // k-th smallest margin
    Rat x_k = 0;               // max example norm outside the small-margin set
    Rat omega_bound = 0;       // X_(k) sqrt(d+1) / (2 eta_(k))
    long long omega_min = 0;   // smallest integer strictly above omega_bound
    Rat delta_f = 0;
    Rat welfare_gap_lower = 0;
    Rat delta_star = 0;
    Rat delta_star_cap = 0;    // the welfare constant for delta_star
    Rat swf_lower = 0;
};

// psi of the real-coefficient classifier (exact; theta entries are rational).
std::vector<int> loss_vector_real(const std::vector<Rat>& theta,
                                  const Dataset& data);

// Squared margins (theta.x_i)^2 / ||theta||^2, index-aligned, exact.
std::vector<Rat> margin_squares(const std::vector<Rat>& theta,
                                const Dataset& data);

// Margins sorted ascending. Throws on theta = 0.
std::vector<Rat> margins(const std::vector<Rat>& theta, const Dataset& data);

// Indicator of the small-margin set {i : margin_i < eta_(k)}, 1-based k.
std::vector<char> small_margin_set(const std::vector<Rat>& margin_sq, int k);

// X_(k) sqrt(d+1) / (2 eta_(k)); throws when eta_(k) = 0.
Rat omega_bound(const std::vector<Rat>& theta, const Dataset& data, int k);

// Smallest integer Omega with Omega > omega_bound, computed exactly.
long long omega_min(const std::vector<Rat>& theta, const Dataset& data, int k);

// Componentwise nearest-integer image of Omega theta / ||theta||_2 (ties go
// up); exact tie handling. Lies in {-Omega..Omega}^(d+1) by construction and
// reproduces theta's labels outside the small-margin set whenever
// Omega > omega_bound.
std::vector<long long> rounded_coefficients(const std::vector<Rat>& theta,
                                            const Dataset& data,
                                            long long omega);

// Maximal fairness-level drift caused by flipping the k-1 smallest-margin
// examples: (k-1)/min_p N_p for OMR and SP, (k-1)/min_p N_p+ for EO,
// (k-1)/min_p N_p- for PE, max of the last two for EODDS.
Rat delta_f(int k, Notion notion, const GroupIndex& gi);

// (1-k) max_b_over_small_set - n rho_bar delta_f_value  (total weight mode)
Rat welfare_gap_lower(int k, const Rat& max_b_over_small_set, int n,
                      const Rat& rho_bar, const Rat& delta_f_value);
Rat welfare_gap_lower(const std::vector<Rat>& theta, const Dataset& data,
                      int k, const WelfareParams& params, Notion notion);

// Welfare constant for a given achieved unfairness level (total weight mode).
// The EO expression exists in two variants: the derived one over per-group
// positive counts (default) and the as-printed one over full group sizes.
Rat delta_star_cap(const Rat& delta_star, Notion notion,
                   const WelfareParams& params, const GroupIndex& gi,
                   bool eo_as_printed = false);

// delta_star_cap - rho_bar when rho_bar > 0 (total weight mode).
Rat swf_lower_bound(const Rat& delta_star, Notion notion,
                    const WelfareParams& params, const GroupIndex& gi,
                    bool eo_as_printed = false);

TheoryReport theory_report(const std::vector<Rat>& theta, const Dataset& data,
                           int k, const WelfareParams& params, Notion notion,
                           const Rat& delta_star, bool eo_as_printed = false);

}  // namespace fairscore
