#include <gmpxx.h>

#include <algorithm>
#include <chrono>

#include "fairscore/solver.hpp"

namespace fairscore {

Solution brute_force(const Dataset& data, const WelfareParams& params,
                     Notion notion, const SolveMode& mode,
                     const std::vector<long long>& omegas, const Rat& gamma,
                     const SideConstraints& side, const SolverConfig& config) {
    auto ctx = make_context(data, params, notion, mode, side, omegas, gamma);

    const int d = data.d;
    std::vector<char> banned(d + 1, 0);
    for (int j : side.excluded_features) banned[j] = 1;
    if (side.procedural_fairness)
        for (int j : data.sensitive_columns) banned[j] = 1;

    // Per-coefficient ranges after exclusion and sign restrictions.
    std::vector<long long> lo(d + 1), hi(d + 1);
    mpz_class count = 1;
    for (int j = 0; j <= d; ++j) {
        lo[j] = -ctx->omegas[j];
        hi[j] = ctx->omegas[j];
        if (j >= 1 && banned[j]) lo[j] = hi[j] = 0;
        auto it = side.sign_constraints.find(j);
        if (it != side.sign_constraints.end()) {
            if (it->second > 0) lo[j] = std::max(lo[j], 1LL);
            else hi[j] = std::min(hi[j], -1LL);
        }
        if (lo[j] > hi[j]) {
            Solution s;
            s.status = SolveStatus::Infeasible;
            return s;
        }
        count *= static_cast<long>(hi[j] - lo[j] + 1);
    }
    if (count > mpz_class(static_cast<unsigned long>(config.enumeration_cap)))
        throw std::runtime_error(
            "enumeration space exceeds the configured cap (" +
            count.get_str() + " candidates)");

    auto t0 = std::chrono::steady_clock::now();
    Solution best;
    best.status = SolveStatus::Infeasible;
    bool found = false;

    // Lexicographic odometer; strict improvement keeps the first (smallest
    // in lex order) optimal coefficient vector.
    std::vector<long long> w = lo;
    long long visited = 0;
    while (true) {
        ++visited;
        auto ev = canonical_completion(*ctx, w);
        if (ev && (!found || ev->objective < best.objective)) {
            found = true;
            best.w = w;
            best.psi = ev->psi;
            best.alpha = ev->alpha;
            best.beta = ev->beta;
            best.delta = ev->delta;
            best.objective = ev->objective;
        }
        int j = d;
        while (j >= 0 && w[j] == hi[j]) --j;
        if (j < 0) break;
        ++w[j];
        for (int k = j + 1; k <= d; ++k) w[k] = lo[k];
    }

    best.nodes_explored = visited;
    best.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (found) {
        best.status = SolveStatus::Optimal;
        best.best_bound = best.objective;
    }
    return best;
}

}  // namespace fairscore
