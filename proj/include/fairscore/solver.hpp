#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairscore/mip.hpp"

namespace fairscore {

struct SolverConfig {
    std::optional<double> time_limit_seconds;
    Rat absolute_gap = rat(1, 1000000000);  // 1e-9
    Rat relative_gap = rat(1, 1000000);     // 1e-6
    std::optional<long long> node_limit;
    int threads = 1;
    long long seed = 0;
    long long enumeration_cap = 10000000;  // brute-force candidate limit
    bool verbose = false;  // progress lines on stderr

    static SolverConfig exact();  // zero gaps, for oracle comparisons
};

enum class SolveStatus { Optimal, FeasibleGap, Infeasible, TimeLimit, NodeLimit };

std::string status_name(SolveStatus s);

struct Solution {
    std::vector<long long> w;    // size d+1
    std::vector<int> psi;        // size n
    std::vector<int> alpha;      // size d
    std::vector<Rat> beta;       // size d
    Rat delta = 0;
    Rat objective = 0;
    Rat best_bound = 0;
    SolveStatus status = SolveStatus::Infeasible;
    long long nodes_explored = 0;
    double wall_time = 0;
};

// Optimal completion of (psi, alpha, beta, delta) for a fixed integer w under
// the canonical semantics psi = loss_vector(w); nullopt when w is infeasible
// (side constraints or fixed-delta bound).
struct CanonicalEval {
    std::vector<int> psi;
    std::vector<int> alpha;
    std::vector<Rat> beta;
    Rat delta;
    Rat objective;
};
std::optional<CanonicalEval> canonical_completion(const ProblemContext& ctx,
                                                  const std::vector<long long>& w);

// Exact branch-and-bound. Models carrying a ProblemContext are solved under
// the canonical semantics (psi identically loss_vector(w)); context-free
// models (e.g. re-parsed MPS) are solved as plain MIPs.
Solution solve(const MipModel& model, const SolverConfig& config = {});

// Exhaustive enumeration oracle over the coefficient box; deterministic
// tie-break (lexicographically smallest w). Throws when the box exceeds
// config.enumeration_cap.
Solution brute_force(const Dataset& data, const WelfareParams& params,
                     Notion notion, const SolveMode& mode,
                     const std::vector<long long>& omegas, const Rat& gamma,
                     const SideConstraints& side = {},
                     const SolverConfig& config = {});

// Independent exact-rational verification that a solution satisfies every
// model row, variable bound, and integrality flag within tol, and that the
// reported objective matches. Returns human-readable violations (empty =
// pass). Does not reuse any solver bookkeeping.
std::vector<std::string> check_solution(const MipModel& model,
                                        const Solution& sol,
                                        const Rat& tol = rat(1, 1000000000));

}  // namespace fairscore
