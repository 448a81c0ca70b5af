#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fairscore/fairness.hpp"
#include "fairscore/welfare.hpp"

namespace fairscore {

enum class VarRole { W, Psi, Alpha, Beta, Delta };

struct MipVariable {
    std::string name;
    Rat lb, ub;
    bool integral = false;
    VarRole role = VarRole::W;
    int index = 0;  // j for w/alpha/beta, i for psi (1-based as named)
};

// Row with sense 'L' (<=), 'E' (=) or 'G' (>=); a ranged row is a 'L' row
// whose activity must also stay >= range_lo.
struct MipConstraint {
    std::string name;
    std::vector<std::pair<int, Rat>> terms;  // (variable index, coefficient)
    char sense = 'L';
    Rat rhs = 0;
    bool ranged = false;
    Rat range_lo = 0;
};

struct SolveMode {
    enum Kind { Joint, FixedDelta, AccuracyOnly };
    Kind kind = Joint;
    Rat delta_s = 1;  // only meaningful for FixedDelta

    static SolveMode joint() { return {Joint, 1}; }
    static SolveMode fixed(Rat ds) { return {FixedDelta, std::move(ds)}; }
    static SolveMode accuracy() { return {AccuracyOnly, 1}; }
    bool has_delta_var() const { return kind == Joint; }
    std::string name() const;
};

// Optional structural constraints on which features a model may use.
struct SideConstraints {
    std::optional<std::pair<long long, long long>> model_size;  // (A_l, A_u)
    std::set<int> forced_features;    // alpha_j fixed to 1
    std::set<int> excluded_features;  // alpha_j fixed to 0
    std::map<int, int> sign_constraints;  // j -> +1 (w_j >= 1) or -1 (<= -1)
    // (antecedent l, consequents C): sum_{k in C} alpha_k <= |C| alpha_l.
    std::vector<std::pair<int, std::vector<int>>> implications;
    std::map<int, Rat> lambda0_overrides;
    bool procedural_fairness = true;  // alpha_s = 0 on sensitive columns

    void validate(int d) const;  // throws on contradictions / out-of-range
};

// Everything needed to evaluate candidate coefficient vectors exactly;
// carried by models produced by build() (absent on re-parsed models).
struct ProblemContext {
    Dataset data;
    WelfareParams params;  // lambda0 overrides already merged in
    Notion notion;
    SolveMode mode;
    SideConstraints side;
    std::vector<long long> omegas;  // size d+1
    Rat gamma;
    GroupIndex gi;
    std::vector<GroupIndex> extra_gis;  // additional sensitive attributes
};

struct MipModel {
    std::vector<MipVariable> vars;
    std::vector<MipConstraint> rows;
    std::vector<std::pair<int, Rat>> objective;  // minimize
    Rat obj_constant = 0;

    std::vector<int> w_vars;      // size d+1 (when role map known)
    std::vector<int> psi_vars;    // size n
    std::vector<int> alpha_vars;  // size d
    std::vector<int> beta_vars;   // size d
    int delta_var = -1;

    std::shared_ptr<const ProblemContext> context;  // null for parsed models

    int var_by_name(const std::string& name) const;  // -1 when absent
};

// Big-M constant for example i: gamma + sum_j omega_j |x_ij| (the maximum of
// gamma - y_i w.x_i over the coefficient box).
Rat big_m(const std::vector<Rat>& x_i, int y_i,
          const std::vector<long long>& omegas, const Rat& gamma);

// Validates inputs and assembles the evaluation context shared by build()
// and the enumeration oracle (lambda0 overrides merged, group indexes built).
std::shared_ptr<const ProblemContext> make_context(
    const Dataset& data, const WelfareParams& params, Notion notion,
    const SolveMode& mode, const SideConstraints& side,
    const std::vector<long long>& omegas, const Rat& gamma,
    const std::vector<std::vector<int>>& extra_groupings = {});

// Builds formulation rows: Big-M indicator rows, two linearized fairness rows
// per unordered group pair per constrained notion, procedural-fairness fixes,
// l0/l1 linking, and side-constraint rows. extra_groupings adds an
// independent fairness constraint set per additional sensitive attribute.
MipModel build(const Dataset& data, const WelfareParams& params, Notion notion,
               const SolveMode& mode, const SideConstraints& side,
               const std::vector<long long>& omegas, const Rat& gamma,
               const std::vector<std::vector<int>>& extra_groupings = {});

// Fixed-format MPS text; deterministic variable order
// w_0..w_d, psi_1..psi_n, alpha_1..alpha_d, beta_1..beta_d, delta.
std::string export_mps(const MipModel& model);

// Parses text produced by export_mps (general enough for plain MPS files).
// The result carries no problem context.
MipModel parse_mps(const std::string& text);

// Human-readable listing for debugging; not a stable format.
std::string export_lp_debug(const MipModel& model);

}  // namespace fairscore
