#include "fairscore/mip.hpp"

#include <algorithm>
#include <sstream>

namespace fairscore {

std::string SolveMode::name() const {
    switch (kind) {
        case Joint: return "joint";
        case FixedDelta: return "fixed-delta";
        case AccuracyOnly: return "accuracy-only";
    }
    return "?";
}

void SideConstraints::validate(int d) const {
    if (model_size) {
        auto [lo, hi] = *model_size;
        if (lo < 0 || hi < 0 || lo > hi)
            throw std::invalid_argument("model_size bounds must satisfy 0 <= A_l <= A_u");
        if (lo > d)
            throw std::invalid_argument("model_size lower bound exceeds feature count");
    }
    auto in_range = [d](int j) { return j >= 1 && j <= d; };
    for (int j : forced_features)
        if (!in_range(j)) throw std::invalid_argument("forced feature out of range");
    for (int j : excluded_features)
        if (!in_range(j)) throw std::invalid_argument("excluded feature out of range");
    for (int j : forced_features)
        if (excluded_features.count(j))
            throw std::invalid_argument("feature " + std::to_string(j) +
                                        " both forced and excluded");
    for (const auto& [j, s] : sign_constraints) {
        if (!in_range(j)) throw std::invalid_argument("sign constraint out of range");
        if (s != 1 && s != -1)
            throw std::invalid_argument("sign constraint must be +1 or -1");
        if (excluded_features.count(j))
            throw std::invalid_argument("sign constraint on excluded feature " +
                                        std::to_string(j));
    }
    if (model_size &&
        static_cast<long long>(forced_features.size()) > model_size->second)
        throw std::invalid_argument("forced features exceed model_size upper bound");
    for (const auto& [l, cons] : implications) {
        if (!in_range(l)) throw std::invalid_argument("implication antecedent out of range");
        if (cons.empty()) throw std::invalid_argument("implication with no consequents");
        for (int j : cons)
            if (!in_range(j)) throw std::invalid_argument("implication consequent out of range");
    }
    for (const auto& [j, v] : lambda0_overrides) {
        if (!in_range(j)) throw std::invalid_argument("lambda0 override out of range");
        if (v < 0) throw std::invalid_argument("lambda0 override must be >= 0");
    }
}

int MipModel::var_by_name(const std::string& name) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name) return static_cast<int>(i);
    return -1;
}

Rat big_m(const std::vector<Rat>& x_i, [[maybe_unused]] int y_i,
          const std::vector<long long>& omegas, const Rat& gamma) {
    if (x_i.size() != omegas.size())
        throw std::invalid_argument("big_m: dimension mismatch");
    Rat m = gamma;
    for (size_t j = 0; j < x_i.size(); ++j)
        m += rat_of_long(omegas[j]) * abs(x_i[j]);
    return m;
}

namespace {

void check_grouping(const std::vector<int>& groups, int n) {
    if (static_cast<int>(groups.size()) != n)
        throw std::invalid_argument("extra grouping length mismatch");
    int cmax = -1;
    for (int g : groups) {
        if (g < 0) throw std::invalid_argument("negative group id in extra grouping");
        cmax = std::max(cmax, g);
    }
    if (cmax < 1) throw std::invalid_argument("extra grouping needs >= 2 groups");
    std::vector<int> seen(cmax + 1, 0);
    for (int g : groups) seen[g] = 1;
    for (int v : seen)
        if (!v) throw std::invalid_argument("extra grouping has an empty group");
}

struct FairExpr {
    std::vector<std::pair<int, Rat>> terms;  // over psi variable indices
    Rat base = 0;  // constant part (SP base-rate difference)
};

// Linear part (in psi) and constant of the signed pairwise gap expression.
FairExpr pair_expr(Notion notion, const GroupIndex& gi,
                   const std::vector<int>& psi_vars, int p, int q) {
    FairExpr e;
    auto add = (
        [&](const std::vector<int>& idx, const Rat& coeff) {
            for (int i : idx) e.terms.emplace_back(psi_vars[i], coeff);
        });
    switch (notion) {
        case Notion::SP: {
            Rat np = rat_of_long(gi.n_group[p]), nq = rat_of_long(gi.n_group[q]);
            e.base = rat_of_long(gi.n_pos[p]) / np - rat_of_long(gi.n_pos[q]) / nq;
            add(gi.neg[p], 1 / np);
            add(gi.pos[p], -1 / np);
            add(gi.neg[q], -1 / nq);
            add(gi.pos[q], 1 / nq);
            break;
        }
        case Notion::OMR: {
            add(gi.members[p], 1 / rat_of_long(gi.n_group[p]));
            add(gi.members[q], -1 / rat_of_long(gi.n_group[q]));
            break;
        }
        case Notion::EO: {
            add(gi.pos[p], 1 / rat_of_long(gi.n_pos[p]));
            add(gi.pos[q], -1 / rat_of_long(gi.n_pos[q]));
            break;
        }
        case Notion::PE: {
            add(gi.neg[p], 1 / rat_of_long(gi.n_neg[p]));
            add(gi.neg[q], -1 / rat_of_long(gi.n_neg[q]));
            break;
        }
        default:
            throw std::logic_error("pair_expr: composite notion");
    }
    return e;
}

void require_defined(Notion notion, const GroupIndex& gi) {
    for (int p = 0; p < gi.c; ++p) {
        if ((notion == Notion::EO || notion == Notion::EODDS) && gi.n_pos[p] == 0)
            throw MetricUndefinedError(
                "group " + std::to_string(p) + " has no positive examples", p);
        if ((notion == Notion::PE || notion == Notion::EODDS) && gi.n_neg[p] == 0)
            throw MetricUndefinedError(
                "group " + std::to_string(p) + " has no negative examples", p);
    }
}

}  // namespace

std::shared_ptr<const ProblemContext> make_context(
    const Dataset& data, const WelfareParams& params, Notion notion,
    const SolveMode& mode, const SideConstraints& side,
    const std::vector<long long>& omegas, const Rat& gamma,
    const std::vector<std::vector<int>>& extra_groupings) {
    params.validate(data.n);
    side.validate(data.d);
    if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
    if (static_cast<int>(omegas.size()) != data.d + 1)
        throw std::invalid_argument("omegas length mismatch");
    for (long long o : omegas)
        if (o < 1) throw std::invalid_argument("omega_j must be >= 1");
    if (mode.kind == SolveMode::FixedDelta &&
        (mode.delta_s < 0 || mode.delta_s > 1))
        throw std::invalid_argument("delta_s out of [0,1]");
    if (side.procedural_fairness)
        for (int j : side.forced_features)
            if (data.sensitive_columns.count(j))
                throw std::invalid_argument(
                    "feature " + std::to_string(j) +
                    " is sensitive (alpha fixed to 0) but forced to 1");

    auto ctx = std::make_shared<ProblemContext>();
    ctx->data = data;
    ctx->params = params;
    for (const auto& [j, v] : side.lambda0_overrides)
        ctx->params.lambda0_overrides[j] = v;
    ctx->notion = notion;
    ctx->mode = mode;
    ctx->side = side;
    ctx->omegas = omegas;
    ctx->gamma = gamma;
    ctx->gi = group_index(data);
    for (const auto& g : extra_groupings) {
        check_grouping(g, data.n);
        int c = *std::max_element(g.begin(), g.end()) + 1;
        ctx->extra_gis.push_back(group_index(g, data.y, c));
    }

    if (mode.kind != SolveMode::AccuracyOnly) {
        require_defined(notion, ctx->gi);
        for (const auto& gi : ctx->extra_gis) require_defined(notion, gi);
    }
    return ctx;
}

MipModel build(const Dataset& data, const WelfareParams& params, Notion notion,
               const SolveMode& mode, const SideConstraints& side,
               const std::vector<long long>& omegas, const Rat& gamma,
               const std::vector<std::vector<int>>& extra_groupings) {
    auto ctx = make_context(data, params, notion, mode, side, omegas, gamma,
                            extra_groupings);
    const bool fairness_rows = mode.kind != SolveMode::AccuracyOnly;

    MipModel m;
    m.context = ctx;
    const int n = data.n, d = data.d;

    auto add_var = [&m](const std::string& name, Rat lb, Rat ub, bool integral,
                        VarRole role, int index) {
        m.vars.push_back({name, std::move(lb), std::move(ub), integral, role, index});
        return static_cast<int>(m.vars.size()) - 1;
    };
    for (int j = 0; j <= d; ++j)
        m.w_vars.push_back(add_var("w_" + std::to_string(j),
                                   rat_of_long(-omegas[j]), rat_of_long(omegas[j]),
                                   true, VarRole::W, j));
    for (int i = 1; i <= n; ++i)
        m.psi_vars.push_back(add_var("psi_" + std::to_string(i), 0, 1, true,
                                     VarRole::Psi, i));
    for (int j = 1; j <= d; ++j)
        m.alpha_vars.push_back(add_var("alpha_" + std::to_string(j), 0, 1, true,
                                       VarRole::Alpha, j));
    for (int j = 1; j <= d; ++j)
        m.beta_vars.push_back(add_var("beta_" + std::to_string(j), 0,
                                      rat_of_long(omegas[j]), false,
                                      VarRole::Beta, j));
    if (mode.has_delta_var())
        m.delta_var = add_var("delta", 0, 1, false, VarRole::Delta, 0);

    // (i) Big-M rows: M_i psi_i + y_i sum_j w_j x_ij >= gamma.
    for (int i = 0; i < n; ++i) {
        MipConstraint row;
        row.name = "ERR_" + std::to_string(i + 1);
        row.sense = 'G';
        row.rhs = gamma;
        row.terms.emplace_back(m.psi_vars[i], big_m(data.x[i], data.y[i], omegas, gamma));
        for (int j = 0; j <= d; ++j) {
            Rat coeff = rat_of_long(data.y[i]) * data.x[i][j];
            if (coeff != 0) row.terms.emplace_back(m.w_vars[j], coeff);
        }
        m.rows.push_back(std::move(row));
    }

    // (ii) Two rows per unordered pair per constrained notion: |expr| <= delta.
    if (fairness_rows) {
        std::vector<Notion> parts =
            notion == Notion::EODDS ? std::vector<Notion>{Notion::EO, Notion::PE}
                                    : std::vector<Notion>{notion};
        auto emit_pairs = [&](const GroupIndex& gi, const std::string& prefix) {
            for (Notion part : parts) {
                std::string pname = prefix + notion_name(part);
                std::transform(pname.begin(), pname.end(), pname.begin(),
                               [](unsigned char ch) { return std::toupper(ch); });
                for (int p = 0; p < gi.c; ++p) {
                    for (int q = p + 1; q < gi.c; ++q) {
                        FairExpr e = pair_expr(part, gi, m.psi_vars, p, q);
                        std::string tag = pname + "_" + std::to_string(p) + "_" +
                                          std::to_string(q);
                        for (int sign : {+1, -1}) {
                            MipConstraint row;
                            row.name = tag + (sign > 0 ? "_P" : "_N");
                            row.sense = 'L';
                            for (const auto& [v, coeff] : e.terms)
                                row.terms.emplace_back(v, rat_of_long(sign) * coeff);
                            row.rhs = rat_of_long(-sign) * e.base;
                            if (mode.has_delta_var())
                                row.terms.emplace_back(m.delta_var, Rat(-1));
                            else
                                row.rhs += mode.delta_s;
                            m.rows.push_back(std::move(row));
                        }
                    }
                }
            }
        };
        emit_pairs(ctx->gi, "");
        for (size_t g = 0; g < ctx->extra_gis.size(); ++g)
            emit_pairs(ctx->extra_gis[g], "G" + std::to_string(g + 1));
    }

    // (iii) Procedural fairness: alpha_s = 0 on sensitive columns.
    if (side.procedural_fairness) {
        for (int j : data.sensitive_columns) {
            MipConstraint row;
            row.name = "PF_" + std::to_string(j);
            row.sense = 'E';
            row.rhs = 0;
            row.terms.emplace_back(m.alpha_vars[j - 1], Rat(1));
            m.rows.push_back(std::move(row));
        }
    }

    // (iv) l0 linking: -Omega_j alpha_j <= w_j <= Omega_j alpha_j.
    for (int j = 1; j <= d; ++j) {
        MipConstraint lo, up;
        lo.name = "L0L_" + std::to_string(j);
        lo.sense = 'G';
        lo.rhs = 0;
        lo.terms.emplace_back(m.w_vars[j], Rat(1));
        lo.terms.emplace_back(m.alpha_vars[j - 1], rat_of_long(omegas[j]));
        up.name = "L0U_" + std::to_string(j);
        up.sense = 'L';
        up.rhs = 0;
        up.terms.emplace_back(m.w_vars[j], Rat(1));
        up.terms.emplace_back(m.alpha_vars[j - 1], rat_of_long(-omegas[j]));
        m.rows.push_back(std::move(lo));
        m.rows.push_back(std::move(up));
    }

    // (v) l1 linking: -beta_j <= w_j <= beta_j.
    for (int j = 1; j <= d; ++j) {
        MipConstraint lo, up;
        lo.name = "L1L_" + std::to_string(j);
        lo.sense = 'G';
        lo.rhs = 0;
        lo.terms.emplace_back(m.w_vars[j], Rat(1));
        lo.terms.emplace_back(m.beta_vars[j - 1], Rat(1));
        up.name = "L1U_" + std::to_string(j);
        up.sense = 'L';
        up.rhs = 0;
        up.terms.emplace_back(m.w_vars[j], Rat(1));
        up.terms.emplace_back(m.beta_vars[j - 1], Rat(-1));
        m.rows.push_back(std::move(lo));
        m.rows.push_back(std::move(up));
    }

    // (vi) Side-constraint rows.
    if (side.model_size) {
        auto [lo, hi] = *side.model_size;
        MipConstraint row;
        row.name = "MSIZE";
        for (int j = 1; j <= d; ++j)
            row.terms.emplace_back(m.alpha_vars[j - 1], Rat(1));
        if (lo == hi) {
            row.sense = 'E';
            row.rhs = rat_of_long(hi);
        } else {
            row.sense = 'L';
            row.rhs = rat_of_long(hi);
            row.ranged = true;
            row.range_lo = rat_of_long(lo);
        }
        m.rows.push_back(std::move(row));
    }
    for (int j : side.forced_features) {
        MipConstraint row;
        row.name = "FRC_" + std::to_string(j);
        row.sense = 'E';
        row.rhs = 1;
        row.terms.emplace_back(m.alpha_vars[j - 1], Rat(1));
        m.rows.push_back(std::move(row));
    }
    for (int j : side.excluded_features) {
        if (side.procedural_fairness && data.sensitive_columns.count(j))
            continue;  // already fixed by the PF row
        MipConstraint row;
        row.name = "EXC_" + std::to_string(j);
        row.sense = 'E';
        row.rhs = 0;
        row.terms.emplace_back(m.alpha_vars[j - 1], Rat(1));
        m.rows.push_back(std::move(row));
    }
    for (const auto& [j, s] : side.sign_constraints) {
        MipConstraint row;
        row.name = "SGN_" + std::to_string(j);
        row.terms.emplace_back(m.w_vars[j], Rat(1));
        if (s > 0) {
            row.sense = 'G';
            row.rhs = 1;
        } else {
            row.sense = 'L';
            row.rhs = -1;
        }
        m.rows.push_back(std::move(row));
    }
    for (size_t k = 0; k < side.implications.size(); ++k) {
        const auto& [l, cons] = side.implications[k];
        MipConstraint row;
        row.name = "IMP_" + std::to_string(k + 1);
        row.sense = 'L';
        row.rhs = 0;
        for (int j : cons) row.terms.emplace_back(m.alpha_vars[j - 1], Rat(1));
        row.terms.emplace_back(m.alpha_vars[l - 1],
                               rat_of_long(-static_cast<long long>(cons.size())));
        m.rows.push_back(std::move(row));
    }

    // Objective: (1/n) sum b_i psi_i + sum_j (lambda0_j alpha_j + eps beta_j)
    // + rho_bar delta (joint mode only).
    Rat nn = rat_of_long(n);
    for (int i = 0; i < n; ++i) {
        Rat coeff = ctx->params.b[i] / nn;
        if (coeff != 0) m.objective.emplace_back(m.psi_vars[i], coeff);
    }
    for (int j = 1; j <= d; ++j) {
        Rat l0 = ctx->params.lambda0_for(j);
        if (l0 != 0) m.objective.emplace_back(m.alpha_vars[j - 1], l0);
    }
    if (ctx->params.epsilon != 0)
        for (int j = 1; j <= d; ++j)
            m.objective.emplace_back(m.beta_vars[j - 1], ctx->params.epsilon);
    if (mode.has_delta_var() && ctx->params.rho_bar != 0)
        m.objective.emplace_back(m.delta_var, ctx->params.rho_bar);

    return m;
}

std::string export_lp_debug(const MipModel& model) {
    std::ostringstream os;
    os << "minimize\n ";
    if (model.obj_constant != 0) os << model.obj_constant << " + ";
    for (size_t k = 0; k < model.objective.size(); ++k) {
        const auto& [v, coeff] = model.objective[k];
        if (k) os << " + ";
        os << coeff << " " << model.vars[v].name;
    }
    os << "\nsubject to\n";
    for (const auto& row : model.rows) {
        os << " " << row.name << ": ";
        if (row.ranged) os << row.range_lo << " <= ";
        for (size_t k = 0; k < row.terms.size(); ++k) {
            const auto& [v, coeff] = row.terms[k];
            if (k) os << " + ";
            os << coeff << " " << model.vars[v].name;
        }
        os << (row.sense == 'L' ? " <= " : row.sense == 'G' ? " >= " : " = ");
        os << row.rhs << "\n";
    }
    os << "bounds\n";
    for (const auto& v : model.vars)
        os << " " << v.lb << " <= " << v.name << " <= " << v.ub
           << (v.integral ? " integer" : "") << "\n";
    return os.str();
}

}  // namespace fairscore
