#include <sstream>

#include "fairscore/solver.hpp"

namespace fairscore {

namespace {

std::string num(const Rat& r) { return rat_str(r); }

}  // namespace

std::vector<std::string> check_solution(const MipModel& model,
                                        const Solution& sol, const Rat& tol) {
    std::vector<std::string> out;
    const size_t nvars = model.vars.size();
    std::vector<Rat> val(nvars, Rat(0));
    std::vector<char> set(nvars, 0);

    auto assign = [&](int v, const Rat& x, const char* what) {
        if (v < 0 || v >= static_cast<int>(nvars)) {
            out.push_back(std::string("bad variable index for ") + what);
            return;
        }
        val[v] = x;
        set[v] = 1;
    };

    if (sol.w.size() != model.w_vars.size())
        out.push_back("w length mismatch");
    if (sol.psi.size() != model.psi_vars.size())
        out.push_back("psi length mismatch");
    if (sol.alpha.size() != model.alpha_vars.size())
        out.push_back("alpha length mismatch");
    if (sol.beta.size() != model.beta_vars.size())
        out.push_back("beta length mismatch");
    if (!out.empty()) return out;

    for (size_t k = 0; k < sol.w.size(); ++k)
        assign(model.w_vars[k], rat_of_long(sol.w[k]), "w");
    for (size_t k = 0; k < sol.psi.size(); ++k)
        assign(model.psi_vars[k], rat_of_long(sol.psi[k]), "psi");
    for (size_t k = 0; k < sol.alpha.size(); ++k)
        assign(model.alpha_vars[k], rat_of_long(sol.alpha[k]), "alpha");
    for (size_t k = 0; k < sol.beta.size(); ++k)
        assign(model.beta_vars[k], sol.beta[k], "beta");
    if (model.delta_var >= 0) assign(model.delta_var, sol.delta, "delta");

    for (size_t v = 0; v < nvars; ++v)
        if (!set[v]) {
            out.push_back("no value for variable " + model.vars[v].name);
        }
    if (!out.empty()) return out;

    for (size_t v = 0; v < nvars; ++v) {
        const MipVariable& var = model.vars[v];
        if (val[v] < var.lb - tol || val[v] > var.ub + tol) {
            std::ostringstream os;
            os << var.name << " = " << num(val[v]) << " outside ["
               << num(var.lb) << ", " << num(var.ub) << "]";
            out.push_back(os.str());
        }
        if (var.integral && val[v].get_den() != 1) {
            out.push_back(var.name + " = " + num(val[v]) + " not integral");
        }
    }

    for (const MipConstraint& row : model.rows) {
        Rat acc = 0;
        for (const auto& [v, coeff] : row.terms) acc += coeff * val[v];
        bool bad = false;
        switch (row.sense) {
            case 'G': bad = acc < row.rhs - tol; break;
            case 'E': bad = abs(acc - row.rhs) > tol; break;
            case 'L':
                bad = acc > row.rhs + tol ||
                      (row.ranged && acc < row.range_lo - tol);
                break;
            default:
                bad = true;
        }
        if (bad) {
            std::ostringstream os;
            os << "row " << row.name << " violated: activity " << num(acc)
               << " sense " << row.sense << " rhs " << num(row.rhs);
            out.push_back(os.str());
        }
    }

    Rat obj = model.obj_constant;
    for (const auto& [v, coeff] : model.objective) obj += coeff * val[v];
    if (abs(obj - sol.objective) > tol) {
        std::ostringstream os;
        os << "objective mismatch: recomputed " << num(obj) << " reported "
           << num(sol.objective);
        out.push_back(os.str());
    }
    return out;
}

}  // namespace fairscore
