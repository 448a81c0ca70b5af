#include "fairscore/simplex.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fairscore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-10;

enum class VarState { Basic, AtLb, AtUb };

// Columns of the working system [A | -I]; index >= n addresses logicals.
struct Tableau {
    const LpProblem* lp;
    int m, n, total;

    double lb(int j) const { return j < n ? lp->lo[j] : lp->row_lo[j - n]; }
    double ub(int j) const { return j < n ? lp->up[j] : lp->row_hi[j - n]; }

    void add_col(int j, double scale, Eigen::VectorXd& out) const {
        if (j < n) {
            const auto& col = lp->cols[j];
            for (int i = 0; i < m; ++i) out[i] += scale * col[i];
        } else {
            out[j - n] -= scale;
        }
    }
    double col_dot(int j, const Eigen::VectorXd& y) const {
        if (j >= n) return -y[j - n];
        const auto& col = lp->cols[j];
        double s = 0;
        for (int i = 0; i < m; ++i) s += col[i] * y[i];
        return s;
    }
};

}  // namespace

LpResult solve_lp(const LpProblem& lp) {
    const int m = lp.m, n = lp.n, total = n + m;
    for (int j = 0; j < n; ++j)
        if (!std::isfinite(lp.lo[j]) || !std::isfinite(lp.up[j]) ||
            lp.lo[j] > lp.up[j])
            throw std::invalid_argument("solve_lp: variables must be box-bounded");
    for (int i = 0; i < m; ++i)
        if (lp.row_lo[i] > lp.row_hi[i])
            throw std::invalid_argument("solve_lp: crossed row bounds");

    Tableau t{&lp, m, n, total};
    LpResult res;
    if (m == 0) {
        // Pure box problem.
        res.status = LpResult::Optimal;
        res.x.resize(n);
        double v = 0;
        for (int j = 0; j < n; ++j) {
            res.x[j] = lp.c[j] >= 0 ? lp.lo[j] : lp.up[j];
            v += lp.c[j] * res.x[j];
        }
        res.value = v;
        return res;
    }

    std::vector<VarState> state(total);
    std::vector<int> basic(m);
    // Start: logicals basic, structurals at the bound nearer zero.
    for (int j = 0; j < n; ++j) {
        double l = t.lb(j), u = t.ub(j);
        state[j] = (std::fabs(l) <= std::fabs(u)) ? VarState::AtLb : VarState::AtUb;
    }
    for (int i = 0; i < m; ++i) {
        basic[i] = n + i;
        state[n + i] = VarState::Basic;
    }

    std::vector<double> xval(total, 0.0);
    Eigen::VectorXd xb(m), y(m), h(m);
    Eigen::MatrixXd B(m, m);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;

    auto nonbasic_value = [&](int j) {
        return state[j] == VarState::AtLb ? t.lb(j) : t.ub(j);
    };

    const int max_iters = 200 + 40 * m;
    const int bland_after = 60 + 10 * m;
    int iter = 0;
    int phase = 1;

    while (true) {
        // Refactorize the basis and recompute basic values.
        for (int i = 0; i < m; ++i) {
            Eigen::VectorXd col = Eigen::VectorXd::Zero(m);
            t.add_col(basic[i], 1.0, col);
            B.col(i) = col;
        }
        lu.compute(B);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
        for (int j = 0; j < total; ++j)
            if (state[j] != VarState::Basic && nonbasic_value(j) != 0.0)
                t.add_col(j, nonbasic_value(j), rhs);
        xb = lu.solve(-rhs);
        if (!xb.allFinite()) {
            res.status = LpResult::Stalled;
            return res;
        }
        for (int i = 0; i < m; ++i) xval[basic[i]] = xb[i];
        for (int j = 0; j < total; ++j)
            if (state[j] != VarState::Basic) xval[j] = nonbasic_value(j);

        // Phase-1 cost drives violated basics toward their bounds; once
        // feasible, switch to the true objective.
        double infeas = 0;
        Eigen::VectorXd cb(m);
        for (int i = 0; i < m; ++i) {
            int j = basic[i];
            double v = xval[j];
            if (v < t.lb(j) - kFeasTol) {
                infeas += t.lb(j) - v;
            } else if (v > t.ub(j) + kFeasTol) {
                infeas += v - t.ub(j);
            }
        }
        if (phase == 1 && infeas <= kFeasTol) phase = 2;
        for (int i = 0; i < m; ++i) {
            int j = basic[i];
            double v = xval[j];
            if (phase == 1)
                cb[i] = v < t.lb(j) - kFeasTol ? -1.0
                        : v > t.ub(j) + kFeasTol ? 1.0
                                                 : 0.0;
            else
                cb[i] = j < n ? lp.c[j] : 0.0;
        }
        y = lu.transpose().solve(cb);
        if (!y.allFinite()) {
            res.status = LpResult::Stalled;
            return res;
        }

        // Pricing.
        const bool bland = iter >= bland_after;
        int enter = -1;
        double best = 0;
        int dir = 0;
        for (int j = 0; j < total; ++j) {
            if (state[j] == VarState::Basic) continue;
            double cj = phase == 2 ? (j < n ? lp.c[j] : 0.0) : 0.0;
            double dj = cj - t.col_dot(j, y);
            bool lb_ok = state[j] == VarState::AtLb && dj < -kDualTol &&
                         t.ub(j) > t.lb(j);
            bool ub_ok = state[j] == VarState::AtUb && dj > kDualTol &&
                         t.ub(j) > t.lb(j);
            if (!lb_ok && !ub_ok) continue;
            double score = std::fabs(dj);
            if (bland) {
                enter = j;
                dir = lb_ok ? 1 : -1;
                break;
            }
            if (score > best + 1e-15) {
                best = score;
                enter = j;
                dir = lb_ok ? 1 : -1;
            }
        }

        if (enter < 0) {
            if (phase == 1 && infeas > kFeasTol) {
                res.status = LpResult::Infeasible;
                res.y.assign(y.data(), y.data() + m);
                // Phase-1 duals certify infeasibility in float; the caller
                // re-verifies any use of them in exact arithmetic.
                for (double& v : res.y) v = -v;
                return res;
            }
            res.status = LpResult::Optimal;
            res.x.assign(n, 0.0);
            double value = 0;
            for (int j = 0; j < n; ++j) {
                res.x[j] = xval[j];
                value += lp.c[j] * xval[j];
            }
            res.value = value;
            res.y.assign(m, 0.0);
            if (phase == 2) {
                // Duals of the true objective.
                for (int i = 0; i < m; ++i) {
                    int j = basic[i];
                    cb[i] = j < n ? lp.c[j] : 0.0;
                }
                y = lu.transpose().solve(cb);
                if (y.allFinite())
                    res.y.assign(y.data(), y.data() + m);
            }
            res.iterations = iter;
            return res;
        }

        // Direction: entering moves by +-1, basics respond with -sigma*h.
        Eigen::VectorXd acol = Eigen::VectorXd::Zero(m);
        t.add_col(enter, 1.0, acol);
        h = lu.solve(acol);
        if (!h.allFinite()) {
            res.status = LpResult::Stalled;
            return res;
        }

        // Unified ratio test: moving up stops at (below-lb ? lb : ub), moving
        // down stops at (above-ub ? ub : lb); covers phase-1 violated basics.
        double limit = t.ub(enter) - t.lb(enter);  // bound flip distance
        int leave = -1;  // -1 means bound flip
        double leave_target = 0;
        for (int i = 0; i < m; ++i) {
            double delta = -dir * h[i];
            int j = basic[i];
            double v = xval[j];
            double step;
            double target;
            if (delta > kPivotTol) {
                target = v < t.lb(j) - kFeasTol ? t.lb(j) : t.ub(j);
                if (!std::isfinite(target)) continue;
                step = (target - v) / delta;
            } else if (delta < -kPivotTol) {
                target = v > t.ub(j) + kFeasTol ? t.ub(j) : t.lb(j);
                if (!std::isfinite(target)) continue;
                step = (target - v) / delta;
            } else {
                continue;
            }
            if (step < -kFeasTol) step = 0;  // numerical guard
            if (step < limit - 1e-12 ||
                (leave >= 0 && step < limit + 1e-12 && bland && j < basic[leave])) {
                limit = step;
                leave = i;
                leave_target = target;
            }
        }

        if (!std::isfinite(limit)) {
            // Unbounded direction; impossible with boxed variables.
            res.status = LpResult::Stalled;
            return res;
        }
        if (limit < 0) limit = 0;

        if (leave < 0) {
            // Bound flip.
            state[enter] = state[enter] == VarState::AtLb ? VarState::AtUb
                                                          : VarState::AtLb;
        } else {
            int out = basic[leave];
            state[out] = leave_target == t.lb(out) ? VarState::AtLb
                                                   : VarState::AtUb;
            basic[leave] = enter;
            state[enter] = VarState::Basic;
        }

        if (++iter > max_iters) {
            res.status = LpResult::Stalled;
            return res;
        }
    }
}

}  // namespace fairscore
