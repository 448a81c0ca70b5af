#include "fairscore/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <thread>

#include "fairscore/simplex.hpp"

namespace fairscore {

SolverConfig SolverConfig::exact() {
    SolverConfig c;
    c.absolute_gap = 0;
    c.relative_gap = 0;
    return c;
}

std::string status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::FeasibleGap: return "feasible-gap";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::TimeLimit: return "time-limit";
        case SolveStatus::NodeLimit: return "node-limit";
    }
    return "?";
}

namespace {

// Implication closure: any active consequent forces its antecedent.
void close_under_implications(
    std::vector<char>& active,
    const std::vector<std::pair<int, std::vector<int>>>& implications) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [l, cons] : implications) {
            if (active[l]) continue;
            for (int j : cons)
                if (active[j]) {
                    active[l] = 1;
                    changed = true;
                    break;
                }
        }
    }
}

// Cheapest padding set reaching the target count; candidates are sorted by
// (cost, index). With implications, adding a candidate may force antecedents,
// so a tiny exhaustive search over candidate prefixes is used.
struct PadResult {
    bool ok = false;
    std::vector<char> active;
    Rat cost = 0;
};

PadResult pad_alphas(std::vector<char> active, long long target_lo,
                     long long target_hi, const ProblemContext& ctx,
                     const std::vector<char>& banned) {
    const int d = ctx.data.d;
    auto count = [](const std::vector<char>& a) {
        long long k = 0;
        for (size_t j = 1; j < a.size(); ++j) k += a[j] ? 1 : 0;
        return k;
    };
    long long have = count(active);
    PadResult out;
    if (have > target_hi) return out;
    if (have >= target_lo) {
        out.ok = true;
        out.active = std::move(active);
        return out;
    }
    std::vector<int> cands;
    for (int j = 1; j <= d; ++j)
        if (!active[j] && !banned[j]) cands.push_back(j);
    std::sort(cands.begin(), cands.end(), [&ctx](int a, int b) {
        Rat ca = ctx.params.lambda0_for(a), cb = ctx.params.lambda0_for(b);
        return ca != cb ? ca < cb : a < b;
    });

    if (ctx.side.implications.empty()) {
        long long need = target_lo - have;
        if (static_cast<long long>(cands.size()) < need) return out;
        for (long long k = 0; k < need; ++k) active[cands[k]] = 1;
        out.ok = true;
        out.active = std::move(active);
        return out;
    }

    // Exhaustive best-first over candidate subsets (desk-scale d only).
    struct State {
        Rat cost;
        std::vector<char> active;
        size_t next;
    };
    std::optional<PadResult> best;
    std::vector<State> stack{{Rat(0), active, 0}};
    while (!stack.empty()) {
        State s = std::move(stack.back());
        stack.pop_back();
        long long k = count(s.active);
        if (k >= target_lo && k <= target_hi) {
            if (!best || s.cost < best->cost) {
                best = PadResult{true, s.active, s.cost};
            }
            continue;
        }
        if (k > target_hi || s.next >= cands.size()) continue;
        if (best && s.cost >= best->cost) continue;
        // Skip candidate.
        stack.push_back({s.cost, s.active, s.next + 1});
        // Take candidate (with closure).
        int j = cands[s.next];
        std::vector<char> a2 = s.active;
        a2[j] = 1;
        close_under_implications(a2, ctx.side.implications);
        bool legal = true;
        Rat c2 = 0;
        for (int t = 1; t <= ctx.data.d; ++t) {
            if (a2[t] && banned[t]) legal = false;
            if (a2[t] && !s.active[t]) c2 += ctx.params.lambda0_for(t);
        }
        if (legal) stack.push_back({s.cost + c2, std::move(a2), s.next + 1});
    }
    if (best) return *best;
    return out;
}

}  // namespace

std::optional<CanonicalEval> canonical_completion(
    const ProblemContext& ctx, const std::vector<long long>& w) {
    const Dataset& data = ctx.data;
    const int d = data.d;
    if (static_cast<int>(w.size()) != d + 1)
        throw std::invalid_argument("canonical_completion: w length mismatch");

    std::vector<char> banned(d + 1, 0);
    for (int j : ctx.side.excluded_features) banned[j] = 1;
    if (ctx.side.procedural_fairness)
        for (int j : data.sensitive_columns) banned[j] = 1;

    for (int j = 0; j <= d; ++j)
        if (w[j] > ctx.omegas[j] || w[j] < -ctx.omegas[j]) return std::nullopt;
    for (int j = 1; j <= d; ++j)
        if (banned[j] && w[j] != 0) return std::nullopt;
    for (const auto& [j, s] : ctx.side.sign_constraints)
        if ((s > 0 && w[j] < 1) || (s < 0 && w[j] > -1)) return std::nullopt;

    std::vector<int> psi = loss_vector(w, data);

    Rat achieved = fairness_level(ctx.notion, psi, ctx.gi);
    for (const auto& gi : ctx.extra_gis)
        achieved = std::max(achieved, fairness_level(ctx.notion, psi, gi));
    if (ctx.mode.kind == SolveMode::FixedDelta && achieved > ctx.mode.delta_s)
        return std::nullopt;

    std::vector<char> active(d + 1, 0);
    for (int j = 1; j <= d; ++j)
        if (w[j] != 0) active[j] = 1;
    for (int j : ctx.side.forced_features) active[j] = 1;
    close_under_implications(active, ctx.side.implications);
    for (int j = 1; j <= d; ++j)
        if (active[j] && banned[j]) return std::nullopt;

    long long lo = 0, hi = d;
    if (ctx.side.model_size) {
        lo = ctx.side.model_size->first;
        hi = ctx.side.model_size->second;
    }
    PadResult padded = pad_alphas(std::move(active), lo, hi, ctx, banned);
    if (!padded.ok) return std::nullopt;

    CanonicalEval ev;
    ev.psi = std::move(psi);
    ev.alpha.assign(d, 0);
    for (int j = 1; j <= d; ++j) ev.alpha[j - 1] = padded.active[j];
    ev.beta.resize(d);
    for (int j = 1; j <= d; ++j)
        ev.beta[j - 1] = rat_of_long(w[j] < 0 ? -w[j] : w[j]);

    switch (ctx.mode.kind) {
        case SolveMode::Joint:
            ev.delta = ctx.params.rho_bar < 0 ? Rat(1) : achieved;
            break;
        default:
            ev.delta = achieved;
            break;
    }
    Rat obj_delta = ctx.mode.kind == SolveMode::Joint ? ev.delta : Rat(0);
    ev.objective =
        erm_objective(ev.psi, ev.alpha, ev.beta, obj_delta, ctx.params);
    return ev;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ExactRow {
    std::vector<std::pair<int, Rat>> terms;
    bool lo_finite = false, hi_finite = false;
    Rat lo = 0, hi = 0;
};

// Static (node-independent) solve data shared by all workers.
struct SolveData {
    const MipModel* model;
    const ProblemContext* ctx;  // may be null
    int nvars = 0;
    std::vector<ExactRow> rows;
    std::vector<Rat> obj;            // dense objective
    std::vector<int> int_vars;       // variable ids, model order
    std::vector<int> var_to_int;     // var id -> ordinal in int_vars or -1
    std::vector<int> w_int_ordinal;  // ordinal of each w_j (context mode)
    LpProblem lp_base;               // bounds overwritten per node
    std::vector<Rat> cont_lb, cont_ub;  // model bounds, exact

    int branch_rank(int var) const {
        switch (model->vars[var].role) {
            case VarRole::W: return 0;
            case VarRole::Alpha: return 1;
            case VarRole::Psi: return 2;
            default: return 3;
        }
    }
};

struct Node {
    std::vector<long long> ilb, iub;  // per int_vars ordinal
    Rat bound;
    long long seq = 0;
    int depth = 0;
};

struct NodeOrder {
    bool operator()(const std::shared_ptr<Node>& a,
                    const std::shared_ptr<Node>& b) const {
        if (a->bound != b->bound) return a->bound > b->bound;  // min-heap
        return a->seq > b->seq;
    }
};

// Exact Lagrangian lower bound for multiplier candidates; any nu is valid
// after sign-clipping against infinite row bounds, so the result is a sound
// bound regardless of LP numerics. nu = 0 degenerates to the interval bound
// (sum of variable-wise objective minima).
Rat exact_bound(const SolveData& sd, const std::vector<long long>& ilb,
                const std::vector<long long>& iub,
                const std::vector<double>& nu_float) {
    std::vector<Rat> nu(sd.rows.size(), Rat(0));
    for (size_t i = 0; i < sd.rows.size(); ++i) {
        double v = i < nu_float.size() ? nu_float[i] : 0.0;
        if (!std::isfinite(v)) v = 0.0;
        Rat r = rat_of_double(v);
        if (!sd.rows[i].lo_finite && r > 0) r = 0;
        if (!sd.rows[i].hi_finite && r < 0) r = 0;
        nu[i] = r;
    }
    Rat bound = 0;
    std::vector<Rat> red = sd.obj;  // reduced costs c - A^T nu
    for (size_t i = 0; i < sd.rows.size(); ++i) {
        if (nu[i] == 0) continue;
        bound += nu[i] * (nu[i] > 0 ? sd.rows[i].lo : sd.rows[i].hi);
        for (const auto& [v, coeff] : sd.rows[i].terms) red[v] -= nu[i] * coeff;
    }
    for (int v = 0; v < sd.nvars; ++v) {
        int ord = sd.var_to_int[v];
        Rat lb = ord >= 0 ? rat_of_long(ilb[ord]) : sd.cont_lb[v];
        Rat ub = ord >= 0 ? rat_of_long(iub[ord]) : sd.cont_ub[v];
        bound += red[v] > 0 ? red[v] * lb : red[v] * ub;
    }
    return bound + sd.model->obj_constant;
}

struct Incumbent {
    bool found = false;
    Solution sol;
};

// Completion of a context-free model with every integer fixed: each row must
// involve at most one continuous variable, whose feasible interval is then
// derived exactly.
std::optional<std::pair<std::vector<Rat>, Rat>> complete_continuous(
    const SolveData& sd, const std::vector<long long>& ival) {
    std::vector<Rat> val(sd.nvars, Rat(0));
    for (int v = 0; v < sd.nvars; ++v) {
        int ord = sd.var_to_int[v];
        if (ord >= 0) val[v] = rat_of_long(ival[ord]);
    }
    std::vector<Rat> lo(sd.nvars), hi(sd.nvars);
    for (int v = 0; v < sd.nvars; ++v) {
        if (sd.var_to_int[v] >= 0) continue;
        lo[v] = sd.cont_lb[v];
        hi[v] = sd.cont_ub[v];
    }
    for (const auto& row : sd.rows) {
        int cont = -1;
        Rat ccoef = 0, acc = 0;
        for (const auto& [v, coeff] : row.terms) {
            if (sd.var_to_int[v] >= 0) {
                acc += coeff * val[v];
            } else if (cont < 0 || cont == v) {
                cont = v;
                ccoef += coeff;
            } else {
                return std::nullopt;  // two continuous vars in one row
            }
        }
        if (cont < 0 || ccoef == 0) {
            if (cont < 0) {
                if (row.lo_finite && acc < row.lo) return std::nullopt;
                if (row.hi_finite && acc > row.hi) return std::nullopt;
            }
            continue;
        }
        // lo <= acc + ccoef * z <= hi
        if (row.hi_finite) {
            Rat b = (row.hi - acc) / ccoef;
            if (ccoef > 0) hi[cont] = std::min(hi[cont], b);
            else lo[cont] = std::max(lo[cont], b);
        }
        if (row.lo_finite) {
            Rat b = (row.lo - acc) / ccoef;
            if (ccoef > 0) lo[cont] = std::max(lo[cont], b);
            else hi[cont] = std::min(hi[cont], b);
        }
    }
    Rat obj = sd.model->obj_constant;
    for (int v = 0; v < sd.nvars; ++v) {
        if (sd.var_to_int[v] >= 0) {
            obj += sd.obj[v] * val[v];
            continue;
        }
        if (lo[v] > hi[v]) return std::nullopt;
        val[v] = sd.obj[v] >= 0 ? lo[v] : hi[v];
        obj += sd.obj[v] * val[v];
    }
    // Re-verify every row at the completed point.
    for (const auto& row : sd.rows) {
        Rat acc = 0;
        for (const auto& [v, coeff] : row.terms) acc += coeff * val[v];
        if (row.lo_finite && acc < row.lo) return std::nullopt;
        if (row.hi_finite && acc > row.hi) return std::nullopt;
    }
    return std::make_pair(std::move(val), std::move(obj));
}

Solution solution_from_values(const SolveData& sd, const std::vector<Rat>& val,
                              const Rat& obj) {
    Solution s;
    const MipModel& m = *sd.model;
    if (!m.w_vars.empty()) {
        for (int v : m.w_vars)
            s.w.push_back(static_cast<long long>(
                mpz_class(val[v].get_num() / val[v].get_den()).get_si()));
        for (int v : m.psi_vars) s.psi.push_back(val[v] > 0 ? 1 : 0);
        for (int v : m.alpha_vars) s.alpha.push_back(val[v] > 0 ? 1 : 0);
        for (int v : m.beta_vars) s.beta.push_back(val[v]);
        if (m.delta_var >= 0) s.delta = val[m.delta_var];
    }
    s.objective = obj;
    return s;
}

Solution solution_from_canonical(const MipModel& m, const ProblemContext& ctx,
                                 const std::vector<long long>& w,
                                 const CanonicalEval& ev) {
    (void)ctx;
    (void)m;
    Solution s;
    s.w = w;
    s.psi = ev.psi;
    s.alpha = ev.alpha;
    s.beta = ev.beta;
    s.delta = ev.delta;
    s.objective = ev.objective;
    return s;
}

struct SharedSearch {
    std::mutex mu;
    std::condition_variable cv;
    std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>,
                        NodeOrder>
        pq;
    std::vector<std::shared_ptr<Node>> dfs;  // plunge stack until incumbent
    Incumbent inc;
    long long nodes = 0;
    long long seq = 0;
    int busy = 0;
    bool used_gap_slack = false;
    bool stop = false;
    SolveStatus stop_status = SolveStatus::Optimal;
    std::optional<Rat> slack_bound_min;  // min bound among gap-pruned nodes
};

struct Worker {
    const SolveData& sd;
    const SolverConfig& cfg;
    SharedSearch& sh;
    std::chrono::steady_clock::time_point t0;

    bool time_up() const {
        if (!cfg.time_limit_seconds) return false;
        double el = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        return el >= *cfg.time_limit_seconds;
    }

    // Attempt incumbent update; returns true if improved.
    bool offer_incumbent_locked(Solution&& s) {
        if (!sh.inc.found || s.objective < sh.inc.sol.objective) {
            bool first = !sh.inc.found;
            sh.inc.found = true;
            sh.inc.sol = std::move(s);
            if (first) {
                for (auto& nd : sh.dfs) sh.pq.push(nd);
                sh.dfs.clear();
            }
            return true;
        }
        return false;
    }

    // True when the node can be discarded against the current incumbent.
    bool prunable_locked(const Rat& bound) {
        if (!sh.inc.found) return false;
        const Rat& inc = sh.inc.sol.objective;
        if (bound >= inc) return true;  // strict: no slack consumed
        Rat slack = cfg.absolute_gap;
        Rat rel = cfg.relative_gap * abs(inc);
        if (rel > slack) slack = rel;
        if (slack > 0 && bound >= inc - slack) {
            sh.used_gap_slack = true;
            if (!sh.slack_bound_min || bound < *sh.slack_bound_min)
                sh.slack_bound_min = bound;
            return true;
        }
        return false;
    }

    void enumerate_box(const Node& nd) {
        // Evaluate every integer w in the node's w-box exactly.
        const auto& ords = sd.w_int_ordinal;
        std::vector<long long> w(ords.size());
        std::vector<long long> lo(ords.size()), hi(ords.size());
        for (size_t j = 0; j < ords.size(); ++j) {
            lo[j] = nd.ilb[ords[j]];
            hi[j] = nd.iub[ords[j]];
            w[j] = lo[j];
        }
        std::optional<Solution> best;
        while (true) {
            auto ev = canonical_completion(*sd.ctx, w);
            if (ev) {
                Solution s = solution_from_canonical(*sd.model, *sd.ctx, w, *ev);
                if (!best || s.objective < best->objective)
                    best = std::move(s);
            }
            size_t j = ords.size();
            while (j > 0) {
                --j;
                if (w[j] < hi[j]) {
                    ++w[j];
                    for (size_t k = j + 1; k < ords.size(); ++k) w[k] = lo[k];
                    break;
                }
                if (j == 0) {
                    if (best) {
                        std::lock_guard<std::mutex> g(sh.mu);
                        offer_incumbent_locked(std::move(*best));
                    }
                    return;
                }
            }
        }
    }

    void process(const std::shared_ptr<Node>& nd) {
        if (sd.ctx) {
            // Leaf shortcut: enumerate small coefficient boxes exactly.
            mpz_class space = 1;
            bool all_fixed = true;
            for (int ord : sd.w_int_ordinal) {
                space *= static_cast<long>(nd->iub[ord] - nd->ilb[ord] + 1);
                all_fixed &= nd->ilb[ord] == nd->iub[ord];
            }
            if (all_fixed || space <= 256) {
                enumerate_box(*nd);
                return;
            }
        } else {
            bool all_fixed = true;
            for (size_t k = 0; k < sd.int_vars.size(); ++k)
                all_fixed &= nd->ilb[k] == nd->iub[k];
            if (all_fixed) {
                auto done = complete_continuous(sd, nd->ilb);
                if (done) {
                    Solution s =
                        solution_from_values(sd, done->first, done->second);
                    std::lock_guard<std::mutex> g(sh.mu);
                    offer_incumbent_locked(std::move(s));
                }
                return;
            }
        }

        // LP relaxation over the node box.
        LpProblem lp = sd.lp_base;
        for (size_t k = 0; k < sd.int_vars.size(); ++k) {
            lp.lo[sd.int_vars[k]] = static_cast<double>(nd->ilb[k]);
            lp.up[sd.int_vars[k]] = static_cast<double>(nd->iub[k]);
        }
        LpResult lr = solve_lp(lp);

        Rat bound = nd->bound;
        auto lift = [&](const std::vector<double>& nu) {
            Rat b = exact_bound(sd, nd->ilb, nd->iub, nu);
            if (b > bound) bound = b;
        };
        lift({});  // interval bound
        if (lr.status == LpResult::Optimal) {
            lift(lr.y);
        } else if (lr.status == LpResult::Infeasible) {
            for (double scale : {1.0, 1e3, 1e6}) {
                std::vector<double> ray = lr.y;
                for (double& v : ray) v *= scale;
                lift(ray);
            }
        }

        {
            std::lock_guard<std::mutex> g(sh.mu);
            if (prunable_locked(bound)) return;
        }

        // Branch. Context models branch on w only: psi/alpha/beta/delta are
        // canonical functions of w, and leaves resolve by box enumeration.
        int pick = -1;
        double pick_frac = -1;
        if (lr.status == LpResult::Optimal) {
            for (size_t k = 0; k < sd.int_vars.size(); ++k) {
                if (nd->ilb[k] == nd->iub[k]) continue;
                int var = sd.int_vars[k];
                if (sd.ctx && sd.model->vars[var].role != VarRole::W) continue;
                double v = lr.x[var];
                double frac = std::fabs(v - std::round(v));
                if (frac < 1e-6) continue;
                if (pick < 0 || frac > pick_frac + 1e-12 ||
                    (frac > pick_frac - 1e-12 &&
                     (sd.branch_rank(var) < sd.branch_rank(sd.int_vars[pick]) ||
                      (sd.branch_rank(var) == sd.branch_rank(sd.int_vars[pick]) &&
                       var < sd.int_vars[pick])))) {
                    pick = static_cast<int>(k);
                    pick_frac = frac;
                }
            }
        }
        if (pick < 0) {
            // No fractional integer: split the first unfixed variable, w first.
            const int max_rank = sd.ctx ? 1 : 4;
            for (int rank = 0; rank < max_rank && pick < 0; ++rank)
                for (size_t k = 0; k < sd.int_vars.size() && pick < 0; ++k)
                    if (nd->ilb[k] != nd->iub[k] &&
                        sd.branch_rank(sd.int_vars[k]) == rank)
                        pick = static_cast<int>(k);
        }
        if (pick < 0) return;  // fully fixed; handled above

        long long split;
        if (lr.status == LpResult::Optimal) {
            double v = lr.x[sd.int_vars[pick]];
            split = static_cast<long long>(std::floor(v));
        } else {
            split = (nd->ilb[pick] + nd->iub[pick]) / 2;
        }
        split = std::max(nd->ilb[pick], std::min(split, nd->iub[pick] - 1));

        auto down = std::make_shared<Node>(*nd);
        down->iub[pick] = split;
        down->bound = bound;
        down->depth = nd->depth + 1;
        auto up = std::make_shared<Node>(*nd);
        up->ilb[pick] = split + 1;
        up->bound = bound;
        up->depth = nd->depth + 1;

        std::lock_guard<std::mutex> g(sh.mu);
        down->seq = ++sh.seq;
        up->seq = ++sh.seq;
        if (!sh.inc.found) {
            sh.dfs.push_back(up);
            sh.dfs.push_back(down);  // explore the down child first
        } else {
            sh.pq.push(down);
            sh.pq.push(up);
        }
        sh.cv.notify_all();
    }

    void run() {
        std::unique_lock<std::mutex> lk(sh.mu);
        while (true) {
            while (!sh.stop && sh.pq.empty() && sh.dfs.empty() && sh.busy > 0)
                sh.cv.wait(lk);
            if (sh.stop || (sh.pq.empty() && sh.dfs.empty())) {
                sh.cv.notify_all();
                return;
            }
            std::shared_ptr<Node> nd;
            if (!sh.dfs.empty()) {
                nd = sh.dfs.back();
                sh.dfs.pop_back();
            } else {
                nd = sh.pq.top();
                sh.pq.pop();
            }
            if (prunable_locked(nd->bound)) continue;
            if (cfg.node_limit && sh.nodes >= *cfg.node_limit) {
                sh.stop = true;
                sh.stop_status = SolveStatus::NodeLimit;
                // Keep the popped node's bound in the final accounting.
                sh.pq.push(nd);
                sh.cv.notify_all();
                return;
            }
            if (time_up()) {
                sh.stop = true;
                sh.stop_status = SolveStatus::TimeLimit;
                sh.pq.push(nd);
                sh.cv.notify_all();
                return;
            }
            sh.nodes++;
            sh.busy++;
            if (cfg.verbose && sh.nodes % 64 == 0)
                std::cerr << "nodes=" << sh.nodes
                          << " open=" << (sh.pq.size() + sh.dfs.size())
                          << " inc="
                          << (sh.inc.found ? sh.inc.sol.objective.get_d()
                                           : std::nan(""))
                          << "\n";
            lk.unlock();
            process(nd);
            lk.lock();
            sh.busy--;
            sh.cv.notify_all();
        }
    }
};

}  // namespace

Solution solve(const MipModel& model, const SolverConfig& config) {
    auto t0 = std::chrono::steady_clock::now();
    if (config.absolute_gap < 0 || config.relative_gap < 0)
        throw std::invalid_argument("gaps must be >= 0");
    if (config.threads < 1)
        throw std::invalid_argument("threads must be >= 1");

    SolveData sd;
    sd.model = &model;
    sd.ctx = model.context.get();
    sd.nvars = static_cast<int>(model.vars.size());
    sd.obj.assign(sd.nvars, Rat(0));
    for (const auto& [v, coeff] : model.objective) {
        if (v < 0 || v >= sd.nvars)
            throw std::invalid_argument("objective references unknown variable");
        sd.obj[v] += coeff;
    }
    sd.rows.reserve(model.rows.size());
    for (const auto& row : model.rows) {
        ExactRow er;
        er.terms = row.terms;
        for (const auto& [v, coeff] : er.terms) {
            (void)coeff;
            if (v < 0 || v >= sd.nvars)
                throw std::invalid_argument("row references unknown variable");
        }
        switch (row.sense) {
            case 'G': er.lo_finite = true; er.lo = row.rhs; break;
            case 'E':
                er.lo_finite = er.hi_finite = true;
                er.lo = er.hi = row.rhs;
                break;
            case 'L':
                er.hi_finite = true;
                er.hi = row.rhs;
                if (row.ranged) {
                    er.lo_finite = true;
                    er.lo = row.range_lo;
                }
                break;
            default:
                throw std::invalid_argument("unknown row sense");
        }
        sd.rows.push_back(std::move(er));
    }
    sd.var_to_int.assign(sd.nvars, -1);
    sd.cont_lb.resize(sd.nvars);
    sd.cont_ub.resize(sd.nvars);
    const Rat kBig = rat_parse("1e29");
    for (int v = 0; v < sd.nvars; ++v) {
        const auto& var = model.vars[v];
        if (var.lb > var.ub)
            throw std::invalid_argument("variable with crossed bounds");
        if (abs(var.lb) > kBig || abs(var.ub) > kBig)
            throw std::invalid_argument(
                "unbounded variable: the solver requires box-bounded models");
        sd.cont_lb[v] = var.lb;
        sd.cont_ub[v] = var.ub;
        if (var.integral) {
            sd.var_to_int[v] = static_cast<int>(sd.int_vars.size());
            sd.int_vars.push_back(v);
            if (var.role == VarRole::W && sd.ctx)
                sd.w_int_ordinal.push_back(sd.var_to_int[v]);
        }
    }
    if (sd.ctx) {
        // Branch ordinals for w must cover every coefficient.
        if (sd.w_int_ordinal.size() != model.w_vars.size())
            throw std::invalid_argument("context model with non-integer w");
    } else {
        // Leaf completion requires at most one continuous variable per row.
        for (const auto& row : sd.rows) {
            int cont = -1;
            for (const auto& [v, coeff] : row.terms) {
                (void)coeff;
                if (sd.var_to_int[v] >= 0) continue;
                if (cont >= 0 && cont != v)
                    throw std::invalid_argument(
                        "unsupported model: row couples two continuous "
                        "variables");
                cont = v;
            }
        }
    }

    // Float LP skeleton.
    sd.lp_base.m = static_cast<int>(sd.rows.size());
    sd.lp_base.n = sd.nvars;
    sd.lp_base.cols.assign(sd.nvars, std::vector<double>(sd.rows.size(), 0.0));
    for (size_t i = 0; i < sd.rows.size(); ++i)
        for (const auto& [v, coeff] : sd.rows[i].terms)
            sd.lp_base.cols[v][i] += to_double(coeff);
    sd.lp_base.c.resize(sd.nvars);
    sd.lp_base.lo.resize(sd.nvars);
    sd.lp_base.up.resize(sd.nvars);
    for (int v = 0; v < sd.nvars; ++v) {
        sd.lp_base.c[v] = to_double(sd.obj[v]);
        sd.lp_base.lo[v] = to_double(sd.cont_lb[v]);
        sd.lp_base.up[v] = to_double(sd.cont_ub[v]);
    }
    sd.lp_base.row_lo.resize(sd.rows.size());
    sd.lp_base.row_hi.resize(sd.rows.size());
    for (size_t i = 0; i < sd.rows.size(); ++i) {
        sd.lp_base.row_lo[i] = sd.rows[i].lo_finite ? to_double(sd.rows[i].lo) : -kInf;
        sd.lp_base.row_hi[i] = sd.rows[i].hi_finite ? to_double(sd.rows[i].hi) : kInf;
    }

    SharedSearch sh;

    // Integer bound vectors for the root.
    auto root = std::make_shared<Node>();
    for (int v : sd.int_vars) {
        const auto& var = model.vars[v];
        // Integral variables must carry integral bounds.
        mpz_class lo_f = var.lb.get_num() / var.lb.get_den();
        if (Rat(lo_f) < var.lb) lo_f += 1;  // ceil for negative fractions
        mpz_class hi_f = var.ub.get_num() / var.ub.get_den();
        if (Rat(hi_f) > var.ub) hi_f -= 1;
        root->ilb.push_back(lo_f.get_si());
        root->iub.push_back(hi_f.get_si());
        if (root->ilb.back() > root->iub.back()) {
            Solution s;
            s.status = SolveStatus::Infeasible;
            return s;
        }
    }
    root->bound = exact_bound(sd, root->ilb, root->iub, {});
    root->seq = ++sh.seq;

    // Initial incumbent: the all-zero coefficient vector when feasible.
    if (sd.ctx) {
        std::vector<long long> zero(sd.ctx->data.d + 1, 0);
        bool in_box = true;
        for (size_t j = 0; j < sd.w_int_ordinal.size(); ++j) {
            int ord = sd.w_int_ordinal[j];
            in_box &= root->ilb[ord] <= 0 && 0 <= root->iub[ord];
        }
        if (in_box) {
            auto ev = canonical_completion(*sd.ctx, zero);
            if (ev) {
                sh.inc.found = true;
                sh.inc.sol =
                    solution_from_canonical(model, *sd.ctx, zero, *ev);
            }
        }
    }

    if (sh.inc.found)
        sh.pq.push(root);
    else
        sh.dfs.push_back(root);

    SolverConfig cfg = config;
    if (!cfg.verbose && std::getenv("FAIRSCORE_LOG")) cfg.verbose = true;

    {
        std::vector<std::thread> pool;
        std::vector<Worker> workers;
        workers.reserve(cfg.threads);
        for (int t = 0; t < cfg.threads; ++t)
            workers.push_back(Worker{sd, cfg, sh, t0});
        if (cfg.threads == 1) {
            workers[0].run();
        } else {
            for (auto& w : workers) pool.emplace_back([&w] { w.run(); });
            for (auto& th : pool) th.join();
        }
    }

    Solution out;
    out.nodes_explored = sh.nodes;
    out.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::optional<Rat> open_min;
    while (!sh.pq.empty()) {
        if (!open_min || sh.pq.top()->bound < *open_min)
            open_min = sh.pq.top()->bound;
        sh.pq.pop();
    }
    for (const auto& nd : sh.dfs)
        if (!open_min || nd->bound < *open_min) open_min = nd->bound;

    if (!sh.inc.found) {
        out.status = sh.stop ? sh.stop_status : SolveStatus::Infeasible;
        if (open_min) out.best_bound = *open_min;
        return out;
    }
    out = sh.inc.sol;
    out.nodes_explored = sh.nodes;
    out.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    out.best_bound = out.objective;
    if (sh.slack_bound_min && *sh.slack_bound_min < out.best_bound)
        out.best_bound = *sh.slack_bound_min;
    if (open_min && *open_min < out.best_bound) out.best_bound = *open_min;
    if (sh.stop)
        out.status = sh.stop_status;
    else
        out.status = sh.used_gap_slack ? SolveStatus::FeasibleGap
                                       : SolveStatus::Optimal;
    return out;
}

}  // namespace fairscore
