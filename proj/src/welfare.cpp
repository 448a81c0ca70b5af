#include "fairscore/welfare.hpp"

namespace fairscore {

WelfareParams WelfareParams::uniform(int n, Rat rho, Rat l0, Rat eps,
                                     WeightMode mode) {
    WelfareParams p;
    p.a.assign(n, Rat(1));
    p.b.assign(n, Rat(1));
    p.rho_bar = rho;
    p.lambda0 = l0;
    p.epsilon = eps;
    p.weight_mode = mode;
    return p;
}

Rat WelfareParams::lambda0_for(int j) const {
    auto it = lambda0_overrides.find(j);
    return it == lambda0_overrides.end() ? lambda0 : it->second;
}

void WelfareParams::validate(int n) const {
    if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("welfare weight length mismatch");
    for (const Rat& v : a)
        if (v < 0) throw std::invalid_argument("a_i must be >= 0");
    for (const Rat& v : b)
        if (v < 0) throw std::invalid_argument("b_i must be >= 0");
    if (lambda0 < 0) throw std::invalid_argument("lambda0 must be >= 0");
    for (const auto& [j, v] : lambda0_overrides)
        if (v < 0 || j < 1)
            throw std::invalid_argument("bad lambda0 override");
    if (epsilon < 0) throw std::invalid_argument("epsilon must be >= 0");
}

Rat data_utility(const std::vector<int>& psi, const WelfareParams& params) {
    if (psi.size() != params.a.size() || psi.size() != params.b.size())
        throw std::invalid_argument("data_utility: length mismatch");
    Rat s = 0;
    for (size_t i = 0; i < psi.size(); ++i) {
        s += params.a[i];
        if (psi[i]) s -= params.b[i];
    }
    if (params.weight_mode == WeightMode::Normalized)
        s /= rat_of_long(static_cast<long long>(psi.size()));
    return s;
}

Rat swf(const std::vector<int>& psi, const Rat& delta,
        const WelfareParams& params) {
    if (delta < 0 || delta > 1)
        throw std::invalid_argument("swf: delta out of [0,1]");
    Rat util = data_utility(psi, params);
    Rat n = rat_of_long(static_cast<long long>(psi.size()));
    Rat fairness_term = params.rho_bar * n * delta;
    if (params.weight_mode == WeightMode::Normalized) fairness_term /= n;
    return util - fairness_term;
}

Rat erm_objective(const std::vector<int>& psi, const std::vector<int>& alpha,
                  const std::vector<Rat>& beta, const Rat& delta,
                  const WelfareParams& params) {
    if (psi.size() != params.b.size())
        throw std::invalid_argument("erm_objective: psi length mismatch");
    if (alpha.size() != beta.size())
        throw std::invalid_argument("erm_objective: alpha/beta mismatch");
    Rat err = 0;
    for (size_t i = 0; i < psi.size(); ++i)
        if (psi[i]) err += params.b[i];
    err /= rat_of_long(static_cast<long long>(psi.size()));
    Rat obj = err + params.rho_bar * delta;
    for (size_t k = 0; k < alpha.size(); ++k) {
        int j = static_cast<int>(k) + 1;
        if (alpha[k]) obj += params.lambda0_for(j);
        obj += params.epsilon * beta[k];
    }
    return obj;
}

}  // namespace fairscore
