#include "fairscore/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairscore {

namespace {

Rat theta_dot(const std::vector<Rat>& theta, const Dataset& data, int i) {
    Rat s = 0;
    for (int j = 0; j <= data.d; ++j) s += theta[j] * data.x[i][j];
    return s;
}

Rat norm_sq(const std::vector<Rat>& theta) {
    Rat s = 0;
    for (const Rat& t : theta) s += t * t;
    return s;
}

void check_theta(const std::vector<Rat>& theta, const Dataset& data) {
    if (static_cast<int>(theta.size()) != data.d + 1)
        throw std::invalid_argument("theta length must be d+1");
    for (const Rat& t : theta)
        if (t != 0) return;
    throw std::invalid_argument("theta must be nonzero");
}

// Exact square root when v is a perfect rational square, else a
// double-precision approximation.
Rat sqrt_or_approx(const Rat& v) {
    if (v < 0) throw std::invalid_argument("sqrt of negative value");
    mpz_class num = v.get_num(), den = v.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) &&
        mpz_perfect_square_p(den.get_mpz_t())) {
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
        Rat r(rn, rd);
        r.canonicalize();
        return r;
    }
    return rat_of_double(std::sqrt(to_double(v)));
}

// sign of q - t*sqrt(s) for s > 0, exact.
int cmp_against_sqrt(const Rat& q, const Rat& t, const Rat& s) {
    if (t == 0) return q > 0 ? 1 : (q < 0 ? -1 : 0);
    if (t > 0) {
        if (q <= 0) return -1;  // q <= 0 < t sqrt(s)
        Rat lhs = q * q, rhs = t * t * s;
        return lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
    }
    if (q >= 0) return 1;  // q >= 0 > t sqrt(s)
    Rat lhs = q * q, rhs = t * t * s;
    return lhs < rhs ? 1 : (lhs > rhs ? -1 : 0);
}

long long min_or_throw(const std::vector<long long>& v, const char* what) {
    long long m = -1;
    for (size_t p = 0; p < v.size(); ++p) {
        if (v[p] < 1) throw MetricUndefinedError(what, static_cast<int>(p));
        if (m < 0 || v[p] < m) m = v[p];
    }
    return m;
}

}  // namespace

std::vector<int> loss_vector_real(const std::vector<Rat>& theta,
                                  const Dataset& data) {
    check_theta(theta, data);
    std::vector<int> psi(data.n);
    for (int i = 0; i < data.n; ++i) {
        Rat s = theta_dot(theta, data, i);
        psi[i] = (data.y[i] > 0 ? s : -s) <= 0 ? 1 : 0;
    }
    return psi;
}

std::vector<Rat> margin_squares(const std::vector<Rat>& theta,
                                const Dataset& data) {
    check_theta(theta, data);
    Rat s = norm_sq(theta);
    std::vector<Rat> out(data.n);
    for (int i = 0; i < data.n; ++i) {
        Rat dot = theta_dot(theta, data, i);
        out[i] = dot * dot / s;
    }
    return out;
}

std::vector<Rat> margins(const std::vector<Rat>& theta, const Dataset& data) {
    std::vector<Rat> sq = margin_squares(theta, data);
    std::sort(sq.begin(), sq.end());
    std::vector<Rat> out;
    out.reserve(sq.size());
    for (const Rat& v : sq) out.push_back(sqrt_or_approx(v));
    return out;
}

std::vector<char> small_margin_set(const std::vector<Rat>& margin_sq, int k) {
    const int n = static_cast<int>(margin_sq.size());
    if (k < 1 || k > n) throw std::invalid_argument("k out of range");
    std::vector<Rat> sorted = margin_sq;
    std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
    Rat kth = sorted[k - 1];
    std::vector<char> in(n, 0);
    for (int i = 0; i < n; ++i) in[i] = margin_sq[i] < kth ? 1 : 0;
    return in;
}

namespace {

// Squared bound X_(k)^2 (d+1) / (4 eta_(k)^2), exact.
Rat omega_bound_sq(const std::vector<Rat>& theta, const Dataset& data, int k) {
    std::vector<Rat> msq = margin_squares(theta, data);
    std::vector<Rat> sorted = msq;
    std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
    Rat eta_sq = sorted[k - 1];
    if (eta_sq == 0)
        throw std::domain_error("omega bound undefined: eta_(k) = 0");
    std::vector<char> small = small_margin_set(msq, k);
    Rat xsq = 0;
    for (int i = 0; i < data.n; ++i) {
        if (small[i]) continue;
        Rat s = 0;
        for (int j = 0; j <= data.d; ++j) s += data.x[i][j] * data.x[i][j];
        xsq = std::max(xsq, s);
    }
    return xsq * rat_of_long(data.d + 1) / (4 * eta_sq);
}

}  // namespace

Rat omega_bound(const std::vector<Rat>& theta, const Dataset& data, int k) {
    return sqrt_or_approx(omega_bound_sq(theta, data, k));
}

long long omega_min(const std::vector<Rat>& theta, const Dataset& data,
                    int k) {
    return int_above_sqrt(omega_bound_sq(theta, data, k));
}

std::vector<long long> rounded_coefficients(const std::vector<Rat>& theta,
                                            const Dataset& data,
                                            long long omega) {
    check_theta(theta, data);
    if (omega < 1) throw std::invalid_argument("omega must be >= 1");
    Rat s = norm_sq(theta);
    double sd = std::sqrt(to_double(s));
    std::vector<long long> w(data.d + 1);
    for (int j = 0; j <= data.d; ++j) {
        Rat q = rat_of_long(omega) * theta[j];  // round q / sqrt(s)
        long long m = std::llround(to_double(q) / sd);
        // Nudge until m - 1/2 <= q/sqrt(s) < m + 1/2, exactly.
        while (cmp_against_sqrt(q, rat_of_long(m) + rat(1, 2), s) >= 0) ++m;
        while (cmp_against_sqrt(q, rat_of_long(m) - rat(1, 2), s) < 0) --m;
        if (m > omega || m < -omega)
            throw std::logic_error("rounded coefficient left the box");
        w[j] = m;
    }
    return w;
}

Rat delta_f(int k, Notion notion, const GroupIndex& gi) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    switch (notion) {
        case Notion::OMR:
        case Notion::SP:
            return rat_of_long(k - 1) /
                   rat_of_long(min_or_throw(gi.n_group, "empty group"));
        case Notion::EO:
            return rat_of_long(k - 1) /
                   rat_of_long(min_or_throw(gi.n_pos,
                                            "group with no positive examples"));
        case Notion::PE:
            return rat_of_long(k - 1) /
                   rat_of_long(min_or_throw(gi.n_neg,
                                            "group with no negative examples"));
        case Notion::EODDS:
            return std::max(delta_f(k, Notion::EO, gi),
                            delta_f(k, Notion::PE, gi));
    }
    throw std::logic_error("unknown notion");
}

Rat welfare_gap_lower(int k, const Rat& max_b_over_small_set, int n,
                      const Rat& rho_bar, const Rat& delta_f_value) {
    return rat_of_long(1 - k) * max_b_over_small_set -
           rat_of_long(n) * rho_bar * delta_f_value;
}

Rat welfare_gap_lower(const std::vector<Rat>& theta, const Dataset& data,
                      int k, const WelfareParams& params, Notion notion) {
    params.validate(data.n);
    std::vector<char> small = small_margin_set(margin_squares(theta, data), k);
    Rat max_b = 0;
    for (int i = 0; i < data.n; ++i)
        if (small[i]) max_b = std::max(max_b, params.b[i]);
    Rat df = delta_f(k, notion, group_index(data));
    return welfare_gap_lower(k, max_b, data.n, params.rho_bar, df);
}

namespace {

// max{A(1-delta)+B, B(1-delta)+A} over one unordered pair.
Rat pair_cap(long long a, long long b, const Rat& delta) {
    Rat one_m = 1 - delta;
    return std::max(Rat(rat_of_long(a) * one_m + rat_of_long(b)),
                    Rat(rat_of_long(b) * one_m + rat_of_long(a)));
}

// Statistical-parity pair cap, piecewise on the group-size comparison.
Rat sp_pair_cap(const GroupIndex& gi, int p, int q, const Rat& delta) {
    Rat np = rat_of_long(gi.n_group[p]), nq = rat_of_long(gi.n_group[q]);
    Rat npp = rat_of_long(gi.n_pos[p]), nqp = rat_of_long(gi.n_pos[q]);
    Rat npm = rat_of_long(gi.n_neg[p]), nqm = rat_of_long(gi.n_neg[q]);
    Rat one_m = 1 - delta;
    if (nq > np)
        return std::max(Rat(one_m * nq + nqp + npm),
                        Rat(np * (nqm / nq - delta) + npp + nq));
    if (nq < np)
        return std::max(Rat(one_m * np + npp + nqm),
                        Rat(nq * (npm / np - delta) + nqp + np));
    return std::max(Rat(one_m * nq + nqp + npm), Rat(one_m * np + npp + nqm));
}

}  // namespace

Rat delta_star_cap(const Rat& delta_star, Notion notion,
                   const WelfareParams& params, const GroupIndex& gi,
                   bool eo_as_printed) {
    if (delta_star < 0 || delta_star > 1)
        throw std::invalid_argument("delta_star must lie in [0,1]");
    Rat sum_a = 0, max_b = 0;
    for (const Rat& v : params.a) sum_a += v;
    for (const Rat& v : params.b) max_b = std::max(max_b, v);
    const int c = gi.c;
    Rat pair_sum = 0;
    for (int p = 0; p < c; ++p)
        for (int q = p + 1; q < c; ++q) {
            switch (notion) {
                case Notion::OMR:
                    pair_sum += pair_cap(gi.n_group[p], gi.n_group[q],
                                         delta_star);
                    break;
                case Notion::EO:
                    pair_sum += eo_as_printed
                                    ? pair_cap(gi.n_group[p], gi.n_group[q],
                                               delta_star)
                                    : pair_cap(gi.n_pos[p], gi.n_pos[q],
                                               delta_star);
                    break;
                case Notion::PE:
                    pair_sum += eo_as_printed
                                    ? pair_cap(gi.n_group[p], gi.n_group[q],
                                               delta_star)
                                    : pair_cap(gi.n_neg[p], gi.n_neg[q],
                                               delta_star);
                    break;
                case Notion::SP:
                    pair_sum += sp_pair_cap(gi, p, q, delta_star);
                    break;
                case Notion::EODDS:
                    break;  // handled below
            }
        }
    switch (notion) {
        case Notion::OMR:
        case Notion::SP:
            return sum_a - max_b / rat_of_long(c - 1) * pair_sum;
        case Notion::EO:
            return sum_a - max_b / rat_of_long(c - 1) * pair_sum -
                   max_b * rat_of_long(gi.total_neg);
        case Notion::PE:
            return sum_a - max_b / rat_of_long(c - 1) * pair_sum -
                   max_b * rat_of_long(gi.total_pos);
        case Notion::EODDS:
            return std::max(
                delta_star_cap(delta_star, Notion::EO, params, gi,
                               eo_as_printed),
                delta_star_cap(delta_star, Notion::PE, params, gi,
                               eo_as_printed));
    }
    throw std::logic_error("unknown notion");
}

Rat swf_lower_bound(const Rat& delta_star, Notion notion,
                    const WelfareParams& params, const GroupIndex& gi,
                    bool eo_as_printed) {
    Rat cap = delta_star_cap(delta_star, notion, params, gi, eo_as_printed);
    return params.rho_bar > 0 ? Rat(cap - params.rho_bar) : cap;
}

TheoryReport theory_report(const std::vector<Rat>& theta, const Dataset& data,
                           int k, const WelfareParams& params, Notion notion,
                           const Rat& delta_star, bool eo_as_printed) {
    params.validate(data.n);
    if (k < 1 || k > data.n) throw std::invalid_argument("k out of range");
    TheoryReport r;
    r.k = k;
    r.margins = margins(theta, data);
    r.eta_k = r.margins[k - 1];
    std::vector<Rat> msq = margin_squares(theta, data);
    std::vector<char> small = small_margin_set(msq, k);
    Rat xsq = 0;
    for (int i = 0; i < data.n; ++i) {
        if (small[i]) continue;
        Rat s = 0;
        for (int j = 0; j <= data.d; ++j) s += data.x[i][j] * data.x[i][j];
        xsq = std::max(xsq, s);
    }
    r.x_k = sqrt_or_approx(xsq);
    std::vector<Rat> sorted_sq = msq;
    std::nth_element(sorted_sq.begin(), sorted_sq.begin() + (k - 1),
                     sorted_sq.end());
    if (sorted_sq[k - 1] > 0) {
        r.omega_bound = omega_bound(theta, data, k);
        r.omega_min = omega_min(theta, data, k);
    }
    GroupIndex gi = group_index(data);
    r.delta_f = delta_f(k, notion, gi);
    r.welfare_gap_lower = welfare_gap_lower(theta, data, k, params, notion);
    r.delta_star = delta_star;
    r.delta_star_cap = delta_star_cap(delta_star, notion, params, gi,
                                      eo_as_printed);
    r.swf_lower = swf_lower_bound(delta_star, notion, params, gi,
                                  eo_as_printed);
    return r;
}

}  // namespace fairscore
