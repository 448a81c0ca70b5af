#include "fairscore/core_model.hpp"

#include <algorithm>
#include <sstream>

namespace fairscore {

Rat rat_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    // Fraction form p/q handled by GMP directly.
    if (s.find('/') != std::string::npos) {
        Rat r;
        if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
            throw std::invalid_argument("bad rational literal: " + s);
        r.canonicalize();
        if (r.get_den() == 0)
            throw std::invalid_argument("zero denominator: " + s);
        return r;
    }
    // Decimal / scientific form parsed exactly: m.mmm e +k  ->  integer * 10^k.
    std::string t = s;
    long long exp10 = 0;
    auto epos = t.find_first_of("eE");
    if (epos != std::string::npos) {
        exp10 = std::stoll(t.substr(epos + 1));
        t = t.substr(0, epos);
    }
    auto dot = t.find('.');
    if (dot != std::string::npos) {
        exp10 -= static_cast<long long>(t.size() - dot - 1);
        t.erase(dot, 1);
    }
    if (t.empty() || t == "-" || t == "+")
        throw std::invalid_argument("bad rational literal: " + s);
    for (size_t i = 0; i < t.size(); ++i) {
        char ch = t[i];
        if (!(std::isdigit(static_cast<unsigned char>(ch)) ||
              (i == 0 && (ch == '-' || ch == '+'))))
            throw std::invalid_argument("bad rational literal: " + s);
    }
    mpz_class mant(t, 10);
    Rat r(mant);
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10,
                  static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    if (exp10 >= 0)
        r *= Rat(pow10);
    else
        r /= Rat(pow10);
    r.canonicalize();
    return r;
}

std::string rat_str(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

mpz_class isqrt(const mpz_class& v) {
    if (v < 0) throw std::invalid_argument("isqrt of negative value");
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    return r;
}

long long int_above_sqrt(const Rat& v) {
    if (v < 0) throw std::invalid_argument("int_above_sqrt of negative value");
    // Smallest m with m^2 > v: try m = isqrt(floor(v)), adjust upward.
    mpz_class fl = v.get_num() / v.get_den();
    mpz_class m = isqrt(fl);
    while (Rat(m * m) <= v) ++m;
    return static_cast<long long>(m.get_si());
}

bool Dataset::all_binary() const {
    for (const auto& row : x)
        for (int j = 1; j <= d; ++j)
            if (row[j] != 0 && row[j] != 1) return false;
    return true;
}

Dataset Dataset::create(std::vector<std::vector<Rat>> features,
                        std::vector<int> labels, std::vector<int> groups,
                        std::vector<std::string> names,
                        std::set<int> sensitive) {
    Dataset ds;
    ds.n = static_cast<int>(features.size());
    if (ds.n < 1) throw std::invalid_argument("dataset needs n >= 1");
    ds.d = static_cast<int>(features[0].size()) - 1;
    if (ds.d < 0) throw std::invalid_argument("feature rows need an intercept");
    for (const auto& row : features) {
        if (static_cast<int>(row.size()) != ds.d + 1)
            throw std::invalid_argument("ragged feature matrix");
        if (row[0] != 1)
            throw std::invalid_argument("column 0 must be identically 1");
    }
    if (static_cast<int>(labels.size()) != ds.n ||
        static_cast<int>(groups.size()) != ds.n)
        throw std::invalid_argument("labels/groups length mismatch");
    for (int v : labels)
        if (v != -1 && v != 1)
            throw std::invalid_argument("labels must be -1 or +1");
    int cmax = -1;
    for (int g : groups) {
        if (g < 0) throw std::invalid_argument("negative group id");
        cmax = std::max(cmax, g);
    }
    ds.c = cmax + 1;
    if (ds.c < 2) throw std::invalid_argument("need at least two groups");
    std::vector<int> seen(ds.c, 0);
    for (int g : groups) seen[g] = 1;
    for (int p = 0; p < ds.c; ++p)
        if (!seen[p])
            throw std::invalid_argument("group id " + std::to_string(p) +
                                        " never occurs");
    if (static_cast<int>(names.size()) != ds.d + 1)
        throw std::invalid_argument("feature_names length mismatch");
    for (int j : sensitive)
        if (j < 1 || j > ds.d)
            throw std::invalid_argument("sensitive column out of range");
    ds.x = std::move(features);
    ds.y = std::move(labels);
    ds.group = std::move(groups);
    ds.feature_names = std::move(names);
    ds.sensitive_columns = std::move(sensitive);
    return ds;
}

void ScoringSystem::validate() const {
    if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
    if (w.size() != omega.size())
        throw std::invalid_argument("w/omega length mismatch");
    for (size_t j = 0; j < w.size(); ++j) {
        if (omega[j] < 0) throw std::invalid_argument("omega must be >= 0");
        if (w[j] > omega[j] || w[j] < -omega[j])
            throw std::invalid_argument("|w_" + std::to_string(j) +
                                        "| exceeds omega");
    }
}

int ScoringSystem::model_size() const {
    int k = 0;
    for (size_t j = 1; j < w.size(); ++j)
        if (w[j] != 0) ++k;
    return k;
}

Rat score(const ScoringSystem& sys, const std::vector<Rat>& x) {
    if (x.size() != sys.w.size())
        throw std::invalid_argument("score: dimension mismatch");
    Rat s = 0;
    for (size_t j = 0; j < x.size(); ++j) s += rat_of_long(sys.w[j]) * x[j];
    return s;
}

int predict(const ScoringSystem& sys, const std::vector<Rat>& x) {
    return score(sys, x) > 0 ? 1 : -1;
}

std::vector<int> loss_vector(const std::vector<long long>& w,
                             const Dataset& data) {
    if (static_cast<int>(w.size()) != data.d + 1)
        throw std::invalid_argument("loss_vector: dimension mismatch");
    std::vector<int> psi(data.n, 0);
    for (int i = 0; i < data.n; ++i) {
        Rat s = 0;
        for (int j = 0; j <= data.d; ++j) s += rat_of_long(w[j]) * data.x[i][j];
        psi[i] = (rat_of_long(data.y[i]) * s <= 0) ? 1 : 0;
    }
    return psi;
}

std::vector<int> loss_vector(const ScoringSystem& sys, const Dataset& data) {
    return loss_vector(sys.w, data);
}

Rat weighted_error(const std::vector<int>& psi, const std::vector<Rat>& b) {
    if (psi.size() != b.size())
        throw std::invalid_argument("weighted_error: length mismatch");
    if (psi.empty()) throw std::invalid_argument("weighted_error: empty input");
    Rat s = 0;
    for (size_t i = 0; i < psi.size(); ++i) {
        if (b[i] < 0) throw std::invalid_argument("negative example weight");
        if (psi[i]) s += b[i];
    }
    return s / rat_of_long(static_cast<long long>(psi.size()));
}

}  // namespace fairscore
