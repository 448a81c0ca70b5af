#include <charconv>
#include <cstring>
#include <map>
#include <sstream>

#include "fairscore/mip.hpp"

namespace fairscore {

namespace {

// <= 12 significant digits, locale-free (printf %.12g semantics).
std::string num(const Rat& r) {
    double v = to_double(r);
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v,
                             std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string pad(const std::string& s, size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

// Data line with fields at fixed offsets (classic MPS layout, wide names
// tolerated by shifting later fields right).
std::string data_line(const std::string& f2, const std::string& f3,
                      const std::string& f4) {
    std::string s = "    " + pad(f2, 8) + "  " + pad(f3, 8) + "  " + f4;
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

}  // namespace

std::string export_mps(const MipModel& model) {
    std::ostringstream os;
    os << "NAME          FAIRSCORE\n";
    os << "ROWS\n";
    os << " N  COST\n";
    for (const auto& row : model.rows)
        os << " " << row.sense << "  " << row.name << "\n";

    // Objective coefficients per variable for one-pass column emission.
    std::map<int, Rat> obj;
    for (const auto& [v, coeff] : model.objective) obj[v] += coeff;

    os << "COLUMNS\n";
    bool in_int = false;
    int marker_seq = 0;
    for (size_t v = 0; v < model.vars.size(); ++v) {
        const auto& var = model.vars[v];
        if (var.integral != in_int) {
            os << data_line("MARK" + std::to_string(marker_seq++), "'MARKER'",
                            var.integral ? "'INTORG'" : "'INTEND'")
               << "\n";
            in_int = var.integral;
        }
        auto it = obj.find(static_cast<int>(v));
        if (it != obj.end() && it->second != 0)
            os << data_line(var.name, "COST", num(it->second)) << "\n";
        for (size_t r = 0; r < model.rows.size(); ++r)
            for (const auto& [tv, coeff] : model.rows[r].terms)
                if (tv == static_cast<int>(v) && coeff != 0)
                    os << data_line(var.name, model.rows[r].name, num(coeff))
                       << "\n";
    }
    if (in_int)
        os << data_line("MARK" + std::to_string(marker_seq++), "'MARKER'",
                        "'INTEND'")
           << "\n";

    os << "RHS\n";
    if (model.obj_constant != 0)
        os << data_line("RHS", "COST", num(-model.obj_constant)) << "\n";
    for (const auto& row : model.rows)
        if (row.rhs != 0)
            os << data_line("RHS", row.name, num(row.rhs)) << "\n";

    bool any_range = false;
    for (const auto& row : model.rows) any_range |= row.ranged;
    if (any_range) {
        os << "RANGES\n";
        for (const auto& row : model.rows)
            if (row.ranged)
                os << data_line("RNG", row.name, num(row.rhs - row.range_lo))
                   << "\n";
    }

    os << "BOUNDS\n";
    for (const auto& var : model.vars) {
        if (var.lb == var.ub) {
            os << " FX " << data_line("BND", var.name, num(var.lb)).substr(4)
               << "\n";
        } else {
            os << " LO " << data_line("BND", var.name, num(var.lb)).substr(4)
               << "\n";
            os << " UP " << data_line("BND", var.name, num(var.ub)).substr(4)
               << "\n";
        }
    }
    os << "ENDATA\n";
    return os.str();
}

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

VarRole role_of_name(const std::string& name, int* index) {
    auto tail_int = [index](const std::string& s, size_t at) {
        *index = std::atoi(s.c_str() + at);
    };
    if (name.rfind("w_", 0) == 0) {
        tail_int(name, 2);
        return VarRole::W;
    }
    if (name.rfind("psi_", 0) == 0) {
        tail_int(name, 4);
        return VarRole::Psi;
    }
    if (name.rfind("alpha_", 0) == 0) {
        tail_int(name, 6);
        return VarRole::Alpha;
    }
    if (name.rfind("beta_", 0) == 0) {
        tail_int(name, 5);
        return VarRole::Beta;
    }
    if (name == "delta") {
        *index = 0;
        return VarRole::Delta;
    }
    *index = -1;
    return VarRole::W;
}

}  // namespace

MipModel parse_mps(const std::string& text) {
    MipModel m;
    std::map<std::string, int> row_ids;   // constraint name -> row index
    std::map<std::string, int> var_ids;   // column name -> variable index
    std::string obj_row;
    std::istringstream is(text);
    std::string line, section;
    bool in_int = false;
    const Rat big = rat_parse("1e30");  // stands in for +infinity

    auto get_var = [&](const std::string& name) {
        auto it = var_ids.find(name);
        if (it != var_ids.end()) return it->second;
        MipVariable v;
        v.name = name;
        v.lb = 0;
        v.ub = big;
        v.integral = in_int;
        int idx = -1;
        v.role = role_of_name(name, &idx);
        v.index = idx;
        m.vars.push_back(v);
        int id = static_cast<int>(m.vars.size()) - 1;
        var_ids[name] = id;
        return id;
    };

    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '*') continue;
        if (line[0] != ' ') {
            auto tk = tokens(line);
            section = tk.empty() ? "" : tk[0];
            continue;
        }
        auto tk = tokens(line);
        if (tk.empty()) continue;
        if (section == "ROWS") {
            if (tk.size() < 2) throw std::invalid_argument("bad ROWS line: " + line);
            if (tk[0] == "N") {
                if (obj_row.empty()) obj_row = tk[1];
                continue;
            }
            if (tk[0] != "L" && tk[0] != "G" && tk[0] != "E")
                throw std::invalid_argument("bad row sense: " + line);
            MipConstraint row;
            row.name = tk[1];
            row.sense = tk[0][0];
            row_ids[row.name] = static_cast<int>(m.rows.size());
            m.rows.push_back(std::move(row));
        } else if (section == "COLUMNS") {
            if (tk.size() >= 3 && tk[1] == "'MARKER'") {
                if (tk.back() == "'INTORG'") in_int = true;
                else if (tk.back() == "'INTEND'") in_int = false;
                continue;
            }
            if (tk.size() < 3 || (tk.size() - 1) % 2 != 0)
                throw std::invalid_argument("bad COLUMNS line: " + line);
            int v = get_var(tk[0]);
            for (size_t k = 1; k + 1 < tk.size(); k += 2) {
                Rat coeff = rat_parse(tk[k + 1]);
                if (tk[k] == obj_row) {
                    m.objective.emplace_back(v, coeff);
                } else {
                    auto it = row_ids.find(tk[k]);
                    if (it == row_ids.end())
                        throw std::invalid_argument("unknown row: " + tk[k]);
                    m.rows[it->second].terms.emplace_back(v, coeff);
                }
            }
        } else if (section == "RHS") {
            if (tk.size() < 3) throw std::invalid_argument("bad RHS line: " + line);
            for (size_t k = 1; k + 1 < tk.size(); k += 2) {
                Rat val = rat_parse(tk[k + 1]);
                if (tk[k] == obj_row) {
                    m.obj_constant = -val;
                } else {
                    auto it = row_ids.find(tk[k]);
                    if (it == row_ids.end())
                        throw std::invalid_argument("unknown row: " + tk[k]);
                    m.rows[it->second].rhs = val;
                }
            }
        } else if (section == "RANGES") {
            if (tk.size() < 3) throw std::invalid_argument("bad RANGES line: " + line);
            for (size_t k = 1; k + 1 < tk.size(); k += 2) {
                auto it = row_ids.find(tk[k]);
                if (it == row_ids.end())
                    throw std::invalid_argument("unknown row: " + tk[k]);
                MipConstraint& row = m.rows[it->second];
                Rat r = rat_parse(tk[k + 1]);
                Rat lo, hi;
                if (row.sense == 'L') {
                    hi = row.rhs;
                    lo = row.rhs - abs(r);
                } else if (row.sense == 'G') {
                    lo = row.rhs;
                    hi = row.rhs + abs(r);
                } else {
                    lo = r >= 0 ? row.rhs : row.rhs + r;
                    hi = r >= 0 ? row.rhs + r : row.rhs;
                }
                row.sense = 'L';
                row.rhs = hi;
                row.ranged = true;
                row.range_lo = lo;
            }
        } else if (section == "BOUNDS") {
            if (tk.size() < 3) throw std::invalid_argument("bad BOUNDS line: " + line);
            const std::string& kind = tk[0];
            int v = get_var(tk[2]);
            Rat val = tk.size() >= 4 ? rat_parse(tk[3]) : Rat(0);
            if (kind == "LO") m.vars[v].lb = val;
            else if (kind == "UP") m.vars[v].ub = val;
            else if (kind == "FX") m.vars[v].lb = m.vars[v].ub = val;
            else if (kind == "FR") { m.vars[v].lb = -big; m.vars[v].ub = big; }
            else if (kind == "MI") m.vars[v].lb = -big;
            else if (kind == "PL") m.vars[v].ub = big;
            else if (kind == "BV") {
                m.vars[v].lb = 0;
                m.vars[v].ub = 1;
                m.vars[v].integral = true;
            } else
                throw std::invalid_argument("unsupported bound kind: " + kind);
        } else if (section == "NAME" || section == "ENDATA") {
            // nothing to do
        } else if (!section.empty()) {
            throw std::invalid_argument("unsupported MPS section: " + section);
        }
    }

    // Recover role index maps when the naming convention is complete.
    int max_w = -1, max_psi = 0, max_alpha = 0, max_beta = 0;
    for (const auto& v : m.vars) {
        if (v.index < 0) continue;
        switch (v.role) {
            case VarRole::W: max_w = std::max(max_w, v.index); break;
            case VarRole::Psi: max_psi = std::max(max_psi, v.index); break;
            case VarRole::Alpha: max_alpha = std::max(max_alpha, v.index); break;
            case VarRole::Beta: max_beta = std::max(max_beta, v.index); break;
            case VarRole::Delta: break;
        }
    }
    if (max_w >= 0) {
        m.w_vars.assign(max_w + 1, -1);
        m.psi_vars.assign(max_psi, -1);
        m.alpha_vars.assign(max_alpha, -1);
        m.beta_vars.assign(max_beta, -1);
        for (size_t v = 0; v < m.vars.size(); ++v) {
            const auto& var = m.vars[v];
            if (var.index < 0) continue;
            switch (var.role) {
                case VarRole::W: m.w_vars[var.index] = static_cast<int>(v); break;
                case VarRole::Psi: m.psi_vars[var.index - 1] = static_cast<int>(v); break;
                case VarRole::Alpha: m.alpha_vars[var.index - 1] = static_cast<int>(v); break;
                case VarRole::Beta: m.beta_vars[var.index - 1] = static_cast<int>(v); break;
                case VarRole::Delta: m.delta_var = static_cast<int>(v); break;
            }
        }
        bool complete = true;
        for (int v : m.w_vars) complete &= v >= 0;
        for (int v : m.psi_vars) complete &= v >= 0;
        for (int v : m.alpha_vars) complete &= v >= 0;
        for (int v : m.beta_vars) complete &= v >= 0;
        if (!complete) {
            m.w_vars.clear();
            m.psi_vars.clear();
            m.alpha_vars.clear();
            m.beta_vars.clear();
            m.delta_var = -1;
        }
    }
    return m;
}

}  // namespace fairscore
