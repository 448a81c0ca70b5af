#include "fairscore/data_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "../vendor/json.hpp"

namespace fairscore {

std::string column_kind_name(ColumnKind k) {
    switch (k) {
        case ColumnKind::Numeric: return "numeric";
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::Binary: return "binary";
        case ColumnKind::Label: return "label";
        case ColumnKind::Sensitive: return "sensitive";
    }
    return "?";
}

ColumnKind column_kind_from_name(const std::string& s) {
    if (s == "numeric") return ColumnKind::Numeric;
    if (s == "categorical") return ColumnKind::Categorical;
    if (s == "binary") return ColumnKind::Binary;
    if (s == "label") return ColumnKind::Label;
    if (s == "sensitive") return ColumnKind::Sensitive;
    throw std::invalid_argument("unknown column kind: " + s);
}

int RawTable::label_of_row(int i) const {
    return rows[i][label_col] == positive_label ? 1 : -1;
}

namespace {

// RFC-4180 field splitter; handles quoted fields with embedded commas,
// newlines, and doubled quotes. Returns one vector per record.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string cell;
    bool in_quotes = false, cell_started = false;
    auto flush_cell = [&] {
        fields.push_back(cell);
        cell.clear();
        cell_started = false;
    };
    auto flush_record = [&] {
        flush_cell();
        records.push_back(std::move(fields));
        fields.clear();
    };
    for (size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cell.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (!cell_started && cell.empty()) {
                    in_quotes = true;
                    cell_started = true;
                } else {
                    cell.push_back(ch);
                }
                break;
            case ',': flush_cell(); break;
            case '\r': break;
            case '\n': flush_record(); break;
            default:
                cell.push_back(ch);
                cell_started = true;
        }
    }
    if (in_quotes) throw std::invalid_argument("unterminated quoted field");
    if (cell_started || !cell.empty() || !fields.empty()) flush_record();
    // Blank lines carry no record.
    std::erase_if(records, [](const std::vector<std::string>& r) {
        return r.size() == 1 && r[0].empty();
    });
    return records;
}

}  // namespace

LoadResult load_csv(const std::string& csv_path,
                    const std::string& schema_path) {
    std::ifstream schema_in(schema_path);
    if (!schema_in)
        throw std::invalid_argument("cannot open schema file: " + schema_path);
    nlohmann::json schema = nlohmann::json::parse(schema_in);
    if (!schema.contains("columns") || !schema["columns"].is_object())
        throw std::invalid_argument("schema must contain a columns object");

    std::ifstream csv_in(csv_path, std::ios::binary);
    if (!csv_in)
        throw std::invalid_argument("cannot open data file: " + csv_path);
    std::stringstream buf;
    buf << csv_in.rdbuf();
    auto records = parse_csv(buf.str());
    if (records.empty()) throw std::invalid_argument("empty data file");

    LoadResult out;
    RawTable& t = out.table;
    t.names = records[0];

    std::map<std::string, ColumnKind> declared;
    for (auto it = schema["columns"].begin(); it != schema["columns"].end();
         ++it)
        declared[it.key()] = column_kind_from_name(it.value());
    for (const std::string& name : t.names) {
        auto it = declared.find(name);
        if (it == declared.end())
            throw std::invalid_argument("column not declared in schema: " +
                                        name);
        t.kinds.push_back(it->second);
    }
    if (declared.size() != t.names.size())
        throw std::invalid_argument(
            "schema declares columns absent from the data header");

    for (size_t j = 0; j < t.kinds.size(); ++j) {
        if (t.kinds[j] == ColumnKind::Label) {
            if (t.label_col >= 0)
                throw std::invalid_argument("multiple label columns");
            t.label_col = static_cast<int>(j);
        } else if (t.kinds[j] == ColumnKind::Sensitive) {
            t.sensitive_cols.push_back(static_cast<int>(j));
        }
    }
    if (t.label_col < 0)
        throw std::invalid_argument("schema declares no label column");
    if (t.sensitive_cols.empty())
        throw std::invalid_argument("schema declares no sensitive column");
    if (!schema.contains("positive_label"))
        throw std::invalid_argument("schema must declare positive_label");
    const auto& pl = schema["positive_label"];
    t.positive_label =
        pl.is_string() ? pl.get<std::string>() : nlohmann::to_string(pl);

    std::set<std::string> label_values;
    for (size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != t.names.size())
            throw std::invalid_argument("row " + std::to_string(r) + " has " +
                                        std::to_string(rec.size()) +
                                        " fields, expected " +
                                        std::to_string(t.names.size()));
        bool missing = false;
        for (const std::string& cell : rec) missing |= cell.empty();
        if (missing) {
            out.dropped_rows++;
            continue;
        }
        // Validate parseability up front so errors name the offending cell.
        for (size_t j = 0; j < rec.size(); ++j) {
            if (t.kinds[j] == ColumnKind::Numeric) {
                try {
                    rat_parse(rec[j]);
                } catch (const std::exception&) {
                    throw std::invalid_argument("unparseable numeric cell '" +
                                                rec[j] + "' in column " +
                                                t.names[j]);
                }
            } else if (t.kinds[j] == ColumnKind::Binary) {
                if (rec[j] != "0" && rec[j] != "1")
                    throw std::invalid_argument("binary column " + t.names[j] +
                                                " holds non-binary value '" +
                                                rec[j] + "'");
            }
        }
        label_values.insert(rec[t.label_col]);
        t.rows.push_back(rec);
    }
    if (label_values.size() > 2)
        throw std::invalid_argument("label column has " +
                                    std::to_string(label_values.size()) +
                                    " distinct values, expected at most 2");
    return out;
}

namespace {

std::vector<Rat> default_quantiles() { return {rat(1, 4), rat(1, 2), rat(3, 4)}; }

// Lower empirical quantile: the ceil(q*n)-th smallest value (1-based).
Rat quantile_value(const std::vector<Rat>& sorted, const Rat& q) {
    mpz_class num = q.get_num() * static_cast<long>(sorted.size());
    mpz_class idx;
    mpz_cdiv_q(idx.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
    long i = idx.get_si();
    if (i < 1) i = 1;
    if (i > static_cast<long>(sorted.size()))
        i = static_cast<long>(sorted.size());
    return sorted[i - 1];
}

std::vector<int> group_ids_from(const RawTable& t, bool intersectional,
                                int* out_c) {
    std::vector<std::string> keys(t.rows.size());
    for (size_t i = 0; i < t.rows.size(); ++i) {
        if (intersectional) {
            std::string k;
            for (int col : t.sensitive_cols) {
                k += t.rows[i][col];
                k.push_back('\x1f');
            }
            keys[i] = k;
        } else {
            keys[i] = t.rows[i][t.sensitive_cols.front()];
        }
    }
    std::set<std::string> distinct(keys.begin(), keys.end());
    std::map<std::string, int> id;
    for (const std::string& k : distinct) id[k] = static_cast<int>(id.size());
    std::vector<int> g(t.rows.size());
    for (size_t i = 0; i < keys.size(); ++i) g[i] = id[keys[i]];
    *out_c = static_cast<int>(distinct.size());
    return g;
}

}  // namespace

BinarizeResult binarize(const RawTable& table, const BinarizeConfig& config) {
    const int n = static_cast<int>(table.rows.size());
    if (n == 0) throw std::invalid_argument("empty table");
    std::vector<Rat> quantiles =
        config.quantiles.empty() ? default_quantiles() : config.quantiles;
    for (const Rat& q : quantiles)
        if (q <= 0 || q >= 1)
            throw std::invalid_argument("quantiles must lie in (0,1)");

    BinarizeResult out;
    std::vector<std::string> names{"(intercept)"};
    std::vector<std::vector<Rat>> cols;  // column-major, without intercept
    std::set<int> sensitive_out;

    auto add_column = [&](const std::string& name, std::vector<Rat> col,
                          bool sensitive) {
        cols.push_back(std::move(col));
        names.push_back(name);
        if (sensitive) sensitive_out.insert(static_cast<int>(cols.size()));
    };

    for (size_t j = 0; j < table.names.size(); ++j) {
        ColumnKind kind = table.kinds[j];
        if (kind == ColumnKind::Label) continue;
        if (kind == ColumnKind::Sensitive && !config.sensitive_as_feature)
            continue;
        const std::string& name = table.names[j];
        if (kind == ColumnKind::Binary) {
            std::vector<Rat> col(n);
            for (int i = 0; i < n; ++i)
                col[i] = rat_of_long(table.rows[i][j] == "1" ? 1 : 0);
            add_column(name, std::move(col), false);
        } else if (kind == ColumnKind::Numeric) {
            std::vector<Rat> vals(n);
            for (int i = 0; i < n; ++i) vals[i] = rat_parse(table.rows[i][j]);
            std::vector<Rat> sorted = vals;
            std::sort(sorted.begin(), sorted.end());
            std::vector<Rat> thresholds;
            for (const Rat& q : quantiles) {
                Rat t = quantile_value(sorted, q);
                if (t >= sorted.back()) continue;  // indicator would be 1
                if (std::find(thresholds.begin(), thresholds.end(), t) ==
                    thresholds.end())
                    thresholds.push_back(t);
            }
            if (thresholds.empty()) {
                out.warnings.push_back("numeric column " + name +
                                       " has no usable thresholds; dropped");
                continue;
            }
            std::sort(thresholds.begin(), thresholds.end());
            for (const Rat& t : thresholds) {
                std::vector<Rat> col(n);
                for (int i = 0; i < n; ++i)
                    col[i] = rat_of_long(vals[i] <= t ? 1 : 0);
                add_column(name + "<=" + rat_str(t), std::move(col), false);
            }
        } else {  // Categorical or Sensitive-as-feature: one-hot
            std::set<std::string> distinct;
            for (int i = 0; i < n; ++i) distinct.insert(table.rows[i][j]);
            for (const std::string& v : distinct) {
                std::vector<Rat> col(n);
                for (int i = 0; i < n; ++i)
                    col[i] = rat_of_long(table.rows[i][j] == v ? 1 : 0);
                add_column(name + "=" + v, std::move(col),
                           kind == ColumnKind::Sensitive);
            }
        }
    }

    int c = 0;
    std::vector<int> groups =
        group_ids_from(table, config.intersectional_groups, &c);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = table.label_of_row(i);

    std::vector<std::vector<Rat>> x(n);
    for (int i = 0; i < n; ++i) {
        x[i].reserve(cols.size() + 1);
        x[i].push_back(1);
        for (const auto& col : cols) x[i].push_back(col[i]);
    }
    out.data = Dataset::create(std::move(x), std::move(labels),
                               std::move(groups), std::move(names),
                               std::move(sensitive_out));
    return out;
}

namespace {

// Deterministic Fisher-Yates (std::shuffle is implementation-defined).
void seeded_shuffle(std::vector<int>& v, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    for (size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng() % i]);
}

// Subset of rows (ascending indices) as a new Dataset; group ids compacted.
Dataset take_rows(const Dataset& data, const std::vector<int>& rows,
                  int* groups_lost) {
    std::set<int> seen;
    for (int i : rows) seen.insert(data.group[i]);
    std::map<int, int> remap;
    for (int g : seen) remap[g] = static_cast<int>(remap.size());
    if (groups_lost)
        *groups_lost = data.c - static_cast<int>(remap.size());

    std::vector<std::vector<Rat>> x;
    std::vector<int> y, g;
    for (int i : rows) {
        x.push_back(data.x[i]);
        y.push_back(data.y[i]);
        g.push_back(remap[data.group[i]]);
    }
    return Dataset::create(std::move(x), std::move(y), std::move(g),
                           data.feature_names, data.sensitive_columns);
}

}  // namespace

SplitResult split(const Dataset& data, double train_fraction,
                  unsigned long long seed) {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must lie in (0,1)");
    if (data.n < 2) throw std::invalid_argument("need at least 2 rows");
    std::vector<int> order(data.n);
    for (int i = 0; i < data.n; ++i) order[i] = i;
    seeded_shuffle(order, seed);
    long long n_train = std::llround(train_fraction * data.n);
    n_train = std::max(1LL, std::min<long long>(n_train, data.n - 1));

    std::vector<int> train_rows(order.begin(), order.begin() + n_train);
    std::vector<int> test_rows(order.begin() + n_train, order.end());
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());

    SplitResult out;
    int lost = 0;
    out.train = take_rows(data, train_rows, &lost);
    if (lost > 0)
        out.warnings.push_back(std::to_string(lost) +
                               " group(s) missing from the train part");
    out.test = take_rows(data, test_rows, &lost);
    if (lost > 0)
        out.warnings.push_back(std::to_string(lost) +
                               " group(s) missing from the test part");
    return out;
}

Dataset undersample(const Dataset& data, unsigned long long seed) {
    std::vector<int> pos, neg;
    for (int i = 0; i < data.n; ++i)
        (data.y[i] > 0 ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty())
        throw std::invalid_argument("undersample requires both classes");
    std::vector<int>& majority = pos.size() > neg.size() ? pos : neg;
    size_t keep = std::min(pos.size(), neg.size());
    seeded_shuffle(majority, seed);
    majority.resize(keep);
    std::vector<int> rows;
    rows.reserve(2 * keep);
    rows.insert(rows.end(), pos.begin(), pos.end());
    rows.insert(rows.end(), neg.begin(), neg.end());
    std::sort(rows.begin(), rows.end());
    return take_rows(data, rows, nullptr);
}

}  // namespace fairscore
