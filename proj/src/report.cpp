#include "fairscore/report.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "../vendor/json.hpp"

namespace fairscore {

Report evaluate(const ScoringSystem& sys, const Dataset& data,
                const WelfareParams& params,
                const std::vector<Notion>& notions) {
    sys.validate();
    if (static_cast<int>(sys.w.size()) != data.d + 1)
        throw std::invalid_argument("system/dataset dimension mismatch");
    params.validate(data.n);

    Report r;
    r.n = data.n;
    r.meta = sys.meta;
    r.model_size = sys.model_size();
    r.degenerate = true;
    for (long long wj : sys.w) r.degenerate &= wj == 0;

    std::vector<int> psi = loss_vector(sys, data);
    long long wrong = 0;
    for (int p : psi) wrong += p;
    r.accuracy = rat_of_long(data.n - wrong) / rat_of_long(data.n);
    r.weighted_error = weighted_error(psi, params.b);

    GroupIndex gi = group_index(data);
    for (Notion notion : notions) {
        try {
            r.delta_achieved[notion_name(notion)] =
                fairness_level(notion, psi, gi);
        } catch (const MetricUndefinedError& e) {
            r.delta_errors[notion_name(notion)] = e.what();
        }
    }
    if (!sys.meta.notion.empty()) {
        try {
            r.delta_used = fairness_level(notion_from_name(sys.meta.notion),
                                          psi, gi);
        } catch (const MetricUndefinedError& e) {
            r.delta_errors[sys.meta.notion] = e.what();
            r.delta_used = 0;
        }
    }

    WelfareParams p2 = params;
    p2.weight_mode = WeightMode::Total;
    r.swf_total = swf(psi, r.delta_used, p2);
    p2.weight_mode = WeightMode::Normalized;
    r.swf_normalized = swf(psi, r.delta_used, p2);
    return r;
}

namespace {

nlohmann::json rat_json(const Rat& r) {
    return {{"exact", rat_str(r)}, {"approx", to_double(r)}};
}

}  // namespace

std::string report_to_json(const Report& r) {
    nlohmann::json j;
    j["n"] = r.n;
    j["accuracy"] = rat_json(r.accuracy);
    j["weighted_error"] = rat_json(r.weighted_error);
    j["model_size"] = r.model_size;
    j["degenerate"] = r.degenerate;
    j["accuracy_convention"] =
        "a prediction is correct iff y * score > 0; score 0 counts as an "
        "error for both classes";
    for (const auto& [name, v] : r.delta_achieved)
        j["delta_achieved"][name] = rat_json(v);
    if (!r.delta_achieved.empty() && r.delta_errors.empty())
        j["delta_errors"] = nlohmann::json::object();
    for (const auto& [name, msg] : r.delta_errors) j["delta_errors"][name] = msg;
    j["delta_used"] = rat_json(r.delta_used);
    j["swf_total"] = rat_json(r.swf_total);
    j["swf_normalized"] = rat_json(r.swf_normalized);
    j["meta"] = {{"notion", r.meta.notion},
                 {"mode", r.meta.mode},
                 {"delta", rat_str(r.meta.delta)},
                 {"objective", rat_str(r.meta.objective)},
                 {"status", r.meta.status}};
    return j.dump(2) + "\n";
}

namespace {

std::string pad_right(const std::string& s, size_t w) {
    return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
}

std::string pad_left(const std::string& s, size_t w) {
    return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
}

std::string signed_int(long long v) {
    return (v >= 0 ? "+" : "") + std::to_string(v);
}

std::string or_dash(const std::string& s) { return s.empty() ? "-" : s; }

}  // namespace

std::string render_scorecard(const ScoringSystem& sys) {
    sys.validate();
    const int d = static_cast<int>(sys.w.size()) - 1;
    std::vector<int> order;
    for (int j = 1; j <= d; ++j)
        if (sys.w[j] != 0) order.push_back(j);
    std::sort(order.begin(), order.end(), [&sys](int a, int b) {
        long long ma = sys.w[a] < 0 ? -sys.w[a] : sys.w[a];
        long long mb = sys.w[b] < 0 ? -sys.w[b] : sys.w[b];
        return ma != mb ? ma > mb : a < b;
    });

    size_t name_w = std::string("base score").size();
    size_t pts_w = std::string("points").size();
    for (int j : order) {
        name_w = std::max(name_w, sys.feature_names[j].size());
        pts_w = std::max(pts_w, signed_int(sys.w[j]).size());
    }
    pts_w = std::max(pts_w, signed_int(sys.w[0]).size());

    std::ostringstream os;
    os << "scoring system (" << order.size() << " of " << d << " features)\n";
    os << "predict +1 if total > 0 (a total of 0 predicts -1)\n";
    os << "notion=" << or_dash(sys.meta.notion)
       << " mode=" << or_dash(sys.meta.mode)
       << " delta=" << rat_str(sys.meta.delta)
       << " objective=" << rat_str(sys.meta.objective)
       << " status=" << or_dash(sys.meta.status) << "\n";
    os << "\n";
    os << pad_right("feature", name_w) << "  " << pad_left("points", pts_w)
       << "\n";
    for (int j : order)
        os << pad_right(sys.feature_names[j], name_w) << "  "
           << pad_left(signed_int(sys.w[j]), pts_w) << "\n";
    os << pad_right("base score", name_w) << "  "
       << pad_left(signed_int(sys.w[0]), pts_w) << "\n";
    return os.str();
}

std::vector<long long> parse_scorecard(
    const std::string& text, const std::vector<std::string>& feature_names) {
    std::vector<long long> w(feature_names.size(), 0);
    std::istringstream in(text);
    std::string line;
    bool in_table = false;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (!in_table) {
            if (line.size() >= 7 && line.rfind("points") == line.size() - 6 &&
                line.rfind("feature", 0) == 0)
                in_table = true;
            continue;
        }
        if (line.empty()) continue;
        size_t pos = line.find_last_of(' ');
        if (pos == std::string::npos)
            throw std::invalid_argument("malformed scorecard row: " + line);
        std::string pts = line.substr(pos + 1);
        std::string name = line.substr(0, pos);
        while (!name.empty() && name.back() == ' ') name.pop_back();
        long long v = 0;
        try {
            size_t used = 0;
            v = std::stoll(pts, &used);
            if (used != pts.size()) throw std::invalid_argument(pts);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed points value: " + pts);
        }
        if (name == "base score") {
            w[0] = v;
            continue;
        }
        auto it = std::find(feature_names.begin() + 1, feature_names.end(),
                            name);
        if (it == feature_names.end())
            throw std::invalid_argument("unknown scorecard feature: " + name);
        w[it - feature_names.begin()] = v;
    }
    if (!in_table)
        throw std::invalid_argument("scorecard table header not found");
    return w;
}

}  // namespace fairscore
