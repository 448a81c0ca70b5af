// fairscore: train, evaluate and export sparse integer scoring systems.
//
// Exit codes are stable: 0 success, 2 usage or input errors, 3 infeasible
// model or undefined metric, 4 time/node limit hit.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../vendor/CLI11.hpp"
#include "../vendor/json.hpp"
#include "fairscore/data_io.hpp"
#include "fairscore/mip.hpp"
#include "fairscore/report.hpp"
#include "fairscore/solver.hpp"
#include "fairscore/theory.hpp"

namespace {

using json = nlohmann::json;
using namespace fairscore;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << content;
}

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(const std::vector<std::string>& parts) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const auto& p : parts) h = fnv1a64(p, h);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

bool env_verbose() {
    const char* v = std::getenv("FAIRSCORE_LOG");
    return v != nullptr && *v != '\0' && std::string(v) != "0";
}

json rat_json(const Rat& r) {
    return {{"exact", rat_str(r)}, {"approx", to_double(r)}};
}

// Shared flags for commands that construct the optimization problem.
struct BuildOptions {
    std::string data_path, schema_path;
    std::string notion = "sp";
    std::string mode = "joint";
    std::string delta_s;  // empty = not given
    std::string rho_bar = "0";
    long long omega = 10;
    std::string gamma = "0.1";
    std::string epsilon = "0.01";
    std::string lambda0 = "1e-4";
    std::vector<std::string> lambda0_overrides;  // "j=v"
    bool no_procedural = false;
    long long size_min = -1, size_max = -1;
    std::vector<std::string> sign_constraints;  // "j:+" / "j:-"
    std::vector<long long> force_features, exclude_features;
    std::vector<std::string> quantiles;
    bool sensitive_as_feature = false;
    bool intersectional = false;
};

struct SolverOptions {
    double time_limit = 0;  // 0 = none
    std::string gap;        // relative gap, empty = default
    long long seed = 0;
    int threads = 1;
};

void add_data_flags(CLI::App* cmd, BuildOptions& o) {
    cmd->add_option("--data", o.data_path, "input CSV file")->required();
    cmd->add_option("--schema", o.schema_path, "column schema JSON file")
        ->required();
    cmd->add_option("--quantiles", o.quantiles,
                    "binarization quantiles (default quartiles)");
    cmd->add_flag("--sensitive-as-feature", o.sensitive_as_feature,
                  "one-hot sensitive values as input features");
    cmd->add_flag("--intersectional", o.intersectional,
                  "group by the tuple of sensitive values");
}

void add_problem_flags(CLI::App* cmd, BuildOptions& o) {
    cmd->add_option("--notion", o.notion, "fairness notion")
        ->check(CLI::IsMember({"sp", "eo", "omr", "pe", "eodds"}))
        ->capture_default_str();
    cmd->add_option("--mode", o.mode, "training mode")
        ->check(CLI::IsMember({"joint", "fixed-delta", "accuracy-only"}))
        ->capture_default_str();
    cmd->add_option("--delta-s", o.delta_s,
                    "unfairness cap for --mode fixed-delta");
    cmd->add_option("--rho-bar", o.rho_bar, "mean fairness preference")
        ->capture_default_str();
    cmd->add_option("--omega", o.omega, "coefficient bound")
        ->capture_default_str();
    cmd->add_option("--gamma", o.gamma, "margin constant")
        ->capture_default_str();
    cmd->add_option("--epsilon", o.epsilon, "l1 penalty")
        ->capture_default_str();
    cmd->add_option("--lambda0", o.lambda0, "l0 penalty per used feature")
        ->capture_default_str();
    cmd->add_option("--lambda0-override", o.lambda0_overrides,
                    "per-feature l0 penalty, j=value");
    cmd->add_flag("--no-procedural", o.no_procedural,
                  "allow nonzero coefficients on sensitive features");
    cmd->add_option("--model-size-min", o.size_min, "minimum feature count");
    cmd->add_option("--model-size-max", o.size_max, "maximum feature count");
    cmd->add_option("--sign-constraint", o.sign_constraints,
                    "coefficient sign, j:+ or j:-");
    cmd->add_option("--force-feature", o.force_features,
                    "feature index that must be used");
    cmd->add_option("--exclude-feature", o.exclude_features,
                    "feature index that must be unused");
}

void add_solver_flags(CLI::App* cmd, SolverOptions& s) {
    cmd->add_option("--time-limit", s.time_limit, "solver limit in seconds");
    cmd->add_option("--gap", s.gap, "relative optimality gap");
    cmd->add_option("--seed", s.seed, "tie-break seed")->capture_default_str();
    cmd->add_option("--threads", s.threads, "solver threads")
        ->capture_default_str();
}

Dataset load_dataset(const BuildOptions& o) {
    LoadResult loaded = load_csv(o.data_path, o.schema_path);
    if (loaded.dropped_rows > 0)
        std::cerr << "note: dropped " << loaded.dropped_rows
                  << " row(s) with missing values\n";
    BinarizeConfig bc;
    for (const auto& q : o.quantiles) bc.quantiles.push_back(rat_parse(q));
    bc.sensitive_as_feature = o.sensitive_as_feature;
    bc.intersectional_groups = o.intersectional;
    BinarizeResult bin = binarize(loaded.table, bc);
    for (const auto& w : bin.warnings) std::cerr << "note: " << w << "\n";
    return bin.data;
}

std::pair<long long, std::string> split_once(const std::string& s, char sep,
                                             const std::string& what) {
    size_t pos = s.find(sep);
    if (pos == std::string::npos || pos == 0)
        throw std::invalid_argument("malformed " + what + ": " + s);
    return {std::stoll(s.substr(0, pos)), s.substr(pos + 1)};
}

WelfareParams params_from(const BuildOptions& o, int n) {
    WelfareParams p = WelfareParams::uniform(
        n, rat_parse(o.rho_bar), rat_parse(o.lambda0), rat_parse(o.epsilon));
    for (const auto& ov : o.lambda0_overrides) {
        auto [j, v] = split_once(ov, '=', "--lambda0-override");
        p.lambda0_overrides[static_cast<int>(j)] = rat_parse(v);
    }
    return p;
}

SideConstraints side_from(const BuildOptions& o, int d) {
    SideConstraints side;
    if (o.size_min >= 0 || o.size_max >= 0)
        side.model_size = {o.size_min >= 0 ? o.size_min : 0,
                           o.size_max >= 0 ? o.size_max : d};
    for (long long j : o.force_features)
        side.forced_features.insert(static_cast<int>(j));
    for (long long j : o.exclude_features)
        side.excluded_features.insert(static_cast<int>(j));
    for (const auto& sc : o.sign_constraints) {
        auto [j, sign] = split_once(sc, ':', "--sign-constraint");
        if (sign != "+" && sign != "-")
            throw std::invalid_argument("malformed --sign-constraint: " + sc);
        side.sign_constraints[static_cast<int>(j)] = sign == "+" ? 1 : -1;
    }
    for (const auto& ov : o.lambda0_overrides) {
        auto [j, v] = split_once(ov, '=', "--lambda0-override");
        side.lambda0_overrides[static_cast<int>(j)] = rat_parse(v);
    }
    side.procedural_fairness = !o.no_procedural;
    return side;
}

SolveMode mode_from(const BuildOptions& o) {
    if (o.mode == "fixed-delta") {
        if (o.delta_s.empty())
            throw std::invalid_argument(
                "--mode fixed-delta requires --delta-s");
        return SolveMode::fixed(rat_parse(o.delta_s));
    }
    if (!o.delta_s.empty())
        throw std::invalid_argument("--delta-s requires --mode fixed-delta");
    return o.mode == "joint" ? SolveMode::joint() : SolveMode::accuracy();
}

json config_echo(const std::string& command, const BuildOptions& o) {
    json c;
    c["command"] = command;
    c["data"] = o.data_path;
    c["schema"] = o.schema_path;
    c["notion"] = o.notion;
    c["mode"] = o.mode;
    c["delta_s"] = o.delta_s.empty() ? json() : json(rat_str(rat_parse(o.delta_s)));
    c["rho_bar"] = rat_str(rat_parse(o.rho_bar));
    c["omega"] = o.omega;
    c["gamma"] = rat_str(rat_parse(o.gamma));
    c["epsilon"] = rat_str(rat_parse(o.epsilon));
    c["lambda0"] = rat_str(rat_parse(o.lambda0));
    c["lambda0_overrides"] = o.lambda0_overrides;
    c["procedural_fairness"] = !o.no_procedural;
    c["model_size_min"] = o.size_min;
    c["model_size_max"] = o.size_max;
    c["sign_constraints"] = o.sign_constraints;
    c["force_features"] = o.force_features;
    c["exclude_features"] = o.exclude_features;
    c["quantiles"] = o.quantiles;
    c["sensitive_as_feature"] = o.sensitive_as_feature;
    c["intersectional"] = o.intersectional;
    return c;
}

void add_solver_echo(json& c, const SolverOptions& s) {
    c["time_limit"] = s.time_limit;
    c["gap"] = s.gap;
    c["seed"] = s.seed;
    c["threads"] = s.threads;
}

int exit_for(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal:
        case SolveStatus::FeasibleGap:
            return 0;
        case SolveStatus::Infeasible:
            return 3;
        case SolveStatus::TimeLimit:
        case SolveStatus::NodeLimit:
            return 4;
    }
    return 2;
}

int cmd_train(const BuildOptions& o, const SolverOptions& s,
              const std::string& out_path) {
    Dataset data = load_dataset(o);
    WelfareParams params = params_from(o, data.n);
    Notion notion = notion_from_name(o.notion);
    SolveMode mode = mode_from(o);
    SideConstraints side = side_from(o, data.d);
    std::vector<long long> omegas(data.d + 1, o.omega);
    MipModel model =
        build(data, params, notion, mode, side, omegas, rat_parse(o.gamma));

    SolverConfig cfg;
    if (s.time_limit > 0) cfg.time_limit_seconds = s.time_limit;
    if (!s.gap.empty()) cfg.relative_gap = rat_parse(s.gap);
    cfg.seed = s.seed;
    cfg.threads = s.threads;
    cfg.verbose = env_verbose();
    Solution sol = solve(model, cfg);

    json config = config_echo("train", o);
    add_solver_echo(config, s);
    json j;
    j["coefficients"] = sol.w;
    j["features"] = data.feature_names;
    j["omega"] = o.omega;
    j["gamma"] = rat_str(rat_parse(o.gamma));
    j["notion"] = mode.kind == SolveMode::AccuracyOnly ? "" : o.notion;
    j["mode"] = mode.name();
    j["delta"] = rat_str(sol.delta);
    j["objective"] = rat_str(sol.objective);
    j["best_bound"] = rat_str(sol.best_bound);
    j["status"] = status_name(sol.status);
    j["nodes_explored"] = sol.nodes_explored;
    j["wall_time"] = sol.wall_time;
    j["seed"] = s.seed;
    j["config"] = config;
    j["config_hash"] = hash_hex(
        {config.dump(), read_file(o.data_path), read_file(o.schema_path)});
    write_file(out_path, j.dump(2) + "\n");
    std::cerr << "status " << status_name(sol.status) << ", objective "
              << rat_str(sol.objective) << ", wrote " << out_path << "\n";
    return exit_for(sol.status);
}

ScoringSystem system_from_json(const json& j, const Dataset& data) {
    ScoringSystem sys;
    sys.w = j.at("coefficients").get<std::vector<long long>>();
    if (sys.w.empty())
        throw std::invalid_argument("model file has no coefficients");
    long long om = j.at("omega").get<long long>();
    sys.omega.assign(sys.w.size(), om);
    sys.gamma = rat_parse(j.at("gamma").get<std::string>());
    sys.feature_names = j.at("features").get<std::vector<std::string>>();
    sys.meta.notion = j.at("notion").get<std::string>();
    sys.meta.mode = j.at("mode").get<std::string>();
    sys.meta.delta = rat_parse(j.at("delta").get<std::string>());
    sys.meta.objective = rat_parse(j.at("objective").get<std::string>());
    sys.meta.status = j.at("status").get<std::string>();
    if (sys.feature_names != data.feature_names)
        throw std::invalid_argument(
            "model and data disagree on the binarized feature set");
    return sys;
}

int cmd_evaluate(const BuildOptions& o, const std::string& model_path,
                 const std::string& out_path) {
    json mj = json::parse(read_file(model_path));
    Dataset data = load_dataset(o);
    ScoringSystem sys = system_from_json(mj, data);
    WelfareParams params =
        WelfareParams::uniform(data.n, rat_parse(o.rho_bar));
    Report r = evaluate(sys, data, params,
                        {Notion::SP, Notion::EO, Notion::OMR, Notion::PE,
                         Notion::EODDS});

    json config = config_echo("evaluate", o);
    config["model"] = model_path;
    json j = json::parse(report_to_json(r));
    j["config"] = config;
    j["config_hash"] =
        hash_hex({config.dump(), read_file(o.data_path),
                  read_file(o.schema_path), read_file(model_path)});
    write_file(out_path, j.dump(2) + "\n");
    std::cerr << "wrote " << out_path << "\n";
    if (!sys.meta.notion.empty() && r.delta_errors.count(sys.meta.notion)) {
        std::cerr << "error: the model's fairness notion is undefined on this "
                     "data: "
                  << r.delta_errors.at(sys.meta.notion) << "\n";
        return 3;
    }
    return 0;
}

int cmd_bounds(const BuildOptions& o, const std::string& theta_path, int k,
               const std::string& delta_star, bool eo_as_printed,
               const std::string& out_path) {
    Dataset data = load_dataset(o);
    std::vector<Rat> theta;
    std::istringstream in(read_file(theta_path));
    std::string tok;
    while (in >> tok) theta.push_back(rat_parse(tok));
    if (static_cast<int>(theta.size()) != data.d + 1)
        throw std::invalid_argument(
            "theta file must list one value per binarized feature column (" +
            std::to_string(data.d + 1) + " including the intercept), got " +
            std::to_string(theta.size()));

    WelfareParams params =
        WelfareParams::uniform(data.n, rat_parse(o.rho_bar));
    Notion notion = notion_from_name(o.notion);
    TheoryReport tr = theory_report(theta, data, k, params, notion,
                                    rat_parse(delta_star), eo_as_printed);

    json j;
    j["k"] = tr.k;
    for (const auto& m : tr.margins) j["margins"].push_back(rat_json(m));
    j["eta_k"] = rat_json(tr.eta_k);
    j["x_k"] = rat_json(tr.x_k);
    j["omega_bound"] = rat_json(tr.omega_bound);
    j["omega_min"] = tr.omega_min;
    j["delta_f"] = rat_json(tr.delta_f);
    j["welfare_gap_lower"] = rat_json(tr.welfare_gap_lower);
    j["delta_star"] = rat_json(tr.delta_star);
    j["delta_star_cap"] = rat_json(tr.delta_star_cap);
    j["swf_lower"] = rat_json(tr.swf_lower);
    json config = config_echo("bounds", o);
    config["theta"] = theta_path;
    config["k"] = k;
    config["delta_star"] = rat_str(rat_parse(delta_star));
    config["eo_as_printed"] = eo_as_printed;
    j["config"] = config;
    j["config_hash"] =
        hash_hex({config.dump(), read_file(o.data_path),
                  read_file(o.schema_path), read_file(theta_path)});
    write_file(out_path, j.dump(2) + "\n");
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

int cmd_export(const BuildOptions& o, const std::string& out_path) {
    Dataset data = load_dataset(o);
    WelfareParams params = params_from(o, data.n);
    Notion notion = notion_from_name(o.notion);
    SolveMode mode = mode_from(o);
    SideConstraints side = side_from(o, data.d);
    std::vector<long long> omegas(data.d + 1, o.omega);
    MipModel model =
        build(data, params, notion, mode, side, omegas, rat_parse(o.gamma));
    write_file(out_path, export_mps(model));
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

int cmd_scorecard(const std::string& model_path, const std::string& out_path) {
    json mj = json::parse(read_file(model_path));
    ScoringSystem sys;
    sys.w = mj.at("coefficients").get<std::vector<long long>>();
    if (sys.w.empty())
        throw std::invalid_argument("model file has no coefficients");
    long long om = mj.at("omega").get<long long>();
    sys.omega.assign(sys.w.size(), om);
    sys.gamma = rat_parse(mj.at("gamma").get<std::string>());
    sys.feature_names = mj.at("features").get<std::vector<std::string>>();
    sys.meta.notion = mj.at("notion").get<std::string>();
    sys.meta.mode = mj.at("mode").get<std::string>();
    sys.meta.delta = rat_parse(mj.at("delta").get<std::string>());
    sys.meta.objective = rat_parse(mj.at("objective").get<std::string>());
    sys.meta.status = mj.at("status").get<std::string>();
    std::string card = render_scorecard(sys);
    if (out_path.empty())
        std::cout << card;
    else
        write_file(out_path, card);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse integer scoring systems with fairness constraints"};
    app.require_subcommand(1);

    BuildOptions train_o;
    SolverOptions train_s;
    std::string train_out = "model.json";
    CLI::App* train = app.add_subcommand("train", "fit a scoring system");
    add_data_flags(train, train_o);
    add_problem_flags(train, train_o);
    add_solver_flags(train, train_s);
    train->add_option("--output,-o", train_out, "model file")
        ->capture_default_str();

    BuildOptions eval_o;
    std::string eval_model, eval_out = "report.json";
    CLI::App* eval = app.add_subcommand("evaluate", "report model metrics");
    add_data_flags(eval, eval_o);
    eval->add_option("--model", eval_model, "model JSON file")->required();
    eval->add_option("--rho-bar", eval_o.rho_bar, "mean fairness preference")
        ->capture_default_str();
    eval->add_option("--output,-o", eval_out, "report file")
        ->capture_default_str();

    BuildOptions bounds_o;
    std::string bounds_theta, bounds_delta_star = "1";
    std::string bounds_out = "bounds.json";
    int bounds_k = 1;
    bool eo_as_printed = false;
    CLI::App* bounds =
        app.add_subcommand("bounds", "discretization and welfare bounds");
    add_data_flags(bounds, bounds_o);
    bounds
        ->add_option("--theta", bounds_theta,
                     "real coefficient file, one value per binarized column")
        ->required();
    bounds->add_option("--k", bounds_k, "margin order statistic")
        ->capture_default_str();
    bounds->add_option("--notion", bounds_o.notion, "fairness notion")
        ->check(CLI::IsMember({"sp", "eo", "omr", "pe", "eodds"}))
        ->capture_default_str();
    bounds->add_option("--rho-bar", bounds_o.rho_bar, "mean fairness preference")
        ->capture_default_str();
    bounds
        ->add_option("--delta-star", bounds_delta_star,
                     "achieved unfairness level for the welfare floor")
        ->capture_default_str();
    bounds->add_flag("--eo-as-printed", eo_as_printed,
                     "use full group sizes in the eo welfare constant");
    bounds->add_option("--output,-o", bounds_out, "bounds file")
        ->capture_default_str();

    BuildOptions export_o;
    std::string export_out = "model.mps";
    CLI::App* exp = app.add_subcommand("export", "write the formulation as MPS");
    add_data_flags(exp, export_o);
    add_problem_flags(exp, export_o);
    exp->add_option("--output,-o", export_out, "MPS file")
        ->capture_default_str();

    std::string card_model, card_out;
    CLI::App* card = app.add_subcommand("scorecard", "render a points table");
    card->add_option("--model", card_model, "model JSON file")->required();
    card->add_option("--output,-o", card_out, "text file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*train) return cmd_train(train_o, train_s, train_out);
        if (*eval) return cmd_evaluate(eval_o, eval_model, eval_out);
        if (*bounds)
            return cmd_bounds(bounds_o, bounds_theta, bounds_k,
                              bounds_delta_star, eo_as_printed, bounds_out);
        if (*exp) return cmd_export(export_o, export_out);
        if (*card) return cmd_scorecard(card_model, card_out);
    } catch (const MetricUndefinedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
