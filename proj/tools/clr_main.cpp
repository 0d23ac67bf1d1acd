#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clr/bench.hpp"
#include "clr/codec.hpp"
#include "clr/data.hpp"
#include "clr/intcode.hpp"
#include "clr/objective.hpp"
#include "clr/optimize.hpp"
#include "clr/ratcode.hpp"
#include "clr/sphere.hpp"

using nlohmann::json;
using namespace clr;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCapacity = 3;

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config " + path);
    json j;
    in >> j;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << text;
}

FeatureFn feature_fn_from(const std::string& name) {
    if (name == "identity") return FeatureFn::Identity;
    if (name == "square") return FeatureFn::Square;
    if (name == "pairwise_product") return FeatureFn::PairwiseProduct;
    throw DataError("unknown feature function '" + name + "'");
}

FeatureProductSpec feature_spec_from(const json& cfg, const FeatureProductSpec& fallback) {
    if (!cfg.contains("features")) return fallback;
    const json& f = cfg["features"];
    FeatureProductSpec spec;
    spec.include_bias = f.value("include_bias", true);
    for (const auto& g : f.value("groups", json::array())) {
        FeatureGroup group;
        group.fn = feature_fn_from(g.value("fn", "identity"));
        for (const auto& v : g.value("vars", json::array())) group.vars.push_back(v.get<int>());
        spec.groups.push_back(std::move(group));
    }
    if (spec.groups.empty()) spec.groups = fallback.groups;
    return spec;
}

OptimizerConfig optimizer_from(const json& cfg) {
    OptimizerConfig out;
    if (!cfg.contains("optimizer")) return out;
    const json& o = cfg["optimizer"];
    out.max_cull_rounds = o.value("max_cull_rounds", out.max_cull_rounds);
    out.simplex.tol = o.value("tol_bits", out.simplex.tol);
    out.simplex.max_iterations = o.value("max_iterations", out.simplex.max_iterations);
    return out;
}

struct FitBundle {
    RawDataset raw;
    ExpandedDesign design;
    DesignMatrix d;
    CLRModel model;
    double seconds = 0.0;
};

FitBundle fit_csv(const std::string& path, const std::string& target, const json& cfg,
                  const FeatureProductSpec& default_features) {
    FitBundle b;
    b.raw = load_csv(path, target);
    b.design = expand_features(b.raw, feature_spec_from(cfg, default_features));
    double dy = estimate_delta_y(b.raw.target);
    double offset = b.raw.target.minCoeff();
    b.d = DesignMatrix::make(b.design.X, b.raw.target, dy, offset);
    double t0 = now_seconds();
    b.model = fit_clr(b.d, optimizer_from(cfg), default_alpha_constants(), b.design.bias_index);
    b.seconds = now_seconds() - t0;
    return b;
}

json model_report(const FitBundle& b, const std::string& input) {
    json active = json::array();
    for (std::size_t i = 0; i < b.model.active_features.size(); ++i) {
        int idx = b.model.active_features[i];
        active.push_back({{"index", idx},
                          {"name", b.design.names[idx]},
                          {"theta", b.model.theta[static_cast<Eigen::Index>(i)]},
                          {"delta", b.model.delta[static_cast<Eigen::Index>(i)]},
                          {"theta_sharp", b.model.theta_sharp[static_cast<Eigen::Index>(i)]}});
    }
    DesignMatrix act = b.d.take_rows(b.model.active_features);
    ObjectiveEval ev = clr_objective(act, b.model.theta, b.model.delta, default_alpha_constants());
    json bits = {{"parameter", ev.param_bits},
                 {"residual", ev.residual_bits},
                 {"total", ev.total_bits}};
    if (b.model.has_exact_bits) {
        bits["exact"] = b.model.exact_bits;
    } else {
        bits["exact"] = nullptr;
    }
    return json{{"input", input},
                {"target", b.raw.target_name},
                {"n_obs", b.d.n_obs()},
                {"n_features", b.d.n_features()},
                {"delta_y", b.d.delta_y},
                {"offset", b.d.offset},
                {"warnings", b.raw.warnings},
                {"active", active},
                {"bits", bits},
                {"round_limit_hit", b.model.round_limit_hit},
                {"seconds", b.seconds}};
}

CLRModel model_from_report(const json& report) {
    CLRModel m;
    const json& active = report.at("active");
    m.theta.resize(static_cast<Eigen::Index>(active.size()));
    m.delta.resize(static_cast<Eigen::Index>(active.size()));
    Eigen::Index i = 0;
    for (const auto& a : active) {
        m.active_features.push_back(a.at("index").get<int>());
        m.theta[i] = a.at("theta").get<double>();
        m.delta[i] = a.at("delta").get<double>();
        ++i;
    }
    return m;
}

void emit(const json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text(out_path, text);
    }
}

// ---- encode / decode ----------------------------------------------------

int cmd_encode(const std::string& input, const std::string& target, const std::string& config,
               const std::string& model_path, const std::string& out_path) {
    json cfg = config.empty() ? json::object() : read_json_file(config);
    FitBundle b;
    if (model_path.empty()) {
        b = fit_csv(input, target, cfg, FeatureProductSpec::identity_and_bias());
    } else {
        b.raw = load_csv(input, target);
        b.design =
            expand_features(b.raw, feature_spec_from(cfg, FeatureProductSpec::identity_and_bias()));
        b.d = DesignMatrix::make(b.design.X, b.raw.target, estimate_delta_y(b.raw.target),
                                 b.raw.target.minCoeff());
        json report = read_json_file(model_path);
        b.model = model_from_report(report);
    }

    std::vector<std::uint8_t> bytes = encode_model(b.d, b.model);
    std::string path = out_path.empty() ? input + ".clr" : out_path;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.close();

    DesignMatrix act = b.d.take_rows(b.model.active_features);
    long long exact = exact_description_length(act, b.model.theta, b.model.delta);
    std::size_t header = header_bytes(b.model.active_features.size());
    long long naive_bits = 0;
    for (int j = 0; j < b.d.n_obs(); ++j) {
        naive_bits += length_u(grid_index(b.d.y[j], b.d.offset, b.d.delta_y));
    }
    json summary = {{"output", path},
                    {"bytes", bytes.size()},
                    {"header_bytes", header},
                    {"payload_bits", exact},
                    {"size_formula_exact",
                     bytes.size() == header + static_cast<std::size_t>((exact + 7) / 8)},
                    {"naive_target_bits", naive_bits},
                    {"active_features", b.model.active_features.size()}};
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_decode(const std::string& input, const std::string& design_csv, const std::string& target,
               const std::string& config, const std::string& out_path) {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw DataError("cannot open " + input);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    json cfg = config.empty() ? json::object() : read_json_file(config);
    RawDataset raw = load_csv(design_csv, target);
    ExpandedDesign design =
        expand_features(raw, feature_spec_from(cfg, FeatureProductSpec::identity_and_bias()));
    DecodedModel dec = decode_model(bytes, design.X);

    bool matches_grid = true;
    for (int j = 0; j < static_cast<int>(dec.n_obs); ++j) {
        double snapped =
            dec.offset +
            dec.delta_y * static_cast<double>(grid_index(raw.target[j], dec.offset, dec.delta_y));
        if (snapped != dec.target[j]) matches_grid = false;
    }

    if (!out_path.empty()) {
        std::ostringstream os;
        os << "row," << raw.target_name << "\n";
        char buf[64];
        for (int j = 0; j < static_cast<int>(dec.n_obs); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", dec.target[j]);
            os << j << "," << buf << "\n";
        }
        write_text(out_path, os.str());
    }
    json summary = {{"input", input},
                    {"n_obs", dec.n_obs},
                    {"delta_y", dec.delta_y},
                    {"offset", dec.offset},
                    {"active_features", dec.active_features},
                    {"matches_target_grid", matches_grid}};
    if (!out_path.empty()) summary["output"] = out_path;
    std::cout << summary.dump(2) << "\n";
    return 0;
}

// ---- fit -----------------------------------------------------------------

int cmd_fit(const std::string& input, const std::string& target, const std::string& config,
            const std::string& out_path) {
    json cfg = config.empty() ? json::object() : read_json_file(config);
    FitBundle b = fit_csv(input, target, cfg, FeatureProductSpec::identity_and_bias());
    json report = model_report(b, input);
    emit(report, out_path);
    if (!out_path.empty()) std::cout << "wrote " << out_path << "\n";
    return 0;
}

// ---- sim -----------------------------------------------------------------

json sim_report_json(const SimReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"dataset", row.dataset},
                        {"failed", row.failed},
                        {"error", row.error},
                        {"clr_nonzero", row.clr_nonzero},
                        {"clr_mse", row.clr_mse},
                        {"clr_resid_ratio", row.clr_resid_ratio},
                        {"clr_bits", row.clr_bits},
                        {"clr_seconds", row.clr_seconds},
                        {"l2_nonzero", row.l2_nonzero},
                        {"l2_mse", row.l2_mse},
                        {"l2_resid_ratio", row.l2_resid_ratio}});
    }
    auto stats = [](const MethodStats& s) {
        return json{{"method", s.method},
                    {"nonzero_mean", s.nonzero_mean},
                    {"nonzero_sd", s.nonzero_sd},
                    {"mse_mean", s.mse_mean},
                    {"mse_sd", s.mse_sd},
                    {"resid_ratio_mean", s.resid_ratio_mean},
                    {"resid_ratio_sd", s.resid_ratio_sd},
                    {"seconds", s.seconds}};
    };
    return json{{"name", r.name},
                {"n_obs", r.spec.n_obs},
                {"n_datasets", r.spec.n_datasets},
                {"sigma", r.spec.sigma},
                {"rho", r.spec.rho},
                {"rows", rows},
                {"clr", stats(r.clr)},
                {"l2", stats(r.l2)}};
}

std::string sim_rows_csv(const std::vector<SimReport>& reports) {
    std::ostringstream os;
    os << "suite,dataset,failed,clr_nonzero,clr_mse,clr_resid_ratio,clr_bits,clr_seconds,"
          "l2_nonzero,l2_mse,l2_resid_ratio\n";
    for (const auto& r : reports) {
        for (const auto& row : r.rows) {
            os << r.name << "," << row.dataset << "," << (row.failed ? 1 : 0) << ","
               << row.clr_nonzero << "," << row.clr_mse << "," << row.clr_resid_ratio << ","
               << row.clr_bits << "," << row.clr_seconds << "," << row.l2_nonzero << ","
               << row.l2_mse << "," << row.l2_resid_ratio << "\n";
        }
    }
    return os.str();
}

int cmd_sim(const std::string& config, std::uint64_t seed, bool seed_given,
            const std::string& out_path) {
    json cfg = config.empty() ? json::object() : read_json_file(config);
    OptimizerConfig opt = optimizer_from(cfg);

    std::vector<std::pair<SimSpec, std::string>> suites;
    const json sim = cfg.value("sim", json::object());
    std::string which = sim.value("suite", "all");
    std::uint64_t seed0 = seed_given ? seed : 1234;
    auto named = [&](int tag) {
        SimSpec s = tag == 1 ? SimSpec::sim1() : tag == 2 ? SimSpec::sim2() : SimSpec::sim3();
        s.seed = seed0 + 1000 * static_cast<std::uint64_t>(tag);
        return s;
    };
    if (sim.contains("beta")) {
        SimSpec s;
        std::vector<double> beta = sim["beta"].get<std::vector<double>>();
        s.beta = Eigen::Map<Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
        s.sigma = sim.value("sigma", 1.0);
        s.rho = sim.value("rho", 0.5);
        s.seed = seed0;
        suites.emplace_back(s, "custom");
    } else if (which == "all") {
        suites.emplace_back(named(1), "SIM1");
        suites.emplace_back(named(2), "SIM2");
        suites.emplace_back(named(3), "SIM3");
    } else if (which == "sim1") {
        suites.emplace_back(named(1), "SIM1");
    } else if (which == "sim2") {
        suites.emplace_back(named(2), "SIM2");
    } else if (which == "sim3") {
        suites.emplace_back(named(3), "SIM3");
    } else {
        throw DataError("unknown suite '" + which + "'");
    }
    for (auto& [s, name] : suites) {
        s.n_obs = sim.value("n_obs", s.n_obs);
        s.n_datasets = sim.value("n_datasets", s.n_datasets);
        if (sim.contains("sigma")) s.sigma = sim["sigma"].get<double>();
    }

    std::vector<SimReport> reports;
    json out = json::array();
    for (const auto& [s, name] : suites) {
        reports.push_back(run_sim_suite(s, name, opt));
        out.push_back(sim_report_json(reports.back()));
    }
    if (!out_path.empty()) {
        write_text(out_path + ".json", out.dump(2) + "\n");
        write_text(out_path + ".csv", sim_rows_csv(reports));
    }
    json brief = json::array();
    for (const auto& r : reports) {
        brief.push_back({{"name", r.name},
                         {"clr_nonzero_mean", r.clr.nonzero_mean},
                         {"clr_mse_mean", r.clr.mse_mean},
                         {"l2_mse_mean", r.l2.mse_mean},
                         {"clr_resid_ratio_mean", r.clr.resid_ratio_mean},
                         {"clr_seconds", r.clr.seconds}});
    }
    std::cout << (out_path.empty() ? out : brief).dump(2) << "\n";
    return 0;
}

// ---- generalize ------------------------------------------------------------

int cmd_generalize(const std::vector<std::string>& inputs, const std::string& target,
                   const std::string& config, std::uint64_t seed, const std::string& out_path) {
    json cfg = config.empty() ? json::object() : read_json_file(config);
    OptimizerConfig opt = optimizer_from(cfg);
    double fraction = cfg.value("train_fraction", 2.0 / 3.0);
    FeatureProductSpec features = feature_spec_from(cfg, FeatureProductSpec::squares_and_bias());

    json rows = json::array();
    std::ostringstream os;
    os << "name,failed,n_train,n_test,n_features,clr_kept,clr_sparsity,clr_train_ratio,"
          "clr_test_ratio,l2_train_ratio,l2_test_ratio,clr_seconds\n";
    for (const std::string& path : inputs) {
        std::string name = path;
        if (auto slash = name.find_last_of('/'); slash != std::string::npos) {
            name = name.substr(slash + 1);
        }
        GeneralizationRow row;
        try {
            RawDataset raw = load_csv(path, target);
            row = run_generalization(raw, name, fraction, seed, features, opt);
        } catch (const std::exception& ex) {
            row.name = name;
            row.failed = true;
            row.error = ex.what();
        }
        rows.push_back({{"name", row.name},
                        {"failed", row.failed},
                        {"error", row.error},
                        {"n_train", row.n_train},
                        {"n_test", row.n_test},
                        {"n_vars", row.n_vars},
                        {"n_features", row.n_features},
                        {"clr_kept", row.clr_kept},
                        {"clr_sparsity", row.clr_sparsity},
                        {"clr_train_ratio", row.clr_train_ratio},
                        {"clr_test_ratio", row.clr_test_ratio},
                        {"l2_train_ratio", row.l2_train_ratio},
                        {"l2_test_ratio", row.l2_test_ratio},
                        {"clr_seconds", row.clr_seconds}});
        os << row.name << "," << (row.failed ? 1 : 0) << "," << row.n_train << "," << row.n_test
           << "," << row.n_features << "," << row.clr_kept << "," << row.clr_sparsity << ","
           << row.clr_train_ratio << "," << row.clr_test_ratio << "," << row.l2_train_ratio << ","
           << row.l2_test_ratio << "," << row.clr_seconds << "\n";
    }
    if (!out_path.empty()) {
        write_text(out_path + ".json", rows.dump(2) + "\n");
        write_text(out_path + ".csv", os.str());
    }
    std::cout << rows.dump(2) << "\n";
    return 0;
}

// ---- codetables ------------------------------------------------------------

int cmd_codetables(const std::string& config, const std::string& out_path) {
    json cfg = config.empty() ? json::object() : read_json_file(config);
    const json tables = cfg.value("tables", json::object());
    std::string prefix = out_path.empty() ? "codetables" : out_path;

    {  // integer code lengths
        int lo = tables.value("int_min", -64);
        int hi = tables.value("int_max", 128);
        std::ostringstream os;
        os << "n,unsigned_bits,elias_delta_bits,signed_bits\n";
        for (int n = lo; n <= hi; ++n) {
            os << n << ",";
            if (n >= 0) os << length_un(static_cast<std::uint64_t>(n));
            os << ",";
            if (n >= 1) os << length_e(static_cast<std::uint64_t>(n));
            os << "," << length_u(n) << "\n";
        }
        write_text(prefix + "_integer.csv", os.str());
    }

    {  // rational code: exact vs smooth over a log grid
        AlphaApproxConstants c = default_alpha_constants();
        std::ostringstream os;
        os << "theta,delta,exact_bits,smooth_bits\n";
        int n_theta = tables.value("n_theta", 25);
        int n_ratio = tables.value("n_ratio", 17);
        for (int i = 0; i < n_theta; ++i) {
            double te = -4.0 + 12.0 * i / (n_theta - 1.0);
            double theta = std::pow(2.0, te);
            for (int j = 0; j < n_ratio; ++j) {
                double re = 8.0 * j / (n_ratio - 1.0);
                double delta = theta / std::pow(2.0, re);
                os << theta << "," << delta << ",";
                try {
                    os << alpha_len(theta, delta);
                } catch (const CapacityError&) {
                    // out-of-range cells stay empty
                }
                os << "," << alpha_smooth(theta, delta, c) << "\n";
            }
        }
        write_text(prefix + "_alpha.csv", os.str());
    }

    {  // residual sphere: exact counts where the budget allows, else blanks
        std::ostringstream os;
        os << "n,s_sq,exact_count_lg2,exact_rank_bits,h_bar_bits,h_applied_bits\n";
        std::vector<int> dims = {2, 3, 4, 5, 6, 10, 20};
        if (tables.contains("dims")) dims = tables["dims"].get<std::vector<int>>();
        std::int64_t s2_min = tables.value("s2_min", std::int64_t{1});
        std::int64_t s2_max = tables.value("s2_max", std::int64_t{4096});
        for (int n : dims) {
            for (std::int64_t s2 = s2_min; s2 <= s2_max; s2 *= 2) {
                os << n << "," << s2 << ",";
                try {
                    LatticeCount c = lattice_count(n, s2);
                    os << std::log2(c.count.convert_to<double>()) << ","
                       << length_u_big(BigInt(c.count - 1));
                } catch (const CapacityError&) {
                    os << ",";
                }
                os << "," << h_bar(n, static_cast<double>(s2), 1.0) << ","
                   << h_applied(n, std::sqrt(static_cast<double>(s2) / n)) << "\n";
            }
        }
        write_text(prefix + "_sphere.csv", os.str());
    }

    json summary = {{"outputs",
                     {prefix + "_integer.csv", prefix + "_alpha.csv", prefix + "_sphere.csv"}}};
    std::cout << summary.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compressive linear regression toolkit"};
    app.require_subcommand(1);

    std::string input, design_csv, target = "y", config, out_path, model_path;
    std::vector<std::string> inputs;
    std::uint64_t seed = 1234;

    auto add_common = [&](CLI::App* sub, bool with_target) {
        sub->add_option("--config", config, "JSON configuration file");
        sub->add_option("--out", out_path, "output path (or prefix for multi-file commands)");
        if (with_target) sub->add_option("--target-col", target, "target column name");
    };

    CLI::App* enc = app.add_subcommand("encode", "fit (or reuse a fit report) and write the bit stream");
    enc->add_option("input", input, "input CSV")->required();
    enc->add_option("--model", model_path, "fit report JSON to reuse instead of fitting");
    add_common(enc, true);

    CLI::App* dec = app.add_subcommand("decode", "reconstruct the quantized target from a bit stream");
    dec->add_option("input", input, "encoded file")->required();
    dec->add_option("design", design_csv, "CSV the stream was encoded against")->required();
    add_common(dec, true);

    CLI::App* fit = app.add_subcommand("fit", "fit a model and report it as JSON");
    fit->add_option("input", input, "input CSV")->required();
    add_common(fit, true);

    CLI::App* sim = app.add_subcommand("sim", "run the simulation suites against least squares");
    sim->add_option("--seed", seed, "base seed");
    add_common(sim, false);

    CLI::App* gen = app.add_subcommand("generalize", "train/test split evaluation on CSV datasets");
    gen->add_option("inputs", inputs, "input CSVs")->required();
    gen->add_option("--seed", seed, "split seed");
    add_common(gen, true);

    CLI::App* tab = app.add_subcommand("codetables", "emit code length tables as CSV");
    add_common(tab, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (enc->parsed()) return cmd_encode(input, target, config, model_path, out_path);
        if (dec->parsed()) return cmd_decode(input, design_csv, target, config, out_path);
        if (fit->parsed()) return cmd_fit(input, target, config, out_path);
        if (sim->parsed()) return cmd_sim(config, seed, sim->count("--seed") > 0, out_path);
        if (gen->parsed()) return cmd_generalize(inputs, target, config, seed, out_path);
        if (tab->parsed()) return cmd_codetables(config, out_path);
    } catch (const CapacityError& ex) {
        std::cerr << "capacity error: " << ex.what()
                  << "\nhint: `fit` reports the smooth description length without exact coding\n";
        return kExitCapacity;
    } catch (const json::exception& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitData;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
