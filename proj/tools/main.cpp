#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#ifdef WDRO_WITH_HTTPLIB
#include <httplib.h>
#endif

#include "wdro/core.hpp"
#include "wdro/data.hpp"
#include "wdro/experiment.hpp"
#include "wdro/verify.hpp"
#include "wdro/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitConfigError = 2;

wdro::ExperimentConfig preset_config(const std::string& name, const std::string& data_path) {
    using namespace wdro;
    if (name == "synthetic-linear") return make_default_synthetic_config();

    ExperimentConfig cfg = make_default_synthetic_config();
    cfg.synthetic.reset();
    cfg.data_path = data_path;
    cfg.name = name;
    if (name == "wine") {
        cfg.schema = wine_quality_schema();
        cfg.attack_template.kind = AttackKind::FeatureGaussian;
        cfg.attack_template.variance = 4.0;
    } else if (name == "wine-flip") {
        cfg.schema = wine_quality_schema();
        cfg.attack_template.kind = AttackKind::LabelFlipTo;
        cfg.attack_template.value = 10.0;
    } else if (name == "boston") {
        cfg.schema = boston_housing_schema();
        cfg.attack_template.kind = AttackKind::FeatureGaussian;
        cfg.attack_template.variance = 100.0;
    } else if (name == "adult") {
        cfg.schema = adult_schema();
        cfg.family = ModelFamily::Logistic;
        cfg.loss_kind = LossKind::CrossEntropy;
        cfg.attack_template.kind = AttackKind::LabelNegate;
        // The squared-norm weight has no role in the logistic objective.
        cfg.regularizers = {
            {"baseline", true, {0.0, 0.0}, RegularizerKind::None, 0.0},
            {"c2=0.01", true, {0.0, 0.01}, RegularizerKind::None, 0.0},
            {"c2=0.1", true, {0.0, 0.1}, RegularizerKind::None, 0.0},
        };
    } else {
        wdro::fail(ErrorKind::ConfigError, "unknown preset '" + name + "'");
    }
    return cfg;
}

void apply_config_json(wdro::ExperimentConfig& cfg, const std::string& path) {
    using nlohmann::json;
    std::ifstream in(path);
    if (!in) wdro::fail(wdro::ErrorKind::ConfigError, "cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        wdro::fail(wdro::ErrorKind::ConfigError, std::string("bad config JSON: ") + e.what());
    }
    if (j.contains("name")) cfg.name = j["name"].get<std::string>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<std::size_t>();
    if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("beta_grid")) cfg.beta_grid = j["beta_grid"].get<std::vector<double>>();
    if (j.contains("norm")) cfg.norm.kind = wdro::norm_kind_from_string(j["norm"].get<std::string>());
    if (j.contains("train")) {
        const auto& t = j["train"];
        if (t.contains("max_iters")) cfg.train.max_iters = t["max_iters"].get<std::size_t>();
        if (t.contains("step0")) cfg.train.step0 = t["step0"].get<double>();
        if (t.contains("tol")) cfg.train.tol = t["tol"].get<double>();
    }
    if (j.contains("attack")) {
        const auto& a = j["attack"];
        if (a.contains("kind"))
            cfg.attack_template.kind = wdro::attack_kind_from_string(a["kind"].get<std::string>());
        if (a.contains("value")) cfg.attack_template.value = a["value"].get<double>();
        if (a.contains("variance")) cfg.attack_template.variance = a["variance"].get<double>();
    }
    if (j.contains("regularizers")) {
        cfg.regularizers.clear();
        for (const auto& r : j["regularizers"]) {
            wdro::RegularizerConfig rc;
            rc.label = r.at("label").get<std::string>();
            if (r.contains("kind")) {
                rc.use_weights = false;
                const std::string kind = r["kind"].get<std::string>();
                if (kind == "tight_linear")
                    rc.kind = wdro::RegularizerKind::TightLinear;
                else if (kind == "conservative_linear")
                    rc.kind = wdro::RegularizerKind::ConservativeLinear;
                else if (kind == "absolute_loss")
                    rc.kind = wdro::RegularizerKind::AbsoluteLoss;
                else if (kind == "logistic")
                    rc.kind = wdro::RegularizerKind::Logistic;
                else if (kind == "none")
                    rc.kind = wdro::RegularizerKind::None;
                else
                    wdro::fail(wdro::ErrorKind::ConfigError, "unknown regularizer '" + kind + "'");
                rc.rho = r.value("rho", 0.0);
            } else {
                rc.use_weights = true;
                rc.weights.squared = r.value("squared_weight", 0.0);
                rc.weights.plain = r.value("plain_weight", 0.0);
            }
            cfg.regularizers.push_back(std::move(rc));
        }
    }
}

int cmd_run(const std::string& preset, const std::string& data_path,
            const std::string& config_path, const std::string& out_dir, std::uint64_t seed,
            bool seed_set, bool absolute_squared) {
    wdro::ExperimentConfig cfg = preset_config(preset, data_path);
    if (!config_path.empty()) apply_config_json(cfg, config_path);
    if (seed_set) cfg.master_seed = seed;
    cfg.absolute_penalty_squared = absolute_squared;

    const wdro::ExperimentResult result = wdro::run_experiment(cfg);
    wdro::write_experiment_files(result, out_dir);

    std::cout << "wrote " << result.points.size() << " curve points to " << out_dir << "\n";
    for (const auto& p : result.points)
        std::cout << "  beta=" << p.beta << " " << p.label << " mean_test_loss=" << p.mean_test_loss
                  << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::size_t trials) {
    using namespace wdro::verify;
    std::vector<std::string> suites =
        suite == "all" ? suite_names() : std::vector<std::string>{suite};
    bool ok = true;
    for (const std::string& s : suites) {
        const auto start = std::chrono::steady_clock::now();
        const SuiteReport report = run_suite(s, seed, trials);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        print_report(report, std::cout);
        std::cout << "suite " << s << (report.pass() ? " PASS" : " FAIL") << " (" << secs
                  << " s)\n";
        ok = ok && report.pass();
    }
    return ok ? kExitOk : kExitPropertyFailure;
}

int cmd_fetch(const std::string& dataset, const std::string& out_dir);

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wasserstein distributionally robust regression under data poisoning"};
    app.set_version_flag("--version", wdro::kVersion);
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a poisoning sweep and emit curve data");
    std::string preset = "synthetic-linear";
    std::string data_path;
    std::string config_path;
    std::string out_dir = "results";
    std::uint64_t seed = 1;
    bool absolute_squared = false;
    run->add_option("--preset", preset,
                    "synthetic-linear, wine, wine-flip, boston or adult");
    run->add_option("--data", data_path, "CSV path for file-backed presets");
    run->add_option("--config", config_path, "JSON config overriding the preset");
    run->add_option("--out", out_dir, "output directory");
    auto* seed_opt = run->add_option("--seed", seed, "master seed");
    run->add_flag("--paper-literal-absolute", absolute_squared,
                  "use the squared dual-norm penalty variant of the absolute-loss objective");

    // verify
    auto* verify = app.add_subcommand("verify", "run a property suite");
    std::string suite = "all";
    std::uint64_t vseed = 7;
    std::size_t trials = 200;
    verify->add_option("--suite", suite,
                       "transport, concentration, lipschitz, worstcase, training or all");
    verify->add_option("--seed", vseed, "suite seed");
    verify->add_option("--trials", trials, "instances per property");

    // fetch-data
    auto* fetch = app.add_subcommand("fetch-data", "download a benchmark dataset");
    std::string dataset = "wine";
    std::string fetch_out = "data";
    fetch->add_option("--dataset", dataset, "wine, boston or adult");
    fetch->add_option("--out", fetch_out, "output directory");

    try {
        app.parse(argc, argv);
        if (run->parsed())
            return cmd_run(preset, data_path, config_path, out_dir, seed, seed_opt->count() > 0,
                           absolute_squared);
        if (verify->parsed()) return cmd_verify(suite, vseed, trials);
        if (fetch->parsed()) return cmd_fetch(dataset, fetch_out);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfigError;
    } catch (const wdro::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}

namespace {

struct FetchTarget {
    std::string host;
    std::string path;
    std::string filename;
};

int cmd_fetch(const std::string& dataset, const std::string& out_dir) {
    FetchTarget target;
    if (dataset == "wine") {
        target = {"archive.ics.uci.edu",
                  "/ml/machine-learning-databases/wine-quality/winequality-red.csv",
                  "winequality-red.csv"};
    } else if (dataset == "boston") {
        target = {"lib.stat.cmu.edu", "/datasets/boston", "housing.data"};
    } else if (dataset == "adult") {
        target = {"archive.ics.uci.edu", "/ml/machine-learning-databases/adult/adult.data",
                  "adult.data"};
    } else {
        std::cerr << "error: unknown dataset '" << dataset << "'\n";
        return kExitConfigError;
    }

    std::cout << "fetching https://" << target.host << target.path << "\n";
#ifdef WDRO_WITH_HTTPLIB
    httplib::SSLClient client(target.host);
    client.set_follow_location(true);
    auto res = client.Get(target.path.c_str());
    if (!res || res->status != 200) {
        std::cerr << "error: download failed; fetch the file manually and pass it via --data\n";
        return kExitConfigError;
    }
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::string out_path = (fs::path(out_dir) / target.filename).string();
    std::ofstream out(out_path, std::ios::binary);
    out << res->body;
    out.close();

    wdro::DatasetSchema schema = dataset == "wine"    ? wdro::wine_quality_schema()
                                 : dataset == "boston" ? wdro::boston_housing_schema()
                                                       : wdro::adult_schema();
    const wdro::LoadedDataset loaded = wdro::load_csv(out_path, schema);
    const std::size_t expected = wdro::expected_rows(dataset);
    std::cout << "saved " << out_path << " (" << loaded.report.rows_total << " rows, expected "
              << expected << ")\n";
    if (loaded.report.rows_total != expected) {
        std::cerr << "warning: row count differs from the canonical figure\n";
        return kExitPropertyFailure;
    }
    return kExitOk;
#else
    std::cerr << "error: built without TLS support; download the file manually:\n"
              << "  curl -O https://" << target.host << target.path << "\n"
              << "then pass it via --data\n";
    (void)out_dir;
    return kExitConfigError;
#endif
}

}  // namespace
