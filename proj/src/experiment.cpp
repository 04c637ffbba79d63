#include "wdro/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wdro/rng.hpp"
#include "wdro/version.hpp"

namespace wdro {

using ordered_json = nlohmann::ordered_json;

void validate(const ExperimentConfig& cfg) {
    if (!cfg.schema && !cfg.synthetic)
        fail(ErrorKind::ConfigError, "experiment needs a dataset schema or a synthetic spec");
    if (cfg.schema && cfg.data_path.empty())
        fail(ErrorKind::ConfigError, "experiment with a schema needs a data path");
    if (cfg.beta_grid.empty() || cfg.beta_grid.front() != 0.0)
        fail(ErrorKind::ConfigError, "beta grid must start at 0");
    if (!std::is_sorted(cfg.beta_grid.begin(), cfg.beta_grid.end()))
        fail(ErrorKind::ConfigError, "beta grid must be sorted ascending");
    for (double b : cfg.beta_grid)
        if (!(b >= 0.0 && b < 1.0)) fail(ErrorKind::ConfigError, "beta values must lie in [0,1)");
    if (cfg.regularizers.empty())
        fail(ErrorKind::ConfigError, "experiment needs at least one regularizer configuration");
    if (cfg.trials < 1) fail(ErrorKind::ConfigError, "trials must be >= 1");
}

ExperimentConfig make_default_synthetic_config() {
    ExperimentConfig cfg;
    cfg.name = "synthetic-linear";
    SyntheticSpec spec;
    spec.n = 300;
    spec.p_x = 11;
    spec.theta_star.assign(spec.p_x + 1, 0.1);
    spec.theta_star.back() = 0.05;
    spec.noise_sd = 0.0;
    cfg.synthetic = spec;

    cfg.family = ModelFamily::Linear;
    cfg.loss_kind = LossKind::Quadratic;

    cfg.attack_template.kind = AttackKind::LabelFlipTo;
    cfg.attack_template.value = 10.0;

    cfg.beta_grid = {0.0, 0.1, 0.2, 0.3, 0.4};
    cfg.regularizers = {
        {"baseline", true, {0.0, 0.0}, RegularizerKind::None, 0.0},
        {"c1=0.01 c2=0.01", true, {0.01, 0.01}, RegularizerKind::None, 0.0},
        {"c1=0.1 c2=0.1", true, {0.1, 0.1}, RegularizerKind::None, 0.0},
        {"c1=1 c2=1", true, {1.0, 1.0}, RegularizerKind::None, 0.0},
    };
    cfg.trials = 5;
    cfg.master_seed = 1;
    cfg.train.max_iters = 4000;
    cfg.train.step0 = 1.0;
    cfg.train.tol = 1e-10;
    return cfg;
}

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "missing";
    std::ostringstream ss;
    ss << in.rdbuf();
    std::ostringstream hex;
    hex << std::hex << fnv1a(ss.str());
    return hex.str();
}

Dataset load_input(const ExperimentConfig& cfg, LoadReport* report) {
    if (cfg.schema) {
        LoadedDataset loaded = load_csv(cfg.data_path, *cfg.schema);
        if (report) *report = loaded.report;
        return std::move(loaded.dataset);
    }
    const SyntheticSpec& s = *cfg.synthetic;
    Vector theta = s.theta_star;
    if (theta.empty()) theta.assign(s.p_x + 1, 0.1);
    return synth_linear(s.n, s.p_x, theta, s.noise_sd, derive_seed(cfg.master_seed, 0xdadaULL));
}

RobustConfig to_robust_config(const RegularizerConfig& rc, bool absolute_squared) {
    RobustConfig cfg;
    cfg.absolute_penalty_squared = absolute_squared;
    if (rc.use_weights) {
        cfg.weights = rc.weights;
        cfg.regularizer = RegularizerKind::None;
        cfg.rho = 0.0;
    } else {
        cfg.regularizer = rc.kind;
        cfg.rho = rc.rho;
    }
    return cfg;
}

ordered_json config_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["name"] = cfg.name;
    if (cfg.schema) {
        j["dataset"] = cfg.schema->name;
        j["data_path"] = cfg.data_path;
        j["data_checksum_fnv1a"] = file_checksum(cfg.data_path);
    }
    if (cfg.synthetic) {
        j["synthetic"] = {{"n", cfg.synthetic->n},
                          {"p_x", cfg.synthetic->p_x},
                          {"theta_star", cfg.synthetic->theta_star},
                          {"noise_sd", cfg.synthetic->noise_sd}};
    }
    j["family"] = to_string(cfg.family);
    j["loss"] = to_string(cfg.loss_kind);
    j["norm"] = to_string(cfg.norm.kind);
    j["attack"] = {{"kind", to_string(cfg.attack_template.kind)},
                   {"value", cfg.attack_template.value},
                   {"variance", cfg.attack_template.variance}};
    j["beta_grid"] = cfg.beta_grid;
    ordered_json regs = ordered_json::array();
    for (const auto& rc : cfg.regularizers) {
        ordered_json r;
        r["label"] = rc.label;
        if (rc.use_weights) {
            r["squared_weight"] = rc.weights.squared;
            r["plain_weight"] = rc.weights.plain;
        } else {
            r["kind"] = to_string(rc.kind);
            r["rho"] = rc.rho;
        }
        regs.push_back(r);
    }
    j["regularizers"] = regs;
    j["trials"] = cfg.trials;
    j["master_seed"] = cfg.master_seed;
    j["train"] = {{"max_iters", cfg.train.max_iters},
                  {"step0", cfg.train.step0},
                  {"tol", cfg.train.tol}};
    j["absolute_penalty_squared"] = cfg.absolute_penalty_squared;
    return j;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    LoadReport load_report;
    const Dataset full = load_input(cfg, &load_report);

    ExperimentResult result;
    std::vector<std::string> notes;

    for (std::size_t bi = 0; bi < cfg.beta_grid.size(); ++bi) {
        const double beta = cfg.beta_grid[bi];
        std::vector<CurvePoint> row(cfg.regularizers.size());
        for (std::size_t ri = 0; ri < cfg.regularizers.size(); ++ri) {
            row[ri].beta = beta;
            row[ri].label = cfg.regularizers[ri].label;
        }

        for (std::size_t t = 0; t < cfg.trials; ++t) {
            // One split + one attack draw per (beta, trial), shared across
            // regularizer configurations so the comparison is paired.
            const std::uint64_t split_seed = derive_seed(cfg.master_seed, 2 * bi + 1, 3 * t + 1);
            const std::uint64_t attack_seed = derive_seed(cfg.master_seed, 2 * bi + 2, 3 * t + 2);

            auto [train_half, test_half] = split_half(full, split_seed);

            AttackSpec attack = cfg.attack_template;
            attack.beta = beta;
            attack.seed = attack_seed;
            const PoisonResult poisoned = poison(train_half, attack);

            const StandardizeResult std_result = standardize(poisoned.poisoned, test_half);

            for (std::size_t ri = 0; ri < cfg.regularizers.size(); ++ri) {
                const RobustConfig robust =
                    to_robust_config(cfg.regularizers[ri], cfg.absolute_penalty_squared);
                const TrainReport report = train(std_result.train, cfg.family, cfg.loss_kind,
                                                 robust, cfg.train, cfg.norm);
                TrialOutcome outcome;
                outcome.trial = t;
                outcome.test_loss = evaluate(report.theta_hat, std_result.test);
                outcome.theta_dual_norm = dual_norm_value(report.theta_hat.theta, cfg.norm.kind);
                outcome.iterations = report.iterations;
                outcome.split_seed = split_seed;
                outcome.attack_seed = attack_seed;
                row[ri].trials.push_back(outcome);
            }
        }

        for (auto& point : row) {
            double mean = 0.0;
            for (const TrialOutcome& o : point.trials) mean += o.test_loss;
            point.mean_test_loss = mean / static_cast<double>(point.trials.size());
            result.points.push_back(std::move(point));
        }
    }

    ordered_json manifest;
    manifest["library_version"] = kVersion;
    manifest["config"] = config_json(cfg);
    manifest["load_report"] = {{"rows_total", load_report.rows_total},
                               {"rows_loaded", load_report.rows_loaded},
                               {"rows_dropped_missing", load_report.rows_dropped_missing}};
    manifest["conventions"] = {
        "train half = ceil(n/2) records of a seeded shuffle; test half is never poisoned",
        "poisoning applies to raw features/labels before standardization",
        "features standardized to mean 0, variance 1 with train-half statistics",
        "per-cell seeds derived from the master seed via splitmix64",
    };
    result.manifest_json = manifest.dump(2) + "\n";
    return result;
}

std::string curve_points_to_jsonl(const std::vector<CurvePoint>& points) {
    std::ostringstream out;
    for (const CurvePoint& p : points) {
        ordered_json j;
        j["beta"] = p.beta;
        j["label"] = p.label;
        j["mean_test_loss"] = p.mean_test_loss;
        ordered_json trials = ordered_json::array();
        for (const TrialOutcome& o : p.trials) {
            trials.push_back({{"trial", o.trial},
                              {"test_loss", o.test_loss},
                              {"theta_dual_norm", o.theta_dual_norm},
                              {"iterations", o.iterations},
                              {"split_seed", o.split_seed},
                              {"attack_seed", o.attack_seed}});
        }
        j["trials"] = trials;
        out << j.dump() << "\n";
    }
    return out.str();
}

std::vector<CurvePoint> curve_points_from_jsonl(const std::string& jsonl) {
    std::vector<CurvePoint> points;
    std::istringstream in(jsonl);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::ParseError, std::string("bad curve line: ") + e.what());
        }
        CurvePoint p;
        p.beta = j.at("beta").get<double>();
        p.label = j.at("label").get<std::string>();
        p.mean_test_loss = j.at("mean_test_loss").get<double>();
        for (const auto& tj : j.at("trials")) {
            TrialOutcome o;
            o.trial = tj.at("trial").get<std::size_t>();
            o.test_loss = tj.at("test_loss").get<double>();
            o.theta_dual_norm = tj.at("theta_dual_norm").get<double>();
            o.iterations = tj.at("iterations").get<std::size_t>();
            o.split_seed = tj.at("split_seed").get<std::uint64_t>();
            o.attack_seed = tj.at("attack_seed").get<std::uint64_t>();
            p.trials.push_back(o);
        }
        points.push_back(std::move(p));
    }
    return points;
}

std::string curve_points_to_csv(const std::vector<CurvePoint>& points) {
    std::ostringstream out;
    out << "beta,label,trial,test_loss\n";
    out.precision(17);
    for (const CurvePoint& p : points)
        for (const TrialOutcome& o : p.trials)
            out << p.beta << ",\"" << p.label << "\"," << o.trial << "," << o.test_loss << "\n";
    return out.str();
}

void write_experiment_files(const ExperimentResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) fail(ErrorKind::ConfigError, "cannot create output directory '" + out_dir + "'");

    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
        if (!out) fail(ErrorKind::ConfigError, "cannot write '" + name + "' in '" + out_dir + "'");
        out << content;
    };
    write("curves.jsonl", curve_points_to_jsonl(result.points));
    write("curves.csv", curve_points_to_csv(result.points));
    write("manifest.json", result.manifest_json);
}

}  // namespace wdro
