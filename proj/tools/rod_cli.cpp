// rod: command-line front end for simulation, sampling, RoD detection, the
// short-series sweep and the high-frequency classifier.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 runtime error,
// 4 I/O or input-file error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rod/config.hpp"
#include "rod/rod.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode : int { kOk = 0, kConfigError = 2, kRuntimeError = 3, kIoError = 4 };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string config_file;
    std::string preset;
    std::vector<std::string> overrides;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("-c,--config", opts.config_file, "INI config file");
    cmd->add_option("-p,--preset", opts.preset,
                    "named preset applied before the config file (hopf-demo, vdp-normal, "
                    "vdp-excitable, vdp-noise-free, desk, table2)");
    cmd->add_option("-s,--set", opts.overrides, "override, e.g. --set simulation.dt=0.01")
        ->allow_extra_args(false);
    cmd->add_option("-o,--out", opts.out, "output path");
}

rod::RunConfig resolve(const CommonOptions& opts) {
    rod::RunConfig cfg;
    if (!opts.preset.empty()) cfg.apply_preset(opts.preset);
    if (!opts.config_file.empty()) cfg.load_ini_file(opts.config_file);
    for (const auto& o : opts.overrides) cfg.apply_override(o);
    return cfg;
}

std::string output_path(const CommonOptions& opts, const rod::RunConfig& cfg,
                        const std::string& default_name) {
    if (!opts.out.empty()) return opts.out;
    return (fs::path(cfg.output_dir) / default_name).string();
}

std::ofstream open_output(const std::string& path) {
    const fs::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

void write_meta(const std::string& data_path, const std::string& command,
                const rod::RunConfig& cfg, std::uint64_t seed) {
    json meta;
    meta["command"] = command;
    meta["config_hash"] = cfg.hash();
    meta["master_seed"] = seed;
    json fields = json::object();
    for (const auto& f : rod::RunConfig::fields()) {
        if (f.hashed) fields[f.key] = f.get(cfg);
    }
    meta["config"] = fields;
    auto out = open_output(data_path + ".meta.json");
    out << meta.dump(2) << '\n';
}

std::string fmt(const char* pattern, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, x);
    return buf;
}

rod::Trajectory run_simulation(const rod::RunConfig& cfg) {
    return rod::simulate(cfg.model(), cfg.initial_state(), cfg.t0, cfg.t_end, cfg.dt, cfg.seed);
}

// Subcommands ----------------------------------------------------------------

int cmd_simulate(const CommonOptions& opts, std::optional<double> dt,
                 std::optional<std::uint64_t> seed) {
    auto cfg = resolve(opts);
    if (dt) cfg.set("simulation.dt", rod::io::format_double(*dt));
    if (seed) cfg.seed = *seed;
    cfg.validate();

    const auto traj = run_simulation(cfg);
    const auto path = output_path(opts, cfg, "trajectory.csv");
    {
        auto out = open_output(path);
        rod::io::write_trajectory_csv(out, traj);
        if (!out) throw IoError("write failed: " + path);
    }
    write_meta(path, "simulate", cfg, cfg.seed);

    std::cout << "simulate: model=" << cfg.model().name() << " steps=" << traj.size() - 1
              << " seed=" << cfg.seed << " final=(";
    const auto last = traj.state(traj.size() - 1);
    for (std::size_t i = 0; i < last.size(); ++i) {
        std::cout << (i ? "," : "") << rod::io::format_double(last[i]);
    }
    std::cout << ") out=" << path << " config_hash=" << cfg.hash() << '\n';
    return kOk;
}

int cmd_sample(const CommonOptions& opts, const std::string& trajectory_file) {
    auto cfg = resolve(opts);
    cfg.validate();

    std::optional<rod::Trajectory> traj;
    if (trajectory_file.empty()) {
        traj = run_simulation(cfg);
    } else {
        auto in = open_input(trajectory_file);
        traj = rod::io::read_trajectory_csv(in, cfg.seed);
    }
    const auto obs = rod::sample(*traj, cfg.sample_plan());
    const auto path = output_path(opts, cfg, "sample.csv");
    {
        auto out = open_output(path);
        rod::io::write_sample_csv(out, obs);
        if (!out) throw IoError("write failed: " + path);
    }
    write_meta(path, "sample", cfg, cfg.sample_seed);
    std::cout << "sample: observations=" << obs.size() << " variables=" << obs.dim()
              << " seed=" << cfg.sample_seed << " out=" << path << '\n';
    return kOk;
}

json detection_report(const rod::MultivariateSample& obs, const rod::RunConfig& cfg,
                      rod::DetectMode mode) {
    const auto window = cfg.window_spec();
    const auto tandem = cfg.tandem_rule();
    const auto quorum = cfg.quorum_spec();

    json events = json::array();
    for (std::size_t v : quorum.resolve(obs.dim())) {
        for (const auto& e : rod::detect_univariate(obs.channel(v), window, tandem, v, mode)) {
            events.push_back({{"variable_index", e.variable_index},
                              {"observation_index", e.observation_index},
                              {"time", e.time},
                              {"rod_before", e.rod_before},
                              {"rod_after", e.rod_after}});
        }
    }
    json report;
    report["config_hash"] = cfg.hash();
    report["window"] = cfg.window;
    report["tandem"] = rod::tandem_name(tandem);
    report["observations"] = obs.size();
    report["events"] = std::move(events);
    if (const auto joint = rod::detect_multivariate(obs, window, tandem, quorum)) {
        report["first_joint"] = {{"observation_index", joint->observation_index},
                                 {"time", joint->time}};
    } else {
        report["first_joint"] = nullptr;
    }
    return report;
}

int cmd_detect(const CommonOptions& opts, const std::string& input, bool stop_at_first) {
    auto cfg = resolve(opts);
    cfg.validate();

    auto in = open_input(input);
    const auto obs = rod::io::read_sample_csv(in);
    const auto report = detection_report(
        obs, cfg, stop_at_first ? rod::DetectMode::StopAtFirst : rod::DetectMode::AllEvents);

    if (opts.out.empty() || opts.out == "-") {
        std::cout << report.dump(2) << '\n';
    } else {
        auto out = open_output(opts.out);
        out << report.dump(2) << '\n';
        if (!out) throw IoError("write failed: " + opts.out);
    }
    return kOk;
}

rod::ProgressFn stderr_progress(const std::string& label) {
    return [label](std::size_t done, std::size_t total) {
        if (done == total || done % 50 == 0) {
            std::cerr << label << ": " << done << '/' << total << " trajectories\n";
        }
    };
}

int cmd_sweep(const CommonOptions& opts, std::optional<unsigned> threads) {
    auto cfg = resolve(opts);
    if (threads) cfg.sweep.threads = *threads;
    cfg.validate();

    const auto table = rod::run_short_series_sweep(cfg.sweep, stderr_progress("sweep"));
    const auto path = output_path(opts, cfg, "rates.csv");
    {
        auto out = open_output(path);
        rod::io::write_rate_table_csv(out, table);
        if (!out) throw IoError("write failed: " + path);
    }
    write_meta(path, "sweep", cfg, cfg.sweep.master_seed);
    std::cout << "sweep: rows=" << table.rows.size() << " out=" << path
              << " config_hash=" << cfg.hash() << '\n';
    return kOk;
}

int cmd_classify(const CommonOptions& opts, std::optional<unsigned> threads) {
    auto cfg = resolve(opts);
    if (threads) cfg.sweep.threads = *threads;
    cfg.validate();

    const fs::path dir = opts.out.empty() ? fs::path(cfg.output_dir) : fs::path(opts.out);
    const auto summary_path = (dir / "classify_summary.jsonl").string();
    auto summary = open_output(summary_path);

    for (const auto& cell : cfg.classifier_cells()) {
        const std::string tag = "a" + fmt("%g", cell.a) + "_" + fmt("%g", cell.sampling.alpha) +
                                "_" + fmt("%g", cell.sampling.beta) + "_w" +
                                fmt("%g", cell.window);
        const auto result = rod::run_highfreq_experiment(cfg.sweep, cell,
                                                         stderr_progress("classify " + tag));
        const auto curve = rod::roc(result.scores(), result.labels());

        const auto roc_path = (dir / ("roc_" + tag + ".csv")).string();
        {
            auto out = open_output(roc_path);
            rod::io::write_roc_csv(out, curve);
        }
        {
            auto out = open_output((dir / ("scores_" + tag + ".csv")).string());
            out << "sigma,ramped,run,detections,samples,score\n";
            for (const auto& t : result.trajectories) {
                out << rod::io::format_double(t.sigma) << ',' << (t.ramped ? 1 : 0) << ','
                    << t.run << ',' << t.detections << ',' << t.samples << ','
                    << rod::io::format_double(t.score) << '\n';
            }
        }

        json by_noise = json::object();
        for (double sigma : cfg.sweep.noise_levels) {
            try {
                const auto sub = result.at_noise(sigma);
                by_noise[rod::io::format_double(sigma)] = rod::roc(sub.scores(), sub.labels()).auc;
            } catch (const rod::OneClassInput&) {
            }
        }
        json line = {{"auc", curve.auc},
                     {"n_pos", curve.n_pos},
                     {"n_neg", curve.n_neg},
                     {"config_hash", cfg.hash()},
                     {"master_seed", cfg.sweep.master_seed},
                     {"a", cell.a},
                     {"alpha", cell.sampling.alpha},
                     {"beta", cell.sampling.beta},
                     {"window", cell.window},
                     {"auc_by_noise", by_noise}};
        summary << line.dump() << '\n';
        std::cout << line.dump() << '\n';
    }
    if (!summary) throw IoError("write failed: " + summary_path);
    return kOk;
}

int cmd_validate_prop1(std::size_t n, std::size_t seeds, const std::vector<double>& phis,
                       double tolerance) {
    std::printf("%8s %6s %12s %12s %12s %10s\n", "phi", "seed", "rho1", "RoD^2", "2(1-rho1)",
                "|diff|");
    bool ok = true;
    for (double phi : phis) {
        for (std::size_t s = 0; s < seeds; ++s) {
            const auto row = rod::prop1_check(phi, n, rod::derive_seed(1, rod::seed_tag(phi), s));
            const bool pass = row.gap() < tolerance;
            ok = ok && pass;
            std::printf("%8.3f %6zu %12.6f %12.6f %12.6f %10.2e%s\n", phi, s, row.rho,
                        row.rod_squared, row.two_one_minus_rho, row.gap(), pass ? "" : "  FAIL");
        }
    }
    std::printf("%s: |RoD^2 - 2(1-rho1)| < %g in every case\n", ok ? "PASS" : "FAIL", tolerance);
    return ok ? kOk : kRuntimeError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RoD early-warning statistic: simulation, detection and evaluation"};
    app.require_subcommand(1);

    CommonOptions sim_opts;
    std::optional<double> sim_dt;
    std::optional<std::uint64_t> sim_seed;
    auto* simulate = app.add_subcommand("simulate", "integrate a model and write its trajectory CSV");
    add_common(simulate, sim_opts);
    simulate->add_option("--dt", sim_dt, "time step (overrides simulation.dt)");
    simulate->add_option("--seed", sim_seed, "noise seed (overrides simulation.seed)");

    CommonOptions sample_opts;
    std::string trajectory_file;
    auto* sample = app.add_subcommand("sample", "observe a trajectory at random times");
    add_common(sample, sample_opts);
    sample->add_option("-t,--trajectory", trajectory_file,
                       "trajectory CSV (default: simulate from the config)");

    CommonOptions detect_opts;
    std::string detect_input;
    std::string window_flag;
    std::string tandem_flag;
    std::string quorum_flag;
    bool stop_at_first = false;
    auto* detect = app.add_subcommand("detect", "run the RoD rule on a sampled series CSV");
    add_common(detect, detect_opts);
    detect->add_option("-i,--input", detect_input, "sampled series CSV (t,x1,...)")->required();
    detect->add_option("--window", window_flag, "prefix or a trailing time length");
    detect->add_option("--tandem", tandem_flag, "none, sd, rmssd or range:<lo>:<hi>");
    detect->add_option("--quorum", quorum_flag, "all or comma-separated variable indices");
    detect->add_flag("--stop-at-first", stop_at_first, "report only the first event per variable");

    CommonOptions sweep_opts;
    std::optional<unsigned> sweep_threads;
    auto* sweep = app.add_subcommand("sweep", "short-series true/false positive sweep");
    add_common(sweep, sweep_opts);
    sweep->add_option("--threads", sweep_threads, "worker threads");

    CommonOptions classify_opts;
    std::optional<unsigned> classify_threads;
    auto* classify = app.add_subcommand("classify", "high-frequency classifier ROC/AUC");
    add_common(classify, classify_opts);
    classify->add_option("--threads", classify_threads, "worker threads");

    std::size_t prop1_n = 1000000;
    std::size_t prop1_seeds = 10;
    std::vector<double> prop1_phis{-0.8, -0.5, 0.0, 0.5, 0.8, 0.95};
    double prop1_tol = 0.01;
    auto* prop1 = app.add_subcommand(
        "validate-prop1", "compare RoD^2 with 2(1 - lag-1 autocorrelation) on AR(1) series");
    prop1->add_option("-n,--length", prop1_n, "series length")->capture_default_str();
    prop1->add_option("--seeds", prop1_seeds, "seeds per coefficient")->capture_default_str();
    prop1->add_option("--phi", prop1_phis, "AR(1) coefficients")->capture_default_str();
    prop1->add_option("--tolerance", prop1_tol, "pass threshold")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*simulate) return cmd_simulate(sim_opts, sim_dt, sim_seed);
        if (*sample) return cmd_sample(sample_opts, trajectory_file);
        if (*detect) {
            if (!window_flag.empty()) detect_opts.overrides.push_back("detection.window=" + window_flag);
            if (!tandem_flag.empty()) detect_opts.overrides.push_back("detection.tandem=" + tandem_flag);
            if (!quorum_flag.empty()) detect_opts.overrides.push_back("detection.quorum=" + quorum_flag);
            return cmd_detect(detect_opts, detect_input, stop_at_first);
        }
        if (*sweep) return cmd_sweep(sweep_opts, sweep_threads);
        if (*classify) return cmd_classify(classify_opts, classify_threads);
        if (*prop1) return cmd_validate_prop1(prop1_n, prop1_seeds, prop1_phis, prop1_tol);
    } catch (const rod::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const rod::ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kIoError;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIoError;
    } catch (const rod::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kOk;
}
