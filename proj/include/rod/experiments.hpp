#pragma once

// Validation harness on the three-variable Van der Pol variant.
//
// Protocol: lambda starts at lambda0 (attracting equilibrium, used as the
// initial state) and, in ramped runs, decreases linearly so that it reaches
// the critical value lambda_c at t_critical, continuing on the same line to
// t_total. Control runs hold lambda at lambda0. Each trajectory is observed
// by `samples_per_trajectory` independent sample plans per (alpha, beta).
//
// Short-series sweep: each sampled series is a binary prediction. A ramped
// sample is a true positive if its first joint detection (all variables at
// the same observation, trailing time window) happens at t <= tp_cutoff; a
// control sample is a false positive if it has any joint detection.
//
// High-frequency classifier: the samples of one trajectory, cut to the window
// (t_critical - W, t_critical], vote; the score is the fraction that detect.
//
// Seeds form a tree: trajectory seeds hash (master, a, sigma, arm, run) and
// sample seeds hash (trajectory seed, alpha, beta, sample). Both experiments
// therefore see exactly the same sampled series, whatever the thread count.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rod/detector.hpp"
#include "rod/error.hpp"
#include "rod/parallel.hpp"
#include "rod/random.hpp"
#include "rod/roc.hpp"
#include "rod/sampler.hpp"
#include "rod/sde.hpp"
#include "rod/series.hpp"

namespace rod {

struct SamplingConfig {
    double alpha = 25.0;
    double beta = 75.0;

    [[nodiscard]] double mean_gap() const noexcept { return 0.5 * (alpha + beta); }
    friend bool operator==(const SamplingConfig&, const SamplingConfig&) = default;
};

/// One (a, alpha, beta, window) cell of the classifier evaluation.
struct ClassifierCell {
    double a = 1.0;
    SamplingConfig sampling;
    double window = 500.0;
};

struct SweepConfig {
    std::vector<double> a_values{1.0, 10.0};
    std::vector<double> noise_levels{0.0, 0.01, 0.05, 0.1, 0.25};
    std::size_t runs_per_arm = 100;  ///< ramped runs; the same number of control runs
    std::vector<SamplingConfig> sampling_configs{{20, 40}, {25, 50}, {25, 75}, {50, 100}};
    std::vector<double> windows{250.0, 500.0, 750.0, 1000.0};
    std::size_t samples_per_trajectory = 100;
    TandemRule tandem = RmssdIncrease{};
    TandemRule classifier_tandem = NoTandem{};
    double tp_cutoff = 1000.0;

    double lambda0 = 1.2;
    double lambda_c = 1.0;
    double t_critical = 1000.0;
    double t_total = 2000.0;
    double dt = 0.05;

    std::uint64_t master_seed = 1;
    unsigned threads = 1;

    /// 100 + 100 trajectories per (a, sigma), 100 samples each.
    [[nodiscard]] static SweepConfig full() { return {}; }

    /// 20 + 20 trajectories per (a, sigma), 25 samples each.
    [[nodiscard]] static SweepConfig desk() {
        SweepConfig c;
        c.runs_per_arm = 20;
        c.samples_per_trajectory = 25;
        return c;
    }

    void validate() const {
        auto fail = [](const std::string& field, const std::string& why) {
            throw InvalidParameter("sweep." + field + ": " + why);
        };
        for (double a : a_values) {
            if (!(a != 0.0) || !std::isfinite(a)) fail("a_values", "must be finite and nonzero");
        }
        for (double s : noise_levels) {
            if (!(s >= 0.0) || !std::isfinite(s)) fail("noise_levels", "must be >= 0");
        }
        for (const auto& sc : sampling_configs) {
            if (!(sc.alpha > 0.0) || !(sc.beta > sc.alpha)) {
                fail("sampling_configs", "need 0 < alpha < beta");
            }
            if (sc.alpha < dt) fail("sampling_configs", "alpha below dt");
        }
        for (double w : windows) {
            if (!(w > 0.0) || !std::isfinite(w)) fail("windows", "must be positive");
        }
        if (!(dt > 0.0)) fail("dt", "must be positive");
        if (!(t_critical > 0.0)) fail("t_critical", "must be positive");
        if (!(t_total > 0.0)) fail("t_total", "must be positive");
        if (samples_per_trajectory == 0 && runs_per_arm > 0) {
            fail("samples_per_trajectory", "must be positive");
        }
    }

    [[nodiscard]] RampSchedule ramp(bool ramped) const {
        if (!ramped) return RampSchedule::fixed(lambda0);
        // Line through (0, lambda0) and (t_critical, lambda_c), extended to t_total.
        const double lambda_end =
            lambda_c + (lambda_c - lambda0) * ((t_total - t_critical) / t_critical);
        return RampSchedule::linear(lambda0, lambda_end, 0.0, t_total);
    }

    [[nodiscard]] SdeModel model(double a, double sigma, bool ramped) const {
        return {VdpThreeD{a}, ramp(ramped), sigma};
    }

    [[nodiscard]] std::uint64_t trajectory_seed(double a, double sigma, bool ramped,
                                                std::size_t run) const noexcept {
        return derive_seed(master_seed, seed_tag(a), seed_tag(sigma), ramped ? 1u : 0u, run);
    }

    [[nodiscard]] SamplePlan plan(std::uint64_t trajectory_seed, const SamplingConfig& sc,
                                  std::size_t sample_index) const {
        return {sc.alpha, sc.beta, 0.0, t_total,
                derive_seed(trajectory_seed, seed_tag(sc.alpha), seed_tag(sc.beta), sample_index)};
    }

    [[nodiscard]] Trajectory simulate_arm(double a, double sigma, bool ramped,
                                          std::size_t run) const {
        const auto x0 = equilibrium_vdp3(lambda0);
        const auto seed = trajectory_seed(a, sigma, ramped, run);
        try {
            return simulate(model(a, sigma, ramped), x0, 0.0, t_total, dt, seed);
        } catch (const NonFinite& e) {
            throw NonFinite(e.step(), arm_label(a, sigma, ramped, run) + ": " + e.what());
        } catch (const Error& e) {
            throw Error(arm_label(a, sigma, ramped, run) + ": " + e.what());
        }
    }

    [[nodiscard]] static std::string arm_label(double a, double sigma, bool ramped,
                                               std::size_t run) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "arm a=%g sigma=%g %s run %zu", a, sigma,
                      ramped ? "ramped" : "control", run);
        return buf;
    }
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

struct RateRow {
    double a = 0.0;
    double sigma = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double window = 0.0;
    std::string tandem;
    std::size_t tp_count = 0;
    std::size_t fp_count = 0;
    std::size_t n_ramped_samples = 0;
    std::size_t n_control_samples = 0;

    [[nodiscard]] double tp_rate() const noexcept {
        return n_ramped_samples == 0
                   ? 0.0
                   : static_cast<double>(tp_count) / static_cast<double>(n_ramped_samples);
    }
    [[nodiscard]] double fp_rate() const noexcept {
        return n_control_samples == 0
                   ? 0.0
                   : static_cast<double>(fp_count) / static_cast<double>(n_control_samples);
    }
};

struct RateTable {
    std::vector<RateRow> rows;

    [[nodiscard]] const RateRow* find(double a, double sigma, SamplingConfig sc,
                                      double window) const {
        for (const auto& r : rows) {
            if (r.a == a && r.sigma == sigma && r.alpha == sc.alpha && r.beta == sc.beta &&
                r.window == window) {
                return &r;
            }
        }
        return nullptr;
    }
};

namespace detail {

class ProgressCounter {
public:
    ProgressCounter(std::size_t total, ProgressFn fn) : total_(total), fn_(std::move(fn)) {}

    void tick() {
        if (!fn_) return;
        std::lock_guard lock(mutex_);
        fn_(++done_, total_);
    }

private:
    std::size_t total_;
    std::size_t done_ = 0;
    ProgressFn fn_;
    std::mutex mutex_;
};

}  // namespace detail

/// Short-series TP/FP sweep over every (a, sigma, alpha, beta, window) cell.
[[nodiscard]] inline RateTable run_short_series_sweep(const SweepConfig& config,
                                                      const ProgressFn& progress = {}) {
    config.validate();
    RateTable table;
    if (config.runs_per_arm == 0) return table;

    struct Arm {
        double a;
        double sigma;
        bool ramped;
        std::size_t run;
    };
    std::vector<Arm> arms;
    for (double a : config.a_values) {
        for (double sigma : config.noise_levels) {
            for (bool ramped : {true, false}) {
                for (std::size_t run = 0; run < config.runs_per_arm; ++run) {
                    arms.push_back({a, sigma, ramped, run});
                }
            }
        }
    }

    const std::size_t n_sc = config.sampling_configs.size();
    const std::size_t n_w = config.windows.size();
    std::vector<WindowSpec> windows;
    for (double w : config.windows) windows.push_back(WindowSpec::trailing(w));

    detail::ProgressCounter counter(arms.size(), progress);
    // Per arm: positives per (sampling config, window) cell.
    const auto positives = parallel_map(arms.size(), config.threads, [&](std::size_t i) {
        const Arm& arm = arms[i];
        const Trajectory traj = config.simulate_arm(arm.a, arm.sigma, arm.ramped, arm.run);
        const auto seed = config.trajectory_seed(arm.a, arm.sigma, arm.ramped, arm.run);
        std::vector<std::size_t> hits(n_sc * n_w, 0);
        for (std::size_t c = 0; c < n_sc; ++c) {
            for (std::size_t s = 0; s < config.samples_per_trajectory; ++s) {
                const auto obs = sample(traj, config.plan(seed, config.sampling_configs[c], s));
                for (std::size_t w = 0; w < n_w; ++w) {
                    const auto joint = detect_multivariate(obs, windows[w], config.tandem);
                    const bool positive =
                        joint && (!arm.ramped || joint->time <= config.tp_cutoff);
                    if (positive) ++hits[c * n_w + w];
                }
            }
        }
        counter.tick();
        return hits;
    });

    const std::string tandem = tandem_name(config.tandem);
    const std::size_t per_arm = config.runs_per_arm * config.samples_per_trajectory;
    for (double a : config.a_values) {
        for (double sigma : config.noise_levels) {
            for (std::size_t c = 0; c < n_sc; ++c) {
                for (std::size_t w = 0; w < n_w; ++w) {
                    RateRow row{a,
                                sigma,
                                config.sampling_configs[c].alpha,
                                config.sampling_configs[c].beta,
                                config.windows[w],
                                tandem,
                                0,
                                0,
                                per_arm,
                                per_arm};
                    for (std::size_t i = 0; i < arms.size(); ++i) {
                        if (arms[i].a != a || arms[i].sigma != sigma) continue;
                        (arms[i].ramped ? row.tp_count : row.fp_count) += positives[i][c * n_w + w];
                    }
                    table.rows.push_back(std::move(row));
                }
            }
        }
    }
    return table;
}

struct TrajectoryScore {
    double sigma = 0.0;
    bool ramped = false;
    std::size_t run = 0;
    std::size_t detections = 0;
    std::size_t samples = 0;
    double score = 0.0;  ///< detections / samples
};

struct HighFreqResult {
    ClassifierCell cell;
    std::vector<TrajectoryScore> trajectories;

    [[nodiscard]] std::vector<double> scores() const {
        std::vector<double> out;
        out.reserve(trajectories.size());
        for (const auto& t : trajectories) out.push_back(t.score);
        return out;
    }
    [[nodiscard]] std::vector<bool> labels() const {
        std::vector<bool> out;
        out.reserve(trajectories.size());
        for (const auto& t : trajectories) out.push_back(t.ramped);
        return out;
    }
    /// Restricted to one noise level.
    [[nodiscard]] HighFreqResult at_noise(double sigma) const {
        HighFreqResult r{cell, {}};
        for (const auto& t : trajectories) {
            if (t.sigma == sigma) r.trajectories.push_back(t);
        }
        return r;
    }
};

/// Scores every trajectory of model `cell.a` (all noise levels, both arms) by
/// the fraction of its sampled series that detect inside the window ending at
/// t_critical.
[[nodiscard]] inline HighFreqResult run_highfreq_experiment(const SweepConfig& config,
                                                            const ClassifierCell& cell,
                                                            const ProgressFn& progress = {}) {
    config.validate();
    if (!(cell.sampling.alpha > 0.0) || !(cell.sampling.beta > cell.sampling.alpha)) {
        throw InvalidParameter("classifier: need 0 < alpha < beta");
    }
    const WindowSpec window = WindowSpec::trailing(cell.window);

    std::vector<TrajectoryScore> arms;
    for (double sigma : config.noise_levels) {
        for (bool ramped : {true, false}) {
            for (std::size_t run = 0; run < config.runs_per_arm; ++run) {
                arms.push_back({sigma, ramped, run, 0, config.samples_per_trajectory, 0.0});
            }
        }
    }

    detail::ProgressCounter counter(arms.size(), progress);
    HighFreqResult result{cell, {}};
    result.trajectories = parallel_map(arms.size(), config.threads, [&](std::size_t i) {
        TrajectoryScore t = arms[i];
        const Trajectory traj = config.simulate_arm(cell.a, t.sigma, t.ramped, t.run);
        const auto seed = config.trajectory_seed(cell.a, t.sigma, t.ramped, t.run);
        for (std::size_t s = 0; s < config.samples_per_trajectory; ++s) {
            const auto obs = sample(traj, config.plan(seed, cell.sampling, s))
                                 .restricted(config.t_critical - cell.window, config.t_critical);
            if (detect_multivariate(obs, window, config.classifier_tandem)) ++t.detections;
        }
        t.score = t.samples == 0 ? 0.0
                                 : static_cast<double>(t.detections) /
                                       static_cast<double>(t.samples);
        counter.tick();
        return t;
    });
    return result;
}

/// The four reference classifier cells: (25,50,500), (25,75,500), (50,100,750), (50,100,1000).
[[nodiscard]] inline std::vector<ClassifierCell> table2_cells(double a) {
    return {{a, {25, 50}, 500}, {a, {25, 75}, 500}, {a, {50, 100}, 750}, {a, {50, 100}, 1000}};
}

}  // namespace rod
