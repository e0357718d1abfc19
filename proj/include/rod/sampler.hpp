#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "rod/error.hpp"
#include "rod/random.hpp"
#include "rod/sde.hpp"
#include "rod/series.hpp"

namespace rod {

/// Observation schedule t_0 = t_start, t_{i+1} = t_i + U(alpha, beta),
/// stopping before t_end is exceeded.
class SamplePlan {
public:
    SamplePlan(double alpha, double beta, double t_start, double t_end, std::uint64_t seed)
        : alpha_(alpha), beta_(beta), t_start_(t_start), t_end_(t_end), seed_(seed) {
        if (!(alpha > 0.0) || !(beta > alpha) || !std::isfinite(beta)) {
            throw InvalidPlan("SamplePlan: need 0 < alpha < beta");
        }
        if (!(t_end >= t_start) || !std::isfinite(t_start) || !std::isfinite(t_end)) {
            throw InvalidPlan("SamplePlan: need t_start <= t_end");
        }
    }

    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] double t_start() const noexcept { return t_start_; }
    [[nodiscard]] double t_end() const noexcept { return t_end_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] double expected_gap() const noexcept { return 0.5 * (alpha_ + beta_); }

    /// The observation times alone.
    [[nodiscard]] std::vector<double> times() const {
        std::vector<double> t;
        t.reserve(static_cast<std::size_t>((t_end_ - t_start_) / alpha_) + 1);
        Rng rng(seed_);
        for (double ti = t_start_; ti <= t_end_; ti += rng.uniform(alpha_, beta_)) {
            t.push_back(ti);
        }
        return t;
    }

private:
    double alpha_;
    double beta_;
    double t_start_;
    double t_end_;
    std::uint64_t seed_;
};

/// Observes every state component at the plan's times, using the dense grid
/// point nearest to each time.
[[nodiscard]] inline MultivariateSample sample(const Trajectory& trajectory,
                                               const SamplePlan& plan) {
    if (plan.t_start() < trajectory.t0()) {
        throw InvalidPlan("sample: plan starts before the trajectory");
    }
    if (plan.t_end() > trajectory.end_time() + 0.5 * trajectory.dt()) {
        throw InvalidPlan("sample: plan ends after the trajectory");
    }
    if (plan.alpha() < trajectory.dt()) {
        throw InvalidPlan("sample: alpha is below the trajectory step");
    }

    auto times = plan.times();
    std::vector<std::vector<double>> channels(trajectory.dim());
    for (auto& c : channels) c.reserve(times.size());
    const std::size_t last = trajectory.size() - 1;
    for (double t : times) {
        auto k = static_cast<std::size_t>(std::lround((t - trajectory.t0()) / trajectory.dt()));
        if (k > last) k = last;
        const auto state = trajectory.state(k);
        for (std::size_t i = 0; i < channels.size(); ++i) channels[i].push_back(state[i]);
    }
    return {std::move(times), std::move(channels)};
}

}  // namespace rod
