#pragma once

// Euler-Maruyama integration of two stochastic systems with additive noise
// and a linearly ramped bifurcation parameter lambda(t):
//
//   Hopf normal form (dim 2)
//     dx = [l x - y + 2 eta x r^2 - x r^4] dt + s dW1
//     dy = [x + l y + 2 eta y r^2 - y r^4] dt + s dW2,     r^2 = x^2 + y^2
//
//   three-variable Van der Pol variant (dim 3)
//     dx = (3x - x^3 - y)/a dt + s dW1
//     dy = (x - l) dt          + s dW2
//     dz = (x - z) dt          + s dW3
//
// The noise amplitude s is the same in every equation and is not scaled by
// 1/a. lambda is evaluated at the left end of each step. With s = 0 no random
// numbers are drawn, so the scheme is plain forward Euler.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rod/error.hpp"
#include "rod/random.hpp"

namespace rod {

/// lambda(t), linear between (t_start, lambda0) and (t_end, lambda_end) and
/// held at the endpoint values outside; or constant at lambda0.
struct RampSchedule {
    double lambda0 = 0.0;
    double lambda_end = 0.0;
    double t_start = 0.0;
    double t_end = 1.0;
    bool constant = false;

    [[nodiscard]] static RampSchedule linear(double lambda0, double lambda_end, double t_start,
                                             double t_end) {
        if (!(t_end > t_start)) throw InvalidParameter("RampSchedule: t_end must exceed t_start");
        return {lambda0, lambda_end, t_start, t_end, false};
    }

    [[nodiscard]] static RampSchedule fixed(double lambda0) {
        return {lambda0, lambda0, 0.0, 1.0, true};
    }

    [[nodiscard]] double operator()(double t) const noexcept {
        if (constant || t <= t_start) return lambda0;
        if (t >= t_end) return lambda_end;
        // Weighted form: exact at both endpoints and exact midpoint when the
        // endpoint sum is representable.
        const double s = (t - t_start) / (t_end - t_start);
        return lambda0 * (1.0 - s) + lambda_end * s;
    }
};

struct HopfNormalForm {
    double eta = 0.25;
};

struct VdpThreeD {
    double a = 10.0;
};

using ModelKind = std::variant<HopfNormalForm, VdpThreeD>;

struct SdeModel {
    ModelKind kind;
    RampSchedule ramp;
    double noise_sigma = 0.0;

    [[nodiscard]] std::size_t dim() const noexcept {
        return std::holds_alternative<HopfNormalForm>(kind) ? 2 : 3;
    }

    [[nodiscard]] std::string name() const {
        return std::holds_alternative<HopfNormalForm>(kind) ? "hopf" : "vdp3";
    }
};

[[nodiscard]] inline std::array<double, 2> drift_hopf(double x, double y, double lambda,
                                                      double eta) noexcept {
    const double r2 = x * x + y * y;
    const double r4 = r2 * r2;
    return {lambda * x - y + 2.0 * eta * x * r2 - x * r4,
            x + lambda * y + 2.0 * eta * y * r2 - y * r4};
}

[[nodiscard]] inline std::array<double, 3> drift_vdp3(double x, double y, double z, double lambda,
                                                      double a) {
    if (a == 0.0) throw InvalidParameter("drift_vdp3: time-scale parameter a must be nonzero");
    return {(3.0 * x - x * x * x - y) / a, x - lambda, x - z};
}

/// Equilibrium of the Van der Pol variant: (l, 3l - l^3, l).
[[nodiscard]] inline std::array<double, 3> equilibrium_vdp3(double lambda) noexcept {
    return {lambda, 3.0 * lambda - lambda * lambda * lambda, lambda};
}

/// Dense trajectory on the grid t0 + k*dt, stored row-major.
class Trajectory {
public:
    Trajectory(double t0, double dt, std::size_t dim, std::vector<double> states,
               std::uint64_t seed)
        : t0_(t0), dt_(dt), dim_(dim), states_(std::move(states)), seed_(seed) {
        if (dim_ == 0 || states_.size() % dim_ != 0 || states_.empty()) {
            throw InvalidParameter("Trajectory: state buffer does not match dimension");
        }
        if (!(dt_ > 0.0)) throw InvalidParameter("Trajectory: dt must be positive");
    }

    [[nodiscard]] double t0() const noexcept { return t0_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::size_t size() const noexcept { return states_.size() / dim_; }
    [[nodiscard]] double time(std::size_t k) const noexcept {
        return t0_ + static_cast<double>(k) * dt_;
    }
    [[nodiscard]] double end_time() const noexcept { return time(size() - 1); }
    [[nodiscard]] std::span<const double> state(std::size_t k) const {
        return std::span<const double>(states_).subspan(k * dim_, dim_);
    }
    [[nodiscard]] std::span<const double> data() const noexcept { return states_; }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    double t0_;
    double dt_;
    std::size_t dim_;
    std::vector<double> states_;
    std::uint64_t seed_;
};

/// floor((t_end - t0)/dt), tolerant of the representation error in dt.
[[nodiscard]] inline std::size_t step_count(double t0, double t_end, double dt) {
    if (!(dt > 0.0)) throw InvalidParameter("simulate: dt must be positive");
    if (!(t_end > t0)) throw InvalidParameter("simulate: t_end must exceed t0");
    return static_cast<std::size_t>(std::floor((t_end - t0) / dt + 1e-9));
}

namespace detail {

template <std::size_t Dim, class Drift>
Trajectory integrate(const Drift& drift, const RampSchedule& ramp, double sigma,
                     std::span<const double> x0, double t0, double t_end, double dt,
                     std::uint64_t seed) {
    const std::size_t steps = step_count(t0, t_end, dt);
    std::vector<double> states((steps + 1) * Dim);
    std::array<double, Dim> x{};
    for (std::size_t i = 0; i < Dim; ++i) {
        x[i] = x0[i];
        if (!std::isfinite(x[i])) throw NonFinite(0, "simulate: non-finite initial state");
        states[i] = x[i];
    }

    Rng rng(seed);
    const double noise_scale = sigma * std::sqrt(dt);
    for (std::size_t k = 0; k < steps; ++k) {
        const double lambda = ramp(t0 + static_cast<double>(k) * dt);
        const std::array<double, Dim> f = drift(x, lambda);
        for (std::size_t i = 0; i < Dim; ++i) x[i] += f[i] * dt;
        if (sigma != 0.0) {
            for (std::size_t i = 0; i < Dim; ++i) x[i] += noise_scale * rng.normal();
        }
        double* row = states.data() + (k + 1) * Dim;
        for (std::size_t i = 0; i < Dim; ++i) {
            if (!std::isfinite(x[i])) throw NonFinite(k + 1, "simulate: state became non-finite");
            row[i] = x[i];
        }
    }
    return Trajectory(t0, dt, Dim, std::move(states), seed);
}

}  // namespace detail

[[nodiscard]] inline Trajectory simulate(const SdeModel& model, std::span<const double> x0,
                                         double t0, double t_end, double dt, std::uint64_t seed) {
    if (!(model.noise_sigma >= 0.0) || !std::isfinite(model.noise_sigma)) {
        throw InvalidParameter("simulate: noise_sigma must be finite and non-negative");
    }
    if (x0.size() != model.dim()) {
        throw InvalidParameter("simulate: initial state has dimension " +
                               std::to_string(x0.size()) + ", model needs " +
                               std::to_string(model.dim()));
    }
    if (const auto* hopf = std::get_if<HopfNormalForm>(&model.kind)) {
        const double eta = hopf->eta;
        return detail::integrate<2>(
            [eta](const std::array<double, 2>& s, double lambda) {
                return drift_hopf(s[0], s[1], lambda, eta);
            },
            model.ramp, model.noise_sigma, x0, t0, t_end, dt, seed);
    }
    const double a = std::get<VdpThreeD>(model.kind).a;
    if (a == 0.0) throw InvalidParameter("simulate: time-scale parameter a must be nonzero");
    return detail::integrate<3>(
        [a](const std::array<double, 3>& s, double lambda) {
            return std::array<double, 3>{(3.0 * s[0] - s[0] * s[0] * s[0] - s[1]) / a,
                                         s[0] - lambda, s[0] - s[2]};
        },
        model.ramp, model.noise_sigma, x0, t0, t_end, dt, seed);
}

}  // namespace rod
