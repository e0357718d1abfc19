#pragma once

// Asymptotic check of RoD against lag-1 autocorrelation on stationary AR(1)
// series: for a weakly stationary process RoD^2 -> 2 (1 - rho(1)).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "rod/error.hpp"
#include "rod/random.hpp"
#include "rod/series.hpp"
#include "rod/stats.hpp"

namespace rod {

/// x_{i} = phi x_{i-1} + e_i with unit-variance Gaussian innovations, started
/// from the stationary distribution N(0, 1/(1 - phi^2)).
[[nodiscard]] inline std::vector<double> ar1_series(double phi, std::size_t n, std::uint64_t seed) {
    if (!(std::abs(phi) < 1.0)) throw InvalidParameter("ar1_series: need |phi| < 1");
    std::vector<double> x(n);
    if (n == 0) return x;
    Rng rng(seed);
    x[0] = rng.normal() / std::sqrt(1.0 - phi * phi);
    for (std::size_t i = 1; i < n; ++i) x[i] = phi * x[i - 1] + rng.normal();
    return x;
}

struct Prop1Row {
    double phi = 0.0;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double rod_squared = 0.0;
    double two_one_minus_rho = 0.0;
    double rho = 0.0;

    [[nodiscard]] double gap() const noexcept { return std::abs(rod_squared - two_one_minus_rho); }
};

[[nodiscard]] inline Prop1Row prop1_check(double phi, std::size_t n, std::uint64_t seed) {
    const auto s = IrregularSeries::indexed(ar1_series(phi, n, seed));
    const double r = rod(s).value;
    const double rho = lag1_autocorr(s).value;
    return {phi, seed, n, r * r, 2.0 * (1.0 - rho), rho};
}

}  // namespace rod
