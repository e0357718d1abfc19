#pragma once

// Dispersion statistics over irregularly sampled series: RMSSD, standard
// deviation, their ratio (RoD) and lag-1 autocorrelation.
//
// Successive differences are taken between consecutive observations; the
// time gap between them is ignored. Standard deviation uses population
// normalization (1/n) around the window's sample mean. All sums are two-pass
// and mean-centred.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rod/error.hpp"
#include "rod/series.hpp"

namespace rod {

/// A statistic together with the number of observations it was computed from.
struct StatValue {
    double value = 0.0;
    std::size_t n_obs = 0;
};

namespace detail {

inline void require_at_least(std::size_t n, std::size_t minimum, const char* op) {
    if (n < minimum) {
        throw InsufficientData(std::string(op) + ": need at least " + std::to_string(minimum) +
                               " observations, got " + std::to_string(n));
    }
}

[[nodiscard]] inline double mean(std::span<const double> v) noexcept {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

/// Population variance. Exactly zero for a constant window, where the
/// rounded sample mean would otherwise leave residuals of order 1 ulp.
[[nodiscard]] inline double population_variance(std::span<const double> v, double mu) noexcept {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*lo == *hi) return 0.0;
    double ss = 0.0;
    for (double x : v) {
        const double d = x - mu;
        ss += d * d;
    }
    return ss / static_cast<double>(v.size());
}

[[nodiscard]] inline double mean_squared_successive_difference(std::span<const double> v) noexcept {
    double ss = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double d = v[i] - v[i - 1];
        ss += d * d;
    }
    return ss / static_cast<double>(v.size() - 1);
}

}  // namespace detail

[[nodiscard]] inline StatValue rmssd(SeriesView s) {
    detail::require_at_least(s.size(), 2, "rmssd");
    return {std::sqrt(detail::mean_squared_successive_difference(s.values)), s.size()};
}

[[nodiscard]] inline StatValue std_dev(SeriesView s) {
    detail::require_at_least(s.size(), 2, "std_dev");
    const double mu = detail::mean(s.values);
    return {std::sqrt(detail::population_variance(s.values, mu)), s.size()};
}

/// Ratio of deviations, RMSSD / SD. Needs three observations and a
/// non-constant window.
[[nodiscard]] inline StatValue rod(SeriesView s) {
    detail::require_at_least(s.size(), 3, "rod");
    const double sd = std_dev(s).value;
    if (sd == 0.0) throw DegenerateSeries("rod: constant window (standard deviation is zero)");
    return {rmssd(s).value / sd, s.size()};
}

/// Lag-1 autocorrelation: mean lagged cross product (1/(n-1)) over the
/// population variance (1/n), both centred on the window mean.
[[nodiscard]] inline StatValue lag1_autocorr(SeriesView s) {
    detail::require_at_least(s.size(), 3, "lag1_autocorr");
    const auto v = s.values;
    const double mu = detail::mean(v);
    const double var = detail::population_variance(v, mu);
    if (var == 0.0) throw DegenerateSeries("lag1_autocorr: constant window");
    double cross = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) cross += (v[i] - mu) * (v[i - 1] - mu);
    cross /= static_cast<double>(v.size() - 1);
    return {cross / var, v.size()};
}

/// One evaluation of the window statistics at observation `index`.
struct RodPoint {
    std::size_t index = 0;  ///< observation the window ends at
    double time = 0.0;
    double rod = 0.0;
    double sd = 0.0;
    double rmssd = 0.0;
    std::size_t n_obs = 0;
};

/// Evaluates RoD, SD and RMSSD over the window ending at every observation.
/// Windows with fewer than three observations or zero SD are skipped, so the
/// result may be empty and its indices need not be contiguous.
[[nodiscard]] inline std::vector<RodPoint> rod_sequence(SeriesView s, const WindowSpec& window) {
    std::vector<RodPoint> out;
    out.reserve(s.size());
    const bool trailing = window.mode() == WindowSpec::Mode::TrailingTime;
    std::size_t lo = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (trailing) {
            const double cutoff = s.timestamps[k] - window.length();
            while (s.timestamps[lo] <= cutoff) ++lo;
        }
        const std::size_t count = k - lo + 1;
        if (count < 3) continue;
        const auto v = s.values.subspan(lo, count);
        const double sd = std::sqrt(detail::population_variance(v, detail::mean(v)));
        if (sd == 0.0) continue;
        const double nu = std::sqrt(detail::mean_squared_successive_difference(v));
        out.push_back({k, s.timestamps[k], nu / sd, sd, nu, count});
    }
    return out;
}

}  // namespace rod
