#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rod/error.hpp"

namespace rod {

namespace detail {

inline void validate_series(std::span<const double> timestamps, std::span<const double> values,
                            const char* what) {
    if (timestamps.size() != values.size()) {
        throw InvalidParameter(std::string(what) + ": timestamps and values differ in length");
    }
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        if (!std::isfinite(timestamps[i]) || !std::isfinite(values[i])) {
            throw InvalidParameter(std::string(what) + ": non-finite entry at index " +
                                   std::to_string(i));
        }
        if (i > 0 && !(timestamps[i] > timestamps[i - 1])) {
            throw InvalidParameter(std::string(what) +
                                   ": timestamps not strictly increasing at index " +
                                   std::to_string(i));
        }
    }
}

}  // namespace detail

/// Non-owning view of one variable's observations. Validity is the owner's job.
struct SeriesView {
    std::span<const double> timestamps;
    std::span<const double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] bool empty() const noexcept { return values.empty(); }

    [[nodiscard]] SeriesView subview(std::size_t first, std::size_t count) const {
        return {timestamps.subspan(first, count), values.subspan(first, count)};
    }
};

/// Observations of a single variable at strictly increasing times.
class IrregularSeries {
public:
    IrregularSeries() = default;

    IrregularSeries(std::vector<double> timestamps, std::vector<double> values)
        : timestamps_(std::move(timestamps)), values_(std::move(values)) {
        detail::validate_series(timestamps_, values_, "IrregularSeries");
    }

    /// Series observed at t = 0, 1, 2, ...
    [[nodiscard]] static IrregularSeries indexed(std::vector<double> values) {
        std::vector<double> t(values.size());
        std::iota(t.begin(), t.end(), 0.0);
        return {std::move(t), std::move(values)};
    }

    [[nodiscard]] std::span<const double> timestamps() const noexcept { return timestamps_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

    [[nodiscard]] SeriesView view() const noexcept { return {timestamps_, values_}; }
    operator SeriesView() const noexcept { return view(); }  // NOLINT(google-explicit-constructor)

private:
    std::vector<double> timestamps_;
    std::vector<double> values_;
};

/// Several variables observed on one shared time grid.
class MultivariateSample {
public:
    MultivariateSample(std::vector<double> timestamps, std::vector<std::vector<double>> channels)
        : timestamps_(std::move(timestamps)), channels_(std::move(channels)) {
        if (channels_.empty()) {
            throw InvalidParameter("MultivariateSample: at least one channel is required");
        }
        for (const auto& c : channels_) {
            detail::validate_series(timestamps_, c, "MultivariateSample");
        }
    }

    [[nodiscard]] std::size_t dim() const noexcept { return channels_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return timestamps_.size(); }
    [[nodiscard]] std::span<const double> timestamps() const noexcept { return timestamps_; }
    [[nodiscard]] std::span<const double> channel_values(std::size_t i) const {
        return channels_.at(i);
    }
    [[nodiscard]] SeriesView channel(std::size_t i) const {
        return {timestamps_, channels_.at(i)};
    }

    /// Observations with t in the half-open interval (after, up_to].
    [[nodiscard]] MultivariateSample restricted(double after, double up_to) const {
        const auto first = std::upper_bound(timestamps_.begin(), timestamps_.end(), after);
        const auto last = std::upper_bound(first, timestamps_.end(), up_to);
        const auto lo = static_cast<std::size_t>(first - timestamps_.begin());
        const auto hi = static_cast<std::size_t>(last - timestamps_.begin());

        std::vector<std::vector<double>> channels;
        channels.reserve(channels_.size());
        for (const auto& c : channels_) {
            channels.emplace_back(c.begin() + static_cast<std::ptrdiff_t>(lo),
                                  c.begin() + static_cast<std::ptrdiff_t>(hi));
        }
        return {std::vector<double>(first, last), std::move(channels)};
    }

private:
    std::vector<double> timestamps_;
    std::vector<std::vector<double>> channels_;
};

/// Which observations enter each statistic evaluated at observation k.
class WindowSpec {
public:
    enum class Mode { GrowingPrefix, TrailingTime };

    [[nodiscard]] static WindowSpec growing_prefix() noexcept { return WindowSpec{}; }

    /// Observations with t_i in (t_k - length, t_k].
    [[nodiscard]] static WindowSpec trailing(double length) {
        if (!(length > 0.0) || !std::isfinite(length)) {
            throw InvalidParameter("WindowSpec: trailing length must be positive and finite");
        }
        WindowSpec w;
        w.mode_ = Mode::TrailingTime;
        w.length_ = length;
        return w;
    }

    [[nodiscard]] Mode mode() const noexcept { return mode_; }
    [[nodiscard]] double length() const noexcept { return length_; }

    friend bool operator==(const WindowSpec&, const WindowSpec&) = default;

private:
    WindowSpec() = default;

    Mode mode_ = Mode::GrowingPrefix;
    double length_ = 0.0;
};

}  // namespace rod
