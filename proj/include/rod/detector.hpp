#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "rod/error.hpp"
#include "rod/series.hpp"
#include "rod/stats.hpp"

namespace rod {

// Tandem conditions conjoined with the RoD-increase rule.

struct NoTandem {
    friend bool operator==(const NoTandem&, const NoTandem&) = default;
};
struct SdIncrease {
    friend bool operator==(const SdIncrease&, const SdIncrease&) = default;
};
struct RmssdIncrease {
    friend bool operator==(const RmssdIncrease&, const RmssdIncrease&) = default;
};

/// Fires when the raw observation falls outside [lower, upper].
struct RangeViolation {
    double lower = 0.0;
    double upper = 0.0;

    RangeViolation(double lo, double hi) : lower(lo), upper(hi) {
        if (!(lo < hi)) throw InvalidParameter("RangeViolation: lower must be below upper");
    }
    friend bool operator==(const RangeViolation&, const RangeViolation&) = default;
};

using TandemRule = std::variant<NoTandem, SdIncrease, RmssdIncrease, RangeViolation>;

[[nodiscard]] inline std::string tandem_name(const TandemRule& rule) {
    struct Visitor {
        std::string operator()(NoTandem) const { return "none"; }
        std::string operator()(SdIncrease) const { return "sd"; }
        std::string operator()(RmssdIncrease) const { return "rmssd"; }
        std::string operator()(const RangeViolation& r) const {
            char buf[96];
            std::snprintf(buf, sizeof buf, "range:%.17g:%.17g", r.lower, r.upper);
            return buf;
        }
    };
    return std::visit(Visitor{}, rule);
}

/// Inverse of tandem_name.
[[nodiscard]] inline TandemRule parse_tandem(const std::string& text) {
    if (text == "none") return NoTandem{};
    if (text == "sd") return SdIncrease{};
    if (text == "rmssd") return RmssdIncrease{};
    if (text.rfind("range:", 0) == 0) {
        const auto rest = text.substr(6);
        const auto colon = rest.find(':');
        if (colon != std::string::npos) {
            try {
                std::size_t used_lo = 0;
                std::size_t used_hi = 0;
                const double lo = std::stod(rest.substr(0, colon), &used_lo);
                const double hi = std::stod(rest.substr(colon + 1), &used_hi);
                if (used_lo == colon && used_hi == rest.size() - colon - 1) {
                    return RangeViolation{lo, hi};
                }
            } catch (const std::logic_error&) {
            }
        }
    }
    throw InvalidParameter("unknown tandem rule '" + text +
                           "' (expected none, sd, rmssd or range:<lower>:<upper>)");
}

struct DetectionEvent {
    std::size_t variable_index = 0;
    std::size_t observation_index = 0;
    double time = 0.0;
    double rod_before = 0.0;
    double rod_after = 0.0;

    friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

enum class DetectMode { AllEvents, StopAtFirst };

/// A single increase of RoD between two adjacent observations, conjoined with
/// the tandem condition. Both windows must be valid RoD evaluations; ties never
/// fire.
[[nodiscard]] inline std::vector<DetectionEvent> detect_univariate(
    SeriesView series, const WindowSpec& window, const TandemRule& tandem,
    std::size_t variable_index = 0, DetectMode mode = DetectMode::AllEvents) {
    std::vector<DetectionEvent> events;
    const auto seq = rod_sequence(series, window);
    for (std::size_t j = 1; j < seq.size(); ++j) {
        const RodPoint& prev = seq[j - 1];
        const RodPoint& cur = seq[j];
        if (prev.index + 1 != cur.index) continue;
        if (!(cur.rod > prev.rod)) continue;

        const double observed = series.values[cur.index];
        const bool tandem_ok = std::visit(
            [&](const auto& rule) {
                using R = std::decay_t<decltype(rule)>;
                if constexpr (std::is_same_v<R, NoTandem>) {
                    return true;
                } else if constexpr (std::is_same_v<R, SdIncrease>) {
                    return cur.sd > prev.sd;
                } else if constexpr (std::is_same_v<R, RmssdIncrease>) {
                    return cur.rmssd > prev.rmssd;
                } else {
                    return observed < rule.lower || observed > rule.upper;
                }
            },
            tandem);
        if (!tandem_ok) continue;

        events.push_back({variable_index, cur.index, cur.time, prev.rod, cur.rod});
        if (mode == DetectMode::StopAtFirst) break;
    }
    return events;
}

/// Variables that must fire together for a joint detection.
class Quorum {
public:
    [[nodiscard]] static Quorum all_variables() { return Quorum{}; }
    [[nodiscard]] static Quorum subset(std::vector<std::size_t> indices) {
        if (indices.empty()) throw InvalidParameter("Quorum: subset must not be empty");
        Quorum q;
        q.indices_ = std::move(indices);
        return q;
    }

    [[nodiscard]] std::vector<std::size_t> resolve(std::size_t dim) const {
        if (!indices_) {
            std::vector<std::size_t> all(dim);
            for (std::size_t i = 0; i < dim; ++i) all[i] = i;
            return all;
        }
        for (auto i : *indices_) {
            if (i >= dim) {
                throw InvalidParameter("Quorum: variable index " + std::to_string(i) +
                                       " out of range");
            }
        }
        auto out = *indices_;
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

private:
    std::optional<std::vector<std::size_t>> indices_;
};

struct JointDetection {
    std::size_t observation_index = 0;
    double time = 0.0;

    friend bool operator==(const JointDetection&, const JointDetection&) = default;
};

/// Earliest observation index at which every quorum variable has an event.
[[nodiscard]] inline std::optional<JointDetection> detect_multivariate(
    const MultivariateSample& sample, const WindowSpec& window, const TandemRule& tandem,
    const Quorum& quorum = Quorum::all_variables()) {
    const auto vars = quorum.resolve(sample.dim());

    // fired[k] counts quorum variables with an event at observation k.
    std::vector<std::size_t> fired(sample.size(), 0);
    for (std::size_t v : vars) {
        for (const auto& e : detect_univariate(sample.channel(v), window, tandem, v)) {
            ++fired[e.observation_index];
        }
    }
    for (std::size_t k = 0; k < fired.size(); ++k) {
        if (fired[k] == vars.size()) return JointDetection{k, sample.timestamps()[k]};
    }
    return std::nullopt;
}

}  // namespace rod
