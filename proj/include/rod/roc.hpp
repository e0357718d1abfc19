#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "rod/error.hpp"

namespace rod {

struct RocPoint {
    double threshold = 0.0;  ///< predict positive iff score >= threshold
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  ///< (0,0) first, (1,1) last
    double auc = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
};

/// Threshold-sweep ROC over the distinct scores, highest threshold first.
/// Tied scores move together, so the curve has one point per distinct score
/// plus the (0,0) origin at threshold +inf. AUC is the trapezoidal area.
[[nodiscard]] inline RocCurve roc(std::span<const double> scores, std::span<const bool> labels) {
    if (scores.size() != labels.size()) {
        throw InvalidParameter("roc: scores and labels differ in length");
    }
    const auto n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
    const std::size_t n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw OneClassInput("roc: need at least one positive and one negative label");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.n_pos = n_pos;
    curve.n_neg = n_neg;
    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});

    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double threshold = scores[order[i]];
        for (; i < order.size() && scores[order[i]] == threshold; ++i) {
            if (labels[order[i]]) {
                ++tp;
            } else {
                ++fp;
            }
        }
        const RocPoint& prev = curve.points.back();
        const RocPoint next{threshold, static_cast<double>(fp) / static_cast<double>(n_neg),
                            static_cast<double>(tp) / static_cast<double>(n_pos)};
        curve.auc += (next.fpr - prev.fpr) * (next.tpr + prev.tpr) * 0.5;
        curve.points.push_back(next);
    }
    return curve;
}

[[nodiscard]] inline RocCurve roc(const std::vector<double>& scores,
                                  const std::vector<bool>& labels) {
    const auto n = labels.size();
    auto flags = std::make_unique<bool[]>(n);
    std::copy(labels.begin(), labels.end(), flags.get());
    return roc(std::span<const double>(scores), std::span<const bool>(flags.get(), n));
}

}  // namespace rod
