#pragma once

// CSV interchange. Every file has a mandatory header line and doubles are
// written with 17 significant digits, which round-trips exactly.
//
//   trajectory / sampled series   t,x1,...,xdim
//   rate table                    a,sigma,alpha,beta,window,tandem,tp_rate,fp_rate,
//                                 n_ramped_samples,n_control_samples
//   ROC curve                     threshold,fpr,tpr   (first threshold is inf)

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rod/error.hpp"
#include "rod/experiments.hpp"
#include "rod/roc.hpp"
#include "rod/sde.hpp"
#include "rod/series.hpp"

namespace rod::io {

[[nodiscard]] inline std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

[[nodiscard]] inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

[[nodiscard]] inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

[[nodiscard]] inline double parse_double(std::string_view field, std::size_t row) {
    field = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(row, "not a number: '" + std::string(field) + "'");
    }
    if (!std::isfinite(value)) throw ParseError(row, "non-finite value");
    return value;
}

struct Table {
    std::size_t columns = 0;
    std::vector<double> t;
    std::vector<std::vector<double>> x;
};

/// Reads `t,x1,...,xdim`; timestamps must be strictly increasing.
[[nodiscard]] inline Table read_state_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    const auto header = split(trim(line), ',');
    if (header.size() < 2 || trim(header[0]) != "t") {
        throw ParseError(1, "header must be t,x1,...,xdim");
    }
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (trim(header[i]) != "x" + std::to_string(i)) {
            throw ParseError(1, "header column " + std::to_string(i + 1) + " must be x" +
                                    std::to_string(i));
        }
    }

    Table table;
    table.columns = header.size();
    table.x.resize(header.size() - 1);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto fields = split(body, ',');
        if (fields.size() != table.columns) {
            throw ParseError(row, "expected " + std::to_string(table.columns) + " columns, got " +
                                      std::to_string(fields.size()));
        }
        const double t = parse_double(fields[0], row);
        if (!table.t.empty() && !(t > table.t.back())) {
            throw ParseError(row, "timestamps not strictly increasing");
        }
        table.t.push_back(t);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            table.x[i - 1].push_back(parse_double(fields[i], row));
        }
    }
    return table;
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << 't';
    for (std::size_t i = 1; i <= traj.dim(); ++i) out << ",x" << i;
    out << '\n';
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << format_double(traj.time(k));
        for (double v : traj.state(k)) out << ',' << format_double(v);
        out << '\n';
    }
}

/// Rebuilds a trajectory from its CSV; the grid is inferred from the first
/// two rows and checked against every later row.
[[nodiscard]] inline Trajectory read_trajectory_csv(std::istream& in, std::uint64_t seed = 0) {
    auto table = detail::read_state_table(in);
    if (table.t.size() < 2) throw ParseError(2, "trajectory needs at least two rows");
    const double t0 = table.t[0];
    const double dt = table.t[1] - table.t[0];
    std::vector<double> states;
    states.reserve(table.t.size() * table.x.size());
    for (std::size_t k = 0; k < table.t.size(); ++k) {
        const double expected = t0 + static_cast<double>(k) * dt;
        if (std::abs(table.t[k] - expected) > 1e-6 * dt) {
            throw ParseError(k + 2, "timestamp off the uniform grid");
        }
        for (const auto& col : table.x) states.push_back(col[k]);
    }
    return {t0, dt, table.x.size(), std::move(states), seed};
}

inline void write_sample_csv(std::ostream& out, const MultivariateSample& s) {
    out << 't';
    for (std::size_t i = 1; i <= s.dim(); ++i) out << ",x" << i;
    out << '\n';
    for (std::size_t k = 0; k < s.size(); ++k) {
        out << format_double(s.timestamps()[k]);
        for (std::size_t i = 0; i < s.dim(); ++i) out << ',' << format_double(s.channel_values(i)[k]);
        out << '\n';
    }
}

[[nodiscard]] inline MultivariateSample read_sample_csv(std::istream& in) {
    auto table = detail::read_state_table(in);
    return {std::move(table.t), std::move(table.x)};
}

inline void write_rate_table_csv(std::ostream& out, const RateTable& table) {
    out << "a,sigma,alpha,beta,window,tandem,tp_rate,fp_rate,n_ramped_samples,n_control_samples\n";
    for (const auto& r : table.rows) {
        out << format_double(r.a) << ',' << format_double(r.sigma) << ','
            << format_double(r.alpha) << ',' << format_double(r.beta) << ','
            << format_double(r.window) << ',' << r.tandem << ',' << format_double(r.tp_rate())
            << ',' << format_double(r.fp_rate()) << ',' << r.n_ramped_samples << ','
            << r.n_control_samples << '\n';
    }
}

inline void write_roc_csv(std::ostream& out, const RocCurve& curve) {
    out << "threshold,fpr,tpr\n";
    for (const auto& p : curve.points) {
        out << format_double(p.threshold) << ',' << format_double(p.fpr) << ','
            << format_double(p.tpr) << '\n';
    }
}

}  // namespace rod::io
