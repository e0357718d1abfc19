#pragma once

// Declarative run configuration.
//
// File format: INI-style sections with `key = value` lines and `;` comment
// lines. Every key has a default; files and `--set section.key=value`
// overrides only need to name what changes.
//
//   [model]       kind (vdp3|hopf), a, eta, noise_sigma
//   [ramp]        ramped, lambda0, lambda_end, t_start, t_end
//   [simulation]  t0, t_end, dt, seed, x0 (auto | comma list)
//   [sampling]    alpha, beta, t_start, t_end, seed
//   [detection]   window (prefix | length), tandem (none|sd|rmssd|range:lo:hi),
//                 quorum (all | comma list of 0-based variable indices)
//   [sweep]       a_values, noise_levels, runs_per_arm, samples_per_trajectory,
//                 sampling_configs (alpha:beta,...), windows, tandem,
//                 classifier_tandem, tp_cutoff, lambda0, lambda_c, t_critical,
//                 t_total, dt, master_seed, threads
//   [classify]    cells (alpha:beta:window,...)
//   [output]      dir  (default: $ROD_OUTPUT_DIR, else the working directory)
//
// The config hash is FNV-1a over the canonical `key=value` listing of every
// key except sweep.threads and output.dir, which do not affect results.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rod/detector.hpp"
#include "rod/error.hpp"
#include "rod/experiments.hpp"
#include "rod/io.hpp"
#include "rod/sampler.hpp"
#include "rod/sde.hpp"
#include "rod/series.hpp"

namespace rod {

/// Invalid configuration value; `field()` is the dotted key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct CellSpec {
    double alpha = 25.0;
    double beta = 75.0;
    double window = 500.0;
};

struct RunConfig {
    std::string model_kind = "vdp3";
    double a = 10.0;
    double eta = 0.25;
    double noise_sigma = 0.1;

    bool ramped = true;
    double lambda0 = 1.2;
    double lambda_end = 0.8;
    double ramp_t_start = 0.0;
    double ramp_t_end = 2000.0;

    double t0 = 0.0;
    double t_end = 2000.0;
    double dt = 0.05;
    std::uint64_t seed = 1;
    std::string x0 = "auto";

    double alpha = 25.0;
    double beta = 75.0;
    double sample_t_start = 0.0;
    double sample_t_end = 2000.0;
    std::uint64_t sample_seed = 1;

    std::string window = "500";
    std::string tandem = "rmssd";
    std::string quorum = "all";

    SweepConfig sweep = SweepConfig::full();
    std::vector<CellSpec> classify_cells{{25, 50, 500}, {25, 75, 500}, {50, 100, 750},
                                         {50, 100, 1000}};

    std::string output_dir = default_output_dir();

    [[nodiscard]] static std::string default_output_dir() {
        const char* env = std::getenv("ROD_OUTPUT_DIR");
        return env && *env ? env : ".";
    }

    // Derived views -------------------------------------------------------

    [[nodiscard]] SdeModel model() const {
        const RampSchedule ramp = ramped
                                      ? RampSchedule::linear(lambda0, lambda_end, ramp_t_start,
                                                             ramp_t_end)
                                      : RampSchedule::fixed(lambda0);
        if (model_kind == "hopf") return {HopfNormalForm{eta}, ramp, noise_sigma};
        return {VdpThreeD{a}, ramp, noise_sigma};
    }

    [[nodiscard]] std::vector<double> initial_state() const {
        if (x0 == "auto") {
            if (model_kind == "hopf") return {0.0, 0.0};
            const auto eq = equilibrium_vdp3(lambda0);
            return {eq.begin(), eq.end()};
        }
        std::vector<double> out;
        for (auto part : io::detail::split(x0, ',')) out.push_back(to_double("simulation.x0", part));
        return out;
    }

    [[nodiscard]] SamplePlan sample_plan() const {
        return {alpha, beta, sample_t_start, sample_t_end, sample_seed};
    }

    [[nodiscard]] WindowSpec window_spec() const {
        if (window == "prefix") return WindowSpec::growing_prefix();
        return WindowSpec::trailing(to_double("detection.window", window));
    }

    [[nodiscard]] TandemRule tandem_rule() const { return parse_tandem(tandem); }

    [[nodiscard]] Quorum quorum_spec() const {
        if (quorum == "all") return Quorum::all_variables();
        std::vector<std::size_t> idx;
        for (auto part : io::detail::split(quorum, ',')) {
            idx.push_back(static_cast<std::size_t>(to_uint("detection.quorum", part)));
        }
        return Quorum::subset(std::move(idx));
    }

    [[nodiscard]] std::vector<ClassifierCell> classifier_cells() const {
        std::vector<ClassifierCell> out;
        for (double a_value : sweep.a_values) {
            for (const auto& c : classify_cells) out.push_back({a_value, {c.alpha, c.beta}, c.window});
        }
        return out;
    }

    // Field table ---------------------------------------------------------

    struct Field {
        std::string key;
        std::function<std::string(const RunConfig&)> get;
        std::function<void(RunConfig&, const std::string&)> set;
        bool hashed = true;
    };

    [[nodiscard]] static const std::vector<Field>& fields();

    void set(const std::string& key, const std::string& value) {
        for (const auto& f : fields()) {
            if (f.key == key) {
                f.set(*this, value);
                return;
            }
        }
        throw ConfigError(key, "unknown configuration key");
    }

    [[nodiscard]] std::string get(const std::string& key) const {
        for (const auto& f : fields()) {
            if (f.key == key) return f.get(*this);
        }
        throw ConfigError(key, "unknown configuration key");
    }

    /// Applies `section.key=value`.
    void apply_override(const std::string& assignment) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(assignment, "override must have the form section.key=value");
        }
        set(std::string(io::detail::trim(assignment.substr(0, eq))),
            std::string(io::detail::trim(assignment.substr(eq + 1))));
    }

    void load_ini(std::istream& in) {
        boost::property_tree::ptree tree;
        try {
            boost::property_tree::ini_parser::read_ini(in, tree);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ConfigError("<file>", std::string("line ") + std::to_string(e.line()) + ": " +
                                            e.message());
        }
        for (const auto& [section, body] : tree) {
            if (body.empty() && !body.data().empty()) {
                throw ConfigError(section, "key outside of any [section]");
            }
            for (const auto& [key, value] : body) set(section + "." + key, value.data());
        }
    }

    void load_ini_file(const std::string& path);

    void apply_preset(const std::string& name);
    [[nodiscard]] static std::vector<std::string> preset_names();

    /// Field-level checks beyond parsing.
    void validate() const {
        if (model_kind != "vdp3" && model_kind != "hopf") {
            throw ConfigError("model.kind", "must be vdp3 or hopf");
        }
        if (model_kind == "vdp3" && (a == 0.0 || !std::isfinite(a))) {
            throw ConfigError("model.a", "must be finite and nonzero");
        }
        if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
            throw ConfigError("model.noise_sigma", "must be finite and >= 0");
        }
        if (ramped && !(ramp_t_end > ramp_t_start)) {
            throw ConfigError("ramp.t_end", "must exceed ramp.t_start");
        }
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("simulation.dt", "must be positive");
        if (!(t_end > t0)) throw ConfigError("simulation.t_end", "must exceed simulation.t0");
        if (initial_state().size() != model().dim()) {
            throw ConfigError("simulation.x0", "dimension does not match the model");
        }
        if (!(alpha > 0.0)) throw ConfigError("sampling.alpha", "must be positive");
        if (!(beta > alpha)) throw ConfigError("sampling.beta", "must exceed sampling.alpha");
        if (alpha < dt) throw ConfigError("sampling.alpha", "must be at least simulation.dt");
        if (sample_t_start < t0) throw ConfigError("sampling.t_start", "before simulation.t0");
        if (sample_t_end > t_end) throw ConfigError("sampling.t_end", "after simulation.t_end");
        if (sample_t_end < sample_t_start) {
            throw ConfigError("sampling.t_end", "must not precede sampling.t_start");
        }
        try {
            (void)window_spec();
        } catch (const InvalidParameter& e) {
            throw ConfigError("detection.window", e.what());
        }
        try {
            (void)tandem_rule();
        } catch (const InvalidParameter& e) {
            throw ConfigError("detection.tandem", e.what());
        }
        for (const auto& c : classify_cells) {
            if (!(c.alpha > 0.0) || !(c.beta > c.alpha) || !(c.window > 0.0)) {
                throw ConfigError("classify.cells", "need 0 < alpha < beta and window > 0");
            }
        }
        try {
            sweep.validate();
        } catch (const InvalidParameter& e) {
            const std::string what = e.what();
            throw ConfigError(what.substr(0, what.find(':')), what.substr(what.find(':') + 2));
        }
    }

    [[nodiscard]] std::string canonical() const {
        std::string out;
        for (const auto& f : fields()) {
            if (f.hashed) out += f.key + "=" + f.get(*this) + "\n";
        }
        return out;
    }

    [[nodiscard]] std::string hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : canonical()) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    // Value parsing -------------------------------------------------------

    [[nodiscard]] static double to_double(const std::string& key, std::string_view text) {
        text = io::detail::trim(text);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
            throw ConfigError(key, "expected a finite number, got '" + std::string(text) + "'");
        }
        return v;
    }

    [[nodiscard]] static std::uint64_t to_uint(const std::string& key, std::string_view text) {
        text = io::detail::trim(text);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
        }
        return v;
    }

    [[nodiscard]] static bool to_bool(const std::string& key, std::string_view text) {
        text = io::detail::trim(text);
        if (text == "true" || text == "1" || text == "yes") return true;
        if (text == "false" || text == "0" || text == "no") return false;
        throw ConfigError(key, "expected true or false, got '" + std::string(text) + "'");
    }

    [[nodiscard]] static std::vector<double> to_list(const std::string& key, std::string_view text) {
        std::vector<double> out;
        if (io::detail::trim(text).empty()) return out;
        for (auto part : io::detail::split(text, ',')) out.push_back(to_double(key, part));
        return out;
    }

    [[nodiscard]] static std::string from_list(const std::vector<double>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ',';
            out += io::format_double(v[i]);
        }
        return out;
    }
};

inline const std::vector<RunConfig::Field>& RunConfig::fields() {
    using C = RunConfig;
    auto real = [](std::string key, double C::*member) {
        return Field{key, [member](const C& c) { return io::format_double(c.*member); },
                     [member, key](C& c, const std::string& v) { c.*member = to_double(key, v); }};
    };
    auto text = [](std::string key, std::string C::*member) {
        return Field{key, [member](const C& c) { return c.*member; },
                     [member](C& c, const std::string& v) {
                         c.*member = std::string(io::detail::trim(v));
                     }};
    };
    auto seed = [](std::string key, std::uint64_t C::*member) {
        return Field{key, [member](const C& c) { return std::to_string(c.*member); },
                     [member, key](C& c, const std::string& v) { c.*member = to_uint(key, v); }};
    };
    auto sweep_real = [](std::string key, double SweepConfig::*member) {
        return Field{key, [member](const C& c) { return io::format_double(c.sweep.*member); },
                     [member, key](C& c, const std::string& v) {
                         c.sweep.*member = to_double(key, v);
                     }};
    };
    auto sweep_list = [](std::string key, std::vector<double> SweepConfig::*member) {
        return Field{key, [member](const C& c) { return from_list(c.sweep.*member); },
                     [member, key](C& c, const std::string& v) {
                         c.sweep.*member = to_list(key, v);
                     }};
    };
    auto sweep_count = [](std::string key, std::size_t SweepConfig::*member) {
        return Field{key, [member](const C& c) { return std::to_string(c.sweep.*member); },
                     [member, key](C& c, const std::string& v) {
                         c.sweep.*member = static_cast<std::size_t>(to_uint(key, v));
                     }};
    };
    auto sweep_tandem = [](std::string key, TandemRule SweepConfig::*member) {
        return Field{key, [member](const C& c) { return tandem_name(c.sweep.*member); },
                     [member, key](C& c, const std::string& v) {
                         try {
                             c.sweep.*member = parse_tandem(std::string(io::detail::trim(v)));
                         } catch (const InvalidParameter& e) {
                             throw ConfigError(key, e.what());
                         }
                     }};
    };

    static const std::vector<Field> table = {
        text("model.kind", &C::model_kind),
        real("model.a", &C::a),
        real("model.eta", &C::eta),
        real("model.noise_sigma", &C::noise_sigma),
        Field{"ramp.ramped", [](const C& c) { return std::string(c.ramped ? "true" : "false"); },
              [](C& c, const std::string& v) { c.ramped = to_bool("ramp.ramped", v); }},
        real("ramp.lambda0", &C::lambda0),
        real("ramp.lambda_end", &C::lambda_end),
        real("ramp.t_start", &C::ramp_t_start),
        real("ramp.t_end", &C::ramp_t_end),
        real("simulation.t0", &C::t0),
        real("simulation.t_end", &C::t_end),
        real("simulation.dt", &C::dt),
        seed("simulation.seed", &C::seed),
        text("simulation.x0", &C::x0),
        real("sampling.alpha", &C::alpha),
        real("sampling.beta", &C::beta),
        real("sampling.t_start", &C::sample_t_start),
        real("sampling.t_end", &C::sample_t_end),
        seed("sampling.seed", &C::sample_seed),
        text("detection.window", &C::window),
        text("detection.tandem", &C::tandem),
        text("detection.quorum", &C::quorum),
        sweep_list("sweep.a_values", &SweepConfig::a_values),
        sweep_list("sweep.noise_levels", &SweepConfig::noise_levels),
        sweep_count("sweep.runs_per_arm", &SweepConfig::runs_per_arm),
        sweep_count("sweep.samples_per_trajectory", &SweepConfig::samples_per_trajectory),
        Field{"sweep.sampling_configs",
              [](const C& c) {
                  std::string out;
                  for (const auto& s : c.sweep.sampling_configs) {
                      if (!out.empty()) out += ',';
                      out += io::format_double(s.alpha) + ":" + io::format_double(s.beta);
                  }
                  return out;
              },
              [](C& c, const std::string& v) {
                  c.sweep.sampling_configs.clear();
                  if (io::detail::trim(v).empty()) return;
                  for (auto item : io::detail::split(v, ',')) {
                      const auto parts = io::detail::split(item, ':');
                      if (parts.size() != 2) {
                          throw ConfigError("sweep.sampling_configs", "expected alpha:beta items");
                      }
                      c.sweep.sampling_configs.push_back(
                          {to_double("sweep.sampling_configs", parts[0]),
                           to_double("sweep.sampling_configs", parts[1])});
                  }
              }},
        sweep_list("sweep.windows", &SweepConfig::windows),
        sweep_tandem("sweep.tandem", &SweepConfig::tandem),
        sweep_tandem("sweep.classifier_tandem", &SweepConfig::classifier_tandem),
        sweep_real("sweep.tp_cutoff", &SweepConfig::tp_cutoff),
        sweep_real("sweep.lambda0", &SweepConfig::lambda0),
        sweep_real("sweep.lambda_c", &SweepConfig::lambda_c),
        sweep_real("sweep.t_critical", &SweepConfig::t_critical),
        sweep_real("sweep.t_total", &SweepConfig::t_total),
        sweep_real("sweep.dt", &SweepConfig::dt),
        Field{"sweep.master_seed", [](const C& c) { return std::to_string(c.sweep.master_seed); },
              [](C& c, const std::string& v) { c.sweep.master_seed = to_uint("sweep.master_seed", v); }},
        Field{"sweep.threads", [](const C& c) { return std::to_string(c.sweep.threads); },
              [](C& c, const std::string& v) {
                  c.sweep.threads = static_cast<unsigned>(to_uint("sweep.threads", v));
              },
              false},
        Field{"classify.cells",
              [](const C& c) {
                  std::string out;
                  for (const auto& cell : c.classify_cells) {
                      if (!out.empty()) out += ',';
                      out += io::format_double(cell.alpha) + ":" + io::format_double(cell.beta) +
                             ":" + io::format_double(cell.window);
                  }
                  return out;
              },
              [](C& c, const std::string& v) {
                  c.classify_cells.clear();
                  if (io::detail::trim(v).empty()) return;
                  for (auto item : io::detail::split(v, ',')) {
                      const auto parts = io::detail::split(item, ':');
                      if (parts.size() != 3) {
                          throw ConfigError("classify.cells", "expected alpha:beta:window items");
                      }
                      c.classify_cells.push_back({to_double("classify.cells", parts[0]),
                                                  to_double("classify.cells", parts[1]),
                                                  to_double("classify.cells", parts[2])});
                  }
              }},
        Field{"output.dir", [](const C& c) { return c.output_dir; },
              [](C& c, const std::string& v) { c.output_dir = std::string(io::detail::trim(v)); },
              false},
    };
    return table;
}

inline void RunConfig::load_ini_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open config file '" + path + "'");
    load_ini(in);
}

namespace detail {

inline const std::map<std::string, std::vector<std::pair<std::string, std::string>>>& presets() {
    static const std::map<std::string, std::vector<std::pair<std::string, std::string>>> table = {
        // Hopf normal form demo: eta = 0.25 in drift and noise, lambda -1 -> 1 over [0, 100],
        // observed every U(4, 8) time units, RoD plus SD increase, growing prefix.
        {"hopf-demo",
         {{"model.kind", "hopf"},
          {"model.eta", "0.25"},
          {"model.noise_sigma", "0.25"},
          {"ramp.ramped", "true"},
          {"ramp.lambda0", "-1"},
          {"ramp.lambda_end", "1"},
          {"ramp.t_start", "0"},
          {"ramp.t_end", "100"},
          {"simulation.t0", "0"},
          {"simulation.t_end", "100"},
          {"simulation.dt", "0.05"},
          {"simulation.seed", "2016"},
          {"simulation.x0", "auto"},
          {"sampling.alpha", "4"},
          {"sampling.beta", "8"},
          {"sampling.t_start", "0"},
          {"sampling.t_end", "100"},
          {"sampling.seed", "2016"},
          {"detection.window", "prefix"},
          {"detection.tandem", "sd"},
          {"detection.quorum", "all"}}},
        {"vdp-normal", {{"model.kind", "vdp3"}, {"model.a", "10"}}},
        {"vdp-excitable", {{"model.kind", "vdp3"}, {"model.a", "1"}}},
        {"vdp-noise-free", {{"model.kind", "vdp3"}, {"model.noise_sigma", "0"}}},
        {"desk", {{"sweep.runs_per_arm", "20"}, {"sweep.samples_per_trajectory", "25"}}},
        {"table2", {{"sweep.runs_per_arm", "100"}, {"sweep.samples_per_trajectory", "100"}}},
    };
    return table;
}

}  // namespace detail

inline void RunConfig::apply_preset(const std::string& name) {
    const auto& table = detail::presets();
    const auto it = table.find(name);
    if (it == table.end()) throw ConfigError("preset", "unknown preset '" + name + "'");
    for (const auto& [key, value] : it->second) set(key, value);
}

inline std::vector<std::string> RunConfig::preset_names() {
    std::vector<std::string> out;
    for (const auto& [name, _] : detail::presets()) out.push_back(name);
    return out;
}

}  // namespace rod
