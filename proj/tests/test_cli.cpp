#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rod/config.hpp"
#include "rod/rod.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Workspace {
public:
    Workspace() {
        dir_ = fs::temp_directory_path() /
               ("rod_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(dir_);
    }
    ~Workspace() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }

    [[nodiscard]] std::string path(const std::string& name) const { return (dir_ / name).string(); }

    Run rod(const std::string& args) const {
        const std::string out = path(".stdout");
        const std::string err = path(".stderr");
        const std::string cmd = std::string("'") + ROD_CLI + "' " + args + " >'" + out + "' 2>'" +
                                err + "'";
        const int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    }

    void write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name), std::ios::binary) << text;
    }

private:
    fs::path dir_;
};

const std::string kSmallSweep =
    " -s sweep.a_values=1 -s sweep.noise_levels=0,0.1 -s sweep.runs_per_arm=2"
    " -s sweep.samples_per_trajectory=3 -s sweep.sampling_configs=25:75"
    " -s sweep.windows=500";

}  // namespace

TEST_CASE("simulate, sample and detect compose like the library", "[cli]") {
    Workspace ws;
    const auto traj = ws.path("traj.csv");
    const auto obs = ws.path("obs.csv");
    const auto report = ws.path("report.json");

    auto r = ws.rod("simulate -p hopf-demo -o " + traj);
    INFO(r.err);
    REQUIRE(r.code == 0);
    REQUIRE(fs::exists(traj + ".meta.json"));
    REQUIRE(ws.rod("sample -p hopf-demo -t " + traj + " -o " + obs).code == 0);
    REQUIRE(ws.rod("detect -p hopf-demo -i " + obs + " -o " + report).code == 0);

    rod::RunConfig cfg;
    cfg.apply_preset("hopf-demo");
    const auto trajectory = rod::simulate(cfg.model(), cfg.initial_state(), cfg.t0, cfg.t_end,
                                          cfg.dt, cfg.seed);
    const auto sample = rod::sample(trajectory, cfg.sample_plan());
    std::ostringstream expected_csv;
    rod::io::write_sample_csv(expected_csv, sample);
    CHECK(slurp(obs) == expected_csv.str());

    const auto joint = rod::detect_multivariate(sample, cfg.window_spec(), cfg.tandem_rule());
    const auto j = json::parse(slurp(report));
    REQUIRE(joint.has_value());
    CHECK(j["first_joint"]["observation_index"] == joint->observation_index);
    CHECK(j["first_joint"]["time"].get<double>() == joint->time);
    CHECK(j["observations"] == sample.size());
    CHECK(j["config_hash"] == cfg.hash());
    CHECK(j["tandem"] == "sd");

    std::size_t expected_events = 0;
    for (std::size_t v = 0; v < sample.dim(); ++v) {
        expected_events +=
            rod::detect_univariate(sample.channel(v), cfg.window_spec(), cfg.tandem_rule()).size();
    }
    CHECK(j["events"].size() == expected_events);

    r = ws.rod("detect -p hopf-demo -i " + obs + " --stop-at-first --quorum 1");
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["events"].size() <= 1);
}

TEST_CASE("noise-free simulation is independent of the seed", "[cli]") {
    Workspace ws;
    const std::string base = "simulate -p vdp-noise-free -s simulation.t_end=200 -s ramp.t_end=200"
                             " -s sampling.t_end=200";
    REQUIRE(ws.rod(base + " --seed 1 -o " + ws.path("a.csv")).code == 0);
    REQUIRE(ws.rod(base + " --seed 999 -o " + ws.path("b.csv")).code == 0);
    CHECK(slurp(ws.path("a.csv")) == slurp(ws.path("b.csv")));
}

TEST_CASE("error reporting and exit codes", "[cli]") {
    Workspace ws;

    auto r = ws.rod("simulate --dt -1 -o " + ws.path("x.csv"));
    CHECK(r.code == 2);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("simulation.dt"));

    r = ws.rod("simulate -s model.colour=red");
    CHECK(r.code == 2);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("model.colour"));

    CHECK(ws.rod("frobnicate").code == 2);

    ws.write("flat.csv", "t,x1\n0,2\n1,2\n2,2\n3,2\n4,2\n");
    r = ws.rod("detect -i " + ws.path("flat.csv") + " --window prefix");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["events"].empty());
    CHECK(j["first_joint"].is_null());

    ws.write("back.csv", "t,x1\n0,1\n2,3\n1,2\n");
    r = ws.rod("detect -i " + ws.path("back.csv"));
    CHECK(r.code == 4);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("row 4"));

    CHECK(ws.rod("detect -i " + ws.path("missing.csv")).code == 4);
    CHECK(ws.rod("simulate -p hopf-demo -o /proc/no/such/dir/t.csv").code == 4);

    // Explicit Euler is unstable for a time scale this short.
    r = ws.rod("sweep" + kSmallSweep + " -s sweep.a_values=0.0001 -o " + ws.path("r.csv"));
    CHECK(r.code == 3);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("arm a="));
}

TEST_CASE("sweep output does not depend on the thread count", "[cli]") {
    Workspace ws;
    REQUIRE(ws.rod("sweep" + kSmallSweep + " --threads 1 -o " + ws.path("one.csv")).code == 0);
    REQUIRE(ws.rod("sweep" + kSmallSweep + " --threads 2 -o " + ws.path("two.csv")).code == 0);
    CHECK(slurp(ws.path("one.csv")) == slurp(ws.path("two.csv")));
    CHECK(slurp(ws.path("one.csv")).rfind("a,sigma,alpha,beta,window,", 0) == 0);

    const auto meta1 = json::parse(slurp(ws.path("one.csv.meta.json")));
    const auto meta2 = json::parse(slurp(ws.path("two.csv.meta.json")));
    CHECK(meta1["config_hash"] == meta2["config_hash"]);
    CHECK(meta1["command"] == "sweep");
    CHECK(meta1["master_seed"] == 1);
}

TEST_CASE("classify writes curves and a summary", "[cli]") {
    Workspace ws;
    const auto r = ws.rod("classify" + kSmallSweep + " -s classify.cells=25:75:500 -o " +
                          ws.path("cls"));
    INFO(r.err);
    REQUIRE(r.code == 0);
    CHECK(fs::exists(ws.path("cls/roc_a1_25_75_w500.csv")));
    CHECK(fs::exists(ws.path("cls/scores_a1_25_75_w500.csv")));
    std::istringstream lines(slurp(ws.path("cls/classify_summary.jsonl")));
    std::string line;
    REQUIRE(std::getline(lines, line));
    const auto j = json::parse(line);
    CHECK(j["n_pos"] == 4);
    CHECK(j["n_neg"] == 4);
    CHECK(j["auc"].get<double>() >= 0.0);
    CHECK(j["auc"].get<double>() <= 1.0);
}

TEST_CASE("validate-prop1", "[cli]") {
    Workspace ws;
    const auto r = ws.rod("validate-prop1 -n 200000 --seeds 2 --phi 0.5 --phi -0.5 --tolerance 0.05");
    CHECK(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("PASS"));
    CHECK(ws.rod("validate-prop1 -n 1000 --seeds 1 --phi 0.5 --tolerance 1e-9").code == 3);
}
