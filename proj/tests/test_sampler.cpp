#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rod/random.hpp"
#include "rod/sampler.hpp"

using rod::SamplePlan;

namespace {

rod::Trajectory ramp_trajectory(double t_end, double dt) {
    // x1 = t on the grid, so sampled values reveal the snapped grid point.
    const auto n = rod::step_count(0.0, t_end, dt) + 1;
    std::vector<double> states;
    for (std::size_t k = 0; k < n; ++k) {
        states.push_back(static_cast<double>(k) * dt);
        states.push_back(-static_cast<double>(k));
    }
    return {0.0, dt, 2, std::move(states), 0};
}

}  // namespace

TEST_CASE("SamplePlan validation", "[sampler]") {
    CHECK_THROWS_AS(SamplePlan(5, 5, 0, 10, 1), rod::InvalidPlan);
    CHECK_THROWS_AS(SamplePlan(6, 5, 0, 10, 1), rod::InvalidPlan);
    CHECK_THROWS_AS(SamplePlan(0, 5, 0, 10, 1), rod::InvalidPlan);
    CHECK_THROWS_AS(SamplePlan(1, 5, 10, 0, 1), rod::InvalidPlan);
    CHECK(SamplePlan(25, 75, 0, 2000, 1).expected_gap() == 50.0);
}

TEST_CASE("observation schedule", "[sampler]") {
    SECTION("(4, 8) over [0, 100] gives 12 to 25 observations") {
        double total = 0.0;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const auto t = SamplePlan(4, 8, 0, 100, seed).times();
            REQUIRE(t.size() >= 12);
            REQUIRE(t.size() <= 25);
            total += static_cast<double>(t.size());
        }
        // Renewal expectation is about 100/6 + 1.
        CHECK(total / 1000.0 == Catch::Approx(17.2).margin(0.5));
    }

    SECTION("gaps, ordering and bounds") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const SamplePlan plan(25, 75, 3, 2000, seed);
            const auto t = plan.times();
            REQUIRE(t.front() == 3.0);
            for (std::size_t i = 1; i < t.size(); ++i) {
                const double gap = t[i] - t[i - 1];
                REQUIRE(gap >= 25.0 - 1e-9);
                REQUIRE(gap <= 75.0 + 1e-9);
            }
            REQUIRE(t.back() <= 2000.0);
            REQUIRE(t.back() + 75.0 > 2000.0);
            REQUIRE(plan.times() == t);
        }
    }

    SECTION("(25, 75) puts about ten observations in a 500-unit window") {
        double total = 0.0;
        for (std::uint64_t s = 0; s < 1000; ++s) {
            const auto t = SamplePlan(25, 75, 0, 2000, rod::derive_seed(9, s)).times();
            for (double ti : t) total += (ti > 500.0 && ti <= 1000.0) ? 1.0 : 0.0;
        }
        const double mean = total / 1000.0;
        CHECK(mean >= 9.0);
        CHECK(mean <= 11.0);
    }
}

TEST_CASE("sample", "[sampler]") {
    const auto traj = ramp_trajectory(100.0, 0.05);

    SECTION("values come from the nearest grid point of every channel") {
        const auto obs = rod::sample(traj, SamplePlan(4, 8, 0, 100, 7));
        REQUIRE(obs.dim() == 2);
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const double t = obs.timestamps()[i];
            const double grid_t = obs.channel_values(0)[i];
            REQUIRE(std::abs(grid_t - t) <= 0.025 + 1e-12);
            REQUIRE(obs.channel_values(1)[i] == -std::round(grid_t / 0.05));
        }
    }

    SECTION("same plan, same sample") {
        const auto a = rod::sample(traj, SamplePlan(4, 8, 0, 100, 7));
        const auto b = rod::sample(traj, SamplePlan(4, 8, 0, 100, 7));
        CHECK(std::ranges::equal(a.timestamps(), b.timestamps()));
        CHECK(std::ranges::equal(a.channel_values(1), b.channel_values(1)));
    }

    SECTION("plans outside the trajectory are rejected") {
        CHECK_THROWS_AS(rod::sample(traj, SamplePlan(4, 8, -1, 100, 1)), rod::InvalidPlan);
        CHECK_THROWS_AS(rod::sample(traj, SamplePlan(4, 8, 0, 101, 1)), rod::InvalidPlan);
        CHECK_THROWS_AS(rod::sample(traj, SamplePlan(0.01, 8, 0, 100, 1)), rod::InvalidPlan);
    }
}
