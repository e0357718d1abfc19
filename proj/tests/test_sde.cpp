#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "rod/experiments.hpp"
#include "rod/sde.hpp"

using rod::RampSchedule;
using rod::SdeModel;

TEST_CASE("drift_hopf", "[sde]") {
    CHECK(rod::drift_hopf(0, 0, 0.7, 0.25) == std::array<double, 2>{0, 0});
    CHECK(rod::drift_hopf(1, 0, -1, 0) == std::array<double, 2>{-2, 1});

    SECTION("commutes with rotations") {
        std::mt19937_64 gen(12);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::acos(-1.0));
        for (int i = 0; i < 1000; ++i) {
            const double x = u(gen);
            const double y = u(gen);
            const double lambda = u(gen);
            const double eta = u(gen);
            const double th = angle(gen);
            const double c = std::cos(th);
            const double s = std::sin(th);
            const auto f = rod::drift_hopf(x, y, lambda, eta);
            const auto g = rod::drift_hopf(c * x - s * y, s * x + c * y, lambda, eta);
            REQUIRE(std::abs(g[0] - (c * f[0] - s * f[1])) < 1e-12);
            REQUIRE(std::abs(g[1] - (s * f[0] + c * f[1])) < 1e-12);
        }
    }
}

TEST_CASE("drift_vdp3 and its equilibrium", "[sde]") {
    CHECK(rod::drift_vdp3(0, 0, 0, 1, 1) == std::array<double, 3>{0, -1, 0});
    CHECK_THROWS_AS(rod::drift_vdp3(0, 0, 0, 1, 0), rod::InvalidParameter);

    const auto e12 = rod::equilibrium_vdp3(1.2);
    CHECK(e12[0] == 1.2);
    CHECK(e12[1] == Catch::Approx(1.872).margin(1e-15));
    CHECK(e12[2] == 1.2);
    CHECK(rod::equilibrium_vdp3(0) == std::array<double, 3>{0, 0, 0});
    CHECK(rod::equilibrium_vdp3(1) == std::array<double, 3>{1, 2, 1});

    for (double lambda : {-2.0, -0.4, 0.0, 0.8, 1.0, 1.2, 1.9}) {
        const auto e = rod::equilibrium_vdp3(lambda);
        for (double a : {1.0, 10.0}) {
            const auto f = rod::drift_vdp3(e[0], e[1], e[2], lambda, a);
            for (double fi : f) CHECK(std::abs(fi) < 1e-14);
        }
    }
}

TEST_CASE("RampSchedule", "[sde]") {
    const auto r = RampSchedule::linear(-1.0, 1.0, 0.0, 100.0);
    CHECK(r(0.0) == -1.0);
    CHECK(r(50.0) == 0.0);
    CHECK(r(100.0) == 1.0);
    CHECK(r(-5.0) == -1.0);
    CHECK(r(250.0) == 1.0);
    CHECK(RampSchedule::fixed(1.2)(1e6) == 1.2);
    CHECK_THROWS_AS(RampSchedule::linear(0, 1, 5, 5), rod::InvalidParameter);

    const auto protocol = rod::SweepConfig::full().ramp(true);
    CHECK(protocol(0.0) == 1.2);
    CHECK(protocol(1000.0) == 1.0);
    CHECK(protocol(2000.0) == 0.8);
    CHECK(rod::SweepConfig::full().ramp(false)(1500.0) == 1.2);
}

TEST_CASE("simulate", "[sde]") {
    const SdeModel hopf{rod::HopfNormalForm{0.25}, RampSchedule::linear(-1, 1, 0, 100), 0.0};
    const std::vector<double> origin{0.0, 0.0};

    SECTION("noise-free Hopf stays at the origin") {
        const auto traj = rod::simulate(hopf, origin, 0.0, 100.0, 0.05, 3);
        CHECK(traj.size() == 2001);
        for (double v : traj.data()) REQUIRE(v == 0.0);
    }

    SECTION("noise-free vdp3 stays at its equilibrium") {
        const SdeModel vdp{rod::VdpThreeD{10.0}, RampSchedule::fixed(1.2), 0.0};
        const auto e = rod::equilibrium_vdp3(1.2);
        const auto traj = rod::simulate(vdp, e, 0.0, 2000.0, 0.05, 3);
        CHECK(traj.size() == 40001);
        CHECK(traj.end_time() == Catch::Approx(2000.0));
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const auto s = traj.state(k);
            for (std::size_t i = 0; i < 3; ++i) REQUIRE(std::abs(s[i] - e[i]) < 1e-9);
        }
    }

    SECTION("the seed determines the path") {
        SdeModel noisy = hopf;
        noisy.noise_sigma = 0.25;
        const auto a = rod::simulate(noisy, origin, 0.0, 100.0, 0.05, 42);
        const auto b = rod::simulate(noisy, origin, 0.0, 100.0, 0.05, 42);
        const auto c = rod::simulate(noisy, origin, 0.0, 100.0, 0.05, 43);
        CHECK(a == b);
        CHECK_FALSE(a == c);
        CHECK(a.seed() == 42);
    }

    SECTION("noise-free output ignores the seed") {
        const SdeModel vdp{rod::VdpThreeD{1.0}, RampSchedule::linear(1.2, 0.8, 0, 200), 0.0};
        const auto e = rod::equilibrium_vdp3(1.2);
        const auto a = rod::simulate(vdp, e, 0.0, 200.0, 0.05, 1);
        const auto b = rod::simulate(vdp, e, 0.0, 200.0, 0.05, 2);
        CHECK(std::equal(a.data().begin(), a.data().end(), b.data().begin(), b.data().end()));
    }

    SECTION("length is floor((t_end - t0)/dt) + 1") {
        CHECK(rod::simulate(hopf, origin, 0.0, 1.0, 0.3, 1).size() == 4);
        CHECK(rod::simulate(hopf, origin, 2.0, 3.0, 0.1, 1).size() == 11);
        CHECK(rod::simulate(hopf, origin, 0.0, 1.0, 0.05, 1).size() == 21);
    }

    SECTION("invalid arguments") {
        CHECK_THROWS_AS(rod::simulate(hopf, origin, 0.0, 1.0, 0.0, 1), rod::InvalidParameter);
        CHECK_THROWS_AS(rod::simulate(hopf, origin, 1.0, 1.0, 0.1, 1), rod::InvalidParameter);
        CHECK_THROWS_AS(rod::simulate(hopf, std::vector<double>{0, 0, 0}, 0.0, 1.0, 0.1, 1),
                        rod::InvalidParameter);
        SdeModel bad = hopf;
        bad.noise_sigma = -0.1;
        CHECK_THROWS_AS(rod::simulate(bad, origin, 0.0, 1.0, 0.1, 1), rod::InvalidParameter);
    }

    SECTION("blow-up reports the step") {
        const std::vector<double> far{100.0, 0.0};
        try {
            (void)rod::simulate(hopf, far, 0.0, 10.0, 0.05, 1);
            FAIL("expected NonFinite");
        } catch (const rod::NonFinite& e) {
            CHECK(e.step() >= 1);
            CHECK(e.step() <= 200);
        }
    }
}

TEST_CASE("Euler scheme converges at first order", "[sde][property]") {
    const SdeModel model{rod::HopfNormalForm{0.25}, RampSchedule::fixed(-1.0), 0.0};
    const std::vector<double> x0{1.0, 0.5};
    auto final_state = [&](double dt) {
        const auto traj = rod::simulate(model, x0, 0.0, 10.0, dt, 0);
        const auto s = traj.state(traj.size() - 1);
        return std::array<double, 2>{s[0], s[1]};
    };
    const auto ref = final_state(0.001);
    std::vector<double> err;
    for (double dt : {0.05, 0.025, 0.0125}) {
        const auto s = final_state(dt);
        err.push_back(std::hypot(s[0] - ref[0], s[1] - ref[1]));
    }
    for (std::size_t i = 0; i + 1 < err.size(); ++i) {
        const double ratio = err[i] / err[i + 1];
        INFO("ratio " << i << " = " << ratio);
        CHECK(ratio >= 1.5);
        CHECK(ratio <= 2.5);
    }
}
