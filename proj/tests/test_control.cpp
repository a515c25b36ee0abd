#include "fracid/app/fixtures.hpp"
#include "fracid/control/copid.hpp"
#include "fracid/control/tuning.hpp"
#include "fracid/errors.hpp"
#include "fracid/fotf/polynomial.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fracid;
using namespace fracid::control;
using cd = std::complex<double>;

namespace {

// objective on the published gains over all eight plants, frozen on first run
constexpr double kGoldenJbar52 = 23181.389756999033;

const app::FixtureBank& bank() {
    return app::builtin_fixtures();
}

} // namespace

TEST_CASE("controller transfer function") {
    ContinuousOrderPid pid{RationalOrder(1), {2.0, 3.0, 4.0}};
    const auto c = controller_tf(pid);
    CHECK(c.q() == RationalOrder(1));
    CHECK(c.num() == poly::Coeffs{4.0, 3.0, 2.0});
    CHECK(c.den() == poly::Coeffs{0.0, 1.0});

    const auto& fixture = bank().controller;
    CHECK(fixture.q == RationalOrder(1, 4));
    CHECK(fixture.N() == 10);
    const double printed[] = {0.5298, 0.2105, 0.9427, 0.6789, 0.4455, 0.0012,
                              0.1828, 0.6630, 0.0303, 0.2878, 0.8228};
    for (int i = 0; i <= 10; ++i) CHECK(fixture.gains[i] == doctest::Approx(printed[i] * 1e-4).epsilon(1e-12));
    const auto cf = controller_tf(fixture);
    CHECK(cf.den_degree() == 4); // s = w^4
    CHECK(cf.num_degree() == 10);

    ContinuousOrderPid zero{RationalOrder(1, 4), std::vector<double>(11, 0.0)};
    CHECK(controller_tf(zero).is_zero());

    CHECK(parse_controller(serialize(fixture)).gains == fixture.gains);
    CHECK_THROWS_AS(parse_controller("{\"kind\":\"copid\",\"q\":\"1/4\",\"gains\":[]}"), ArgumentError);
}

TEST_CASE("closed-loop poles") {
    CommensurateFoTf plant(RationalOrder(1, 2), {1.0}, {1.0, 1.0});
    ContinuousOrderPid tiny{RationalOrder(1, 2), {1e-9}};
    const auto poles = closed_loop_poles(plant, tiny);
    // w^3 + w^2 + K: one root near the open-loop pole, two near the origin
    REQUIRE(poles.poles.size() == 3);
    int near_open = 0, near_origin = 0;
    for (const auto& p : poles.poles) {
        if (std::abs(p.root + 1.0) < 1e-6) ++near_open;
        if (std::abs(p.root) < 1e-3) ++near_origin;
    }
    CHECK(near_open == 1);
    CHECK(near_origin == 2);

    const auto cl = closed_loop_poles(bank().fo[0].model, bank().controller);
    CHECK(cl.poles.size() == 20);
    for (const auto& p : cl.poles) {
        if (p.root.imag() == 0.0) continue;
        bool mirrored = false;
        for (const auto& o : cl.poles) mirrored = mirrored || o.root == std::conj(p.root);
        CHECK(mirrored);
    }
}

TEST_CASE("pole-zero pairs are not cancelled") {
    // plant (w + 2)/(w + 2)(w + 3) keeps both factors of the shared root
    CommensurateFoTf plant(RationalOrder(1), {2.0, 1.0}, poly::multiply(std::vector<double>{2.0, 1.0},
                                                                         std::vector<double>{3.0, 1.0}));
    ContinuousOrderPid c{RationalOrder(1), {0.0, 1.0}};
    const auto cl = closed_loop_poles(plant, c);
    CHECK(cl.poles.size() == 3);
    int at_minus_two = 0;
    for (const auto& p : cl.poles) at_minus_two += std::abs(p.root + 2.0) < 1e-6;
    CHECK(at_minus_two == 1);
}

TEST_CASE("classic PID pole algebra at q = 1") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(0.1, 2.0);
    for (int i = 0; i < 20; ++i) {
        // plant b/(s^2 + a1 s + a0), PID (kd s^2 + kp s + ki)/s
        const double b = U(rng), a1 = U(rng), a0 = U(rng), kd = U(rng), kp = U(rng), ki = U(rng);
        CommensurateFoTf plant(RationalOrder(1), {b}, {a0, a1, 1.0});
        ContinuousOrderPid c{RationalOrder(1), {kd, kp, ki}};
        // s^3 + (a1 + b kd) s^2 + (a0 + b kp) s + b ki, by hand
        const std::vector<double> cp{b * ki, a0 + b * kp, a1 + b * kd, 1.0};
        const auto poles = closed_loop_poles(plant, c);
        REQUIRE(poles.poles.size() == 3);
        for (const auto& p : poles.poles) CHECK(std::abs(poly::evaluate(cp, p.root)) < 1e-8 * (1 + std::norm(p.root)));
    }
}

TEST_CASE("Nelder-Mead reference problems") {
    auto bowl = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += (v - 3.0) * (v - 3.0);
        return s;
    };
    NelderMeadConfig cfg;
    cfg.x_tolerance = 1e-10;
    cfg.f_tolerance = 1e-16;
    const auto r = nelder_mead(bowl, {0.0, 0.0, 0.0}, cfg);
    for (double v : r.x) CHECK(std::abs(v - 3.0) < 1e-6);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1]);

    const auto a = nelder_mead([](std::span<const double> x) { return std::abs(x[0]); }, {1.0}, cfg);
    CHECK(std::abs(a.x[0]) < 1e-6);

    auto rosen = [](std::span<const double> x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    const auto rb = nelder_mead(rosen, {-1.2, 1.0}, cfg);
    CHECK(std::abs(rb.x[0] - 1.0) < 1e-4);
    CHECK(std::abs(rb.x[1] - 1.0) < 1e-4);

    // positive scaling of the objective does not change a single comparison
    auto scaled = [&](std::span<const double> x) { return 37.0 * rosen(x); };
    const auto rs = nelder_mead(scaled, {-1.2, 1.0}, cfg);
    CHECK(rs.x == rb.x);
    CHECK(rs.iterations == rb.iterations);
}

TEST_CASE("objective from pole sets") {
    const RationalOrder q(1, 4);
    auto at = [](double deg) { return std::polar(1.3, deg * std::numbers::pi / 180.0); };
    const auto on_target = classify_roots({at(45.0), std::conj(at(45.0)), at(45.0), std::conj(at(45.0))}, q);
    CHECK(objective_from_poles({on_target}, 45.0) == doctest::Approx(0.0).epsilon(1e-12));
    const auto single = classify_roots({at(45.0), std::conj(at(45.0)), at(46.0)}, q);
    CHECK(objective_from_poles({single}, 45.0) == doctest::Approx(1.0).epsilon(1e-9));
    // a root inside the cone pays the penalty on top of the plain deviation
    const double inside = objective_from_poles({classify_roots({at(20.0)}, q)}, 45.0);
    CHECK(inside == doctest::Approx(25.0 + kConePenalty * 2.5).epsilon(1e-9));
    CHECK(objective_from_poles({single, single}, 45.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("tuning a hyper-damped toy keeps it hyper-damped") {
    CommensurateFoTf plant(RationalOrder(1, 2), {1.0}, {1.0, 1.0, 1.0});
    TuningProblem p;
    p.plants = {plant};
    p.q = RationalOrder(1, 2);
    p.N = 2;
    p.restarts = 2;
    p.simplex.max_iterations = 600;
    const auto r = tune(p);
    CHECK(r.all_stable);
    const auto check = closed_loop_poles(plant, r.controller);
    CHECK(check.min_abs_arg_deg() == doctest::Approx(r.min_angle_deg[0]));
    CHECK(r.restarts.size() == 2);
}

TEST_CASE("tuning is reproducible with a fixed seed") {
    TuningProblem p;
    for (int i = 0; i < 2; ++i) p.plants.push_back(bank().fo[i].model);
    p.restarts = 1;
    p.simplex.max_iterations = 60;
    const auto a = tune(p, kernels::Backend::Serial);
    const auto b = tune(p, kernels::Backend::OpenMP);
    CHECK(a.controller.gains == b.controller.gains);
    CHECK(a.objective == b.objective);
    CHECK(a.trace == b.trace);
}

TEST_CASE("verifying the published controller") {
    const auto plants = app::fo_plants(bank());
    const auto r1 = verify(bank().controller, plants);
    const auto r2 = verify(bank().controller, plants);
    CHECK(report_text(r1) == report_text(r2));
    CHECK(min_angle_csv(r1) == min_angle_csv(r2));
    CHECK(r1.poles.size() == 8);
    for (const auto& ps : r1.poles) CHECK(ps.poles.size() == 20);

    // the objective is finite on the published gains; value frozen on first run
    TuningProblem p;
    p.plants = plants;
    const double J = objective_Jbar(bank().controller.gains, p);
    CHECK(std::isfinite(J));
    CHECK(J == doctest::Approx(kGoldenJbar52).epsilon(1e-9));

    // zero controller: G30_100 open-loop poles plus the integrator at the origin
    ContinuousOrderPid zero{RationalOrder(1, 4), std::vector<double>(11, 0.0)};
    const auto z = verify(zero, {plants[0]});
    std::vector<double> upper;
    for (const auto& p : z.poles[0].poles)
        if (p.root.imag() > 0) upper.push_back(p.arg_deg);
    std::sort(upper.begin(), upper.end());
    REQUIRE(upper.size() >= 5);
    const double published[] = {30.7877, 34.0734, 45.0014, 53.9669, 87.4224};
    int matched = 0;
    for (double pub : published)
        for (double u : upper) matched += std::abs(u - pub) < 0.1;
    CHECK(matched == 5);
}

TEST_CASE("high gain drives roots to plant zeros inside the cone") {
    // numerator w - 1 (zero at arg 0), denominator (w + 1)^2 at q = 1/2
    CommensurateFoTf plant(RationalOrder(1, 2), {-1.0, 1.0}, {1.0, 2.0, 1.0});
    ContinuousOrderPid big{RationalOrder(1, 2), {1e6}};
    const auto r = verify(big, {plant});
    CHECK_FALSE(r.all_stable);
}
