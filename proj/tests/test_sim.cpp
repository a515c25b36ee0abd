#include "fracid/app/fixtures.hpp"
#include "fracid/errors.hpp"
#include "fracid/sim/gl.hpp"

#include <doctest.h>

#include <cmath>

using namespace fracid;
using namespace fracid::sim;

namespace {

SimConfig unit(double h, double T) {
    SimConfig c;
    c.h = h;
    c.T = T;
    return c;
}

double at(const SimResult& r, double t, double h) {
    return r.y[static_cast<std::size_t>(std::llround(t / h))];
}

SimResult step_response(const CommensurateFoTf& tf, const SimConfig& cfg, double amp = 1.0) {
    const std::vector<double> u(cfg.steps(), amp);
    return simulate_fo(tf, u, cfg);
}

} // namespace

TEST_CASE("GL weights") {
    const auto w1 = gl_weights(1.0, 5);
    CHECK(w1 == std::vector<double>{1.0, -1.0, 0.0, 0.0, 0.0});
    const auto w0 = gl_weights(0.0, 4);
    CHECK(w0 == std::vector<double>{1.0, 0.0, 0.0, 0.0});
    // (1 - z)^{1/2} expanded by hand: 1, -1/2, -1/8, -1/16, -5/128
    const auto wh = gl_weights(0.5, 5);
    CHECK(wh[1] == doctest::Approx(-0.5));
    CHECK(wh[2] == doctest::Approx(-0.125));
    CHECK(wh[3] == doctest::Approx(-0.0625));
    CHECK(wh[4] == doctest::Approx(-5.0 / 128.0));
}

TEST_CASE("integrator, first-order lag and the half-order lag") {
    const auto cfg = unit(1e-3, 2.0);
    const auto integ = step_response(CommensurateFoTf(RationalOrder(1), {1.0}, {0.0, 1.0}), cfg);
    CHECK(std::abs(at(integ, 1.0, cfg.h) - 1.0) < 2e-3);

    const auto lag = step_response(CommensurateFoTf(RationalOrder(1), {1.0}, {1.0, 1.0}), cfg);
    CHECK(std::abs(at(lag, 1.0, cfg.h) - (1.0 - std::exp(-1.0))) < 1e-3);

    // y(t) = 1 - e^t erfc(sqrt t), evaluated with std::erfc
    const auto half = step_response(CommensurateFoTf(RationalOrder(1, 2), {1.0}, {1.0, 1.0}), cfg);
    for (double t : {0.5, 1.0, 2.0}) {
        const double ref = 1.0 - std::exp(t) * std::erfc(std::sqrt(t));
        CHECK(std::abs(at(half, t, cfg.h) - ref) < 5e-3);
    }
    CHECK(1.0 - std::exp(1.0) * std::erfc(1.0) == doctest::Approx(0.57242).epsilon(1e-5));
}

TEST_CASE("first-order error halves with the step") {
    const CommensurateFoTf lag(RationalOrder(1), {1.0}, {1.0, 1.0});
    double prev = 0.0;
    for (double h : {4e-3, 2e-3, 1e-3}) {
        const auto r = step_response(lag, unit(h, 1.0));
        const double err = std::abs(r.y.back() - (1.0 - std::exp(-1.0)));
        if (prev > 0.0) {
            CHECK(prev / err > 1.6);
            CHECK(prev / err < 2.4);
        }
        prev = err;
    }
}

TEST_CASE("full window equals the unwindowed run bit for bit") {
    const CommensurateFoTf tf(RationalOrder(1, 4), {1.0, 0.2}, {1.0, 0.5, 0.7, 0.1, 0.3});
    auto cfg = unit(0.01, 5.0);
    const auto full = step_response(tf, cfg);
    cfg.window = cfg.steps();
    const auto windowed = step_response(tf, cfg);
    CHECK(full.y == windowed.y);
    cfg.window = 50;
    const auto short_memory = step_response(tf, cfg);
    CHECK(short_memory.y != full.y);
}

TEST_CASE("linearity and backend agreement") {
    const CommensurateFoTf tf(RationalOrder(1, 4), {1.0}, {1.0, 0.5, 0.7, 0.1, 0.3});
    auto cfg = unit(0.01, 20.0);
    const auto a = step_response(tf, cfg, 1.0);
    const auto b = step_response(tf, cfg, -3.5);
    for (std::size_t i = 0; i < a.y.size(); ++i) CHECK(std::abs(b.y[i] + 3.5 * a.y[i]) <= 1e-10 * (1 + std::abs(b.y[i])));
    cfg.backend = kernels::Backend::Serial;
    const auto s = step_response(tf, cfg, 1.0);
    for (std::size_t i = 0; i < a.y.size(); ++i) CHECK(std::abs(s.y[i] - a.y[i]) <= 1e-12 * (1 + std::abs(a.y[i])));
}

TEST_CASE("closed loop with an integer test loop") {
    const CommensurateFoTf plant(RationalOrder(1), {1.0}, {1.0, 1.0});
    const control::ContinuousOrderPid pi{RationalOrder(1), {1.0, 1.0}}; // (s + 1)/s
    const auto cfg = unit(1e-3, 20.0);
    const auto tr = closed_loop_step(plant, pi, 2.0, cfg);
    CHECK(tr.reference == 2.0);
    CHECK(tr.y.back() == doctest::Approx(2.0).epsilon(1e-3));
    // loop is 1/s: y = 2 (1 - e^{-t}), settling at ln 50
    CHECK(settling_time(tr, 0.02) == doctest::Approx(std::log(50.0)).epsilon(2e-3));

    const auto dist = disturbance_step(plant, pi, 1.0, cfg);
    CHECK(std::abs(dist.y.back()) < 1e-3);
    const auto none = disturbance_step(plant, pi, 0.0, cfg);
    for (double v : none.y) CHECK(v == 0.0);

    // reference and disturbance responses superpose
    const auto both_ref = closed_loop_step(plant, pi, 1.0, cfg);
    CHECK(peak_deviation(dist) > 0.0);
    CHECK(overshoot(both_ref) <= 0.02);
}

TEST_CASE("settling time edge cases") {
    SimResult flat;
    flat.t = {0.0, 1.0, 2.0};
    flat.y = {1.0, 1.0, 1.0};
    flat.reference = 1.0;
    CHECK(settling_time(flat, 0.02) == 0.0);
    SimResult late = flat;
    late.y = {1.0, 1.0, 1.5};
    CHECK(std::isinf(settling_time(late, 0.02)));
}

TEST_CASE("the published loop at the default step") {
    const auto& bank = app::builtin_fixtures();
    SimConfig cfg;
    cfg.T = 600.0;
    const auto r = closed_loop_step(app::find_fo(bank, "G30_100")->model, bank.controller, 1.0, cfg);
    CHECK(settling_time(r, 0.02) <= 400.0);
    CHECK(overshoot(r) <= 0.02);
}

TEST_CASE("configuration validation") {
    SimConfig bad;
    bad.h = 0.0;
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
    const CommensurateFoTf improper(RationalOrder(1), {0.0, 0.0, 1.0}, {1.0, 1.0});
    const std::vector<double> u(10, 1.0);
    CHECK_THROWS_AS(gl_response(improper, u, unit(0.1, 0.9)), ArgumentError);
}
