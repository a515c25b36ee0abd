#include "fracid/app/fixtures.hpp"
#include "fracid/errors.hpp"
#include "fracid/sysid/freq_domain.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

using namespace fracid;
using namespace fracid::sysid;
using cd = std::complex<double>;

namespace {

FrequencyResponse from_model(const CommensurateFoTf& m, std::size_t count = 30, double lo = 1e-2, double hi = 1e2) {
    return synth_freq_data(m, make_grid(lo, hi, count));
}

LevyProblem problem(FrequencyResponse data, int m, int n, RationalOrder q, Weighting w = Weighting::Uniform,
                    Aggregation agg = Aggregation::Stacked) {
    LevyProblem p{std::move(data), m, n, q, w, agg};
    return p;
}

// Complex least squares for integer-order Levy written from scratch: unknowns
// b_0..b_m, a_1..a_n minimise sum |G(1 + sum a_k (jw)^k) - sum b_k (jw)^k|^2.
Eigen::VectorXd complex_levy(const FrequencyResponse& d, int m, int n) {
    const auto P = static_cast<Eigen::Index>(d.size());
    Eigen::MatrixXcd M(P, m + n + 1);
    Eigen::VectorXcd rhs(P);
    for (Eigen::Index p = 0; p < P; ++p) {
        const cd s(0.0, d.omegas()[p]);
        const cd G = d.values()[p];
        for (int k = 0; k <= m; ++k) M(p, k) = -std::pow(s, k);
        for (int k = 1; k <= n; ++k) M(p, m + k) = G * std::pow(s, k);
        rhs(p) = -G;
    }
    // real unknowns: stack real and imaginary parts
    Eigen::MatrixXd R(2 * P, m + n + 1);
    Eigen::VectorXd r(2 * P);
    R << M.real(), M.imag();
    r << rhs.real(), rhs.imag();
    return R.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(r);
}

// frozen on first run; see the accuracy J case
constexpr double kGoldenJ43 = 13960.37654867122;

const DiscreteTf& g19() {
    return app::find_discrete(app::builtin_fixtures(), "G30_100")->model;
}

} // namespace

TEST_CASE("Levy rows") {
    // constant model from a real constant response
    std::vector<double> w{1.0};
    std::vector<cd> v{cd(2.5, 0.0)};
    const auto f = solve_levy(problem(FrequencyResponse(w, v), 0, 0, RationalOrder(1)));
    CHECK(f.model.num()[0] == doctest::Approx(2.5));

    // basis (j)^{1/2} for q = 1/4, k = 2 at omega = 1 shows up in the b_2 column
    std::vector<cd> one{cd(1.0, 0.0)};
    const auto rows = levy_rows(problem(FrequencyResponse(w, one), 2, 0, RationalOrder(1, 4)), 0);
    CHECK(std::abs(rows.A(0, 2)) == doctest::Approx(std::sqrt(0.5)));
    CHECK(std::abs(rows.A(1, 2)) == doctest::Approx(std::sqrt(0.5)));

    Eigen::MatrixXd A;
    Eigen::VectorXd rhs;
    const auto d3 = from_model(CommensurateFoTf(RationalOrder(1, 2), {1.0}, {1.0, 1.0}), 3);
    levy_system(problem(d3, 1, 2, RationalOrder(1, 2)), A, rhs);
    CHECK(A.rows() == 6);
    CHECK(A.cols() == 4);
}

TEST_CASE("Levy recovers 1/(s^0.5 + 1) on the quarter base") {
    const auto d = from_model(CommensurateFoTf(RationalOrder(1, 2), {1.0}, {1.0, 1.0}));
    const auto f = solve_levy(problem(d, 0, 2, RationalOrder(1, 4)));
    CHECK(f.model.num()[0] == doctest::Approx(1.0).epsilon(1e-9));
    REQUIRE(f.model.den().size() == 3);
    CHECK(std::abs(f.model.den()[1]) < 1e-9);
    CHECK(f.model.den()[2] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f.J < 1e-12);
}

TEST_CASE("Vinagre weights") {
    const std::vector<double> w{1.0, 2.0, 4.0};
    const auto v = vinagre_weights(w);
    CHECK(v[0] == doctest::Approx(0.5));
    CHECK(v[1] == doctest::Approx(0.375));
    CHECK(v[2] == doctest::Approx(0.0625));
    // interior weights fall like 1/omega on a log grid; the two ends use a
    // one-sided difference and only the top one is guaranteed below its neighbour
    const auto g = make_grid(1e-3, 31.4, 50);
    const auto vg = vinagre_weights(g);
    for (double x : vg) CHECK(x > 0.0);
    for (std::size_t i = 2; i < vg.size(); ++i) CHECK(vg[i] < vg[i - 1]);
}

TEST_CASE("accuracy J") {
    const auto m = CommensurateFoTf(RationalOrder(1, 4), {1.0, 0.5}, {1.0, 0.2, 0.3});
    const auto d = from_model(m, 20);
    CHECK(accuracy_J(d, m) == 0.0);
    const cd delta(0.3, -0.4);
    std::vector<cd> shifted;
    for (auto v : d.values()) shifted.push_back(v + delta);
    CHECK(accuracy_J(FrequencyResponse(d.omegas(), shifted), m) == doctest::Approx(std::norm(delta)));

    const auto r = residuals_by_freq(d, CommensurateFoTf(RationalOrder(1, 4), {1.1}, {1.0}));
    double mean = 0.0;
    for (double x : r) mean += x;
    mean /= static_cast<double>(r.size());
    CHECK(mean == doctest::Approx(accuracy_J(d, CommensurateFoTf(RationalOrder(1, 4), {1.1}, {1.0}))));

    // golden value frozen on first run: G30_100 fractional model against the
    // discrete G30_100 sampled on the default grid
    const auto& fo43 = app::find_fo(app::builtin_fixtures(), "G30_100")->model;
    const double J = accuracy_J(synth_freq_data(g19(), default_grid(0.1)), fo43);
    CHECK(std::isfinite(J));
    CHECK(J == doctest::Approx(kGoldenJ43).epsilon(1e-6));
}

TEST_CASE("fitting the G30_100 frequency data") {
    const auto d = synth_freq_data(g19(), default_grid(0.1));
    const auto quarter = solve_levy(problem(d, 10, 10, RationalOrder(1, 4), Weighting::Vinagre));
    // published 3.6721e-6; two orders of magnitude either way
    CHECK(quarter.J > 3.6721e-8);
    CHECK(quarter.J < 3.6721e-4);
    const auto integer = solve_levy(problem(d, 2, 2, RationalOrder(1), Weighting::Vinagre));
    CHECK(integer.J / quarter.J >= 1e4);
}

TEST_CASE("weight scaling leaves the fit unchanged") {
    const auto d = synth_freq_data(g19(), make_grid(1e-2, 31.4, 60));
    const auto base = solve_levy(problem(d, 4, 4, RationalOrder(1, 2), Weighting::Vinagre));
    // scaling the data-side weights is the same as scaling every row by a constant
    Eigen::MatrixXd A;
    Eigen::VectorXd rhs;
    const auto p = problem(d, 4, 4, RationalOrder(1, 2), Weighting::Vinagre);
    levy_system(p, A, rhs);
    for (double c : {1e-3, 7.0, 1e4}) {
        const Eigen::MatrixXd As = A * std::sqrt(c);
        const Eigen::VectorXd rs = rhs * std::sqrt(c);
        const Eigen::VectorXd x0 = A.colPivHouseholderQr().solve(rhs);
        const Eigen::VectorXd x1 = As.colPivHouseholderQr().solve(rs);
        CHECK((x0 - x1).norm() <= 1e-10 * x0.norm());
    }
    CHECK(base.model.num().size() == 5);
}

TEST_CASE("stacked and summed aggregation agree on full-rank problems") {
    const auto m = CommensurateFoTf(RationalOrder(1, 2), {2.0, 0.5}, {1.0, 0.8, 0.4});
    const auto d = from_model(m, 40);
    const auto a = solve_levy(problem(d, 1, 2, RationalOrder(1, 2), Weighting::Uniform, Aggregation::Stacked));
    const auto b = solve_levy(problem(d, 1, 2, RationalOrder(1, 2), Weighting::Uniform, Aggregation::Summed));
    for (std::size_t k = 0; k < a.model.num().size(); ++k)
        CHECK(std::abs(a.model.num()[k] - b.model.num()[k]) <= 1e-8 * std::abs(a.model.num()[k]));
    for (std::size_t k = 0; k < a.model.den().size(); ++k)
        CHECK(std::abs(a.model.den()[k] - b.model.den()[k]) <= 1e-8 * std::max(1.0, std::abs(a.model.den()[k])));
}

TEST_CASE("q = 1 reduces to classic complex curve fitting") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        // noisy-ish target so the fit is a genuine least-squares problem
        const auto truth = random_stable_model(RationalOrder(1), 2, 3, rng);
        const auto d0 = from_model(truth, 25, 0.05, 20.0);
        std::vector<cd> v = d0.values();
        for (auto& x : v) x *= cd(1.0 + 0.05 * U(rng), 0.05 * U(rng));
        const FrequencyResponse d(d0.omegas(), v);
        const int m = 1, n = 2;
        const auto f = solve_levy(problem(d, m, n, RationalOrder(1)));
        const auto x = complex_levy(d, m, n);
        for (int k = 0; k <= m; ++k) CHECK(std::abs(f.model.num()[k] - x(k)) <= 1e-8 * std::max(1.0, std::abs(x(k))));
        for (int k = 1; k <= n; ++k)
            CHECK(std::abs(f.model.den()[k] - x(m + k)) <= 1e-8 * std::max(1.0, std::abs(x(m + k))));
    }
}

TEST_CASE("in-class recovery of random stable models") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto truth = random_stable_model(RationalOrder(1, 4), 10, 10, rng);
        const int m = static_cast<int>(truth.num_degree()), n = static_cast<int>(truth.den_degree());
        const auto d = from_model(truth, 60);
        const auto f = solve_levy(problem(d, m, n, RationalOrder(1, 4)));
        CHECK(f.J < 1e-10);
        CHECK(is_stable(truth).stable);
    }
}

TEST_CASE("q sweep") {
    const auto d = synth_freq_data(g19(), default_grid(0.1));
    const std::vector<RationalOrder> qs{RationalOrder(1), RationalOrder(1, 2), RationalOrder(1, 4),
                                        RationalOrder(1, 10), RationalOrder(1, 20), RationalOrder(1, 50),
                                        RationalOrder(1, 100)};
    const auto cells = q_sweep(d, RationalOrder(5, 2), qs);
    REQUIRE(cells.size() == 14);
    auto J = [&](std::size_t qi, Weighting w) {
        const auto& c = cells[2 * qi + (w == Weighting::Vinagre ? 1 : 0)];
        REQUIRE(c.fit.has_value());
        return c.fit->J;
    };
    for (auto w : {Weighting::Uniform, Weighting::Vinagre}) CHECK(J(0, w) / J(2, w) >= 1e4);
    // conditioning worsens from q = 1 down to q = 1/10
    for (std::size_t i = 1; i < 4; ++i) CHECK(cells[2 * i].fit->condition > cells[2 * (i - 1)].fit->condition);
    CHECK(cells[0].m == 2);
    CHECK(cells[2 * 2].m == 10);

    // the q = 1 cell is the plain integer Levy fit
    const auto direct = solve_levy(problem(d, 2, 2, RationalOrder(1)));
    CHECK(cells[0].fit->model == direct.model);

    const auto serial = q_sweep(d, RationalOrder(5, 2), qs, Aggregation::Stacked, kernels::Backend::Serial);
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].fit) CHECK(serial[i].fit->J == cells[i].fit->J);

    CHECK_THROWS_AS(sweep_order(RationalOrder(5, 2), RationalOrder(1, 3)), ArgumentError);
    CHECK(sweep_order(RationalOrder(5, 2), RationalOrder(1)) == 2);
}

TEST_CASE("order distribution") {
    const auto& f = app::find_fo(app::builtin_fixtures(), "G30_100")->model;
    const auto terms = order_distribution(f, 10, 10);
    REQUIRE(terms.size() == 11);
    CHECK(terms[0].order == 0.0);
    CHECK(terms[10].order == 2.5);
    CHECK(*terms[0].num == 189.2362);
    CHECK(*terms[1].num == -1343.1001);
    CHECK(*terms[10].den == 4.0473);

    const auto integer = order_distribution(CommensurateFoTf(RationalOrder(1), {1.0, 2.0}, {1.0, 0.5, 0.1}), 1, 2);
    REQUIRE(integer.size() == 3);
    CHECK(integer[2].order == 2.0);
    CHECK_FALSE(integer[2].num.has_value());
    CHECK(integer[2].den.has_value());
}

TEST_CASE("frequency CSV round trip") {
    const auto d = from_model(CommensurateFoTf(RationalOrder(1, 4), {1.0}, {1.0, 0.3}), 7);
    const auto back = parse_freq_csv(to_csv(d));
    CHECK(back.omegas() == d.omegas());
    CHECK(back.values() == d.values());
    CHECK_THROWS_AS(parse_freq_csv("omega,re,im\n2,1,0\n1,1,0\n"), ArgumentError);
}
