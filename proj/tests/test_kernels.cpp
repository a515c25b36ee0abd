#include "fracid/io/csv.hpp"
#include "fracid/kernels/parallel.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace fracid;
using namespace fracid::kernels;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = U(rng);
    return v;
}

} // namespace

TEST_CASE("history dot: serial and parallel agree") {
    const auto w = noise(60000, 1), x = noise(60000, 2);
    for (std::size_t len : {0ul, 1ul, 100ul, 2048ul, 2049ul, 9000ul, 59999ul}) {
        const std::size_t n = 59999;
        const double s = history_dot_serial(w, x, n, len);
        const double p = history_dot_parallel(w, x, n, len);
        CHECK(std::abs(s - p) <= 1e-12 * (1.0 + std::abs(s)));
        // chunked result does not depend on the run
        CHECK(p == history_dot_parallel(w, x, n, len));
    }
}

TEST_CASE("causal convolution: serial and parallel are identical") {
    const auto b = noise(5000, 3), u = noise(5000, 4);
    for (std::size_t window : {1ul, 7ul, 5000ul}) {
        std::vector<double> s(5000), p(5000);
        causal_convolve_serial(b, u, s, window);
        causal_convolve_parallel(b, u, p, window);
        CHECK(s == p);
    }
    // direct definition for a small case
    const std::vector<double> bb{1.0, 2.0, 3.0}, uu{1.0, 1.0, 1.0, 1.0};
    std::vector<double> out(4);
    causal_convolve_serial(bb, uu, out, 3);
    CHECK(out == std::vector<double>{1.0, 3.0, 6.0, 6.0});
}

TEST_CASE("for_each_index covers every index once and rethrows the first error") {
    std::vector<int> hits(1000, 0);
    for_each_index(Backend::OpenMP, hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    try {
        for_each_index(Backend::OpenMP, 50, [](std::size_t i) {
            if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "7");
    }
}

TEST_CASE("csv helpers") {
    CHECK(csv::format(0.1) == "0.1");
    CHECK(std::stod(csv::format(1.0 / 3.0)) == 1.0 / 3.0);
    const auto text = csv::write({"a", "b"}, {{1.0, 2.0}, {3.0, 4.5}});
    const auto t = csv::parse(text, {"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][1] == 4.5);
    CHECK_THROWS(csv::parse("x,y\n1,2\n", {"a", "b"}));
}
