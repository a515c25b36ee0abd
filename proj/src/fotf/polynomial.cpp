#include "fracid/fotf/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace fracid::poly {

Coeffs trim(Coeffs c) {
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    if (c.empty()) c.push_back(0.0);
    return c;
}

std::size_t degree(std::span<const double> c) {
    std::size_t d = c.size();
    while (d > 1 && c[d - 1] == 0.0) --d;
    return d == 0 ? 0 : d - 1;
}

bool is_zero(std::span<const double> c) {
    return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
}

Coeffs add(std::span<const double> a, std::span<const double> b) {
    Coeffs out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return trim(std::move(out));
}

Coeffs multiply(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {0.0};
    Coeffs out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return trim(std::move(out));
}

Coeffs stretch(std::span<const double> c, std::size_t stride) {
    if (c.empty()) return {0.0};
    Coeffs out((c.size() - 1) * stride + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) out[i * stride] = c[i];
    return out;
}

std::complex<double> evaluate(std::span<const double> c, std::complex<double> x) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

Coeffs from_roots(std::span<const std::complex<double>> roots, double leading) {
    std::vector<std::complex<double>> acc{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(acc.size() + 1, 0.0);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i + 1] += acc[i];
            next[i] -= r * acc[i];
        }
        acc = std::move(next);
    }
    Coeffs out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = leading * acc[i].real();
    return out;
}

double max_abs(std::span<const double> c) {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    return m;
}

} // namespace fracid::poly
