#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fracid::poly {

// Real polynomials are stored as coefficient vectors in ascending powers:
// p(x) = c[0] + c[1] x + ... + c[n] x^n.
using Coeffs = std::vector<double>;

/// Drops zero high-order coefficients, keeping at least one entry.
Coeffs trim(Coeffs c);

/// Degree after trimming; the zero polynomial has degree 0.
std::size_t degree(std::span<const double> c);

bool is_zero(std::span<const double> c);

Coeffs add(std::span<const double> a, std::span<const double> b);
Coeffs multiply(std::span<const double> a, std::span<const double> b);

/// Substitutes x -> x^stride (re-spacing onto a finer commensurate base).
Coeffs stretch(std::span<const double> c, std::size_t stride);

std::complex<double> evaluate(std::span<const double> c, std::complex<double> x);

/// Monic-scaled real polynomial with the given roots; complex roots must
/// come in conjugate pairs. `leading` is the coefficient of the top power.
Coeffs from_roots(std::span<const std::complex<double>> roots, double leading = 1.0);

double max_abs(std::span<const double> c);

} // namespace fracid::poly
