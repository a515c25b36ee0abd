#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fracid {

struct RootOptions {
    int max_sweeps = 2000;
    int polish_steps = 3;
    // |p(r)| <= residual_scale * max|c| * max(1,|r|)^deg is required of every root.
    double residual_scale = 1e-8;
};

/// All roots of the real polynomial with ascending coefficients `c`, by
/// Aberth-Ehrlich simultaneous iteration. Initial guesses sit on circles whose
/// radii come from the upper convex hull of (i, log|c_i|), so the result is
/// fully deterministic. Complex roots are returned as exact conjugate pairs,
/// ordered by |arg| then sign of the imaginary part.
///
/// Throws ArgumentError for constant polynomials and NumericalError when the
/// iteration does not converge or a root fails the residual check.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> c, const RootOptions& opts = {});

} // namespace fracid
