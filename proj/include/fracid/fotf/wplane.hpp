#pragma once

#include "fracid/fotf/rational_order.hpp"
#include "fracid/fotf/roots.hpp"
#include "fracid/fotf/transfer_function.hpp"

#include <complex>
#include <string_view>
#include <utility>
#include <vector>

namespace fracid {

enum class DampingClass { Unstable, Underdamped, Overdamped, Hyperdamped, Ultradamped };

std::string_view to_string(DampingClass c);

inline constexpr double kDefaultAngleTolDeg = 1e-6;

struct Classification {
    DampingClass cls;
    bool boundary; // within tolerance of the stability boundary 90q degrees
};

/// Sheet classification of a w-plane root from |arg| in degrees:
///   [0, 90q)        unstable
///   [90q, 180q)     underdamped (primary sheet)
///   180q +- tol     overdamped
///   (180q, 180)     hyperdamped (secondary sheet and beyond)
///   >= 180 - tol    ultradamped
Classification classify(double arg_deg, RationalOrder q, double tol_deg = kDefaultAngleTolDeg);

struct WPlanePole {
    std::complex<double> root;
    double arg_deg;   // signed principal argument
    double modulus;
    DampingClass cls;
    bool boundary;
};

struct WPlanePoleSet {
    RationalOrder q;
    std::vector<WPlanePole> poles;

    /// Smallest |arg| in degrees (180 for an empty set).
    double min_abs_arg_deg() const;
    bool all_stable() const;
    bool all_hyperdamped(double tol_deg) const;
};

WPlanePoleSet classify_roots(const std::vector<std::complex<double>>& roots, RationalOrder q,
                             double tol_deg = kDefaultAngleTolDeg);

/// Roots of a real polynomial in w (ascending coefficients).
std::vector<std::complex<double>> wplane_roots(std::span<const double> coeffs, const RootOptions& opts = {});

struct StabilityResult {
    bool stable; // every pole strictly outside the cone |arg| <= 90q
    WPlanePoleSet poles;
};

StabilityResult is_stable(const CommensurateFoTf& tf, double tol_deg = kDefaultAngleTolDeg);

/// Same transfer function expressed over a finer base `q` (which must divide tf.q()).
CommensurateFoTf respace(const CommensurateFoTf& tf, RationalOrder q);

std::pair<CommensurateFoTf, CommensurateFoTf> to_common_base(const CommensurateFoTf& a, const CommensurateFoTf& b);

struct CharPoly {
    RationalOrder q;
    poly::Coeffs coeffs; // ascending in w = s^q
};

/// Unity-feedback characteristic polynomial D_C D_G + N_C N_G over the
/// shared base. No pole/zero cancellation is attempted.
CharPoly closed_loop_char_poly(const CommensurateFoTf& plant, const CommensurateFoTf& controller);

} // namespace fracid
