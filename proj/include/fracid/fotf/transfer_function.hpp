#pragma once

#include "fracid/fotf/polynomial.hpp"
#include "fracid/fotf/rational_order.hpp"

#include <complex>
#include <span>
#include <vector>

namespace fracid {

/// Commensurate fractional-order transfer function
///
///     G(s) = sum_k num[k] (s^q)^k / sum_k den[k] (s^q)^k
///
/// Coefficients are ascending in powers of w = s^q. Trailing (high-order)
/// zeros are trimmed on construction.
class CommensurateFoTf {
public:
    CommensurateFoTf(RationalOrder q, poly::Coeffs num, poly::Coeffs den);

    /// Convenience: coefficients listed from the highest power down, the way
    /// the models are usually printed.
    static CommensurateFoTf from_descending(RationalOrder q, std::span<const double> num, std::span<const double> den);

    /// The zero transfer function 0/1.
    static CommensurateFoTf zero(RationalOrder q);

    RationalOrder q() const noexcept { return q_; }
    const poly::Coeffs& num() const noexcept { return num_; }
    const poly::Coeffs& den() const noexcept { return den_; }
    std::size_t num_degree() const noexcept { return num_.size() - 1; }
    std::size_t den_degree() const noexcept { return den_.size() - 1; }
    bool is_zero() const noexcept { return poly::is_zero(num_); }

    friend bool operator==(const CommensurateFoTf&, const CommensurateFoTf&) = default;

private:
    RationalOrder q_;
    poly::Coeffs num_;
    poly::Coeffs den_;
};

/// Rational transfer function in z with descending coefficients and sample
/// time Ts (seconds).
class DiscreteTf {
public:
    DiscreteTf(std::vector<double> num, std::vector<double> den, double Ts);

    const std::vector<double>& num() const noexcept { return num_; }
    const std::vector<double>& den() const noexcept { return den_; }
    double Ts() const noexcept { return Ts_; }
    double nyquist() const noexcept;

    /// num(1)/den(1).
    double dc_gain() const;

    friend bool operator==(const DiscreteTf&, const DiscreteTf&) = default;

private:
    std::vector<double> num_;
    std::vector<double> den_;
    double Ts_;
};

/// Sampled frequency response; omegas strictly increasing and positive.
class FrequencyResponse {
public:
    FrequencyResponse(std::vector<double> omegas, std::vector<std::complex<double>> values);

    const std::vector<double>& omegas() const noexcept { return omegas_; }
    const std::vector<std::complex<double>>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return omegas_.size(); }

private:
    std::vector<double> omegas_;
    std::vector<std::complex<double>> values_;
};

/// (j omega)^(order) on the principal branch.
std::complex<double> jw_power(double omega, double order);

std::complex<double> eval_fo(const CommensurateFoTf& tf, double omega);
std::complex<double> eval_discrete(const DiscreteTf& tf, double omega);

FrequencyResponse synth_freq_data(const DiscreteTf& tf, std::span<const double> grid);
FrequencyResponse synth_freq_data(const CommensurateFoTf& tf, std::span<const double> grid);

enum class GridSpacing { Log, Linear };

/// `count` points from lo to hi inclusive; the end points are exact.
std::vector<double> make_grid(double lo, double hi, std::size_t count, GridSpacing spacing = GridSpacing::Log);

/// 100 log-spaced points from 1e-3 rad/s to the Nyquist frequency pi/Ts.
std::vector<double> default_grid(double Ts);

} // namespace fracid
