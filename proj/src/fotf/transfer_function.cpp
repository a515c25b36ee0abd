#include "fracid/fotf/transfer_function.hpp"

#include "fracid/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fracid {

CommensurateFoTf::CommensurateFoTf(RationalOrder q, poly::Coeffs num, poly::Coeffs den)
    : q_(q), num_(poly::trim(std::move(num))), den_(poly::trim(std::move(den))) {
    if (poly::is_zero(den_)) throw ArgumentError("transfer function denominator is identically zero");
    for (double v : num_)
        if (!std::isfinite(v)) throw ArgumentError("non-finite numerator coefficient");
    for (double v : den_)
        if (!std::isfinite(v)) throw ArgumentError("non-finite denominator coefficient");
}

CommensurateFoTf CommensurateFoTf::from_descending(RationalOrder q, std::span<const double> num,
                                                   std::span<const double> den) {
    return CommensurateFoTf(q, poly::Coeffs(num.rbegin(), num.rend()), poly::Coeffs(den.rbegin(), den.rend()));
}

CommensurateFoTf CommensurateFoTf::zero(RationalOrder q) {
    return CommensurateFoTf(q, {0.0}, {1.0});
}

DiscreteTf::DiscreteTf(std::vector<double> num, std::vector<double> den, double Ts)
    : num_(std::move(num)), den_(std::move(den)), Ts_(Ts) {
    if (!(Ts_ > 0.0) || !std::isfinite(Ts_)) throw ArgumentError("sample time must be positive");
    // leading zeros carry no information in descending storage
    while (num_.size() > 1 && num_.front() == 0.0) num_.erase(num_.begin());
    if (num_.empty()) num_.push_back(0.0);
    if (den_.empty() || den_.front() == 0.0) throw ArgumentError("discrete denominator leading coefficient is zero");
    if (num_.size() > den_.size()) throw ArgumentError("discrete transfer function is improper (deg num > deg den)");
}

double DiscreteTf::nyquist() const noexcept {
    return std::numbers::pi / Ts_;
}

double DiscreteTf::dc_gain() const {
    double n = 0.0, d = 0.0;
    for (double v : num_) n += v;
    for (double v : den_) d += v;
    if (d == 0.0) throw PoleAtFrequencyError("discrete transfer function has a pole at z = 1");
    return n / d;
}

FrequencyResponse::FrequencyResponse(std::vector<double> omegas, std::vector<std::complex<double>> values)
    : omegas_(std::move(omegas)), values_(std::move(values)) {
    if (omegas_.size() != values_.size()) throw ArgumentError("frequency response: length mismatch");
    if (omegas_.empty()) throw ArgumentError("frequency response: no frequencies");
    for (std::size_t i = 0; i < omegas_.size(); ++i) {
        if (!(omegas_[i] > 0.0) || !std::isfinite(omegas_[i]))
            throw ArgumentError("frequency response: frequencies must be positive");
        if (i > 0 && !(omegas_[i] > omegas_[i - 1]))
            throw ArgumentError("frequency response: frequencies must be strictly increasing");
    }
}

std::complex<double> jw_power(double omega, double order) {
    return std::polar(std::pow(omega, order), order * std::numbers::pi / 2.0);
}

std::complex<double> eval_fo(const CommensurateFoTf& tf, double omega) {
    if (!(omega > 0.0)) throw ArgumentError("eval_fo: omega must be positive");
    const double q = tf.q().value();
    std::complex<double> n = 0.0, d = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < tf.num().size(); ++k) n += tf.num()[k] * jw_power(omega, q * static_cast<double>(k));
    for (std::size_t k = 0; k < tf.den().size(); ++k) {
        const auto b = jw_power(omega, q * static_cast<double>(k));
        d += tf.den()[k] * b;
        scale += std::abs(tf.den()[k]) * std::abs(b);
    }
    if (std::abs(d) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
        std::ostringstream os;
        os << "transfer function has a pole at omega = " << omega;
        throw PoleAtFrequencyError(os.str());
    }
    return n / d;
}

std::complex<double> eval_discrete(const DiscreteTf& tf, double omega) {
    if (!(omega > 0.0) || omega > tf.nyquist() * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "eval_discrete: omega = " << omega << " outside (0, " << tf.nyquist() << "]";
        throw ArgumentError(os.str());
    }
    const auto z = std::polar(1.0, omega * tf.Ts());
    std::complex<double> n = 0.0, d = 0.0;
    for (double v : tf.num()) n = n * z + v;
    for (double v : tf.den()) d = d * z + v;
    if (d == 0.0) throw PoleAtFrequencyError("discrete transfer function has a pole on the unit circle");
    return n / d;
}

FrequencyResponse synth_freq_data(const DiscreteTf& tf, std::span<const double> grid) {
    if (grid.empty()) throw ArgumentError("synth_freq_data: empty frequency grid");
    std::vector<std::complex<double>> values;
    values.reserve(grid.size());
    for (double w : grid) values.push_back(eval_discrete(tf, w));
    return FrequencyResponse({grid.begin(), grid.end()}, std::move(values));
}

FrequencyResponse synth_freq_data(const CommensurateFoTf& tf, std::span<const double> grid) {
    if (grid.empty()) throw ArgumentError("synth_freq_data: empty frequency grid");
    std::vector<std::complex<double>> values;
    values.reserve(grid.size());
    for (double w : grid) values.push_back(eval_fo(tf, w));
    return FrequencyResponse({grid.begin(), grid.end()}, std::move(values));
}

std::vector<double> make_grid(double lo, double hi, std::size_t count, GridSpacing spacing) {
    if (count == 0) throw ArgumentError("grid: count must be positive");
    if (!(lo > 0.0) || !(hi >= lo)) throw ArgumentError("grid: need 0 < lo <= hi");
    if (count == 1) return {lo};
    if (hi == lo) throw ArgumentError("grid: lo == hi with more than one point");
    std::vector<double> g(count);
    const double denom = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / denom;
        g[i] = spacing == GridSpacing::Log ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> default_grid(double Ts) {
    return make_grid(1e-3, std::numbers::pi / Ts, 100, GridSpacing::Log);
}

} // namespace fracid
