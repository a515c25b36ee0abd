#include "fracid/sim/gl.hpp"

#include "fracid/control/tuning.hpp"
#include "fracid/errors.hpp"
#include "fracid/fotf/wplane.hpp"
#include "fracid/io/csv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fracid::sim {

std::vector<double> gl_weights(double alpha, std::size_t count) {
    if (count == 0) throw ArgumentError("gl_weights: count must be positive");
    std::vector<double> c(count);
    c[0] = 1.0;
    for (std::size_t j = 1; j < count; ++j) c[j] = c[j - 1] * (1.0 - (alpha + 1.0) / static_cast<double>(j));
    return c;
}

std::size_t SimConfig::steps() const { return static_cast<std::size_t>(std::llround(T / h)) + 1; }

void SimConfig::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw ArgumentError("simulation: step h must be positive");
    if (!(T >= h) || !std::isfinite(T)) throw ArgumentError("simulation: horizon T must be at least h");
}

namespace {

// A_j = sum_k c_k h^{-kq} w_j^{(kq)} for the polynomial c in w = s^q.
std::vector<double> aggregate(const poly::Coeffs& c, double q, double h, std::size_t count, double* scale_sum) {
    std::vector<double> A(count, 0.0);
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0.0) continue;
        const double alpha = static_cast<double>(k) * q;
        const double g = c[k] * std::pow(h, -alpha);
        s += std::abs(g);
        const auto w = gl_weights(alpha, count);
        for (std::size_t j = 0; j < count; ++j) A[j] += g * w[j];
    }
    if (scale_sum) *scale_sum = s;
    return A;
}

std::vector<double> time_axis(const SimConfig& cfg) {
    std::vector<double> t(cfg.steps());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k) * cfg.h;
    return t;
}

} // namespace

std::vector<double> gl_response(const CommensurateFoTf& tf, std::span<const double> u, const SimConfig& cfg) {
    cfg.validate();
    if (tf.num_degree() > tf.den_degree() && !tf.is_zero())
        throw ArgumentError("simulation: transfer function must be proper in s^q");
    const std::size_t n_steps = u.size();
    if (n_steps == 0) return {};
    const std::size_t len = cfg.window == 0 ? n_steps : std::min(cfg.window, n_steps);
    const double q = tf.q().value();

    double scale = 0.0;
    const auto A = aggregate(tf.den(), q, cfg.h, len, &scale);
    const auto B = aggregate(tf.num(), q, cfg.h, len, nullptr);
    if (!(std::abs(A[0]) > 1e-12 * scale))
        throw NumericalError("simulation: instantaneous coefficient vanishes at this step size; try a smaller h");

    std::vector<double> rhs(n_steps);
    kernels::causal_convolve(cfg.backend, B, u, rhs, len);

    std::vector<double> y(n_steps, 0.0);
    for (std::size_t n = 0; n < n_steps; ++n) {
        const std::size_t hist = std::min(n, len - 1);
        y[n] = (rhs[n] - kernels::history_dot(cfg.backend, A, y, n, hist)) / A[0];
    }
    return y;
}

SimResult simulate_fo(const CommensurateFoTf& tf, std::span<const double> u, const SimConfig& cfg) {
    cfg.validate();
    if (u.size() != cfg.steps()) throw ArgumentError("simulation: input length does not match T/h + 1");
    SimResult r;
    r.t = time_axis(cfg);
    r.y = gl_response(tf, u, cfg);
    r.u_ctrl.assign(u.begin(), u.end());
    r.e.resize(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) r.e[k] = u[k] - r.y[k];
    r.reference = u.back();
    return r;
}

namespace {

struct Loop {
    RationalOrder q;
    poly::Coeffs nc, dc, ng, dg, dcl;
};

Loop make_loop(const CommensurateFoTf& plant, const control::ContinuousOrderPid& c) {
    const auto [g, k] = to_common_base(plant, control::controller_tf(c));
    Loop L{g.q(), k.num(), k.den(), g.num(), g.den(), {}};
    L.dcl = poly::add(poly::multiply(L.dc, L.dg), poly::multiply(L.nc, L.ng));
    return L;
}

void stability_warning(SimResult& r, const CommensurateFoTf& plant, const control::ContinuousOrderPid& c) {
    try {
        const auto v = control::verify(c, {plant});
        if (!v.all_stable) {
            std::ostringstream os;
            os << "closed loop is not stable (min |arg| " << v.min_angle_deg[0] << " deg); simulating anyway";
            r.warnings.push_back(os.str());
        }
    } catch (const Error& e) {
        r.warnings.push_back(std::string("closed-loop stability check failed: ") + e.what());
    }
}

} // namespace

SimResult closed_loop_step(const CommensurateFoTf& plant, const control::ContinuousOrderPid& c, double amplitude,
                           const SimConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(amplitude)) throw ArgumentError("simulation: amplitude must be finite");
    SimResult r;
    stability_warning(r, plant, c);
    const auto L = make_loop(plant, c);
    r.t = time_axis(cfg);
    const std::vector<double> ref(r.t.size(), amplitude);
    r.y = gl_response(CommensurateFoTf(L.q, poly::multiply(L.nc, L.ng), L.dcl), ref, cfg);
    r.u_ctrl = gl_response(CommensurateFoTf(L.q, poly::multiply(L.nc, L.dg), L.dcl), ref, cfg);
    r.e.resize(ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) r.e[k] = ref[k] - r.y[k];
    r.reference = amplitude;
    return r;
}

SimResult disturbance_step(const CommensurateFoTf& plant, const control::ContinuousOrderPid& c, double amplitude,
                           const SimConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(amplitude)) throw ArgumentError("simulation: amplitude must be finite");
    SimResult r;
    stability_warning(r, plant, c);
    const auto L = make_loop(plant, c);
    r.t = time_axis(cfg);
    const std::vector<double> d(r.t.size(), amplitude);
    r.y = gl_response(CommensurateFoTf(L.q, poly::multiply(L.ng, L.dc), L.dcl), d, cfg);
    r.u_ctrl = gl_response(CommensurateFoTf(L.q, poly::multiply(L.nc, L.ng), L.dcl), d, cfg);
    for (auto& v : r.u_ctrl) v = -v;
    r.e.resize(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) r.e[k] = -r.y[k];
    r.reference = 0.0;
    return r;
}

double peak_deviation(const SimResult& r) {
    double m = 0.0;
    for (double v : r.y) m = std::max(m, std::abs(v - r.reference));
    return m;
}

double overshoot(const SimResult& r) {
    if (r.y.empty()) return 0.0;
    if (r.reference == 0.0) return peak_deviation(r);
    const double sign = r.reference > 0.0 ? 1.0 : -1.0;
    double worst = 0.0;
    for (double v : r.y) worst = std::max(worst, sign * (v - r.reference));
    return worst / std::abs(r.reference);
}

double settling_time(const SimResult& r, double band_fraction) {
    if (r.y.empty()) throw ArgumentError("settling_time: empty result");
    if (!(band_fraction > 0.0)) throw ArgumentError("settling_time: band fraction must be positive");
    const double base = r.reference != 0.0 ? std::abs(r.reference) : peak_deviation(r);
    if (base == 0.0) return 0.0;
    const double band = band_fraction * base;
    auto dev = [&](std::size_t k) { return std::abs(r.y[k] - r.reference); };
    std::size_t last_out = r.y.size();
    for (std::size_t k = r.y.size(); k-- > 0;) {
        if (dev(k) > band) {
            last_out = k;
            break;
        }
    }
    if (last_out == r.y.size()) return 0.0;
    if (last_out + 1 == r.y.size()) return std::numeric_limits<double>::infinity();
    const double d0 = dev(last_out), d1 = dev(last_out + 1);
    const double frac = d0 == d1 ? 0.0 : (d0 - band) / (d0 - d1);
    return r.t[last_out] + frac * (r.t[last_out + 1] - r.t[last_out]);
}

std::string to_csv(const SimResult& r) { return csv::write({"t", "y", "u_ctrl", "e"}, {r.t, r.y, r.u_ctrl, r.e}); }

} // namespace fracid::sim
