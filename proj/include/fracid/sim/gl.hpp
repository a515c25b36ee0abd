#pragma once

#include "fracid/control/copid.hpp"
#include "fracid/fotf/transfer_function.hpp"
#include "fracid/kernels/parallel.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fracid::sim {

/// Grünwald-Letnikov binomial weights: c_0 = 1, c_j = c_{j-1} (1 - (alpha + 1)/j).
std::vector<double> gl_weights(double alpha, std::size_t count);

struct SimConfig {
    double h = 0.05;
    double T = 2000.0;
    std::size_t window = 0; // 0 keeps the full history, otherwise sums stop at j < window
    kernels::Backend backend = kernels::Backend::OpenMP;

    std::size_t steps() const; // number of samples, t = 0, h, ..., T
    void validate() const;
};

struct SimResult {
    std::vector<double> t, y, u_ctrl, e;
    double reference = 0.0; // final value the output should reach
    std::vector<std::string> warnings;
};

/// Output of tf driven by u (sampled at t = k h, at rest before t = 0).
std::vector<double> gl_response(const CommensurateFoTf& tf, std::span<const double> u, const SimConfig& cfg);

/// Open loop: u_ctrl is the input, e = u - y.
SimResult simulate_fo(const CommensurateFoTf& tf, std::span<const double> u, const SimConfig& cfg);

/// Unity feedback, reference step of height `amplitude` at t = 0.
SimResult closed_loop_step(const CommensurateFoTf& plant, const control::ContinuousOrderPid& c, double amplitude,
                           const SimConfig& cfg);

/// Unity feedback with zero reference and a step of height `amplitude`
/// added at the plant input.
SimResult disturbance_step(const CommensurateFoTf& plant, const control::ContinuousOrderPid& c, double amplitude,
                           const SimConfig& cfg);

/// Time after which the output stays inside reference +- band, where band is
/// band_fraction of |reference|, or of the peak |y| when the reference is 0.
/// Crossings are linearly interpolated; infinity if the last sample is outside.
double settling_time(const SimResult& r, double band_fraction);

/// (max y - reference) / |reference|, clipped at 0; relative to peak when reference is 0.
double overshoot(const SimResult& r);
double peak_deviation(const SimResult& r);

std::string to_csv(const SimResult& r);

} // namespace fracid::sim
