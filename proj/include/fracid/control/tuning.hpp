#pragma once

#include "fracid/control/copid.hpp"
#include "fracid/kernels/parallel.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fracid::control {

struct NelderMeadConfig {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double step_fraction = 0.05;  // initial simplex edge relative to |x_i|
    double zero_step = 0.00025;   // edge used when x_i == 0
    double x_tolerance = 1e-8;    // simplex diameter (max-norm)
    double f_tolerance = 1e-10;   // objective spread across vertices
    int max_iterations = 4000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::vector<double> trace; // best objective after each iteration
};

using Objective = std::function<double(std::span<const double>)>;

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadConfig& cfg = {});

inline constexpr double kObjectiveSentinel = 1e12;
inline constexpr double kConePenalty = 1e3;
inline constexpr double kHyperdampedTolDeg = 1e-3;

struct TuningProblem {
    std::vector<CommensurateFoTf> plants;
    RationalOrder q{1, 4};
    int N = 10;
    double initial_gain = 1e-4;
    double target_angle_deg = 0.0; // 0 selects 180 q
    NelderMeadConfig simplex;
    int restarts = 20;
    std::uint64_t seed = 1;

    double target() const { return target_angle_deg > 0.0 ? target_angle_deg : 180.0 * q.value(); }
    void validate() const;
};

/// Norm over every closed-loop root of every plant of |arg| - target, with
/// roots inside the stability cone charged an extra 1e3 per degree.
double objective_Jbar(std::span<const double> gains, const TuningProblem& problem);
double objective_from_poles(const std::vector<WPlanePoleSet>& sets, double target_deg);

struct RestartSummary {
    double objective = 0.0;
    bool hyperdamped = false;
    bool converged = false;
    int iterations = 0;
};

struct TuningReport {
    ContinuousOrderPid controller;
    double objective = 0.0;
    double target_angle_deg = 45.0;
    std::vector<WPlanePoleSet> poles; // per plant, input order
    std::vector<double> min_angle_deg;
    bool all_hyperdamped = false;
    bool all_stable = false;
    std::vector<double> trace;
    std::size_t chosen_restart = 0;
    std::vector<RestartSummary> restarts;
};

TuningReport tune(const TuningProblem& problem, kernels::Backend backend = kernels::Backend::OpenMP);

/// Pole report for a fixed controller (no optimization).
TuningReport verify(const ContinuousOrderPid& c, const std::vector<CommensurateFoTf>& plants,
                    double target_angle_deg = 0.0);

/// Structured text and per-plant CSV (plant,min_angle_deg,stable,hyperdamped).
std::string report_text(const TuningReport& r, const std::vector<std::string>& plant_names = {});
std::string min_angle_csv(const TuningReport& r, const std::vector<std::string>& plant_names = {});

} // namespace fracid::control
