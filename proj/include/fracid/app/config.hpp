#pragma once

#include "fracid/fotf/rational_order.hpp"
#include "fracid/fotf/transfer_function.hpp"
#include "fracid/sysid/freq_domain.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fracid::app {

struct GridConfig {
    double min = 1e-3;
    double max = 0.0; // 0: Nyquist of the source model (pi/Ts), or pi/0.1 for fractional sources
    std::size_t count = 100;
    GridSpacing spacing = GridSpacing::Log;

    std::vector<double> build(double nyquist) const;
};

struct SimSettings {
    double h = 0.05;
    double T = 2000.0;
    std::size_t window = 0;
};

struct TuningSettings {
    RationalOrder q{1, 4};
    int N = 10;
    int restarts = 20;
    int max_iterations = 4000;
    double initial_gain = 1e-4;
    double target_angle_deg = 0.0;
};

struct IdentifySettings {
    RationalOrder max_order{5, 2};
    std::vector<RationalOrder> q_list{{1}, {1, 2}, {1, 4}, {1, 10}, {1, 20}, {1, 50}, {1, 100}};
    sysid::Aggregation aggregation = sysid::Aggregation::Stacked;
    double condition_threshold = sysid::kConditionThreshold;
};

/// Everything a command needs besides its own flags. Loaded from a JSON
/// object whose keys mirror these fields; unknown keys are rejected.
struct RunConfig {
    GridConfig grid;
    SimSettings sim;
    TuningSettings tuning;
    IdentifySettings identify;
    std::filesystem::path out = "out";
    std::uint64_t seed = 1;

    void validate() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string serialize(const RunConfig& cfg);

std::vector<RationalOrder> parse_q_list(const std::string& text); // "1,1/2,1/4"

} // namespace fracid::app
