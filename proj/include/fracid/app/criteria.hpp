#pragma once

#include "fracid/app/config.hpp"
#include "fracid/app/fixtures.hpp"
#include "fracid/sim/gl.hpp"
#include "fracid/sysid/freq_domain.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fracid::app {

// Reproduction checks shared by the report command and the acceptance
// binary. Each returns a verdict plus the measured numbers behind it.

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::vector<std::string> details;
};

std::string format_line(const CriterionResult& r); // "[PASS] 1 name"

struct PoleArgRow {
    std::string label;
    std::size_t index = 0;
    double computed = 0.0;
    double published = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Upper-half-plane open-loop pole arguments against the published values,
/// both sorted ascending. The ambiguous G50_80 transcription gets 0.5 deg.
std::vector<PoleArgRow> pole_argument_rows(const FixtureBank& bank);
CriterionResult check_pole_arguments(const FixtureBank& bank);
CriterionResult check_stability_screen(const FixtureBank& bank);
CriterionResult check_controller(const FixtureBank& bank);
CriterionResult check_retuning(const FixtureBank& bank, const TuningSettings& settings, std::uint64_t seed);

struct SweepSummary {
    std::vector<sysid::SweepCell> cells;
    FrequencyResponse data;
};
SweepSummary fixture_sweep(const FixtureBank& bank, const std::string& label, const GridConfig& grid,
                           const IdentifySettings& settings);
CriterionResult check_q_sweep(const SweepSummary& sweep);

struct RecoveryTrial {
    int m = 0, n = 0;
    double J = 0.0;
    double condition = 0.0;
};
std::vector<RecoveryTrial> recovery_trials(std::uint64_t seed, int trials);
CriterionResult check_recovery(const std::vector<RecoveryTrial>& trials);

CriterionResult check_gl_accuracy();

struct HeadlineRuns {
    sim::SimResult track_30, track_50;   // G30_100 and G50_100 with the fixture controller
    std::vector<sim::SimResult> disturb; // every fractional fixture, input order
};
HeadlineRuns headline_runs(const FixtureBank& bank, const SimSettings& settings);
CriterionResult check_closed_loop(const FixtureBank& bank, const HeadlineRuns& runs);

CriterionResult check_identification_suite(std::uint64_t seed);

} // namespace fracid::app
