#pragma once

#include "fracid/app/config.hpp"
#include "fracid/app/fixtures.hpp"
#include "fracid/fotf/model_io.hpp"
#include "fracid/sysid/freq_domain.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fracid::app {

// Every command builds its whole output in memory first and only then writes
// the files (each through a temp file and rename), so a validation or
// numerical failure leaves nothing behind.

struct Output {
    std::vector<std::pair<std::filesystem::path, std::string>> files; // relative to the out dir
    std::string summary;                                               // printed to stdout
    int exit_code = 0;
};

/// Writes every file of `o` below `dir`.
void commit(const Output& o, const std::filesystem::path& dir);

/// A model given either as a file or as a fixture label. Labels may carry a
/// "fo:" or "discrete:" prefix; otherwise the command's natural kind is used.
struct ModelRef {
    std::optional<std::filesystem::path> file;
    std::optional<std::string> fixture;
};

struct IdentifyDiscreteArgs {
    std::optional<std::filesystem::path> data;
    std::optional<std::string> fixture; // regenerate a step-back record instead of reading data
    double noise_sigma = 0.0;
    std::vector<std::string> specs;
};
Output cmd_identify_discrete(const RunConfig& cfg, const IdentifyDiscreteArgs& a);

Output cmd_freqresp(const RunConfig& cfg, const ModelRef& model);

struct IdentifyFoArgs {
    std::optional<std::filesystem::path> data; // omega,re,im CSV
    std::optional<std::string> fixture;        // discrete fixture to sample
    std::optional<std::vector<RationalOrder>> q_list;
    std::optional<sysid::Weighting> weighting; // empty: both
    bool self_test = false;
};
Output cmd_identify_fo(const RunConfig& cfg, const IdentifyFoArgs& a);

Output cmd_analyze(const RunConfig& cfg, const ModelRef& model);

/// Empty plant list: the eight fractional fixtures.
Output cmd_tune(const RunConfig& cfg, const std::vector<ModelRef>& plants);
Output cmd_verify(const RunConfig& cfg, const ModelRef& controller, const std::vector<ModelRef>& plants);

enum class Scenario { Track, Disturb };
struct SimulateArgs {
    ModelRef plant;
    ModelRef controller; // fixture label "published" (or "controller") selects the built-in one
    Scenario scenario = Scenario::Track;
    double amplitude = 1.0;
};
Output cmd_simulate(const RunConfig& cfg, const SimulateArgs& a);

struct ReportArgs {
    std::optional<std::filesystem::path> fixtures_dir;
    bool tune = false;
};
Output cmd_report(const RunConfig& cfg, const ReportArgs& a);

Output cmd_export_fixtures(const RunConfig& cfg);

struct RegenerateArgs {
    std::string fixture;
    double drop = 0.0; // 0: the fixture's own drop fraction
    double noise_sigma = 0.0;
    double duration = 14.0;
};
Output cmd_regenerate(const RunConfig& cfg, const RegenerateArgs& a);

} // namespace fracid::app
