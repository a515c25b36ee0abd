#pragma once

#include "fracid/control/copid.hpp"
#include "fracid/fotf/transfer_function.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fracid::app {

// Reactor step-back models: rod drop {30, 50}% from initial power
// {100, 90, 80, 70}%. Discrete models are sampled at 0.1 s; the
// fractional ones use q = 1/4 with top order 2.5.

struct DiscreteFixture {
    std::string label; // e.g. "G30_100"
    int drop = 0;      // rod drop, percent
    int power = 0;     // initial power, percent
    DiscreteTf model;
};

struct FoFixture {
    std::string label;
    int drop = 0;
    int power = 0;
    CommensurateFoTf model;
    std::array<double, 5> published_args; // |arg| of each conjugate pair / real pole, degrees
    std::optional<std::string> note;      // transcription caveat
};

struct FixtureBank {
    std::vector<DiscreteFixture> discrete;
    std::vector<FoFixture> fo;
    control::ContinuousOrderPid controller;
};

const FixtureBank& builtin_fixtures();

/// Compares the bank against the compiled-in checksums: dc gains of the
/// discrete models (relative 1e-6) and the exact constant terms of the
/// fractional models. Returns one message per mismatch.
std::vector<std::string> checksum_failures(const FixtureBank& bank);

/// Writes one JSON file per model plus controller.json into dir.
void export_fixtures(const FixtureBank& bank, const std::filesystem::path& dir);

/// Reads a directory written by export_fixtures; published pole
/// arguments and notes come from the built-in bank.
FixtureBank load_fixtures(const std::filesystem::path& dir);

const DiscreteFixture* find_discrete(const FixtureBank& bank, std::string_view label);
const FoFixture* find_fo(const FixtureBank& bank, std::string_view label);

std::vector<CommensurateFoTf> fo_plants(const FixtureBank& bank);
std::vector<std::string> fo_labels(const FixtureBank& bank);

} // namespace fracid::app
