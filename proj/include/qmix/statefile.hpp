// Parsing of user-facing state and scenario descriptions.
//
// A state is one of:
//   - a named family string: "bell:phi+", "werner:0.3",
//     "bell_diagonal:p1,p2,p3,p4", "maximally_mixed"
//   - a JSON object {"fano": {"a": [..], "b": [..], "C": [[..]x3]}}
//   - a JSON object {"matrix": {"dim": n, "entries": [[re,im] x n*n]},
//      optional "dims": [dA, dB]}
//
// A scenario file carries a tagged mixture plus optional simulation
// parameters; see the README for the full schema.

#pragma once

#include <optional>
#include <string>

#include "qmix/ensemble.hpp"
#include "qmix/families.hpp"
#include "qmix/report.hpp"

namespace qmix {

struct ParsedState {
    DensityOperator rho;
    std::string label;
};

// True when the argument reads as a named family rather than a file path.
bool is_family_string(const std::string& arg);

DensityOperator parse_family(const std::string& family);

ParsedState load_state_file(const std::string& path);

// Family string if it looks like one, otherwise a path to a state file.
ParsedState resolve_state_arg(const std::string& arg);

struct SimulationParams {
    std::uint64_t n_runs = 100000;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 1;
    RngAlgorithm rng_algorithm = RngAlgorithm::SplitMix64;
    std::optional<CHSHSettings> explicit_settings; // nullopt = per-source optimal
};

struct ScenarioSpec {
    MixtureSpec spec;
    std::optional<SimulationParams> simulation;
};

ScenarioSpec load_scenario_file(const std::string& path);

// Comma-separated doubles ("0.5,0.5"); used by CLI flag parsing.
std::vector<double> parse_double_list(const std::string& csv);
std::vector<int> parse_int_list(const std::string& csv);

} // namespace qmix
