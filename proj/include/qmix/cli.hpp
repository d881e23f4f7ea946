// Command implementations behind the qmix binary. Kept out of main() so the
// test suite can drive them directly and check reports and exit codes.
//
// Exit codes: 0 success, 2 input/validation error, 3 internal invariant
// failure.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace qmix {

struct ClassifyOptions {
    std::string state_arg;   // family string or state-file path
    double tol = 1e-9;
    std::string out_path;    // empty = stdout
};

struct SweepOptions {
    std::string family = "werner";
    double from = 0.0;
    double to = 1.0;
    int steps = 100;
    double tol = 1e-9;
    std::string out_path;
};

struct ScenarioOptions {
    std::string path;
    double tol = 1e-9;
    std::optional<std::uint64_t> seed_override;
    std::string dump_ensemble_path; // optional EnsembleRecord JSON dump
    std::string out_path;
};

struct TypicalityOptions {
    std::string p_csv = "0.5,0.5";
    double epsilon = 0.1;
    std::string m_list_csv = "25,100,400";
    int cap = 1000;
    std::string out_path;
};

int cmd_classify(const ClassifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);
int cmd_scenario(const ScenarioOptions& opts, std::ostream& out, std::ostream& err);
int cmd_typicality(const TypicalityOptions& opts, std::ostream& out, std::ostream& err);

} // namespace qmix
