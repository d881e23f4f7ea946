// qmix: classify two-qubit states, sweep the Werner family, run tagged
// ensemble scenarios, and tabulate preparation-sequence typicality weights.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qmix/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"two-qubit mixtures, separability, and seeded ensemble simulation"};
    app.require_subcommand(1);

    qmix::ClassifyOptions classify_opts;
    CLI::App* classify = app.add_subcommand(
        "classify", "classify a state (family string or state-file path)");
    classify->add_option("state", classify_opts.state_arg,
                         "e.g. \"werner:0.25\", \"bell:phi+\", or a JSON file")
        ->required();
    classify->add_option("--tol", classify_opts.tol, "PPT/geometry tolerance");
    classify->add_option("--out", classify_opts.out_path, "write report to file");

    qmix::SweepOptions sweep_opts;
    CLI::App* sweep = app.add_subcommand("sweep", "sweep a parametric family, report boundaries");
    sweep->add_option("--family", sweep_opts.family, "family name (werner)");
    sweep->add_option("--from", sweep_opts.from, "lower lambda");
    sweep->add_option("--to", sweep_opts.to, "upper lambda");
    sweep->add_option("--steps", sweep_opts.steps, "number of intervals (rows = steps + 1)");
    sweep->add_option("--tol", sweep_opts.tol, "PPT tolerance");
    sweep->add_option("--out", sweep_opts.out_path, "write CSV to file");

    qmix::ScenarioOptions scenario_opts;
    std::uint64_t scenario_seed = 0;
    CLI::App* scenario =
        app.add_subcommand("scenario", "classify and simulate a tagged mixture scenario");
    scenario->add_option("scenario_file", scenario_opts.path, "scenario JSON path")->required();
    scenario->add_option("--tol", scenario_opts.tol, "PPT tolerance");
    CLI::Option* seed_opt =
        scenario->add_option("--seed", scenario_seed, "override the scenario's seed");
    scenario->add_option("--dump-ensemble", scenario_opts.dump_ensemble_path,
                         "write the EnsembleRecord JSON to file");
    scenario->add_option("--out", scenario_opts.out_path, "write report to file");

    qmix::TypicalityOptions typ_opts;
    CLI::App* typicality =
        app.add_subcommand("typicality", "exact preparation-sequence typicality weights");
    typicality->add_option("--p", typ_opts.p_csv, "mixing probabilities, comma separated");
    typicality->add_option("--epsilon", typ_opts.epsilon, "frequency tolerance band");
    typicality->add_option("--m-list", typ_opts.m_list_csv, "run counts, comma separated");
    typicality->add_option("--cap", typ_opts.cap, "largest admissible m");
    typicality->add_option("--out", typ_opts.out_path, "write CSV to file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (classify->parsed()) return qmix::cmd_classify(classify_opts, std::cout, std::cerr);
    if (sweep->parsed()) return qmix::cmd_sweep(sweep_opts, std::cout, std::cerr);
    if (scenario->parsed()) {
        if (seed_opt->count() > 0) scenario_opts.seed_override = scenario_seed;
        return qmix::cmd_scenario(scenario_opts, std::cout, std::cerr);
    }
    if (typicality->parsed()) return qmix::cmd_typicality(typ_opts, std::cout, std::cerr);
    return 2;
}
