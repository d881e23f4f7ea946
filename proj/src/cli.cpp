#include "qmix/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>

#include "qmix/eigen.hpp"
#include "qmix/ensemble.hpp"
#include "qmix/report.hpp"
#include "qmix/separability.hpp"
#include "qmix/statefile.hpp"

namespace qmix {

namespace {

int run_guarded(std::ostream& err, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DensityError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

// Route the report to --out when set, else to the command's stdout stream.
void with_output(const std::string& out_path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& body) {
    if (out_path.empty()) {
        body(fallback);
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw ParseError("cannot open output file '" + out_path + "'");
    body(file);
}

void write_vec3(JsonWriter& w, const Vec3& v) {
    w.begin_array();
    for (double x : v) w.value(x);
    w.end_array();
}

void write_verdict(JsonWriter& w, const SeparabilityVerdict& v) {
    w.begin_object();
    w.kv("status", to_string(v.status));
    w.kv("witness", v.witness);
    w.kv("method", to_string(v.method));
    w.end_object();
}

} // namespace

int cmd_classify(const ClassifyOptions& opts, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        const ParsedState state = resolve_state_arg(opts.state_arg);
        const SeparabilityVerdict verdict = ppt_classify(state.rho, opts.tol);

        with_output(opts.out_path, out, [&](std::ostream& os) {
            JsonWriter w(os);
            w.begin_object();
            w.kv("input", state.label);
            w.kv("verdict", to_string(verdict.status));
            w.kv("ppt_witness", verdict.witness);
            w.kv("method", to_string(verdict.method));

            if (state.rho.dim() == 4) {
                const FanoForm f = fano_decompose(state.rho);
                const CVector cv{f.c.diagonal()};
                const CHSHReport chsh = chsh_criterion(state.rho, opts.tol);
                const bool bell_diag = f.c.max_offdiag_abs() <= 1e-9 &&
                                       norm(f.a) <= 1e-9 && norm(f.b) <= 1e-9;

                w.key("c_vector");
                write_vec3(w, cv.c);
                w.kv("l1_norm", l1_norm(cv.c));
                w.kv("octahedron_status", to_string(in_octahedron(cv, opts.tol)));
                w.kv("tetrahedron_status", to_string(in_tetrahedron(cv, opts.tol)));
                w.kv("bell_diagonal", bell_diag);
                w.kv("M", chsh.m);
                w.kv("max_chsh", chsh.max_chsh);
                w.kv("chsh_violates", chsh.violates);
                w.key("fano").begin_object();
                w.key("a");
                write_vec3(w, f.a);
                w.key("b");
                write_vec3(w, f.b);
                w.key("C").begin_array();
                for (std::size_t i = 0; i < 3; ++i) {
                    write_vec3(w, {f.c(i, 0), f.c(i, 1), f.c(i, 2)});
                }
                w.end_array();
                w.end_object();
            }
            w.end_object();
            w.finish();
        });
    });
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        if (opts.family != "werner")
            throw ParseError("sweep: unknown family '" + opts.family + "' (catalog: werner)");
        if (!(opts.from >= 0.0 && opts.to <= 1.0 && opts.from <= opts.to))
            throw ParseError("sweep: need 0 <= from <= to <= 1");
        if (opts.steps < 0) throw ParseError("sweep: steps must be >= 0");

        with_output(opts.out_path, out, [&](std::ostream& os) {
            CsvWriter csv(os, 5);
            csv.record({"lambda", "ppt_witness", "l1_norm", "M", "max_chsh"});
            for (int i = 0; i <= opts.steps; ++i) {
                const double lambda =
                    opts.steps == 0
                        ? opts.from
                        : opts.from + (opts.to - opts.from) * i / static_cast<double>(opts.steps);
                const DensityOperator rho = werner(lambda);
                const SeparabilityVerdict v = ppt_classify(rho, opts.tol);
                const FanoForm f = fano_decompose(rho);
                const CHSHReport chsh = chsh_criterion(rho, opts.tol);
                csv.record({format_double(lambda), format_double(v.witness),
                            format_double(l1_norm(f.c.diagonal())), format_double(chsh.m),
                            format_double(chsh.max_chsh)});
            }

            // Boundary summaries, present when a sign change is bracketed.
            const StateFamily family = [](double x) { return werner(x); };
            const auto boundary_field = [&](const std::function<double(double)>& run) {
                try {
                    return format_double(run(1e-9));
                } catch (const std::invalid_argument&) {
                    return std::string(); // no crossing inside the range
                }
            };
            csv.record({"separable_boundary",
                        boundary_field([&](double tol) {
                            return separability_boundary(family, opts.from, opts.to, tol);
                        }),
                        "", "", ""});
            csv.record({"chsh_boundary",
                        boundary_field([&](double tol) {
                            return chsh_violation_boundary(family, opts.from, opts.to, tol);
                        }),
                        "", "", ""});
        });
    });
}

namespace {

struct ChshRow {
    ChshEstimate estimate;
    double analytic;
};

ChshRow estimate_for_source(const EnsembleRecord& ens, std::span<const std::uint64_t> subset,
                            const DensityOperator& analytic_state,
                            const std::optional<CHSHSettings>& explicit_settings,
                            std::uint64_t shots, std::uint64_t stream_seed) {
    const CHSHSettings settings =
        explicit_settings ? *explicit_settings : optimal_chsh_settings(analytic_state);
    RngStream rng(stream_seed);
    ChshRow row{estimate_chsh(ens, subset, settings, shots, rng),
                chsh_value(fano_decompose(analytic_state), settings)};
    return row;
}

} // namespace

int cmd_scenario(const ScenarioOptions& opts, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        ScenarioSpec scenario = load_scenario_file(opts.path);
        if (opts.seed_override && scenario.simulation)
            scenario.simulation->seed = *opts.seed_override;

        const Classification cls = classify_mixture(scenario.spec, opts.tol);
        const DensityOperator analytic = mix(scenario.spec);

        with_output(opts.out_path, out, [&](std::ostream& os) {
            JsonWriter w(os);
            w.begin_object();
            w.kv("scenario", opts.path);
            w.kv("provenance", to_string(scenario.spec.provenance));

            w.key("classification").begin_object();
            w.kv("verdict", to_string(cls.verdict));
            w.key("ensemble");
            write_verdict(w, cls.ensemble);
            w.key("per_component").begin_array();
            for (const auto& [tag, verdict] : cls.per_component) {
                w.begin_object();
                w.kv("tag", tag);
                w.kv("status", to_string(verdict.status));
                w.kv("witness", verdict.witness);
                w.end_object();
            }
            w.end_array();
            w.end_object();

            if (analytic.dim() == 4) {
                const FanoForm f = fano_decompose(analytic);
                const CVector cv{f.c.diagonal()};
                const CHSHReport chsh = chsh_criterion(analytic, opts.tol);
                w.key("analytic").begin_object();
                w.key("c_vector");
                write_vec3(w, cv.c);
                w.kv("l1_norm", l1_norm(cv.c));
                w.kv("octahedron_status", to_string(in_octahedron(cv, opts.tol)));
                w.kv("M", chsh.m);
                w.kv("max_chsh", chsh.max_chsh);
                w.end_object();
            }

            if (scenario.simulation) {
                const SimulationParams& sim = *scenario.simulation;
                PreparationConfig config;
                config.spec = scenario.spec;
                config.n_runs = sim.n_runs;
                config.seed = sim.seed;
                config.rng_algorithm = sim.rng_algorithm;
                const EnsembleRecord ens = run_preparation(config);

                if (!opts.dump_ensemble_path.empty()) {
                    std::ofstream dump(opts.dump_ensemble_path, std::ios::binary);
                    if (!dump)
                        throw ParseError("cannot open ensemble dump file '" +
                                         opts.dump_ensemble_path + "'");
                    write_ensemble_json(ens, dump);
                }

                const Partition by_tag = place_select(ens, ByTag{});
                const DensityOperator empirical = empirical_density(ens);

                // Measurement streams live in a separate seed space from the
                // per-run preparation seeds: stream k = splitmix64_at(~seed, k).
                const std::uint64_t measure_base = ~sim.seed;

                w.key("simulation").begin_object();
                w.kv("n_runs", sim.n_runs);
                w.kv("shots", sim.shots);
                w.kv("seed", sim.seed);
                w.kv("rng_algorithm", to_string(sim.rng_algorithm));
                w.kv("settings_mode", sim.explicit_settings ? "explicit" : "optimal");

                w.key("tag_counts").begin_array();
                for (std::size_t j = 0; j < by_tag.parts.size(); ++j) {
                    w.begin_object();
                    w.kv("tag", scenario.spec.components[j].tag);
                    w.kv("count", static_cast<std::uint64_t>(by_tag.parts[j].size()));
                    w.kv("frequency", static_cast<double>(by_tag.parts[j].size()) /
                                          static_cast<double>(sim.n_runs));
                    w.end_object();
                }
                w.end_array();

                w.kv("trace_distance_to_analytic", trace_distance(empirical, analytic));

                const std::vector<std::uint64_t> all = ens.untagged_run_ids();
                const ChshRow whole =
                    estimate_for_source(ens, all, analytic, sim.explicit_settings, sim.shots,
                                        splitmix64_at(measure_base, 0));
                w.key("whole_ensemble_chsh").begin_object();
                w.kv("value", whole.estimate.value);
                w.kv("stderr", whole.estimate.std_error);
                w.kv("analytic", whole.analytic);
                w.end_object();

                w.key("per_tag_chsh").begin_array();
                for (std::size_t j = 0; j < by_tag.parts.size(); ++j) {
                    if (by_tag.parts[j].empty()) continue;
                    const ChshRow row = estimate_for_source(
                        ens, by_tag.parts[j], scenario.spec.components[j].density(),
                        sim.explicit_settings, sim.shots, splitmix64_at(measure_base, 1 + j));
                    w.begin_object();
                    w.kv("tag", scenario.spec.components[j].tag);
                    w.kv("value", row.estimate.value);
                    w.kv("stderr", row.estimate.std_error);
                    w.kv("analytic", row.analytic);
                    w.end_object();
                }
                w.end_array();
                w.end_object();
            }

            w.end_object();
            w.finish();
        });
    });
}

int cmd_typicality(const TypicalityOptions& opts, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        const std::vector<double> p = parse_double_list(opts.p_csv);
        const std::vector<int> m_list = parse_int_list(opts.m_list_csv);

        with_output(opts.out_path, out, [&](std::ostream& os) {
            CsvWriter csv(os, 2);
            csv.record({"m", "weight"});
            for (int m : m_list) {
                const double weight = typical_weight(p, m, opts.epsilon, opts.cap);
                csv.record({std::to_string(m), format_double(weight)});
            }
        });
    });
}

} // namespace qmix
