// Operational ensemble simulation: tagged preparation runs, empirical
// density operators, place selection, Born-rule sampling, CHSH estimation,
// sequence-typicality weights, and measurement-driven promotion of an
// improper mixture to a proper one.
//
// RNG contract: a named counter-based generator. Every run r of a
// preparation draws from its own stream seeded with
//     per_run_seed = splitmix64_at(master_seed, r),
// so record content is independent of evaluation order and bit-exactly
// reproducible from (seed, rng_algorithm, spec).

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qmix/fano.hpp"
#include "qmix/families.hpp"

namespace qmix {

// ── Seeded randomness ────────────────────────────────────────────────────

enum class RngAlgorithm { SplitMix64 };

const char* to_string(RngAlgorithm a);
RngAlgorithm parse_rng_algorithm(const std::string& name);

// splitmix64 output at a given counter; the stream-derivation primitive.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter);

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double next_unit();   // [0, 1), 53-bit
    double next_gaussian();

private:
    std::uint64_t state_;
};

// ── Preparation records ──────────────────────────────────────────────────

struct PreparationConfig {
    MixtureSpec spec;
    std::uint64_t n_runs = 1;
    std::uint64_t seed = 0;
    RngAlgorithm rng_algorithm = RngAlgorithm::SplitMix64;
};

struct RunRecord {
    std::uint64_t run_id;       // dense, 0-based
    int tag;                    // component label drawn for this run
    std::uint64_t per_run_seed; // derivable; not serialized
};

struct EnsembleRecord {
    PreparationConfig config;
    std::vector<RunRecord> records;

    // Tag-stripped accessor: the improper-mixture view of the ensemble.
    std::vector<std::uint64_t> untagged_run_ids() const;
};

// Die-and-object joint state sum_j sqrt(p_j) |d_j>|psi_j> with |d_j> the
// j-th standard basis vector. All components must be pure.
PureState build_joint_state(const MixtureSpec& spec);

EnsembleRecord run_preparation(const PreparationConfig& config);

// Empirical mixture over a selection of runs: sum_j f_j rho_j with f_j the
// observed tag frequencies. Throws on an empty selection.
DensityOperator empirical_density(const EnsembleRecord& ens);
DensityOperator empirical_density(const EnsembleRecord& ens, std::span<const std::uint64_t> subset);

// ── Place selection ──────────────────────────────────────────────────────

// Tag-aware selection reads the per-run tags (and nothing else).
struct ByTag {};

// Tag-blind selection sees only run ids; it cannot depend on tags by
// construction.
struct TagBlind {
    std::size_t n_parts;
    std::function<std::size_t(std::uint64_t run_id)> part_of;
};

using SelectionRule = std::variant<ByTag, TagBlind>;

struct Partition {
    std::vector<std::vector<std::uint64_t>> parts; // disjoint, exhaustive
    std::vector<std::string> labels;               // "tag:<k>" or "part:<i>"
};

Partition place_select(const EnsembleRecord& ens, const SelectionRule& rule);

// ── Born-rule sampling and CHSH estimation ───────────────────────────────

struct MeasurementSetting {
    MeasurementSetting(const Vec3& a_dir, const Vec3& b_dir); // validates unit norm
    Vec3 a;
    Vec3 b;
};

struct CHSHSettings {
    CHSHSettings(const Vec3& a_dir, const Vec3& a_prime_dir,
                 const Vec3& b_dir, const Vec3& b_prime_dir);
    Vec3 a, a_prime, b, b_prime;
};

// Joint outcome probabilities {++, +-, -+, --} for spin measurements along
// (a, b): p(s,t) = Tr(rho P_s(a) x P_t(b)), P_s(n) = (1 + s n.sigma)/2.
std::array<double, 4> outcome_probabilities(const DensityOperator& rho,
                                            const MeasurementSetting& setting);

struct OutcomePair {
    int a; // +1 or -1
    int b;
};

OutcomePair sample_local_measurement(const DensityOperator& rho,
                                     const MeasurementSetting& setting, RngStream& rng);

struct ChshEstimate {
    double value;
    double std_error; // propagated per-setting binomial errors
};

// S = E(a,b) + E(a,b') + E(a',b) - E(a',b'), shots split evenly over the
// four settings.
ChshEstimate estimate_chsh(const DensityOperator& rho, const CHSHSettings& settings,
                           std::uint64_t shots, RngStream& rng);

// Sub-ensemble variant: each shot measures one member drawn from the
// selection, in the component state its tag records.
ChshEstimate estimate_chsh(const EnsembleRecord& ens, std::span<const std::uint64_t> subset,
                           const CHSHSettings& settings, std::uint64_t shots, RngStream& rng);

// Settings maximizing S for this state, built from the two principal
// directions of C^T C; analytic value 2 sqrt(m).
CHSHSettings optimal_chsh_settings(const DensityOperator& rho);

// a = z, a' = x, b and b' at +-45 degrees between them.
CHSHSettings standard_chsh_settings();

// Analytic S for given settings, from the Fano correlation matrix.
double chsh_value(const FanoForm& fano, const CHSHSettings& settings);

// ── Typicality ───────────────────────────────────────────────────────────

// Total squared-amplitude weight of length-m preparation sequences whose
// empirical tag frequencies all lie within +-epsilon of p, computed exactly
// from multinomial coefficients (never by enumerating k^m sequences).
// Count n_j is admitted iff |n_j/m - p_j| <= epsilon. Throws when m
// exceeds the cap.
double typical_weight(const std::vector<double>& p, int m, double epsilon, int cap = 1000);

// ── Effective collapse ───────────────────────────────────────────────────

// Measurement in an orthonormal basis spanning supp(rho) promotes the state
// to a proper mixture: tags are drawn with probabilities <b_k|rho|b_k> and
// the resulting ensemble mixes the basis projectors.
EnsembleRecord promote_by_measurement(const DensityOperator& rho,
                                      const std::vector<PureState>& basis,
                                      std::uint64_t n_runs, std::uint64_t seed,
                                      RngAlgorithm algorithm = RngAlgorithm::SplitMix64);

// ── Serialization ────────────────────────────────────────────────────────

// JSON schema:
//   {config: {weights, component_ids, n_runs, seed, rng_algorithm},
//    records: [{run_id, tag}]}
// per_run_seed is omitted (derivable from seed and run_id).
void write_ensemble_json(const EnsembleRecord& ens, std::ostream& out);

struct EnsembleFileData {
    std::vector<double> weights;
    std::vector<int> component_ids;
    std::uint64_t n_runs;
    std::uint64_t seed;
    std::string rng_algorithm;
    std::vector<std::pair<std::uint64_t, int>> records; // (run_id, tag)
};

EnsembleFileData read_ensemble_json(std::istream& in);

} // namespace qmix
