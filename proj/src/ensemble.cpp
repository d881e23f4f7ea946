#include "qmix/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "qmix/eigen.hpp"
#include "qmix/report.hpp"

namespace qmix {

// ── Seeded randomness ────────────────────────────────────────────────────

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace

const char* to_string(RngAlgorithm a) {
    switch (a) {
        case RngAlgorithm::SplitMix64: return "splitmix64";
    }
    return "unknown";
}

RngAlgorithm parse_rng_algorithm(const std::string& name) {
    if (name == "splitmix64") return RngAlgorithm::SplitMix64;
    throw ParseError("unknown rng_algorithm '" + name + "' (catalog: splitmix64)");
}

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter) {
    return finalize(seed + (counter + 1) * kGamma);
}

std::uint64_t RngStream::next_u64() { return finalize(state_ += kGamma); }

double RngStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
    double u1 = next_unit();
    while (u1 == 0.0) u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// ── Preparation ──────────────────────────────────────────────────────────

std::vector<std::uint64_t> EnsembleRecord::untagged_run_ids() const {
    std::vector<std::uint64_t> ids(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) ids[i] = records[i].run_id;
    return ids;
}

PureState build_joint_state(const MixtureSpec& spec) {
    spec.validate();
    const std::size_t n = spec.components.size();
    const std::size_t d = spec.dim();

    std::vector<cplx> amps(n * d, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const MixtureComponent& comp = spec.components[j];
        const auto* pure = std::get_if<PureState>(&comp.state);
        if (pure == nullptr)
            throw std::invalid_argument("build_joint_state: all components must be pure");
        const double amp = std::sqrt(comp.weight);
        for (std::size_t t = 0; t < d; ++t) amps[j * d + t] = amp * (*pure)[t];
    }
    return PureState(std::move(amps));
}

namespace {

std::size_t draw_component(const std::vector<double>& cumulative, double u) {
    for (std::size_t j = 0; j < cumulative.size(); ++j)
        if (u < cumulative[j]) return j;
    return cumulative.size() - 1;
}

} // namespace

EnsembleRecord run_preparation(const PreparationConfig& config) {
    config.spec.validate();
    if (config.n_runs < 1) throw std::invalid_argument("run_preparation: n_runs must be >= 1");

    std::vector<double> cumulative;
    cumulative.reserve(config.spec.components.size());
    double acc = 0.0;
    for (const MixtureComponent& comp : config.spec.components) {
        acc += comp.weight;
        cumulative.push_back(acc);
    }

    EnsembleRecord ens;
    ens.config = config;
    ens.records.reserve(config.n_runs);
    for (std::uint64_t r = 0; r < config.n_runs; ++r) {
        const std::uint64_t per_run_seed = splitmix64_at(config.seed, r);
        RngStream stream(per_run_seed);
        const std::size_t j = draw_component(cumulative, stream.next_unit());
        ens.records.push_back(RunRecord{r, config.spec.components[j].tag, per_run_seed});
    }
    return ens;
}

namespace {

std::map<int, std::size_t> component_index_by_tag(const MixtureSpec& spec) {
    std::map<int, std::size_t> index;
    for (std::size_t j = 0; j < spec.components.size(); ++j)
        index[spec.components[j].tag] = j;
    return index;
}

} // namespace

DensityOperator empirical_density(const EnsembleRecord& ens) {
    return empirical_density(ens, ens.untagged_run_ids());
}

DensityOperator empirical_density(const EnsembleRecord& ens,
                                  std::span<const std::uint64_t> subset) {
    if (subset.empty()) throw std::invalid_argument("empirical_density: empty selection");

    const MixtureSpec& spec = ens.config.spec;
    const auto index = component_index_by_tag(spec);
    std::vector<std::uint64_t> counts(spec.components.size(), 0);
    for (std::uint64_t id : subset) {
        if (id >= ens.records.size())
            throw std::invalid_argument("empirical_density: run id out of range");
        ++counts[index.at(ens.records[id].tag)];
    }

    const double n = static_cast<double>(subset.size());
    ComplexMatrix sum(spec.dim(), spec.dim());
    for (std::size_t j = 0; j < spec.components.size(); ++j) {
        if (counts[j] == 0) continue;
        sum += cplx(static_cast<double>(counts[j]) / n) * spec.components[j].density().matrix();
    }
    std::optional<BipartiteDims> parts;
    if (sum.rows() == 4) parts = BipartiteDims{2, 2};
    return validate_density(sum, parts);
}

Partition place_select(const EnsembleRecord& ens, const SelectionRule& rule) {
    Partition out;
    if (std::holds_alternative<ByTag>(rule)) {
        const MixtureSpec& spec = ens.config.spec;
        const auto index = component_index_by_tag(spec);
        out.parts.resize(spec.components.size());
        for (const MixtureComponent& comp : spec.components)
            out.labels.push_back("tag:" + std::to_string(comp.tag));
        for (const RunRecord& rec : ens.records)
            out.parts[index.at(rec.tag)].push_back(rec.run_id);
        return out;
    }

    const TagBlind& blind = std::get<TagBlind>(rule);
    if (blind.n_parts == 0)
        throw std::invalid_argument("place_select: tag-blind rule needs at least one part");
    out.parts.resize(blind.n_parts);
    for (std::size_t i = 0; i < blind.n_parts; ++i)
        out.labels.push_back("part:" + std::to_string(i));
    // The rule sees run ids only; tags stay out of reach of the selector.
    for (std::uint64_t id : ens.untagged_run_ids()) {
        const std::size_t part = blind.part_of(id);
        if (part >= blind.n_parts)
            throw std::invalid_argument("place_select: selector returned part out of range");
        out.parts[part].push_back(id);
    }
    return out;
}

// ── Born-rule sampling ───────────────────────────────────────────────────

namespace {

void require_unit(const Vec3& v, const char* what) {
    if (std::abs(norm(v) - 1.0) > 1e-12)
        throw std::invalid_argument(std::string(what) + ": direction must be a unit vector");
}

} // namespace

MeasurementSetting::MeasurementSetting(const Vec3& a_dir, const Vec3& b_dir)
    : a(a_dir), b(b_dir) {
    require_unit(a, "MeasurementSetting");
    require_unit(b, "MeasurementSetting");
}

CHSHSettings::CHSHSettings(const Vec3& a_dir, const Vec3& a_prime_dir, const Vec3& b_dir,
                           const Vec3& b_prime_dir)
    : a(a_dir), a_prime(a_prime_dir), b(b_dir), b_prime(b_prime_dir) {
    require_unit(a, "CHSHSettings");
    require_unit(a_prime, "CHSHSettings");
    require_unit(b, "CHSHSettings");
    require_unit(b_prime, "CHSHSettings");
}

namespace {

// Joint +-1 outcome probabilities from the Fano coefficients:
// p(s,t) = (1 + s a.alpha + t b.beta + s t a^T C b) / 4.
std::array<double, 4> probabilities_from_fano(const FanoForm& f, const Vec3& a, const Vec3& b) {
    const double ma = dot(a, f.a);
    const double mb = dot(b, f.b);
    const double corr = dot(a, f.c.apply(b));
    std::array<double, 4> p;
    std::size_t k = 0;
    for (int s : {+1, -1})
        for (int t : {+1, -1})
            p[k++] = 0.25 * (1.0 + s * ma + t * mb + s * t * corr);
    return p;
}

OutcomePair draw_outcome(const std::array<double, 4>& probs, RngStream& rng) {
    const double u = rng.next_unit();
    double acc = 0.0;
    std::size_t pick = 3;
    for (std::size_t k = 0; k < 4; ++k) {
        acc += std::max(0.0, probs[k]);
        if (u < acc) {
            pick = k;
            break;
        }
    }
    return OutcomePair{pick < 2 ? +1 : -1, (pick % 2 == 0) ? +1 : -1};
}

} // namespace

std::array<double, 4> outcome_probabilities(const DensityOperator& rho,
                                            const MeasurementSetting& setting) {
    if (rho.dim() != 4)
        throw std::invalid_argument("outcome_probabilities: two-qubit state required");
    return probabilities_from_fano(fano_decompose(rho), setting.a, setting.b);
}

OutcomePair sample_local_measurement(const DensityOperator& rho,
                                     const MeasurementSetting& setting, RngStream& rng) {
    return draw_outcome(outcome_probabilities(rho, setting), rng);
}

// ── CHSH estimation ──────────────────────────────────────────────────────

namespace {

struct SettingPlan {
    Vec3 a;
    Vec3 b;
};

// Order fixed as (a,b), (a,b'), (a',b), (a',b'); the last enters S with a
// minus sign.
std::array<SettingPlan, 4> setting_plans(const CHSHSettings& s) {
    return {SettingPlan{s.a, s.b}, SettingPlan{s.a, s.b_prime},
            SettingPlan{s.a_prime, s.b}, SettingPlan{s.a_prime, s.b_prime}};
}

// shots split evenly; every setting runs at least once.
std::array<std::uint64_t, 4> shot_split(std::uint64_t shots) {
    std::array<std::uint64_t, 4> n;
    for (std::size_t k = 0; k < 4; ++k)
        n[k] = std::max<std::uint64_t>(1, shots / 4 + (k < shots % 4 ? 1 : 0));
    return n;
}

ChshEstimate accumulate_chsh(
    const std::array<std::uint64_t, 4>& shots_per,
    const std::function<OutcomePair(std::size_t setting, RngStream&)>& draw, RngStream& rng) {
    double s_value = 0.0;
    double variance = 0.0;
    const std::array<double, 4> signs = {+1.0, +1.0, +1.0, -1.0};
    for (std::size_t k = 0; k < 4; ++k) {
        std::int64_t sum = 0;
        for (std::uint64_t i = 0; i < shots_per[k]; ++i) {
            const OutcomePair o = draw(k, rng);
            sum += o.a * o.b;
        }
        const double n = static_cast<double>(shots_per[k]);
        const double corr = static_cast<double>(sum) / n;
        s_value += signs[k] * corr;
        variance += std::max(0.0, 1.0 - corr * corr) / n;
    }
    return ChshEstimate{s_value, std::sqrt(variance)};
}

} // namespace

ChshEstimate estimate_chsh(const DensityOperator& rho, const CHSHSettings& settings,
                           std::uint64_t shots, RngStream& rng) {
    if (shots < 1) throw std::invalid_argument("estimate_chsh: shots must be >= 1");
    const FanoForm f = fano_decompose(rho);
    const auto plans = setting_plans(settings);
    std::array<std::array<double, 4>, 4> probs;
    for (std::size_t k = 0; k < 4; ++k)
        probs[k] = probabilities_from_fano(f, plans[k].a, plans[k].b);

    return accumulate_chsh(
        shot_split(shots),
        [&probs](std::size_t k, RngStream& r) { return draw_outcome(probs[k], r); }, rng);
}

ChshEstimate estimate_chsh(const EnsembleRecord& ens, std::span<const std::uint64_t> subset,
                           const CHSHSettings& settings, std::uint64_t shots, RngStream& rng) {
    if (shots < 1) throw std::invalid_argument("estimate_chsh: shots must be >= 1");
    if (subset.empty()) throw std::invalid_argument("estimate_chsh: empty selection");

    const MixtureSpec& spec = ens.config.spec;
    const auto index = component_index_by_tag(spec);
    const auto plans = setting_plans(settings);

    // Per-component outcome tables, one per setting.
    std::vector<std::array<std::array<double, 4>, 4>> tables(spec.components.size());
    for (std::size_t j = 0; j < spec.components.size(); ++j) {
        const FanoForm f = fano_decompose(spec.components[j].density());
        for (std::size_t k = 0; k < 4; ++k)
            tables[j][k] = probabilities_from_fano(f, plans[k].a, plans[k].b);
    }

    const auto draw = [&](std::size_t k, RngStream& r) {
        // Each shot measures one member of the selection, in the component
        // state its tag records.
        const std::uint64_t pick = r.next_u64();
        const std::size_t at = static_cast<std::size_t>(
            (static_cast<unsigned __int128>(pick) * subset.size()) >> 64);
        const std::uint64_t id = subset[at];
        if (id >= ens.records.size())
            throw std::invalid_argument("estimate_chsh: run id out of range");
        const std::size_t j = index.at(ens.records[id].tag);
        return draw_outcome(tables[j][k], r);
    };
    return accumulate_chsh(shot_split(shots), draw, rng);
}

namespace {

Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0) throw InternalError("normalized: zero vector");
    return {v[0] / n, v[1] / n, v[2] / n};
}

Vec3 any_unit_orthogonal(const Vec3& v) {
    // Cross with the least-aligned coordinate axis.
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(v[i]) < std::abs(v[k])) k = i;
    Vec3 axis{};
    axis[k] = 1.0;
    const Vec3 cross = {v[1] * axis[2] - v[2] * axis[1], v[2] * axis[0] - v[0] * axis[2],
                        v[0] * axis[1] - v[1] * axis[0]};
    return normalized(cross);
}

} // namespace

CHSHSettings standard_chsh_settings() {
    const double r = 1.0 / std::sqrt(2.0);
    return CHSHSettings({0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, {r, 0.0, r}, {-r, 0.0, r});
}

CHSHSettings optimal_chsh_settings(const DensityOperator& rho) {
    const FanoForm f = fano_decompose(rho);
    const Mat3 gram = f.c.transpose_times_self();

    ComplexMatrix g(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) g(i, j) = gram(i, j);
    const EigenSystem es = hermitian_eigensystem(g);

    const double sigma1 = std::sqrt(std::max(0.0, es.values[2]));
    const double sigma2 = std::sqrt(std::max(0.0, es.values[1]));
    if (sigma1 < 1e-12) return standard_chsh_settings(); // C ~ 0: no preferred frame

    Vec3 v1, v2;
    for (std::size_t i = 0; i < 3; ++i) {
        v1[i] = es.vectors(i, 2).real();
        v2[i] = es.vectors(i, 1).real();
    }
    v1 = normalized(v1);
    v2 = normalized(v2);

    // b, b' straddle the leading principal direction by the angle that
    // maximizes S; a, a' are the image directions under C.
    const double phi = std::atan2(sigma2, sigma1);
    Vec3 b, b_prime;
    for (std::size_t i = 0; i < 3; ++i) {
        b[i] = std::cos(phi) * v1[i] + std::sin(phi) * v2[i];
        b_prime[i] = std::cos(phi) * v1[i] - std::sin(phi) * v2[i];
    }
    const Vec3 a = normalized(f.c.apply(v1));
    const Vec3 a_prime = sigma2 > 1e-12 ? normalized(f.c.apply(v2)) : any_unit_orthogonal(a);
    return CHSHSettings(a, a_prime, normalized(b), normalized(b_prime));
}

double chsh_value(const FanoForm& fano, const CHSHSettings& settings) {
    const auto corr = [&fano](const Vec3& x, const Vec3& y) {
        return dot(x, fano.c.apply(y));
    };
    return corr(settings.a, settings.b) + corr(settings.a, settings.b_prime) +
           corr(settings.a_prime, settings.b) - corr(settings.a_prime, settings.b_prime);
}

// ── Typicality ───────────────────────────────────────────────────────────

double typical_weight(const std::vector<double>& p, int m, double epsilon, int cap) {
    if (p.empty()) throw std::invalid_argument("typical_weight: empty probability vector");
    double sum = 0.0;
    for (double w : p) {
        if (!(w >= 0.0)) throw std::invalid_argument("typical_weight: negative probability");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("typical_weight: probabilities do not sum to 1");
    if (m < 1) throw std::invalid_argument("typical_weight: m must be >= 1");
    if (m > cap)
        throw std::invalid_argument("typical_weight: m exceeds the enumeration cap of " +
                                    std::to_string(cap));
    if (!(epsilon >= 0.0)) throw std::invalid_argument("typical_weight: epsilon must be >= 0");

    const std::size_t k = p.size();
    const double md = static_cast<double>(m);

    // Admissible counts per component: |n_j/m - p_j| <= epsilon, with a
    // small slack so boundary integers survive roundoff.
    std::vector<int> lo(k), hi(k);
    for (std::size_t j = 0; j < k; ++j) {
        lo[j] = std::max(0, static_cast<int>(std::ceil(md * (p[j] - epsilon) - 1e-9)));
        hi[j] = std::min(m, static_cast<int>(std::floor(md * (p[j] + epsilon) + 1e-9)));
        if (lo[j] > hi[j]) return 0.0;
    }

    // DP over components on scaled partial sums:
    //   g_j(s) = s! * sum over admissible (n_1..n_j), sum = s, of
    //            prod p_i^{n_i} / n_i!
    // so g_j(s) <= (p_1+..+p_j)^s stays in double range and the final
    // answer is the multinomial tail sum g_k(m) directly.
    std::vector<double> g(static_cast<std::size_t>(m) + 1, 0.0);
    g[0] = 1.0;
    std::vector<double> next(g.size());
    for (std::size_t j = 0; j < k; ++j) {
        std::fill(next.begin(), next.end(), 0.0);
        const double logp = p[j] > 0.0 ? std::log(p[j]) : 0.0;
        for (int s = 0; s <= m; ++s) {
            double acc = 0.0;
            for (int n = lo[j]; n <= std::min(hi[j], s); ++n) {
                if (n > 0 && p[j] == 0.0) break;
                const double prev = g[static_cast<std::size_t>(s - n)];
                if (prev == 0.0) continue;
                const double log_term = std::lgamma(s + 1.0) - std::lgamma(n + 1.0) -
                                        std::lgamma(s - n + 1.0) + n * logp;
                acc += std::exp(log_term) * prev;
            }
            next[static_cast<std::size_t>(s)] = acc;
        }
        g.swap(next);
    }
    return std::min(1.0, g[static_cast<std::size_t>(m)]);
}

// ── Effective collapse ───────────────────────────────────────────────────

EnsembleRecord promote_by_measurement(const DensityOperator& rho,
                                      const std::vector<PureState>& basis,
                                      std::uint64_t n_runs, std::uint64_t seed,
                                      RngAlgorithm algorithm) {
    if (basis.empty()) throw std::invalid_argument("promote_by_measurement: empty basis");
    for (const PureState& b : basis)
        if (b.dim() != rho.dim())
            throw std::invalid_argument("promote_by_measurement: basis dimension mismatch");
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) {
            const double expected = i == j ? 1.0 : 0.0;
            if (std::abs(std::abs(basis[i].inner(basis[j])) - expected) > 1e-9)
                throw std::invalid_argument("promote_by_measurement: basis not orthonormal");
        }

    // Born weights <b_k|rho|b_k>.
    std::vector<double> weights(basis.size());
    double total = 0.0;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto amps = basis[k].amplitudes();
        cplx w = 0.0;
        for (std::size_t i = 0; i < rho.dim(); ++i)
            for (std::size_t j = 0; j < rho.dim(); ++j)
                w += std::conj(amps[i]) * rho.matrix()(i, j) * amps[j];
        weights[k] = std::max(0.0, w.real());
        total += weights[k];
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument(
            "promote_by_measurement: basis does not span the support of rho");

    MixtureSpec spec;
    spec.provenance = Provenance::ProperPreparation;
    for (std::size_t k = 0; k < basis.size(); ++k)
        spec.components.push_back(
            MixtureComponent{weights[k] / total, basis[k], static_cast<int>(k)});

    PreparationConfig config;
    config.spec = std::move(spec);
    config.n_runs = n_runs;
    config.seed = seed;
    config.rng_algorithm = algorithm;
    return run_preparation(config);
}

// ── Serialization ────────────────────────────────────────────────────────

void write_ensemble_json(const EnsembleRecord& ens, std::ostream& out) {
    JsonWriter w(out);
    w.begin_object();
    w.key("config").begin_object();
    w.key("weights").begin_array();
    for (const MixtureComponent& comp : ens.config.spec.components) w.value(comp.weight);
    w.end_array();
    w.key("component_ids").begin_array();
    for (const MixtureComponent& comp : ens.config.spec.components) w.value(comp.tag);
    w.end_array();
    w.kv("n_runs", ens.config.n_runs);
    w.kv("seed", ens.config.seed);
    w.kv("rng_algorithm", to_string(ens.config.rng_algorithm));
    w.end_object();
    w.key("records").begin_array();
    for (const RunRecord& rec : ens.records) {
        w.begin_object();
        w.kv("run_id", rec.run_id);
        w.kv("tag", rec.tag);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    w.finish();
}

EnsembleFileData read_ensemble_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("ensemble json: ") + e.what());
    }
    try {
        EnsembleFileData data;
        const auto& config = j.at("config");
        data.weights = config.at("weights").get<std::vector<double>>();
        data.component_ids = config.at("component_ids").get<std::vector<int>>();
        data.n_runs = config.at("n_runs").get<std::uint64_t>();
        data.seed = config.at("seed").get<std::uint64_t>();
        data.rng_algorithm = config.at("rng_algorithm").get<std::string>();
        for (const auto& rec : j.at("records"))
            data.records.emplace_back(rec.at("run_id").get<std::uint64_t>(),
                                      rec.at("tag").get<int>());
        return data;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("ensemble json: ") + e.what());
    }
}

} // namespace qmix
