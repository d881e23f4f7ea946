#include "qmix/statefile.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qmix {

namespace {

using nlohmann::json;

double parse_double_token(const std::string& tok, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw ParseError(what + ": trailing junk in '" + tok + "'");
        return v;
    } catch (const std::invalid_argument&) {
        throw ParseError(what + ": '" + tok + "' is not a number");
    } catch (const std::out_of_range&) {
        throw ParseError(what + ": '" + tok + "' is out of range");
    }
}

std::vector<std::string> split_commas(const std::string& csv) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream in(csv);
    while (std::getline(in, tok, ',')) out.push_back(tok);
    return out;
}

Vec3 vec3_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) throw ParseError(what + ": expected 3 numbers");
    return Vec3{j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

DensityOperator state_from_fano_json(const json& j) {
    FanoForm f;
    f.a = vec3_from_json(j.at("a"), "fano.a");
    f.b = vec3_from_json(j.at("b"), "fano.b");
    const json& c = j.at("C");
    if (!c.is_array() || c.size() != 3) throw ParseError("fano.C: expected a 3x3 matrix");
    for (std::size_t i = 0; i < 3; ++i) {
        const Vec3 row = vec3_from_json(c.at(i), "fano.C row");
        for (std::size_t k = 0; k < 3; ++k) f.c(i, k) = row[k];
    }
    return validate_density(fano_reconstruct(f), BipartiteDims{2, 2});
}

DensityOperator state_from_matrix_json(const json& j, const json& parent) {
    const std::size_t dim = j.at("dim").get<std::size_t>();
    const json& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != dim * dim)
        throw ParseError("matrix.entries: expected dim*dim [re, im] pairs");
    std::vector<cplx> values;
    values.reserve(entries.size());
    for (const json& e : entries) {
        if (!e.is_array() || e.size() != 2)
            throw ParseError("matrix.entries: each entry must be a [re, im] pair");
        values.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    }
    std::optional<BipartiteDims> parts;
    if (parent.contains("dims")) {
        const json& d = parent.at("dims");
        if (!d.is_array() || d.size() != 2) throw ParseError("dims: expected [dA, dB]");
        parts = BipartiteDims{d.at(0).get<std::size_t>(), d.at(1).get<std::size_t>()};
    } else if (dim == 4) {
        parts = BipartiteDims{2, 2};
    }
    return validate_density(ComplexMatrix::from_entries(dim, dim, std::move(values)), parts);
}

DensityOperator state_from_json(const json& j) {
    if (j.is_string()) return parse_family(j.get<std::string>());
    if (j.is_object()) {
        if (j.contains("fano")) return state_from_fano_json(j.at("fano"));
        if (j.contains("matrix")) return state_from_matrix_json(j.at("matrix"), j);
        throw ParseError("state: object must hold a 'fano' or 'matrix' key");
    }
    throw ParseError("state: expected a family string or an object");
}

std::string state_label(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_object() && j.contains("fano")) return "fano";
    return "matrix";
}

json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    for (const std::string& tok : split_commas(csv))
        out.push_back(parse_double_token(tok, "number list"));
    if (out.empty()) throw ParseError("number list: empty");
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    for (const std::string& tok : split_commas(csv)) {
        const double v = parse_double_token(tok, "integer list");
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) throw ParseError("integer list: '" + tok + "'");
        out.push_back(i);
    }
    if (out.empty()) throw ParseError("integer list: empty");
    return out;
}

bool is_family_string(const std::string& arg) {
    if (arg == "maximally_mixed") return true;
    const std::size_t colon = arg.find(':');
    if (colon == std::string::npos) return false;
    const std::string head = arg.substr(0, colon);
    return head == "bell" || head == "werner" || head == "bell_diagonal";
}

DensityOperator parse_family(const std::string& family) {
    if (family == "maximally_mixed")
        return validate_density(cplx(0.25) * ComplexMatrix::identity(4), BipartiteDims{2, 2});

    const std::size_t colon = family.find(':');
    if (colon == std::string::npos)
        throw ParseError("unknown state family '" + family + "'");
    const std::string head = family.substr(0, colon);
    const std::string tail = family.substr(colon + 1);

    if (head == "bell") {
        for (BellKind kind : kBellKinds)
            if (tail == to_string(kind))
                return validate_density(bell_state(kind).projector(), BipartiteDims{2, 2});
        throw ParseError("unknown Bell state '" + tail + "' (phi+, phi-, psi+, psi-)");
    }
    if (head == "werner") {
        const double lambda = parse_double_token(tail, "werner");
        try {
            return werner(lambda);
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("werner: ") + e.what());
        }
    }
    if (head == "bell_diagonal") {
        const std::vector<double> p = parse_double_list(tail);
        if (p.size() != 4) throw ParseError("bell_diagonal: expected 4 probabilities");
        try {
            return bell_diagonal({p[0], p[1], p[2], p[3]});
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("bell_diagonal: ") + e.what());
        }
    }
    throw ParseError("unknown state family '" + family + "'");
}

ParsedState load_state_file(const std::string& path) {
    const json j = parse_json_file(path);
    return ParsedState{state_from_json(j), state_label(j)};
}

ParsedState resolve_state_arg(const std::string& arg) {
    if (is_family_string(arg)) return ParsedState{parse_family(arg), arg};
    return load_state_file(arg);
}

ScenarioSpec load_scenario_file(const std::string& path) {
    const json j = parse_json_file(path);
    try {
        ScenarioSpec out;
        if (!j.contains("components") || !j.at("components").is_array() ||
            j.at("components").empty())
            throw ParseError("scenario: 'components' must be a nonempty array");
        int next_tag = 0;
        for (const json& comp : j.at("components")) {
            const double weight = comp.at("weight").get<double>();
            const int tag = comp.contains("tag") ? comp.at("tag").get<int>() : next_tag;
            next_tag = tag + 1;
            out.spec.components.push_back(
                MixtureComponent{weight, state_from_json(comp.at("state")), tag});
        }
        const std::string prov =
            j.contains("provenance") ? j.at("provenance").get<std::string>() : "proper";
        if (prov == "proper")
            out.spec.provenance = Provenance::ProperPreparation;
        else if (prov == "reduced")
            out.spec.provenance = Provenance::ReducedOnly;
        else
            throw ParseError("scenario: provenance must be 'proper' or 'reduced'");

        try {
            out.spec.validate();
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("scenario: ") + e.what());
        }

        if (j.contains("simulation")) {
            const json& sim = j.at("simulation");
            SimulationParams params;
            if (sim.contains("n_runs")) params.n_runs = sim.at("n_runs").get<std::uint64_t>();
            if (sim.contains("shots")) params.shots = sim.at("shots").get<std::uint64_t>();
            if (sim.contains("seed")) params.seed = sim.at("seed").get<std::uint64_t>();
            if (sim.contains("rng_algorithm"))
                params.rng_algorithm =
                    parse_rng_algorithm(sim.at("rng_algorithm").get<std::string>());
            if (sim.contains("settings") && !sim.at("settings").is_string()) {
                const json& s = sim.at("settings");
                try {
                    params.explicit_settings = CHSHSettings(
                        vec3_from_json(s.at("a"), "settings.a"),
                        vec3_from_json(s.at("a_prime"), "settings.a_prime"),
                        vec3_from_json(s.at("b"), "settings.b"),
                        vec3_from_json(s.at("b_prime"), "settings.b_prime"));
                } catch (const std::invalid_argument& e) {
                    throw ParseError(std::string("scenario settings: ") + e.what());
                }
            } else if (sim.contains("settings") &&
                       sim.at("settings").get<std::string>() != "optimal") {
                throw ParseError("scenario: settings must be 'optimal' or explicit vectors");
            }
            if (params.n_runs < 1 || params.shots < 1)
                throw ParseError("scenario: n_runs and shots must be >= 1");
            out.simulation = params;
        }
        return out;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace qmix
