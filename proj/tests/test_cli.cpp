#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmix/cli.hpp"
#include "qmix/ensemble.hpp"
#include "qmix/report.hpp"

using namespace qmix;
using nlohmann::json;

namespace {

struct CommandResult {
    int code;
    std::string out;
    std::string err;
};

template <typename Opts, typename Fn>
CommandResult run(Fn fn, const Opts& opts) {
    std::ostringstream out, err;
    const int code = fn(opts, out, err);
    return {code, out.str(), err.str()};
}

json parse_json(const std::string& text) { return json::parse(text); }

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream f(path, std::ios::binary);
    f << contents;
    return path;
}

// Split CSV text into records; verifies CRLF line endings as a side effect.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t end = text.find("\r\n", pos);
        REQUIRE(end != std::string::npos);
        std::vector<std::string> fields;
        std::string field;
        for (std::size_t i = pos; i < end; ++i) {
            if (text[i] == ',') {
                fields.push_back(field);
                field.clear();
            } else {
                field.push_back(text[i]);
            }
        }
        fields.push_back(field);
        rows.push_back(std::move(fields));
        pos = end + 2;
    }
    return rows;
}

const char* kPhiMixScenario = R"({
  "components": [
    {"weight": 0.5, "state": "bell:phi+", "tag": 0},
    {"weight": 0.5, "state": "bell:phi-", "tag": 1}
  ],
  "provenance": "proper",
  "simulation": {"n_runs": 20000, "shots": 20000, "seed": 9}
})";

} // namespace

TEST_CASE("classify: werner:0.2 is separable inside the octahedron") {
    const CommandResult r = run(cmd_classify, ClassifyOptions{"werner:0.2", 1e-9, ""});
    REQUIRE(r.code == 0);
    const json j = parse_json(r.out);
    CHECK(j.at("verdict") == "Separable");
    CHECK(j.at("octahedron_status") == "Inside");
    CHECK(j.at("ppt_witness").get<double>() > 0.0);
    CHECK(j.at("method") == "PPT");
}

TEST_CASE("classify: bell:phi+ is entangled with M = 2") {
    const CommandResult r = run(cmd_classify, ClassifyOptions{"bell:phi+", 1e-9, ""});
    REQUIRE(r.code == 0);
    const json j = parse_json(r.out);
    CHECK(j.at("verdict") == "Entangled");
    CHECK(j.at("M").get<double>() == 2.0);
    CHECK(j.at("chsh_violates") == true);
    CHECK(j.at("octahedron_status") == "Outside");
}

TEST_CASE("classify: Bell vertices report their exact c-vectors") {
    const std::map<std::string, std::array<double, 3>> expected = {
        {"bell:phi+", {1.0, -1.0, 1.0}},
        {"bell:phi-", {-1.0, 1.0, 1.0}},
        {"bell:psi+", {1.0, 1.0, -1.0}},
        {"bell:psi-", {-1.0, -1.0, -1.0}},
    };
    for (const auto& [family, cvec] : expected) {
        const CommandResult r = run(cmd_classify, ClassifyOptions{family, 1e-9, ""});
        REQUIRE(r.code == 0);
        const json j = parse_json(r.out);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(j.at("c_vector").at(i).get<double>() == cvec[i]);
    }
}

TEST_CASE("classify: family grammar and error exit codes") {
    CHECK(run(cmd_classify, ClassifyOptions{"maximally_mixed", 1e-9, ""}).code == 0);
    CHECK(run(cmd_classify, ClassifyOptions{"bell_diagonal:0.5,0.5,0,0", 1e-9, ""}).code == 0);

    CHECK(run(cmd_classify, ClassifyOptions{"werner:1.5", 1e-9, ""}).code == 2);
    CHECK(run(cmd_classify, ClassifyOptions{"bell:phi*", 1e-9, ""}).code == 2);
    CHECK(run(cmd_classify, ClassifyOptions{"bell_diagonal:0.5,0.5", 1e-9, ""}).code == 2);
    CHECK(run(cmd_classify, ClassifyOptions{"/nonexistent/state.json", 1e-9, ""}).code == 2);
}

TEST_CASE("classify: dense matrix files round-trip; invalid ones name the defect") {
    const auto good = temp_file("qmix_state_ok.json", R"({
        "matrix": {"dim": 4, "entries": [
            [0.5,0],[0,0],[0,0],[0.5,0],
            [0,0],[0,0],[0,0],[0,0],
            [0,0],[0,0],[0,0],[0,0],
            [0.5,0],[0,0],[0,0],[0.5,0]
        ]}
    })");
    const CommandResult ok = run(cmd_classify, ClassifyOptions{good.string(), 1e-9, ""});
    REQUIRE(ok.code == 0);
    CHECK(parse_json(ok.out).at("verdict") == "Entangled");

    const auto bad = temp_file("qmix_state_bad.json", R"({
        "matrix": {"dim": 2, "entries": [[1,0],[0,0],[0,0],[1,0]]}
    })");
    const CommandResult fail = run(cmd_classify, ClassifyOptions{bad.string(), 1e-9, ""});
    CHECK(fail.code == 2);
    CHECK(fail.err.find("trace") != std::string::npos);
}

TEST_CASE("classify: fano-form files load") {
    const auto path = temp_file("qmix_state_fano.json", R"({
        "fano": {"a": [0,0,0], "b": [0,0,0],
                 "C": [[-0.4,0,0],[0,-0.4,0],[0,0,-0.4]]}
    })");
    const CommandResult r = run(cmd_classify, ClassifyOptions{path.string(), 1e-9, ""});
    REQUIRE(r.code == 0);
    const json j = parse_json(r.out);
    CHECK(j.at("verdict") == "Entangled"); // werner(0.4) in disguise
    CHECK(j.at("c_vector").at(0).get<double>() == doctest::Approx(-0.4).epsilon(1e-12));
}

TEST_CASE("classify: reruns are byte-identical; --out routes to a file") {
    const CommandResult a = run(cmd_classify, ClassifyOptions{"werner:0.77", 1e-9, ""});
    const CommandResult b = run(cmd_classify, ClassifyOptions{"werner:0.77", 1e-9, ""});
    CHECK(a.out == b.out);

    const auto path = std::filesystem::temp_directory_path() / "qmix_classify_out.json";
    ClassifyOptions opts{"werner:0.77", 1e-9, path.string()};
    std::ostringstream out, err;
    REQUIRE(cmd_classify(opts, out, err) == 0);
    CHECK(out.str().empty());
    std::ifstream in(path, std::ios::binary);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == a.out);
}

TEST_CASE("sweep: rows, boundaries, determinism") {
    SweepOptions opts;
    opts.steps = 10;
    const CommandResult r = run(cmd_sweep, opts);
    REQUIRE(r.code == 0);

    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 1 + 11 + 2); // header, lambda grid, two summaries
    CHECK(rows[0] == std::vector<std::string>{"lambda", "ppt_witness", "l1_norm", "M", "max_chsh"});
    for (const auto& row : rows) CHECK(row.size() == 5);

    CHECK(rows[12][0] == "separable_boundary");
    CHECK(std::stod(rows[12][1]) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(rows[13][0] == "chsh_boundary");
    CHECK(std::stod(rows[13][1]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));

    const CommandResult again = run(cmd_sweep, opts);
    CHECK(again.out == r.out);
}

TEST_CASE("sweep: single row at steps = 0 and empty boundary fields off-range") {
    SweepOptions opts;
    opts.from = 0.1;
    opts.to = 0.2;
    opts.steps = 0;
    const CommandResult r = run(cmd_sweep, opts);
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 1 + 1 + 2);
    CHECK(std::stod(rows[1][0]) == 0.1);
    CHECK(rows[2][1].empty()); // no separability crossing inside [0.1, 0.2]
    CHECK(rows[3][1].empty());
}

TEST_CASE("sweep: input validation") {
    SweepOptions bad_range;
    bad_range.from = 0.9;
    bad_range.to = 0.2;
    CHECK(run(cmd_sweep, bad_range).code == 2);

    SweepOptions bad_family;
    bad_family.family = "ghz";
    CHECK(run(cmd_sweep, bad_family).code == 2);

    SweepOptions bad_steps;
    bad_steps.steps = -3;
    CHECK(run(cmd_sweep, bad_steps).code == 2);
}

TEST_CASE("scenario: 50/50 phi mixture is improperly separable, with simulation evidence") {
    const auto path = temp_file("qmix_scenario_phi.json", kPhiMixScenario);
    ScenarioOptions opts;
    opts.path = path.string();
    const CommandResult r = run(cmd_scenario, opts);
    REQUIRE(r.code == 0);
    const json j = parse_json(r.out);

    CHECK(j.at("classification").at("verdict") == "ImproperlySeparable");
    CHECK(j.at("classification").at("ensemble").at("status") == "Separable");
    for (const auto& pc : j.at("classification").at("per_component"))
        CHECK(pc.at("status") == "Entangled");

    const json& sim = j.at("simulation");
    const double whole = sim.at("whole_ensemble_chsh").at("value").get<double>();
    const double stderr_whole = sim.at("whole_ensemble_chsh").at("stderr").get<double>();
    CHECK(std::abs(whole) <= 2.0 + 3.0 * stderr_whole);
    REQUIRE(sim.at("per_tag_chsh").size() == 2);
    for (const auto& row : sim.at("per_tag_chsh")) {
        CHECK(row.at("value").get<double>() > 2.7);
        CHECK(row.at("analytic").get<double>() ==
              doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    }
    CHECK(sim.at("trace_distance_to_analytic").get<double>() < 0.02);

    // frequencies near 1/2
    for (const auto& tc : sim.at("tag_counts"))
        CHECK(tc.at("frequency").get<double>() == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("scenario: product mixture is properly separable") {
    const auto path = temp_file("qmix_scenario_products.json", R"({
      "components": [
        {"weight": 0.5, "state": {"matrix": {"dim": 4, "entries": [
          [1,0],[0,0],[0,0],[0,0],
          [0,0],[0,0],[0,0],[0,0],
          [0,0],[0,0],[0,0],[0,0],
          [0,0],[0,0],[0,0],[0,0]]}}, "tag": 0},
        {"weight": 0.5, "state": {"matrix": {"dim": 4, "entries": [
          [0,0],[0,0],[0,0],[0,0],
          [0,0],[0,0],[0,0],[0,0],
          [0,0],[0,0],[0,0],[0,0],
          [0,0],[0,0],[0,0],[1,0]]}}, "tag": 1}
      ],
      "provenance": "proper"
    })");
    ScenarioOptions opts;
    opts.path = path.string();
    const CommandResult r = run(cmd_scenario, opts);
    REQUIRE(r.code == 0);
    const json j = parse_json(r.out);
    CHECK(j.at("classification").at("verdict") == "ProperlySeparable");
    CHECK_FALSE(j.contains("simulation"));
}

TEST_CASE("scenario: reduced provenance forbids the composition question") {
    const auto path = temp_file("qmix_scenario_reduced.json", R"({
      "components": [
        {"weight": 0.5, "state": "bell:phi+", "tag": 0},
        {"weight": 0.5, "state": "bell:phi-", "tag": 1}
      ],
      "provenance": "reduced"
    })");
    ScenarioOptions opts;
    opts.path = path.string();
    const CommandResult r = run(cmd_scenario, opts);
    REQUIRE(r.code == 0);
    const json j = parse_json(r.out);
    CHECK(j.at("classification").at("verdict") == "SeparableUnknownComposition");
    CHECK(j.at("classification").at("per_component").empty());
}

TEST_CASE("scenario: ensemble dump honors the serialization schema") {
    const auto path = temp_file("qmix_scenario_dump.json", kPhiMixScenario);
    const auto dump = std::filesystem::temp_directory_path() / "qmix_ensemble_dump.json";
    ScenarioOptions opts;
    opts.path = path.string();
    opts.dump_ensemble_path = dump.string();
    REQUIRE(run(cmd_scenario, opts).code == 0);

    std::ifstream in(dump, std::ios::binary);
    const EnsembleFileData data = read_ensemble_json(in);
    CHECK(data.n_runs == 20000);
    CHECK(data.seed == 9);
    CHECK(data.records.size() == 20000);
}

TEST_CASE("scenario: seed override changes the draw, bad files exit 2") {
    const auto path = temp_file("qmix_scenario_phi2.json", kPhiMixScenario);
    ScenarioOptions base;
    base.path = path.string();
    ScenarioOptions reseeded = base;
    reseeded.seed_override = 123;
    const CommandResult a = run(cmd_scenario, base);
    const CommandResult b = run(cmd_scenario, reseeded);
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out != b.out);
    CHECK(parse_json(b.out).at("simulation").at("seed").get<int>() == 123);

    const auto bad = temp_file("qmix_scenario_bad.json", R"({
      "components": [
        {"weight": 0.7, "state": "bell:phi+", "tag": 0},
        {"weight": 0.4, "state": "bell:phi-", "tag": 1}
      ]
    })");
    ScenarioOptions bad_opts;
    bad_opts.path = bad.string();
    CHECK(run(cmd_scenario, bad_opts).code == 2);
}

TEST_CASE("typicality: defaults match the binomial oracle; degenerate flags") {
    TypicalityOptions opts; // p = 0.5,0.5; eps = 0.1; m = 25,100,400
    const CommandResult r = run(cmd_typicality, opts);
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"m", "weight"});
    CHECK(std::stod(rows[3][1]) >= 0.99);

    TypicalityOptions single;
    single.p_csv = "1.0";
    single.m_list_csv = "10,500";
    const auto single_rows = parse_csv(run(cmd_typicality, single).out);
    CHECK(std::stod(single_rows[1][1]) == 1.0);
    CHECK(std::stod(single_rows[2][1]) == 1.0);

    TypicalityOptions wide;
    wide.epsilon = 1.5;
    const auto wide_rows = parse_csv(run(cmd_typicality, wide).out);
    for (std::size_t i = 1; i < wide_rows.size(); ++i) CHECK(std::stod(wide_rows[i][1]) == 1.0);

    TypicalityOptions over;
    over.m_list_csv = "1200";
    CHECK(run(cmd_typicality, over).code == 2);

    TypicalityOptions junk;
    junk.p_csv = "0.5,apple";
    CHECK(run(cmd_typicality, junk).code == 2);
}
