#include <doctest.h>

#include "styre/config.hpp"

using namespace styre;

TEST_CASE("group specs parse for every family") {
    CHECK(parse_group(json{{"family", "cyclic"}, {"n", 6}})->order == 6);
    CHECK(parse_group(json{{"family", "symmetric"}, {"n", 3}})->order == 6);
    CHECK(parse_group(json{{"family", "dihedral"}, {"n", 5}})->order == 10);
    json prod = {{"family", "product"},
                 {"factors", {{{"family", "cyclic"}, {"n", 2}}, {{"family", "cyclic"}, {"n", 3}}}}};
    CHECK(parse_group(prod)->order == 6);
    json table = {{"family", "table"}, {"table", {{0, 1}, {1, 0}}}};
    CHECK(parse_group(table)->order == 2);
}

TEST_CASE("schema violations carry paths") {
    CHECK_THROWS_AS(parse_group(json{{"family", "cyclic"}}), ConfigError);
    CHECK_THROWS_AS(parse_group(json{{"family", "nope"}, {"n", 2}}), ConfigError);
    CHECK_THROWS_AS(parse_group(json{{"family", "cyclic"}, {"n", 2}, {"bogus", 1}}),
                    ConfigError);
    try {
        parse_group(json{{"family", "cyclic"}, {"n", 2}, {"bogus", 1}});
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
}

TEST_CASE("measure specs: all four syntaxes") {
    FiniteGroup s3 = make_symmetric(3);
    GroupMeasure a = parse_measure(json{{"support", {"e", "(12)"}}, {"weights", {0.5, 0.5}}}, s3);
    CHECK(a.weights[0] == 0.5);
    GroupMeasure b = parse_measure(json{{"uniform_on", {"e", "(12)"}}}, s3);
    CHECK(total_variation(a, b) < 1e-15);
    GroupMeasure c = parse_measure(json{{"haar", true}}, s3);
    CHECK(c.weights[3] == doctest::Approx(1.0 / 6));
    GroupMeasure d = parse_measure(json{{"point_mass", "(123)"}}, s3);
    CHECK(d.weights[s3.label_index("(123)")] == 1.0);

    CHECK_THROWS_AS(parse_measure(json{{"haar", false}}, s3), ConfigError);
    CHECK_THROWS_AS(parse_measure(json{{"uniform_on", {"e"}}, {"extra", 1}}, s3), ConfigError);
    CHECK_THROWS_AS(parse_measure(json{{"support", {"e"}}, {"weights", {0.5, 0.5}}}, s3),
                    ConfigError);
    CHECK_THROWS_AS(parse_measure(json{{"point_mass", "nope"}}, s3), ConfigError);
}

TEST_CASE("noise specs: head plus constant or periodic tail") {
    FiniteGroup z2 = make_cyclic(2);
    json doc = {{"head", {{{"point_mass", "1"}}}},
                {"tail", {{"periodic", {{{"uniform_on", {"0"}}}, {{"haar", true}}}}}}};
    NoiseLaw noise = parse_noise(doc, z2);
    CHECK(noise.k_head == 0);
    CHECK(noise.measure_at(0).weights[1] == 1.0);
    CHECK(noise.measure_at(-1).weights[0] == doctest::Approx(0.5));  // last of period
    CHECK(noise.measure_at(-2).weights[0] == 1.0);

    CHECK_THROWS_AS(parse_noise(json{{"head", json::array()}}, z2), ConfigError);
    json both = {{"tail", {{"constant", {{"haar", true}}}, {"periodic", json::array()}}}};
    CHECK_THROWS_AS(parse_noise(both, z2), ConfigError);
}

TEST_CASE("torus specs") {
    json doc = {{"head", {{{"wrapped_gaussian", {{"variance", 1.0}}}}}},
                {"tail", {{"constant", {{"uniform_on", {0.0, 0.5}}}}}}};
    TorusNoise noise = parse_torus(doc);
    CHECK(noise.k_head == 0);
    CHECK(std::abs(char_coeff(noise, -3, 1)) < 1e-15);

    TorusNoise grid = parse_torus(json{{"grid", {{"geometric", {{"ratio", 0.5}, {"terms", 10}}}}}});
    CHECK(grid.head.size() == 9);
    CHECK_THROWS_AS(parse_torus(json{{"grid", {0.5, 0.25}}}), ConfigError);
}

TEST_CASE("load_config: knobs, unknown keys, torus exclusivity") {
    json doc = {{"group", {{"family", "cyclic"}, {"n", 2}}},
                {"noise", {{"tail", {{"constant", {{"haar", true}}}}}}},
                {"knobs", {{"max_n", 500}, {"seed", 7}}}};
    LoadedConfig cfg = load_config(doc);
    CHECK(cfg.knobs.max_n == 500);
    CHECK(cfg.knobs.seed == 7);
    CHECK(cfg.knobs.eps_zero == 1e-12);  // default preserved
    CHECK_FALSE(cfg.has_torus);
    CHECK(cfg.hash.size() == 16);
    CHECK(cfg.hash == config_hash(doc));

    json bad = doc;
    bad["extra"] = 1;
    CHECK_THROWS_AS(load_config(bad), ConfigError);
    json mixed = doc;
    mixed["torus"] = {{"tail", {{"constant", {{"point_mass", 0.0}}}}}};
    CHECK_THROWS_AS(load_config(mixed), ConfigError);
}

TEST_CASE("entrance law serialization round trip") {
    FiniteGroup s3 = make_symmetric(3);
    NoiseLaw noise(s3, {}, {uniform_on(s3, {0, 1})}, false);
    EntranceLaw law = find_extremal_entrance_law(noise);
    json doc = entrance_law_to_json(law);
    EntranceLaw back = entrance_law_from_json(doc, noise);
    CHECK(laws_equal(law, back, 1e-12));
    CHECK(doc["marginals"][0]["k"] == law.k_work);
}

TEST_CASE("report envelope") {
    json rep = make_report("classify", "deadbeefdeadbeef", json{{"verdict", "C1"}});
    CHECK(rep["schema"] == "styre-report/1");
    CHECK(rep["config_hash"] == "deadbeefdeadbeef");
    CHECK(rep["result"]["verdict"] == "C1");
    CHECK(rep.contains("version"));
}

TEST_CASE("trichotomy report serialization") {
    FiniteGroup z4 = make_cyclic(4);
    NoiseLaw noise(z4, {}, {uniform_on(z4, {0, 2})}, false);
    json doc = trichotomy_to_json(classify_trichotomy(noise));
    CHECK(doc["verdict"] == "C3");
    CHECK(doc["H1"] == json({"0", "2"}));
    CHECK(doc["uniqueness_in_law"] == false);
}
