#pragma once

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "styre/classifier.hpp"
#include "styre/solutions.hpp"
#include "styre/torus.hpp"

namespace styre {

using json = nlohmann::json;

// schema violations carry the offending path
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what) {}
};

struct Knobs {
    int max_n = 10000;
    double eps_zero = 1e-12;
    double tol = 1e-8;
    int k_work = -32;
    std::uint64_t seed = 42;
    int n_samples = 100000;
    int nmax = 64;
};

struct LoadedConfig {
    std::shared_ptr<FiniteGroup> group;
    NoiseLaw noise;          // valid when group is set
    bool has_torus = false;
    TorusNoise torus;
    Knobs knobs;
    std::string out;
    std::string hash;  // of the normalized config text
};

std::shared_ptr<FiniteGroup> parse_group(const json& spec, const std::string& path = "group");
GroupMeasure parse_measure(const json& spec, const FiniteGroup& g,
                           const std::string& path = "measure");
NoiseLaw parse_noise(const json& spec, const FiniteGroup& g,
                     const std::string& path = "noise");
TorusNoise parse_torus(const json& spec, const std::string& path = "torus");

LoadedConfig load_config(const json& doc);
LoadedConfig load_config_file(const std::string& path);

std::string config_hash(const json& doc);

json subgroup_to_json(const Subgroup& h);
json measure_to_json(const GroupMeasure& m);
json entrance_law_to_json(const EntranceLaw& law);
EntranceLaw entrance_law_from_json(const json& doc, const NoiseLaw& noise);
json trichotomy_to_json(const TrichotomyReport& rep);

// wraps a payload in the versioned report envelope
json make_report(const std::string& command, const std::string& cfg_hash, json payload);

}  // namespace styre
