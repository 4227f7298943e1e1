#include "styre/config.hpp"

#include <algorithm>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>

namespace styre {

namespace {

void expect_keys(const json& obj, const std::vector<std::string>& allowed,
                 const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path, "expected a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed) ok = ok || it.key() == k;
        if (!ok) throw ConfigError(path + "." + it.key(), "unknown key");
    }
}

const json& need(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(path + "." + key, "missing required key");
    return *it;
}

std::vector<int> label_list(const json& arr, const FiniteGroup& g, const std::string& path) {
    if (!arr.is_array() || arr.empty()) throw ConfigError(path, "expected a non-empty array");
    std::vector<int> out;
    for (const auto& v : arr) {
        if (!v.is_string()) throw ConfigError(path, "element labels must be strings");
        out.push_back(g.label_index(v.get<std::string>()));
    }
    return out;
}

TorusCoeff parse_coeff(const json& spec, const std::string& path) {
    expect_keys(spec, {"wrapped_gaussian", "point_mass", "uniform_on", "table", "atoms"},
                path);
    if (spec.size() != 1) throw ConfigError(path, "expected exactly one coefficient family");
    if (spec.contains("wrapped_gaussian")) {
        const json& w = spec["wrapped_gaussian"];
        expect_keys(w, {"mean", "variance"}, path + ".wrapped_gaussian");
        return TorusCoeff::wrapped_gaussian(w.value("mean", 0.0),
                                            need(w, "variance", path).get<double>());
    }
    if (spec.contains("point_mass"))
        return TorusCoeff::point_mass(spec["point_mass"].get<double>());
    if (spec.contains("uniform_on"))
        return TorusCoeff::uniform_set(spec["uniform_on"].get<std::vector<double>>());
    if (spec.contains("atoms")) {
        const json& a = spec["atoms"];
        expect_keys(a, {"points", "weights"}, path + ".atoms");
        return TorusCoeff::atoms(need(a, "points", path).get<std::vector<double>>(),
                                 need(a, "weights", path).get<std::vector<double>>());
    }
    const json& t = spec["table"];
    expect_keys(t, {"n", "re", "im"}, path + ".table");
    auto ns = need(t, "n", path).get<std::vector<int>>();
    auto re = need(t, "re", path).get<std::vector<double>>();
    auto im = t.value("im", std::vector<double>(ns.size(), 0.0));
    if (ns.size() != re.size() || ns.size() != im.size())
        throw ConfigError(path + ".table", "n/re/im length mismatch");
    std::map<int, std::complex<double>> m;
    for (size_t i = 0; i < ns.size(); ++i) m[ns[i]] = {re[i], im[i]};
    return TorusCoeff::explicit_table(std::move(m));
}

}  // namespace

std::shared_ptr<FiniteGroup> parse_group(const json& spec, const std::string& path) {
    expect_keys(spec, {"family", "n", "factors", "table", "labels"}, path);
    const std::string family = need(spec, "family", path).get<std::string>();
    try {
        if (family == "cyclic")
            return std::make_shared<FiniteGroup>(
                make_cyclic(need(spec, "n", path).get<int>()));
        if (family == "symmetric")
            return std::make_shared<FiniteGroup>(
                make_symmetric(need(spec, "n", path).get<int>()));
        if (family == "dihedral")
            return std::make_shared<FiniteGroup>(
                make_dihedral(need(spec, "n", path).get<int>()));
        if (family == "product") {
            const json& factors = need(spec, "factors", path);
            if (!factors.is_array() || factors.size() < 2)
                throw ConfigError(path + ".factors", "need at least two factors");
            auto g = parse_group(factors[0], path + ".factors[0]");
            for (size_t i = 1; i < factors.size(); ++i)
                g = std::make_shared<FiniteGroup>(make_product(
                    *g, *parse_group(factors[i], path + ".factors[" + std::to_string(i) + "]")));
            return g;
        }
        if (family == "table") {
            auto table = need(spec, "table", path).get<std::vector<std::vector<int>>>();
            auto labels = spec.value("labels", std::vector<std::string>{});
            return std::make_shared<FiniteGroup>(
                make_from_table(std::move(table), std::move(labels)));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path + ".family", "unknown group family '" + family + "'");
}

GroupMeasure parse_measure(const json& spec, const FiniteGroup& g, const std::string& path) {
    expect_keys(spec, {"support", "weights", "uniform_on", "haar", "point_mass"}, path);
    try {
        if (spec.contains("haar")) {
            if (spec.size() != 1 || spec["haar"] != true)
                throw ConfigError(path + ".haar", "expected {\"haar\": true} alone");
            return haar(g);
        }
        if (spec.contains("point_mass")) {
            if (spec.size() != 1) throw ConfigError(path, "point_mass takes no other keys");
            return point_mass(g, g.label_index(spec["point_mass"].get<std::string>()));
        }
        if (spec.contains("uniform_on")) {
            if (spec.size() != 1) throw ConfigError(path, "uniform_on takes no other keys");
            return uniform_on(g, label_list(spec["uniform_on"], g, path + ".uniform_on"));
        }
        auto support = label_list(need(spec, "support", path), g, path + ".support");
        auto w = need(spec, "weights", path).get<std::vector<double>>();
        if (w.size() != support.size())
            throw ConfigError(path, "support and weights length mismatch");
        std::vector<double> full(g.order, 0.0);
        for (size_t i = 0; i < support.size(); ++i) full[support[i]] += w[i];
        return GroupMeasure(g, std::move(full));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
}

NoiseLaw parse_noise(const json& spec, const FiniteGroup& g, const std::string& path) {
    expect_keys(spec, {"head", "tail"}, path);
    std::vector<GroupMeasure> head;
    if (spec.contains("head")) {
        const json& h = spec["head"];
        if (!h.is_array()) throw ConfigError(path + ".head", "expected an array");
        for (size_t i = 0; i < h.size(); ++i)
            head.push_back(parse_measure(h[i], g, path + ".head[" + std::to_string(i) + "]"));
    }
    const json& tail = need(spec, "tail", path);
    expect_keys(tail, {"constant", "periodic"}, path + ".tail");
    if (tail.size() != 1)
        throw ConfigError(path + ".tail", "expected exactly one of constant/periodic");
    std::vector<GroupMeasure> tail_measures;
    bool periodic = tail.contains("periodic");
    if (periodic) {
        const json& p = tail["periodic"];
        if (!p.is_array() || p.empty())
            throw ConfigError(path + ".tail.periodic", "expected a non-empty array");
        for (size_t i = 0; i < p.size(); ++i)
            tail_measures.push_back(
                parse_measure(p[i], g, path + ".tail.periodic[" + std::to_string(i) + "]"));
    } else {
        tail_measures.push_back(parse_measure(tail["constant"], g, path + ".tail.constant"));
    }
    return NoiseLaw(g, std::move(head), std::move(tail_measures), periodic);
}

TorusNoise parse_torus(const json& spec, const std::string& path) {
    expect_keys(spec, {"head", "tail", "grid"}, path);
    if (spec.contains("grid")) {
        if (spec.size() != 1) throw ConfigError(path, "grid takes no other keys");
        const json& grid = spec["grid"];
        std::vector<double> t;
        if (grid.is_array()) {
            t = grid.get<std::vector<double>>();
        } else {
            expect_keys(grid, {"geometric"}, path + ".grid");
            const json& geo = need(grid, "geometric", path + ".grid");
            expect_keys(geo, {"ratio", "terms"}, path + ".grid.geometric");
            double ratio = need(geo, "ratio", path).get<double>();
            int terms = need(geo, "terms", path).get<int>();
            if (ratio <= 0.0 || ratio >= 1.0 || terms < 2)
                throw ConfigError(path + ".grid.geometric", "need 0 < ratio < 1, terms >= 2");
            double v = 1.0;
            for (int i = 0; i < terms; ++i, v *= ratio) t.push_back(v);
            std::reverse(t.begin(), t.end());
        }
        try {
            return tsirelson_grid_noise(t);
        } catch (const std::exception& e) {
            throw ConfigError(path + ".grid", e.what());
        }
    }
    TorusNoise noise;
    try {
        if (spec.contains("head")) {
            const json& h = spec["head"];
            if (!h.is_array()) throw ConfigError(path + ".head", "expected an array");
            for (size_t i = 0; i < h.size(); ++i)
                noise.head.push_back(parse_coeff(h[i], path + ".head[" + std::to_string(i) + "]"));
            noise.k_head = 1 - (int)noise.head.size();
        }
        const json& tail = need(spec, "tail", path);
        expect_keys(tail, {"constant", "periodic"}, path + ".tail");
        if (tail.contains("constant")) {
            noise.periodic_tail.push_back(parse_coeff(tail["constant"], path + ".tail.constant"));
        } else {
            const json& p = need(tail, "periodic", path + ".tail");
            for (size_t i = 0; i < p.size(); ++i)
                noise.periodic_tail.push_back(
                    parse_coeff(p[i], path + ".tail.periodic[" + std::to_string(i) + "]"));
            if (noise.periodic_tail.empty())
                throw ConfigError(path + ".tail.periodic", "expected a non-empty array");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    return noise;
}

std::string config_hash(const json& doc) {
    // FNV-1a over the canonical dump
    const std::string s = doc.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

LoadedConfig load_config(const json& doc) {
    expect_keys(doc, {"group", "noise", "torus", "knobs", "out"}, "$");
    LoadedConfig cfg;
    cfg.hash = config_hash(doc);
    if (doc.contains("knobs")) {
        const json& k = doc["knobs"];
        expect_keys(k, {"max_n", "eps_zero", "tol", "k_work", "seed", "n_samples", "nmax"},
                    "$.knobs");
        cfg.knobs.max_n = k.value("max_n", cfg.knobs.max_n);
        cfg.knobs.eps_zero = k.value("eps_zero", cfg.knobs.eps_zero);
        cfg.knobs.tol = k.value("tol", cfg.knobs.tol);
        cfg.knobs.k_work = k.value("k_work", cfg.knobs.k_work);
        cfg.knobs.seed = k.value("seed", cfg.knobs.seed);
        cfg.knobs.n_samples = k.value("n_samples", cfg.knobs.n_samples);
        cfg.knobs.nmax = k.value("nmax", cfg.knobs.nmax);
    }
    cfg.out = doc.value("out", "");
    if (doc.contains("torus")) {
        if (doc.contains("group") || doc.contains("noise"))
            throw ConfigError("$.torus", "torus configs cannot also declare a finite group");
        cfg.has_torus = true;
        cfg.torus = parse_torus(doc["torus"], "torus");
        return cfg;
    }
    cfg.group = parse_group(need(doc, "group", "$"), "group");
    cfg.noise = parse_noise(need(doc, "noise", "$"), *cfg.group, "noise");
    return cfg;
}

LoadedConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, e.what());
    }
    return load_config(doc);
}

json subgroup_to_json(const Subgroup& h) {
    auto labels = h.member_labels();
    std::sort(labels.begin(), labels.end());
    return labels;
}

json measure_to_json(const GroupMeasure& m) {
    json support = json::array(), weights = json::array();
    for (int i = 0; i < m.group->order; ++i)
        if (m.weights[i] > 0.0) {
            support.push_back(m.group->labels[i]);
            weights.push_back(m.weights[i]);
        }
    return json{{"support", support}, {"weights", weights}};
}

json entrance_law_to_json(const EntranceLaw& law) {
    json marginals = json::array();
    for (size_t i = 0; i < law.marginals.size(); ++i) {
        json m = measure_to_json(law.marginals[i]);
        m["k"] = law.k_work + (int)i;
        marginals.push_back(std::move(m));
    }
    return json{{"k_work", law.k_work},
                {"marginals", marginals},
                {"tail_limit", measure_to_json(law.tail_limit)},
                {"convergence_tv", law.convergence_tv}};
}

EntranceLaw entrance_law_from_json(const json& doc, const NoiseLaw& noise) {
    expect_keys(doc, {"k_work", "marginals", "tail_limit", "convergence_tv"}, "law");
    const FiniteGroup& g = *noise.group;
    auto parse_m = [&](const json& spec, const std::string& path) {
        json clean = spec;
        clean.erase("k");
        return parse_measure(clean, g, path);
    };
    EntranceLaw law;
    law.noise = &noise;
    law.k_work = need(doc, "k_work", "law").get<int>();
    const json& marg = need(doc, "marginals", "law");
    if ((int)marg.size() != 1 - law.k_work)
        throw ConfigError("law.marginals", "expected one marginal per k in [k_work..0]");
    for (size_t i = 0; i < marg.size(); ++i)
        law.marginals.push_back(parse_m(marg[i], "law.marginals[" + std::to_string(i) + "]"));
    law.tail_limit = parse_m(need(doc, "tail_limit", "law"), "law.tail_limit");
    law.convergence_tv = doc.value("convergence_tv", 0.0);
    return law;
}

json trichotomy_to_json(const TrichotomyReport& rep) {
    json flags = json::array();
    for (const auto& f : rep.flags)
        flags.push_back(json{{"irrep", f.irrep_name},
                             {"dim", f.dim},
                             {"in_h1", to_string(f.in_h1)},
                             {"in_h2", to_string(f.in_h2)},
                             {"in_hs", to_string(f.in_hs)},
                             {"hs_statistic", f.hs_statistic}});
    return json{{"H1", subgroup_to_json(rep.h1)},
                {"H2", subgroup_to_json(rep.h2)},
                {"H_isotropy", subgroup_to_json(rep.h_isotropy)},
                {"Hs_lower", subgroup_to_json(rep.hs_lower)},
                {"Hs_upper", subgroup_to_json(rep.hs_upper)},
                {"irreps", flags},
                {"verdict", to_string(rep.verdict)},
                {"uniqueness_in_law", rep.uniqueness_in_law},
                {"strong_solution_exists", to_string(rep.strong_solution_exists)},
                {"hs_resolved_statistically", rep.hs_resolved_statistically},
                {"notes", rep.notes}};
}

json make_report(const std::string& command, const std::string& cfg_hash, json payload) {
    return json{{"schema", "styre-report/1"},
                {"version", STYRE_VERSION},
                {"command", command},
                {"config_hash", cfg_hash},
                {"result", std::move(payload)}};
}

}  // namespace styre
