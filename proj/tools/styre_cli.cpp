#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "styre/config.hpp"
#include "styre/montecarlo.hpp"
#include "styre/tye.hpp"

using namespace styre;

namespace {

constexpr int exit_config = 1;
constexpr int exit_inconclusive = 2;
constexpr int exit_mismatch = 3;

struct CommonFlags {
    std::string config_path, out_path;
    std::uint64_t seed = 42;
    int max_n = 10000;
    double eps_zero = 1e-12;
    double tol = 1e-8;
    int nmax = 64;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required = true) {
    auto* c = cmd->add_option("--config", f.config_path, "config JSON path");
    if (config_required) c->required();
    cmd->add_option("--out", f.out_path, "report output path");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--max-n", f.max_n, "truncation horizon for r-limits");
    cmd->add_option("--eps-zero", f.eps_zero, "declared-zero threshold");
    cmd->add_option("--tol", f.tol, "convergence / comparison tolerance");
    cmd->add_option("--nmax", f.nmax, "torus character window");
}

LoadedConfig load(const CommonFlags& f, const CLI::App* cmd) {
    LoadedConfig cfg = load_config_file(f.config_path);
    // command-line flags override config knobs
    if (cmd->count("--seed")) cfg.knobs.seed = f.seed;
    if (cmd->count("--max-n")) cfg.knobs.max_n = f.max_n;
    if (cmd->count("--eps-zero")) cfg.knobs.eps_zero = f.eps_zero;
    if (cmd->count("--tol")) cfg.knobs.tol = f.tol;
    if (cmd->count("--nmax")) cfg.knobs.nmax = f.nmax;
    if (cmd->count("--out")) cfg.out = f.out_path;
    return cfg;
}

void emit(const LoadedConfig& cfg, const std::string& command, json payload) {
    json rep = make_report(command, cfg.hash, std::move(payload));
    if (!cfg.out.empty()) {
        std::ofstream out(cfg.out);
        out << rep.dump(2) << "\n";
    }
    std::cout << rep["result"].dump(2) << "\n";
}

TrichotomyOptions trichotomy_options(const LoadedConfig& cfg) {
    TrichotomyOptions opts;
    opts.classifier.max_n = cfg.knobs.max_n;
    opts.classifier.eps_zero = cfg.knobs.eps_zero;
    opts.k_work = cfg.knobs.k_work;
    opts.tol = cfg.knobs.tol;
    opts.seed = cfg.knobs.seed;
    opts.mc_samples = cfg.knobs.n_samples;
    return opts;
}

int run_classify(const CommonFlags& f, const CLI::App* cmd) {
    LoadedConfig cfg = load(f, cmd);
    if (cfg.has_torus) throw ConfigError("$.torus", "use the torus subcommand");
    TrichotomyReport rep = classify_trichotomy(cfg.noise, trichotomy_options(cfg));
    emit(cfg, "classify", trichotomy_to_json(rep));
    std::cout << "verdict: " << to_string(rep.verdict) << "\n";
    return rep.verdict == Verdict::undetermined ? exit_inconclusive : 0;
}

int run_extremal(const CommonFlags& f, const CLI::App* cmd) {
    LoadedConfig cfg = load(f, cmd);
    ExtremalOptions opts;
    opts.k_work = cfg.knobs.k_work;
    opts.tol = cfg.knobs.tol;
    EntranceLaw law = find_extremal_entrance_law(cfg.noise, opts);
    emit(cfg, "extremal", entrance_law_to_json(law));
    return 0;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, e.what());
    }
}

int run_orbit(const CommonFlags& f, const CLI::App* cmd, const std::string& law_path) {
    LoadedConfig cfg = load(f, cmd);
    EntranceLaw law = law_path.empty()
                          ? find_extremal_entrance_law(
                                cfg.noise, {cfg.knobs.k_work, cfg.knobs.tol})
                          : entrance_law_from_json(load_json_file(law_path), cfg.noise);
    OrbitReport rep = orbit_and_isotropy(law, cfg.knobs.tol);
    json orbit = json::array();
    for (size_t i = 0; i < rep.orbit.size(); ++i)
        orbit.push_back(json{{"translator", cfg.noise.group->labels[rep.orbit_translators[i]]},
                             {"law", entrance_law_to_json(rep.orbit[i])}});
    const char* grade = rep.extremality == ExtremalityGrade::verified_vertex ? "verified_vertex"
                        : rep.extremality == ExtremalityGrade::heuristic     ? "heuristic"
                                                                             : "failed";
    emit(cfg, "orbit",
         json{{"orbit_size", rep.orbit.size()},
              {"isotropy", subgroup_to_json(rep.isotropy)},
              {"extremality", grade},
              {"orbit", orbit}});
    return 0;
}

int run_simulate(const CommonFlags& f, const CLI::App* cmd, const std::string& law_path,
                 int n, int kmin) {
    LoadedConfig cfg = load(f, cmd);
    EntranceLaw law = law_path.empty()
                          ? center_entrance_law(cfg.noise, cfg.knobs.k_work)
                          : entrance_law_from_json(load_json_file(law_path), cfg.noise);
    TrajectoryBatch batch = simulate(law, kmin, n, cfg.knobs.seed);
    TestReport indep = independence_test(batch, 0, 2);
    json payload{{"n_samples", n},
                 {"k_min", kmin},
                 {"independence", {{"statistic", indep.statistic},
                                   {"value", indep.value},
                                   {"p_value", indep.p_value},
                                   {"pass", indep.pass},
                                   {"detail", indep.detail}}}};
    // empirical marginal at k = 0
    std::vector<double> freq(cfg.noise.group->order, 0.0);
    for (int s = 0; s < batch.n_samples(); ++s) freq[batch.eta[s].back()] += 1.0 / n;
    payload["empirical_marginal_0"] = freq;
    emit(cfg, "simulate", payload);
    return 0;
}

int run_reconstruct(const CommonFlags& f, const CLI::App* cmd, const std::string& law_path,
                    const std::string& irrep_name, int depth, int n) {
    LoadedConfig cfg = load(f, cmd);
    EntranceLaw law = law_path.empty()
                          ? find_extremal_entrance_law(
                                cfg.noise, {cfg.knobs.k_work, cfg.knobs.tol})
                          : entrance_law_from_json(load_json_file(law_path), cfg.noise);
    auto irreps = irreps_of(*cfg.noise.group);
    const Irrep* rho = nullptr;
    for (const auto& r : irreps)
        if (r.name == irrep_name) rho = &r;
    if (!rho) throw ConfigError("--irrep", "unknown irrep '" + irrep_name + "'");
    TrajectoryBatch batch = simulate(law, -depth - 2, n, cfg.knobs.seed);
    ReconstructionResult res = reconstruct_strong(batch, *rho, 0, depth);
    emit(cfg, "reconstruct",
         json{{"irrep", irrep_name},
              {"depth", depth},
              {"agreement_rate", res.agreement_rate},
              {"det_mean_xi", res.det_mean_xi},
              {"condition_number", res.condition_number},
              {"ill_conditioned", res.ill_conditioned}});
    return 0;
}

int run_torus(const CommonFlags& f, const CLI::App* cmd) {
    LoadedConfig cfg = load(f, cmd);
    if (!cfg.has_torus) throw ConfigError("$", "torus classify needs a torus config");
    ZmuOptions opts;
    opts.max_n = cfg.knobs.max_n;
    opts.eps_zero = cfg.knobs.eps_zero;
    ZmuResult res = compute_Z_mu(cfg.torus, cfg.knobs.nmax, opts);
    const char* verdict = res.generator_d == 0   ? "C1"
                          : res.generator_d == 1 ? "C2 (up to truncation)"
                                                 : "C3 (up to truncation)";
    emit(cfg, "torus",
         json{{"generator_d", res.generator_d},
              {"survivors", res.survivors},
              {"inconclusive", res.inconclusive},
              {"subgroup_closed", res.subgroup_closed},
              {"n_max", res.n_max},
              {"truncation_caveat", res.truncation_caveat},
              {"verdict", verdict}});
    std::cout << "Z_mu generator (certified to |n| <= " << res.n_max
              << "): " << res.generator_d << "\n";
    return res.inconclusive.empty() ? 0 : exit_inconclusive;
}

SNoise parse_snoise(const json& spec, const std::string& path) {
    if (!spec.is_object() || spec.size() != 1)
        throw ConfigError(path, "expected one of discrete/uniform/gaussian");
    if (spec.contains("discrete")) {
        const json& d = spec["discrete"];
        return SNoise::discrete(d.at("values").get<std::vector<double>>(),
                                d.at("weights").get<std::vector<double>>());
    }
    if (spec.contains("uniform")) {
        const json& u = spec["uniform"];
        return SNoise::uniform(u.at("lo").get<double>(), u.at("hi").get<double>());
    }
    if (spec.contains("gaussian")) {
        const json& g = spec["gaussian"];
        return SNoise::gaussian(g.at("mean").get<double>(), g.at("sd").get<double>());
    }
    throw ConfigError(path, "unknown S-noise family");
}

SNoiseLaw parse_snoise_law(const json& doc) {
    SNoiseLaw law;
    if (doc.contains("head")) {
        for (size_t i = 0; i < doc["head"].size(); ++i)
            law.head.push_back(parse_snoise(doc["head"][i], "head[" + std::to_string(i) + "]"));
        law.k_head = 1 - (int)law.head.size();
    }
    const json& tail = doc.at("tail");
    if (tail.contains("constant")) {
        law.periodic_tail.push_back(parse_snoise(tail["constant"], "tail.constant"));
    } else {
        for (size_t i = 0; i < tail.at("periodic").size(); ++i)
            law.periodic_tail.push_back(
                parse_snoise(tail["periodic"][i], "tail.periodic[" + std::to_string(i) + "]"));
    }
    return law;
}

TyeSpec make_named_spec(const std::string& name, SNoiseLaw noise) {
    if (name == "sgn") return make_sgn_spec(std::move(noise));
    if (name == "fractional_part") return make_fractional_part_spec(std::move(noise));
    throw ConfigError("--spec", "unknown spec name '" + name + "' (custom needs a config)");
}

int run_tye_reduce(const std::string& spec_name, const std::string& noise_path,
                   const std::string& out_path, std::uint64_t seed) {
    json doc = load_json_file(noise_path);
    TyeSpec spec = make_named_spec(spec_name, parse_snoise_law(doc));
    TestReport comm = check_commutation(spec, 10000, seed);
    json payload{{"spec", spec_name},
                 {"commutation", {{"pass", comm.pass}, {"max_error", comm.value},
                                  {"detail", comm.detail}}}};
    if (spec.reduces_to_torus()) {
        TorusNoise hat = induced_torus_noise(spec);
        json coeffs = json::array();
        for (int n = 0; n <= 8; ++n) {
            auto c = char_coeff(hat, 0, n);
            coeffs.push_back(json{{"n", n}, {"re", c.real()}, {"im", c.imag()}});
        }
        payload["induced_torus_coeffs_k0"] = coeffs;
    } else {
        NoiseLaw hat = induced_group_noise(spec);
        payload["induced_noise_k0"] = measure_to_json(hat.measure_at(0));
    }
    json rep = make_report("tye reduce", config_hash(doc), std::move(payload));
    if (!out_path.empty()) std::ofstream(out_path) << rep.dump(2) << "\n";
    std::cout << rep["result"].dump(2) << "\n";
    return comm.pass ? 0 : exit_mismatch;
}

int run_tye_lift(const std::string& spec_name, const std::string& noise_path,
                 const std::string& law_path, const std::string& out_path, int n,
                 std::uint64_t seed) {
    json noise_doc = load_json_file(noise_path);
    TyeSpec spec = make_named_spec(spec_name, parse_snoise_law(noise_doc));
    if (spec.reduces_to_torus())
        throw ConfigError("--spec", "lift covers finite-group specs only");
    NoiseLaw hat = induced_group_noise(spec);
    EntranceLaw law = law_path.empty()
                          ? find_extremal_entrance_law(hat)
                          : entrance_law_from_json(load_json_file(law_path), hat);
    STrajectories lifted = lift_solution(spec, law, law.k_work, n, seed);
    HatReduction red = hat_reduce(spec, lifted);
    std::vector<double> freq(spec.group->order, 0.0);
    for (const auto& traj : red.eta_hat) freq[traj.back()] += 1.0 / n;
    json payload{{"spec", spec_name},
                 {"n_samples", n},
                 {"reduced_marginal_0", freq},
                 {"target_marginal_0", measure_to_json(law.at(0))}};
    json rep = make_report("tye lift", config_hash(noise_doc), std::move(payload));
    if (!out_path.empty()) std::ofstream(out_path) << rep.dump(2) << "\n";
    std::cout << rep["result"].dump(2) << "\n";
    return 0;
}

bool check(const char* name, bool ok) {
    std::cout << (ok ? "PASS  " : "FAIL  ") << name << "\n";
    return ok;
}

int run_verify_fixtures() {
    bool all = true;
    {
        // S3, constant uniform on {e,(12)}
        FiniteGroup s3 = make_symmetric(3);
        NoiseLaw noise(s3, {}, {uniform_on(s3, {0, 1})}, false);
        TrichotomyReport rep = classify_trichotomy(noise);
        all &= check("S3 H1 trivial", rep.h1.members == std::vector<int>{0});
        all &= check("S3 H2 full", (int)rep.h2.members.size() == 6);
        all &= check("S3 isotropy = {e,(12)}", rep.h_isotropy.members == std::vector<int>{0, 1});
        all &= check("S3 verdict C3", rep.verdict == Verdict::C3);
        OrbitReport orb = orbit_and_isotropy(find_extremal_entrance_law(noise));
        all &= check("S3 orbit size 3", orb.orbit.size() == 3);
    }
    {
        FiniteGroup z2 = make_cyclic(2);
        NoiseLaw fair(z2, {}, {haar(z2)}, false);
        all &= check("Z/2 p=1/2 verdict C1",
                     classify_trichotomy(fair).verdict == Verdict::C1);
        std::vector<GroupMeasure> head;
        for (int j = -59; j <= 0; ++j) {
            double p = (1.0 + std::exp(-std::pow(2.0, j))) / 2.0;
            head.push_back(GroupMeasure(z2, {p, 1.0 - p}));
        }
        NoiseLaw strong(z2, std::move(head), {point_mass(z2, 0)}, false);
        auto irreps = irreps_of(z2);
        auto [r1, r2] = r_limits(strong, irreps[1], 0);
        all &= check("Z/2 r2_0 = exp(-2)", std::abs(r2.value - std::exp(-2.0)) < 1e-9);
        all &= check("Z/2 geometric verdict C2",
                     classify_trichotomy(strong).verdict == Verdict::C2);
    }
    {
        FiniteGroup z4 = make_cyclic(4);
        NoiseLaw noise(z4, {}, {uniform_on(z4, {0, 2})}, false);
        TrichotomyReport rep = classify_trichotomy(noise);
        all &= check("Z/4 H = {0,2}", rep.h1.members == std::vector<int>{0, 2} &&
                                          rep.h2.members == std::vector<int>{0, 2});
        all &= check("Z/4 verdict C3", rep.verdict == Verdict::C3);
    }
    {
        TorusNoise gauss;
        gauss.periodic_tail.push_back(TorusCoeff::wrapped_gaussian(0.0, 1.0));
        all &= check("torus gaussian d=0", compute_Z_mu(gauss, 64).generator_d == 0);
        TorusNoise pm;
        pm.periodic_tail.push_back(TorusCoeff::point_mass(0.25));
        all &= check("torus point-mass d=1", compute_Z_mu(pm, 64).generator_d == 1);
        TorusNoise half;
        half.periodic_tail.push_back(TorusCoeff::uniform_set({0.0, 0.5}));
        all &= check("torus uniform{0,1/2} d=2", compute_Z_mu(half, 64).generator_d == 2);
    }
    {
        SNoiseLaw snl;
        snl.periodic_tail.push_back(SNoise::gaussian(0.0, 1.0));
        TyeSpec spec = make_sgn_spec(snl);
        all &= check("sgn commutation", check_commutation(spec, 10000, 7).pass);
        NoiseLaw hat = induced_group_noise(spec);
        all &= check("sgn induced p=1/2",
                     std::abs(hat.measure_at(0).weights[0] - 0.5) < 1e-12);
    }
    return all ? 0 : exit_mismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"styre: classification and simulation of driftless stochastic "
                 "recursions on finite groups"};
    app.require_subcommand(1);

    CommonFlags f;
    std::string law_path, irrep_name, spec_name, noise_path;
    int n_samples = 100000, kmin = -32, depth = 30;

    auto* classify = app.add_subcommand("classify", "trichotomy verdict for a noise law");
    add_common(classify, f);

    auto* extremal = app.add_subcommand("extremal", "extremal entrance law");
    add_common(extremal, f);

    auto* orbit = app.add_subcommand("orbit", "orbit and isotropy of an entrance law");
    add_common(orbit, f);
    orbit->add_option("--law", law_path, "entrance law JSON (default: extremal)");

    auto* simulate_cmd = app.add_subcommand("simulate", "simulate trajectories");
    add_common(simulate_cmd, f);
    simulate_cmd->add_option("--law", law_path, "entrance law JSON (default: center)");
    simulate_cmd->add_option("--n", n_samples, "sample count");
    simulate_cmd->add_option("--kmin", kmin, "simulation start index");

    auto* reconstruct = app.add_subcommand("reconstruct", "martingale reconstruction");
    add_common(reconstruct, f);
    reconstruct->add_option("--law", law_path, "entrance law JSON (default: extremal)");
    reconstruct->add_option("--irrep", irrep_name, "irrep name")->required();
    reconstruct->add_option("--depth", depth, "reconstruction depth");
    reconstruct->add_option("--n", n_samples, "sample count");

    auto* torus = app.add_subcommand("torus", "torus-side operations");
    auto* torus_classify = torus->add_subcommand("classify", "Z_mu and trichotomy");
    add_common(torus_classify, f);

    auto* tye = app.add_subcommand("tye", "generalized-equation operations");
    auto* tye_reduce = tye->add_subcommand("reduce", "reduce to the group equation");
    tye_reduce->add_option("--spec", spec_name, "sgn | fractional_part")->required();
    tye_reduce->add_option("--noise", noise_path, "S-noise JSON")->required();
    tye_reduce->add_option("--out", f.out_path);
    tye_reduce->add_option("--seed", f.seed);
    auto* tye_lift = tye->add_subcommand("lift", "lift a group law to the state space");
    tye_lift->add_option("--spec", spec_name, "sgn")->required();
    tye_lift->add_option("--noise", noise_path, "S-noise JSON")->required();
    tye_lift->add_option("--law", law_path, "group entrance law JSON (default: extremal)");
    tye_lift->add_option("--out", f.out_path);
    tye_lift->add_option("--n", n_samples);
    tye_lift->add_option("--seed", f.seed);

    auto* verify = app.add_subcommand("verify-fixtures", "run the pinned regression fixtures");
    (void)verify;

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed()) return run_classify(f, classify);
        if (extremal->parsed()) return run_extremal(f, extremal);
        if (orbit->parsed()) return run_orbit(f, orbit, law_path);
        if (simulate_cmd->parsed())
            return run_simulate(f, simulate_cmd, law_path, n_samples, kmin);
        if (reconstruct->parsed())
            return run_reconstruct(f, reconstruct, law_path, irrep_name, depth, n_samples);
        if (torus->parsed() && torus_classify->parsed())
            return run_torus(f, torus_classify);
        if (tye->parsed() && tye_reduce->parsed())
            return run_tye_reduce(spec_name, noise_path, f.out_path, f.seed);
        if (verify->parsed()) return run_verify_fixtures();
        if (tye->parsed() && tye_lift->parsed())
            return run_tye_lift(spec_name, noise_path, law_path, f.out_path, n_samples,
                                f.seed);
        std::cerr << "no subcommand\n";
        return exit_config;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return exit_inconclusive;
    }
}
