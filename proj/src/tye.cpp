#include "styre/tye.hpp"

#include <cmath>
#include <stdexcept>

namespace styre {

namespace {

double frac(double x) { return x - std::floor(x); }

// P(xi >= 0) for one S-noise term (sgn convention: sgn(0) = +1)
double mass_nonneg(const SNoise& s) {
    switch (s.family) {
        case SNoise::Family::discrete: {
            double p = 0.0;
            for (size_t i = 0; i < s.values.size(); ++i)
                if (s.values[i] >= 0.0) p += s.weights[i];
            return p;
        }
        case SNoise::Family::uniform: {
            if (s.hi <= 0.0) return 0.0;
            if (s.lo >= 0.0) return 1.0;
            return s.hi / (s.hi - s.lo);
        }
        case SNoise::Family::gaussian:
            return 0.5 * std::erfc(-s.mean / (s.sd * std::sqrt(2.0)));
    }
    throw std::logic_error("unreachable");
}

TorusCoeff pushforward_torus(const SNoise& s) {
    switch (s.family) {
        case SNoise::Family::discrete: {
            std::vector<double> pts;
            for (double v : s.values) pts.push_back(frac(v));
            return TorusCoeff::atoms(pts, s.weights);
        }
        case SNoise::Family::uniform:
            return TorusCoeff::uniform_interval(s.lo, s.hi);
        case SNoise::Family::gaussian:
            return TorusCoeff::wrapped_gaussian(s.mean, s.sd * s.sd);
    }
    throw std::logic_error("unreachable");
}

}  // namespace

SNoise SNoise::discrete(std::vector<double> vals, std::vector<double> w) {
    if (vals.empty() || vals.size() != w.size())
        throw std::invalid_argument("discrete S-noise needs matching values and weights");
    double total = 0.0;
    for (double x : w) {
        if (x < 0.0) throw std::invalid_argument("S-noise weights must be nonnegative");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("S-noise weights must sum to 1");
    SNoise s;
    s.family = Family::discrete;
    s.values = std::move(vals);
    s.weights = std::move(w);
    return s;
}

SNoise SNoise::uniform(double a, double b) {
    if (b <= a) throw std::invalid_argument("uniform S-noise needs a < b");
    SNoise s;
    s.family = Family::uniform;
    s.lo = a;
    s.hi = b;
    return s;
}

SNoise SNoise::gaussian(double m, double sd) {
    if (sd <= 0.0) throw std::invalid_argument("gaussian S-noise needs sd > 0");
    SNoise s;
    s.family = Family::gaussian;
    s.mean = m;
    s.sd = sd;
    return s;
}

double SNoise::sample(Rng& rng) const {
    switch (family) {
        case Family::discrete: return values[rng.sample(weights)];
        case Family::uniform: return lo + (hi - lo) * rng.next_double();
        case Family::gaussian: return mean + sd * rng.next_gaussian();
    }
    throw std::logic_error("unreachable");
}

const SNoise& SNoiseLaw::at(int k) const {
    if (k >= k_head && k - k_head < (int)head.size()) return head[k - k_head];
    if (k >= k_head) throw std::out_of_range("SNoiseLaw::at above the head window");
    if (periodic_tail.empty()) throw std::logic_error("S-noise law has no tail");
    const int p = (int)periodic_tail.size();
    int t = (k_head - 1) - k;
    return periodic_tail[(p - 1 - (t % p) + p) % p];
}

int TyeSpec::theta(double s) const {
    switch (kind) {
        case Kind::sgn: return s >= 0.0 ? 0 : 1;
        case Kind::custom: return theta_table[(int)std::llround(s)];
        case Kind::fractional_part:
            throw std::logic_error("fractional_part reduces to the torus");
    }
    throw std::logic_error("unreachable");
}

double TyeSpec::theta_t(double s) const {
    if (kind != Kind::fractional_part)
        throw std::logic_error("theta_t is only defined for the fractional_part spec");
    return frac(s);
}

double TyeSpec::psi(int g, double s) const {
    switch (kind) {
        case Kind::sgn: return (g == 0 ? 1.0 : -1.0) * s;
        case Kind::custom: return (double)psi_table[g][(int)std::llround(s)];
        case Kind::fractional_part: throw std::logic_error("use real translation for the torus");
    }
    throw std::logic_error("unreachable");
}

double TyeSpec::psi_inv(int g, double s) const {
    switch (kind) {
        case Kind::sgn: return (g == 0 ? 1.0 : -1.0) * s;  // involution
        case Kind::custom: return (double)psi_inv_table[g][(int)std::llround(s)];
        case Kind::fractional_part: throw std::logic_error("use real translation for the torus");
    }
    throw std::logic_error("unreachable");
}

TyeSpec make_sgn_spec(SNoiseLaw noise) {
    auto reject_zero_atom = [](const SNoise& s) {
        if (s.family == SNoise::Family::discrete)
            for (size_t i = 0; i < s.values.size(); ++i)
                if (s.values[i] == 0.0 && s.weights[i] > 0.0)
                    throw std::invalid_argument("sgn spec rejects noise with point mass at 0");
    };
    for (const auto& s : noise.head) reject_zero_atom(s);
    for (const auto& s : noise.periodic_tail) reject_zero_atom(s);
    TyeSpec spec;
    spec.kind = TyeSpec::Kind::sgn;
    spec.noise = std::move(noise);
    spec.group = std::make_shared<FiniteGroup>(make_cyclic(2));
    return spec;
}

TyeSpec make_fractional_part_spec(SNoiseLaw noise) {
    TyeSpec spec;
    spec.kind = TyeSpec::Kind::fractional_part;
    spec.noise = std::move(noise);
    return spec;
}

TyeSpec make_custom_spec(std::shared_ptr<const FiniteGroup> group,
                         std::vector<std::string> state_labels,
                         std::vector<int> theta_table,
                         std::vector<std::vector<int>> psi_table, SNoiseLaw noise) {
    const int n_states = (int)state_labels.size();
    if ((int)theta_table.size() != n_states)
        throw std::invalid_argument("theta table size mismatch");
    if ((int)psi_table.size() != group->order)
        throw std::invalid_argument("psi table needs one row per group element");
    TyeSpec spec;
    spec.kind = TyeSpec::Kind::custom;
    spec.group = std::move(group);
    spec.state_labels = std::move(state_labels);
    spec.theta_table = std::move(theta_table);
    spec.psi_table = std::move(psi_table);
    spec.psi_inv_table.assign(spec.psi_table.size(), std::vector<int>(n_states, -1));
    for (size_t g = 0; g < spec.psi_table.size(); ++g) {
        if ((int)spec.psi_table[g].size() != n_states)
            throw std::invalid_argument("psi table row size mismatch");
        for (int s = 0; s < n_states; ++s) {
            int t = spec.psi_table[g][s];
            if (t < 0 || t >= n_states || spec.psi_inv_table[g][t] != -1)
                throw std::invalid_argument("psi(g, .) must be a bijection on states");
            spec.psi_inv_table[g][t] = s;
        }
    }
    spec.noise = std::move(noise);
    auto check_discrete = [&](const SNoise& s) {
        if (s.family != SNoise::Family::discrete)
            throw std::invalid_argument("custom specs need discrete S-noise over state indices");
        for (double v : s.values) {
            int i = (int)std::llround(v);
            if (i < 0 || i >= n_states)
                throw std::invalid_argument("S-noise value is not a state index");
        }
    };
    for (const auto& s : spec.noise.head) check_discrete(s);
    for (const auto& s : spec.noise.periodic_tail) check_discrete(s);
    return spec;
}

TestReport check_commutation(const TyeSpec& spec, int n_samples, std::uint64_t seed) {
    TestReport rep;
    rep.statistic = "commutation_residual";
    rep.sample_size = n_samples;
    rep.pass = true;
    double max_err = 0.0;
    Rng rng(seed, 0xc0417);
    for (int i = 0; i < n_samples; ++i) {
        double s = spec.noise.at(0).sample(rng);
        if (spec.kind == TyeSpec::Kind::fractional_part) {
            double g = rng.next_double();
            double lhs = frac(s + g);  // theta(psi(g, s))
            double rhs = frac(g + frac(s));
            double inv = (s + g) - g;  // psi_inv(g, psi(g, s))
            double err = std::min(std::abs(lhs - rhs), 1.0 - std::abs(lhs - rhs));
            err = std::max(err, std::abs(inv - s));
            max_err = std::max(max_err, err);
            if (err > 1e-12 && rep.pass) {
                rep.pass = false;
                rep.detail = "counterexample: g=" + std::to_string(g) + " s=" + std::to_string(s);
            }
            continue;
        }
        int g = (int)(rng.next_u64() % (std::uint64_t)spec.group->order);
        double moved = spec.psi(g, s);
        int lhs = spec.theta(moved);
        int rhs = spec.group->table[g][spec.theta(s)];
        double inv = spec.psi_inv(g, moved);
        bool exact = spec.kind == TyeSpec::Kind::custom;
        double err = std::abs(inv - s);
        if (lhs != rhs) err = std::max(err, 1.0);
        max_err = std::max(max_err, err);
        if ((exact ? err != 0.0 : err > 1e-12) && rep.pass) {
            rep.pass = false;
            rep.detail = "counterexample: g=" + spec.group->labels[g] +
                         " s=" + std::to_string(s);
        }
    }
    rep.value = max_err;
    return rep;
}

NoiseLaw induced_group_noise(const TyeSpec& spec) {
    if (spec.kind == TyeSpec::Kind::fractional_part)
        throw std::invalid_argument("fractional_part induces a torus noise");
    const FiniteGroup& g = *spec.group;
    auto push = [&](const SNoise& s) {
        std::vector<double> w(g.order, 0.0);
        if (spec.kind == TyeSpec::Kind::sgn) {
            double p = mass_nonneg(s);
            w[0] = p;
            w[1] = 1.0 - p;
        } else {
            for (size_t i = 0; i < s.values.size(); ++i)
                w[spec.theta_table[(int)std::llround(s.values[i])]] += s.weights[i];
        }
        return GroupMeasure(g, w);
    };
    std::vector<GroupMeasure> head, tail;
    for (const auto& s : spec.noise.head) head.push_back(push(s));
    for (const auto& s : spec.noise.periodic_tail) tail.push_back(push(s));
    NoiseLaw law(g, std::move(head), std::move(tail), spec.noise.periodic_tail.size() > 1);
    law.group_owner = spec.group;  // keep the group alive past the spec's lifetime
    return law;
}

TorusNoise induced_torus_noise(const TyeSpec& spec) {
    if (spec.kind != TyeSpec::Kind::fractional_part)
        throw std::invalid_argument("only fractional_part induces a torus noise");
    TorusNoise noise;
    noise.k_head = spec.noise.k_head;
    for (const auto& s : spec.noise.head) noise.head.push_back(pushforward_torus(s));
    for (const auto& s : spec.noise.periodic_tail)
        noise.periodic_tail.push_back(pushforward_torus(s));
    return noise;
}

HatReduction hat_reduce(const TyeSpec& spec, const STrajectories& traj) {
    HatReduction out;
    out.k_min = traj.k_min;
    out.is_torus = spec.reduces_to_torus();
    const bool exact = spec.kind == TyeSpec::Kind::custom;
    for (size_t s = 0; s < traj.eta.size(); ++s) {
        const auto& eta = traj.eta[s];
        const auto& xi = traj.xi[s];
        for (size_t i = 1; i < eta.size(); ++i) {
            double expect = out.is_torus ? xi[i] + frac(eta[i - 1])
                                         : spec.psi(spec.theta(eta[i - 1]), xi[i]);
            double err = std::abs(eta[i] - expect);
            if (exact ? err != 0.0 : err > 1e-9)
                throw std::invalid_argument("input trajectories violate the TYE recursion");
        }
        if (out.is_torus) {
            std::vector<double> eh(eta.size()), xh(eta.size(), 0.0);
            for (size_t i = 0; i < eta.size(); ++i) eh[i] = frac(eta[i]);
            for (size_t i = 1; i < eta.size(); ++i) xh[i] = frac(eh[i] - eh[i - 1]);
            out.eta_hat_t.push_back(std::move(eh));
            out.xi_hat_t.push_back(std::move(xh));
        } else {
            const FiniteGroup& g = *spec.group;
            std::vector<int> eh(eta.size()), xh(eta.size(), -1);
            for (size_t i = 0; i < eta.size(); ++i) eh[i] = spec.theta(eta[i]);
            for (size_t i = 1; i < eta.size(); ++i)
                xh[i] = g.table[g.inverse[eh[i - 1]]][eh[i]];
            out.eta_hat.push_back(std::move(eh));
            out.xi_hat.push_back(std::move(xh));
        }
    }
    if (out.is_torus)
        out.hat_torus = induced_torus_noise(spec);
    else
        out.hat_noise = induced_group_noise(spec);
    return out;
}

STrajectories lift_solution(const TyeSpec& spec, const EntranceLaw& group_law,
                            int horizon_k, int n_samples, std::uint64_t seed) {
    if (spec.reduces_to_torus())
        throw std::invalid_argument("lift_solution covers finite-group specs only");
    if (horizon_k > 0 || horizon_k < group_law.k_work)
        throw std::invalid_argument("horizon outside the entrance law window");
    STrajectories out;
    out.k_min = horizon_k;
    const int len = 1 - horizon_k;
    out.eta.assign(n_samples, std::vector<double>(len));
    out.xi.assign(n_samples, std::vector<double>(len));
    for (int s = 0; s < n_samples; ++s) {
        Rng rng(seed, (std::uint64_t)s);
        int u = rng.sample(group_law.at(horizon_k).weights);
        double x = spec.noise.at(horizon_k).sample(rng);
        out.xi[s][0] = x;
        out.eta[s][0] = spec.psi(u, x);
        for (int k = horizon_k + 1; k <= 0; ++k) {
            double xk = spec.noise.at(k).sample(rng);
            out.xi[s][k - horizon_k] = xk;
            out.eta[s][k - horizon_k] =
                spec.psi(spec.theta(out.eta[s][k - horizon_k - 1]), xk);
        }
    }
    return out;
}

}  // namespace styre
