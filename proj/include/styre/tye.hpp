#pragma once

#include <memory>
#include <vector>

#include "styre/montecarlo.hpp"
#include "styre/rng.hpp"
#include "styre/torus.hpp"

namespace styre {

// noise on the state space S at one time index
struct SNoise {
    enum class Family { discrete, uniform, gaussian };
    Family family = Family::discrete;
    std::vector<double> values;   // discrete atoms
    std::vector<double> weights;  // discrete weights, sum 1
    double lo = 0.0, hi = 1.0;    // uniform [lo, hi)
    double mean = 0.0, sd = 1.0;  // gaussian

    static SNoise discrete(std::vector<double> vals, std::vector<double> w);
    static SNoise uniform(double a, double b);
    static SNoise gaussian(double m, double s);

    double sample(Rng& rng) const;
};

// sequence of S-noise laws with the usual head + periodic tail layout
struct SNoiseLaw {
    int k_head = 1;
    std::vector<SNoise> head;
    std::vector<SNoise> periodic_tail;  // non-empty

    const SNoise& at(int k) const;
};

// eta_k = psi(theta(eta_{k-1}), xi_k) with theta(psi(g, s)) = g * theta(s)
struct TyeSpec {
    enum class Kind { sgn, fractional_part, custom };
    Kind kind = Kind::sgn;
    SNoiseLaw noise;

    // finite-group side (sgn, custom)
    std::shared_ptr<const FiniteGroup> group;

    // custom discrete S: states are indices into state_labels
    std::vector<std::string> state_labels;
    std::vector<int> theta_table;                // state -> group element
    std::vector<std::vector<int>> psi_table;     // [g][state] -> state
    std::vector<std::vector<int>> psi_inv_table;

    bool reduces_to_torus() const { return kind == Kind::fractional_part; }

    int theta(double s) const;        // group element index (sgn, custom)
    double theta_t(double s) const;   // torus value (fractional_part)
    double psi(int g, double s) const;
    double psi_inv(int g, double s) const;
};

TyeSpec make_sgn_spec(SNoiseLaw noise);
TyeSpec make_fractional_part_spec(SNoiseLaw noise);
// states and noise values are indices 0..n_states-1
TyeSpec make_custom_spec(std::shared_ptr<const FiniteGroup> group,
                         std::vector<std::string> state_labels,
                         std::vector<int> theta_table,
                         std::vector<std::vector<int>> psi_table, SNoiseLaw noise);

// samples (g, s) pairs and asserts theta(psi(g,s)) = g * theta(s) and
// psi_inv(g, psi(g,s)) = s; exact for discrete S, 1e-12 for real S
TestReport check_commutation(const TyeSpec& spec, int n_samples, std::uint64_t seed);

struct STrajectories {
    int k_min = 0;
    std::vector<std::vector<double>> eta;  // [sample][k - k_min]
    std::vector<std::vector<double>> xi;   // xi[s][0] unused
};

struct HatReduction {
    bool is_torus = false;
    // finite-group reduction
    std::vector<std::vector<int>> eta_hat, xi_hat;
    NoiseLaw hat_noise;
    // torus reduction
    std::vector<std::vector<double>> eta_hat_t, xi_hat_t;
    TorusNoise hat_torus;
    int k_min = 0;
};

// Verifies the TYE recursion on the input, reduces trajectories through
// theta, and returns the pushforward noise law.
HatReduction hat_reduce(const TyeSpec& spec, const STrajectories& trajectories);

// Pushforward of the S-noise under theta, computed in closed form.
NoiseLaw induced_group_noise(const TyeSpec& spec);
TorusNoise induced_torus_noise(const TyeSpec& spec);

// Finite-horizon lift: U_K ~ group_law marginal at K, eta_K = psi(U_K, xi_K),
// then forward eta_j = psi(theta(eta_{j-1}), xi_j). Finite-group specs only.
STrajectories lift_solution(const TyeSpec& spec, const EntranceLaw& group_law,
                            int horizon_k, int n_samples, std::uint64_t seed);

}  // namespace styre
