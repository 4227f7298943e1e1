#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "styre/solutions.hpp"

namespace styre {

// Simulated trajectories: eta[s][i] and xi[s][i] hold element indices for
// k = k_min + i; xi is defined for k > k_min (xi[s][0] is unused).
struct TrajectoryBatch {
    const NoiseLaw* noise = nullptr;
    int k_min = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<int>> eta;
    std::vector<std::vector<int>> xi;

    int n_samples() const { return (int)eta.size(); }
    int horizon() const { return eta.empty() ? 0 : (int)eta[0].size(); }
    int index_of(int k) const { return k - k_min; }
};

struct TestReport {
    std::string statistic;
    double value = 0.0;
    double p_value = -1.0;  // negative when not applicable
    int sample_size = 0;
    bool pass = false;
    std::string detail;
};

TrajectoryBatch simulate(const EntranceLaw& law, int k_min, int n_samples,
                         std::uint64_t seed);

// Chi-square independence of eta_k against the tuple
// (xi_{k-window_m+1}, ..., xi_k); pass iff p > alpha.
TestReport independence_test(const TrajectoryBatch& batch, int k, int window_m,
                             double alpha = 0.01);

struct ReconstructionResult {
    std::vector<Eigen::MatrixXcd> phi;  // per-sample Phi_n
    Eigen::MatrixXcd psi_hat;           // batch alignment estimate
    double agreement_rate = 0.0;
    double det_mean_xi = 0.0;           // |det E[Xi_n]|
    double condition_number = 0.0;
    bool ill_conditioned = false;
};

// Martingale reconstruction Phi_n = (E[Xi_n])^{-1} Xi_n with
// Xi_n = rho(xi_{k0-n+1}) ... rho(xi_{k0}). Throws when E[Xi_n] is
// singular (rho outside the det-positive class).
ReconstructionResult reconstruct_strong(const TrajectoryBatch& batch, const Irrep& rho,
                                        int k0, int depth_n);

struct HsEstimate {
    Membership verdict = Membership::undetermined;
    double mean_conditional_variance = 0.0;
    double std_error = 0.0;
    int bins_used = 0;
};

// Stratified estimate of the conditional trace variance of rho(eta_0)
// given the xi-window; near zero declares membership, bounded away from
// zero declares non-membership.
HsEstimate estimate_Hs_membership(const NoiseLaw& noise, const EntranceLaw& law,
                                  const Irrep& rho, int depth, int n_samples,
                                  std::uint64_t seed, double in_threshold = 0.02,
                                  double out_threshold = 0.1);

struct CouplingReport {
    bool epsilon_constant = true;   // exact per-sample check
    int n_samples = 0;
    std::vector<double> epsilon_distribution;  // over group elements
    int fixed_epsilon = -1;  // element index when the distribution is a point mass
};

// Drives both laws with one shared xi stream. matched_start couples the
// initial states through the detected orbit translation (requires law2 to
// be a translate of law1); otherwise the starts are independent.
// epsilon_k = eta2_k * (eta1_k)^{-1}.
CouplingReport coupling_epsilon_check(const EntranceLaw& law1, const EntranceLaw& law2,
                                      int n_samples, int k_min, std::uint64_t seed,
                                      bool matched_start = false);

// Max over eta_{k_far}-bins of TV between the conditional law of
// eta_{k_near} and its unconditional law.
TestReport tail_triviality_proxy(const EntranceLaw& law, int k_far, int k_near,
                                 int n_samples, std::uint64_t seed,
                                 double pass_threshold = 0.05);

// Chi-square upper tail probability, exposed for tests.
double chi_square_pvalue(double statistic, int dof);

}  // namespace styre
