#pragma once

#include <vector>

#include "styre/classifier.hpp"
#include "styre/measure.hpp"

namespace styre {

// Marginal sequence lambda_k for k in [k_work..0] plus the stabilized
// marginal below the window; stands for the solution it determines.
struct EntranceLaw {
    const NoiseLaw* noise = nullptr;
    int k_work = -32;
    std::vector<GroupMeasure> marginals;  // index i holds lambda_{k_work + i}
    GroupMeasure tail_limit;
    double convergence_tv = 0.0;

    const GroupMeasure& at(int k) const;  // k in [k_work..0]
};

// max_k TV(lambda_k, lambda_{k-1} * mu_k) over the window.
double consistency_residual(const EntranceLaw& law);

// mu_{k-n+1} * ... * mu_k
GroupMeasure window_convolution(const NoiseLaw& noise, int k, int n);

// All marginals Haar; consistent for every noise law.
EntranceLaw center_entrance_law(const NoiseLaw& noise, int k_work = -32);

struct ExtremalOptions {
    int k_work = -32;
    double tol = 1e-8;
    int max_iter = 100000;
    int max_period = 64;
};

// Limit of the delta_e-seeded window convolutions; oscillating sequences
// are resolved along detected period multiples. Throws on no convergence.
EntranceLaw find_extremal_entrance_law(const NoiseLaw& noise,
                                       const ExtremalOptions& opts = {});

// Left translation: lambda'_k(x) = lambda_k(g^{-1} x).
EntranceLaw translate(const EntranceLaw& law, int g);

bool laws_equal(const EntranceLaw& a, const EntranceLaw& b, double tol = 1e-8);

enum class ExtremalityGrade { verified_vertex, heuristic, failed };

struct OrbitReport {
    EntranceLaw representative;
    std::vector<EntranceLaw> orbit;        // distinct translates
    std::vector<int> orbit_translators;    // one g per orbit point
    Subgroup isotropy;
    ExtremalityGrade extremality = ExtremalityGrade::failed;
};

OrbitReport orbit_and_isotropy(const EntranceLaw& law, double tol = 1e-8);

// verified_vertex when the stacked marginal vector lies outside the convex
// hull of the other orbit translates (small LP / NNLS feasibility);
// heuristic when the orbit is a single point distinct from nothing to
// compare against; failed when the law is a convex combination.
ExtremalityGrade extremality_check(const EntranceLaw& law, double tol = 1e-8);

// (1/|G|) sum_g translate(law, g) has Haar marginals, for any law.
bool center_formula_check(const EntranceLaw& law, double tol = 1e-10);

}  // namespace styre
