#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "styre/irrep.hpp"
#include "styre/measure.hpp"

namespace styre {

// Noise law (mu_k, k <= 0): explicit head for k = k_head..0, then a
// constant or periodic tail for all k < k_head. The periodic tail is
// anchored so that index k_head-1 gets the last element of the period.
struct NoiseLaw {
    const FiniteGroup* group = nullptr;
    std::shared_ptr<const FiniteGroup> group_owner;  // optional shared ownership
    int k_head = 0;  // head covers k_head..0, so head.size() == 1 - k_head
    std::vector<GroupMeasure> head;
    bool periodic_tail = false;
    std::vector<GroupMeasure> tail;  // one measure if constant

    NoiseLaw() = default;
    NoiseLaw(const FiniteGroup& g, std::vector<GroupMeasure> head_measures,
             std::vector<GroupMeasure> tail_measures, bool periodic);

    const GroupMeasure& measure_at(int k) const;  // k <= 0
};

enum class LimitStatus { converged, declared_zero, inconclusive };

struct LimitResult {
    double value = 0.0;
    LimitStatus status = LimitStatus::inconclusive;
    int n_used = 0;
};

struct ClassifierOptions {
    int max_n = 10000;
    double eps_zero = 1e-12;
    int decay_window = 10;
    // accelerator split is considered degenerate when some eigenvalue
    // modulus falls in (1 - degenerate_band, 1 - exact_band)
    double degenerate_band = 1e-8;
    double exact_band = 1e-12;
};

// (r1, r2) at index k: limits of the spectral norm and |det| of the
// backward products R_{k-n} ... R_k. Both partial-product sequences are
// nonincreasing; eventually constant/periodic tails are resolved by the
// analytic accelerator when max_n allows reaching the tail.
std::pair<LimitResult, LimitResult> r_limits(const NoiseLaw& noise, const Irrep& rho,
                                             int k, const ClassifierOptions& opts = {});

enum class Membership { in, out, statistical, undetermined };

struct IrrepFlags {
    std::string irrep_name;
    int dim = 0;
    Membership in_h1 = Membership::undetermined;
    Membership in_h2 = Membership::undetermined;
    Membership in_hs = Membership::undetermined;
    double hs_statistic = 0.0;  // meaningful when in_hs == statistical
};

struct HGroups {
    Subgroup h1, h2;
    std::vector<IrrepFlags> flags;
    bool any_undetermined = false;
};

// H^i = joint kernel of the irreps with r^i > 0 at some witness index
// (k = 0 and k = k_head - 1). Undetermined limits flag the irrep and
// force subgroup bounds instead of exact sets downstream.
HGroups compute_H_groups(const NoiseLaw& noise, const std::vector<Irrep>& irreps,
                         const ClassifierOptions& opts = {});

enum class Verdict { C1, C2, C3, undetermined };

struct TrichotomyReport {
    Subgroup h1, h2;
    Subgroup h_isotropy;
    Subgroup hs_lower, hs_upper;  // sandwich H_isotropy <= Hs <= H2
    std::vector<IrrepFlags> flags;
    Verdict verdict = Verdict::undetermined;
    bool uniqueness_in_law = false;
    Membership strong_solution_exists = Membership::undetermined;
    bool hs_resolved_statistically = false;
    std::vector<std::string> notes;
};

struct TrichotomyOptions {
    ClassifierOptions classifier;
    int k_work = -32;
    double tol = 1e-8;
    std::uint64_t seed = 42;
    int mc_samples = 100000;
    int mc_depth = 12;
    bool allow_statistical = true;
};

TrichotomyReport classify_trichotomy(const NoiseLaw& noise,
                                     const TrichotomyOptions& opts = {});

const char* to_string(Verdict v);
const char* to_string(Membership m);
const char* to_string(LimitStatus s);

}  // namespace styre
