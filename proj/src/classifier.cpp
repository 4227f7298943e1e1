#include "styre/classifier.hpp"

#include <cmath>
#include <stdexcept>

#include "styre/montecarlo.hpp"
#include "styre/solutions.hpp"

namespace styre {

NoiseLaw::NoiseLaw(const FiniteGroup& g, std::vector<GroupMeasure> head_measures,
                   std::vector<GroupMeasure> tail_measures, bool periodic)
    : group(&g),
      head(std::move(head_measures)),
      periodic_tail(periodic),
      tail(std::move(tail_measures)) {
    if (tail.empty()) throw std::invalid_argument("noise law needs a tail policy");
    if (!periodic && tail.size() != 1)
        throw std::invalid_argument("constant tail takes exactly one measure");
    k_head = -(int)head.size() + 1;
    if (head.empty()) k_head = 1;  // tail covers all k <= 0
    for (const auto& m : head)
        if (m.group != &g) throw std::invalid_argument("head measure on wrong group");
    for (const auto& m : tail)
        if (m.group != &g) throw std::invalid_argument("tail measure on wrong group");
}

const GroupMeasure& NoiseLaw::measure_at(int k) const {
    if (k > 0) throw std::invalid_argument("noise index must be <= 0");
    if (k >= k_head) return head[k - k_head];
    // anchored so that k_head - 1 maps to the last period element
    int t = (k_head - 1) - k;  // 0, 1, 2, ... going left
    int p = (int)tail.size();
    return tail[(p - 1 - (t % p) + p) % p];
}

namespace {

double spectral_norm(const Cmat& m) {
    return Eigen::JacobiSVD<Cmat>(m).singularValues()(0);
}

// Orthonormal basis of the peripheral (unit-modulus) eigenspace of a
// contraction; the complement decays geometrically under powers.
// Returns false when the spectrum sits inside the ambiguous band and the
// split cannot be trusted.
bool peripheral_projector(const Cmat& t, const ClassifierOptions& opts, Cmat& q_out) {
    Eigen::ComplexEigenSolver<Cmat> es(t);
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    std::vector<int> per;
    for (int i = 0; i < vals.size(); ++i) {
        double m = std::abs(vals(i));
        if (m >= 1.0 - opts.exact_band) {
            per.push_back(i);
        } else if (m >= 1.0 - opts.degenerate_band) {
            return false;  // too close to call
        }
    }
    if (per.empty()) {
        q_out = Cmat::Zero(t.rows(), 0);
        return true;
    }
    Cmat basis(t.rows(), (int)per.size());
    for (size_t i = 0; i < per.size(); ++i) basis.col((int)i) = vecs.col(per[i]);
    Eigen::HouseholderQR<Cmat> qr(basis);
    q_out = Cmat(qr.householderQ()) .leftCols((int)per.size());
    return true;
}

}  // namespace

std::pair<LimitResult, LimitResult> r_limits(const NoiseLaw& noise, const Irrep& rho,
                                             int k, const ClassifierOptions& opts) {
    if (opts.max_n < 1) throw std::invalid_argument("max_n must be >= 1");
    const int dim = rho.dim;
    Cmat prod = Cmat::Identity(dim, dim);
    double norm = 1.0, absdet = 1.0;
    std::vector<double> norm_hist{1.0}, det_hist{1.0};
    int n = 0;
    int j = k;
    const int period = noise.periodic_tail ? (int)noise.tail.size() : 1;

    auto step = [&](int idx) {
        prod = fourier_coefficient(noise.measure_at(idx), rho) * prod;
        ++n;
        double new_norm = spectral_norm(prod);
        double new_det = std::abs(prod.determinant());
        if (new_norm > norm + 1e-12 || new_det > absdet + 1e-12)
            throw std::runtime_error("r_limits: partial products are not monotone");
        norm = std::min(new_norm, norm);
        absdet = std::min(new_det, absdet);
        norm_hist.push_back(norm);
        det_hist.push_back(absdet);
    };

    auto decayed = [&](const std::vector<double>& hist, double v) {
        if (v == 0.0) return true;
        if (v >= opts.eps_zero) return false;
        if ((int)hist.size() < opts.decay_window + 1) return false;
        for (size_t i = hist.size() - opts.decay_window; i < hist.size(); ++i)
            if (hist[i] > hist[i - 1] * 0.99 && hist[i] > 0.0) return false;
        return true;
    };

    // consume the head factors; once inside the tail the remaining product
    // groups into full periods anchored at the current index
    while (n < opts.max_n && j >= noise.k_head) {
        step(j);
        --j;
    }
    const bool aligned = j < noise.k_head;

    LimitResult r1{norm, LimitStatus::inconclusive, n};
    LimitResult r2{absdet, LimitStatus::inconclusive, n};

    if (aligned) {
        // one full period of tail factors, lowest index leftmost
        Cmat block = Cmat::Identity(dim, dim);
        for (int idx = j - period + 1; idx <= j; ++idx)
            block *= fourier_coefficient(noise.measure_at(idx), rho);

        Cmat q;
        if (peripheral_projector(block, opts, q)) {
            r1.value = (q.cols() == 0) ? 0.0 : spectral_norm(q.adjoint() * prod);
            if (r1.value < opts.eps_zero) r1.value = 0.0;
            r1.status = LimitStatus::converged;
        }
        double block_det = std::abs(block.determinant());
        if (block_det >= 1.0 - opts.exact_band) {
            r2.value = absdet;
            r2.status = LimitStatus::converged;
        } else if (block_det < 1.0 - opts.degenerate_band) {
            r2.value = 0.0;
            r2.status = LimitStatus::converged;
        }
    }

    // plain truncation for whatever the accelerator left unresolved
    while ((r1.status == LimitStatus::inconclusive || r2.status == LimitStatus::inconclusive) &&
           n < opts.max_n) {
        step(j);
        --j;
        if (r1.status == LimitStatus::inconclusive && decayed(norm_hist, norm))
            r1 = {norm, LimitStatus::declared_zero, n};
        if (r2.status == LimitStatus::inconclusive && decayed(det_hist, absdet))
            r2 = {absdet, LimitStatus::declared_zero, n};
    }
    if (r1.status == LimitStatus::inconclusive && decayed(norm_hist, norm))
        r1 = {norm, LimitStatus::declared_zero, n};
    if (r2.status == LimitStatus::inconclusive && decayed(det_hist, absdet))
        r2 = {absdet, LimitStatus::declared_zero, n};
    if (r1.status == LimitStatus::inconclusive) r1 = {norm, LimitStatus::inconclusive, n};
    if (r2.status == LimitStatus::inconclusive) r2 = {absdet, LimitStatus::inconclusive, n};
    return {r1, r2};
}

namespace {

// in / out / undetermined from a single limit
Membership limit_membership(const LimitResult& r, const ClassifierOptions& opts) {
    switch (r.status) {
        case LimitStatus::declared_zero:
            return Membership::out;
        case LimitStatus::converged:
            if (r.value > 1e-8) return Membership::in;
            if (r.value < opts.eps_zero) return Membership::out;
            return Membership::undetermined;
        default:
            return Membership::undetermined;
    }
}

Membership merge_or(Membership a, Membership b) {
    if (a == Membership::in || b == Membership::in) return Membership::in;
    if (a == Membership::out && b == Membership::out) return Membership::out;
    return Membership::undetermined;
}

}  // namespace

HGroups compute_H_groups(const NoiseLaw& noise, const std::vector<Irrep>& irreps,
                         const ClassifierOptions& opts) {
    const FiniteGroup& g = *noise.group;
    HGroups out;
    std::vector<const Irrep*> h1_members, h2_members;
    for (const auto& rho : irreps) {
        IrrepFlags f;
        f.irrep_name = rho.name;
        f.dim = rho.dim;
        Membership m1 = Membership::out, m2 = Membership::out;
        for (int k : {0, noise.k_head - 1}) {
            auto [r1, r2] = r_limits(noise, rho, k, opts);
            Membership a = limit_membership(r1, opts), b = limit_membership(r2, opts);
            m1 = (k == 0) ? a : merge_or(m1, a);
            m2 = (k == 0) ? b : merge_or(m2, b);
        }
        f.in_h1 = m1;
        f.in_h2 = m2;
        if (m1 == Membership::in) h1_members.push_back(&rho);
        if (m2 == Membership::in) h2_members.push_back(&rho);
        if (m1 == Membership::undetermined || m2 == Membership::undetermined)
            out.any_undetermined = true;
        out.flags.push_back(std::move(f));
    }
    out.h1 = joint_kernel(g, h1_members);
    out.h2 = joint_kernel(g, h2_members);
    // chain: H^2 membership implies H^1 membership, so H1 <= H2
    for (int m : out.h1.members)
        if (!out.h2.contains(m))
            throw std::runtime_error("H1 is not contained in H2");
    return out;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::C1: return "C1";
        case Verdict::C2: return "C2";
        case Verdict::C3: return "C3";
        default: return "undetermined";
    }
}

const char* to_string(Membership m) {
    switch (m) {
        case Membership::in: return "in";
        case Membership::out: return "out";
        case Membership::statistical: return "statistical";
        default: return "undetermined";
    }
}

const char* to_string(LimitStatus s) {
    switch (s) {
        case LimitStatus::converged: return "converged";
        case LimitStatus::declared_zero: return "declared_zero";
        default: return "inconclusive";
    }
}

TrichotomyReport classify_trichotomy(const NoiseLaw& noise, const TrichotomyOptions& opts) {
    const FiniteGroup& g = *noise.group;
    auto irreps = irreps_of(g);
    HGroups hg = compute_H_groups(noise, irreps, opts.classifier);

    ExtremalOptions eopts;
    eopts.k_work = opts.k_work;
    eopts.tol = opts.tol;
    EntranceLaw law = find_extremal_entrance_law(noise, eopts);
    OrbitReport orbit = orbit_and_isotropy(law, opts.tol);

    TrichotomyReport rep;
    rep.h1 = hg.h1;
    rep.h2 = hg.h2;
    rep.flags = hg.flags;
    rep.h_isotropy = orbit.isotropy;
    rep.hs_lower = orbit.isotropy;
    rep.hs_upper = hg.h2;
    if (hg.any_undetermined)
        rep.notes.push_back("some r-limits were inconclusive; H1/H2 are outer bounds");
    if (noise.periodic_tail)
        rep.notes.push_back(
            "periodic tail: class membership checked at two witness indices only");

    const bool iso_full = (int)orbit.isotropy.members.size() == g.order;
    const bool iso_trivial = orbit.isotropy.members.size() == 1;
    const bool h2_trivial = rep.h2.members.size() == 1 && !hg.any_undetermined;

    rep.uniqueness_in_law = iso_full;

    // chain H1 <= isotropy <= H2 (H1/H2 are outer approximations when
    // some limits are undetermined, so only enforce it in the exact case)
    if (!hg.any_undetermined) {
        for (int m : rep.h1.members)
            if (!rep.h_isotropy.contains(m))
                throw std::runtime_error("chain violated: H1 not within isotropy");
        for (int m : rep.h_isotropy.members)
            if (!rep.h2.contains(m))
                throw std::runtime_error("chain violated: isotropy not within H2");
    }

    // Hs flags decided by the sandwich
    for (auto& f : rep.flags) {
        if (f.in_h2 == Membership::in)
            f.in_hs = Membership::in;
        else if (f.in_h1 == Membership::out)
            f.in_hs = Membership::out;
    }

    if (iso_full) {
        rep.verdict = Verdict::C1;
        rep.strong_solution_exists = Membership::out;
        return rep;
    }
    if (g.is_abelian() && !hg.any_undetermined) {
        // abelian equality chain: Hs = isotropy = H1 = H2, exactly
        rep.hs_lower = rep.hs_upper = rep.h_isotropy;
        rep.verdict = iso_trivial ? Verdict::C2 : Verdict::C3;
        rep.strong_solution_exists = iso_trivial ? Membership::in : Membership::out;
        for (auto& f : rep.flags)
            if (f.in_hs == Membership::undetermined) f.in_hs = f.in_h1;
        return rep;
    }
    if (!iso_trivial) {
        // Hs contains the isotropy subgroup, hence is nontrivial
        rep.verdict = Verdict::C3;
        rep.strong_solution_exists = Membership::out;
        return rep;
    }
    if (h2_trivial) {
        rep.hs_upper = rep.h2;
        rep.verdict = Verdict::C2;
        rep.strong_solution_exists = Membership::in;
        return rep;
    }

    // isotropy trivial but H2 is not: resolve the Hs gap statistically
    if (!opts.allow_statistical || hg.any_undetermined) {
        rep.notes.push_back("Hs gap left unresolved (statistics disabled or limits undetermined)");
        return rep;
    }
    std::vector<const Irrep*> hs_members;
    for (size_t i = 0; i < irreps.size(); ++i) {
        auto& f = rep.flags[i];
        if (f.in_h2 == Membership::in) {
            hs_members.push_back(&irreps[i]);
            continue;
        }
        if (f.in_h1 != Membership::in) continue;  // outside H1 class: out
        HsEstimate est = estimate_Hs_membership(noise, law, irreps[i], opts.mc_depth,
                                                opts.mc_samples, opts.seed);
        f.in_hs = (est.verdict == Membership::undetermined) ? Membership::undetermined
                                                            : Membership::statistical;
        f.hs_statistic = est.mean_conditional_variance;
        if (est.verdict == Membership::undetermined) {
            rep.notes.push_back("statistical Hs membership undetermined for " + f.irrep_name);
            return rep;
        }
        if (est.verdict == Membership::in) hs_members.push_back(&irreps[i]);
    }
    Subgroup hs = joint_kernel(g, hs_members);
    rep.hs_lower = rep.hs_upper = hs;
    rep.hs_resolved_statistically = true;
    rep.verdict = hs.members.size() == 1 ? Verdict::C2 : Verdict::C3;
    rep.strong_solution_exists =
        hs.members.size() == 1 ? Membership::statistical : Membership::out;
    return rep;
}

}  // namespace styre
