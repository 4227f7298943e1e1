#include "styre/solutions.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace styre {

const GroupMeasure& EntranceLaw::at(int k) const {
    if (k < k_work || k > 0) throw std::invalid_argument("entrance law index out of window");
    return marginals[k - k_work];
}

double consistency_residual(const EntranceLaw& law) {
    double worst = total_variation(law.at(law.k_work),
                                   convolve(law.tail_limit, law.noise->measure_at(law.k_work)));
    for (int k = law.k_work + 1; k <= 0; ++k)
        worst = std::max(worst,
                         total_variation(law.at(k), convolve(law.at(k - 1),
                                                             law.noise->measure_at(k))));
    return worst;
}

GroupMeasure window_convolution(const NoiseLaw& noise, int k, int n) {
    if (n < 1) throw std::invalid_argument("window_convolution needs n >= 1");
    GroupMeasure m = noise.measure_at(k - n + 1);
    for (int idx = k - n + 2; idx <= k; ++idx) m = convolve(m, noise.measure_at(idx));
    return m;
}

EntranceLaw center_entrance_law(const NoiseLaw& noise, int k_work) {
    EntranceLaw law;
    law.noise = &noise;
    law.k_work = k_work;
    law.tail_limit = haar(*noise.group);
    law.marginals.assign(1 - k_work, haar(*noise.group));
    law.convergence_tv = 0.0;
    return law;
}

EntranceLaw find_extremal_entrance_law(const NoiseLaw& noise, const ExtremalOptions& opts) {
    const int k_base = opts.k_work - 1;
    // converge the tail product well below the comparison tolerance: the
    // distance to the true limit can exceed the step-to-step change by a
    // factor 1/(1-rho) for geometric convergence rate rho
    const double conv_tol = opts.tol * 1e-4;
    // m_n = mu_{k_base-n+1} * ... * mu_{k_base}, grown by prepending factors
    GroupMeasure m = noise.measure_at(k_base);
    int n = 1;
    std::deque<GroupMeasure> history{m};
    double tv = 1.0;
    int detected_period = 0;

    while (n < opts.max_iter) {
        m = convolve(noise.measure_at(k_base - n), m);
        ++n;
        tv = total_variation(m, history.back());
        if (tv < conv_tol) break;
        // eventual periodicity: limit taken along period multiples
        for (int p = 2; p <= (int)history.size(); ++p) {
            if (total_variation(m, history[history.size() - p]) < conv_tol) {
                detected_period = p;
                break;
            }
        }
        history.push_back(m);
        if ((int)history.size() > opts.max_period) history.pop_front();
        if (detected_period) break;
    }
    if (detected_period) {
        const int p = detected_period;
        for (int round = 0; round < opts.max_iter / std::max(p, 1); ++round) {
            GroupMeasure next = m;
            for (int t = 0; t < p; ++t) {
                next = convolve(noise.measure_at(k_base - n), next);
                ++n;
            }
            tv = total_variation(next, m);
            m = next;
            if (tv < conv_tol) break;
        }
    }
    if (tv >= conv_tol)
        throw std::runtime_error(
            "extremal entrance law did not converge (no detectable period within budget)");

    EntranceLaw law;
    law.noise = &noise;
    law.k_work = opts.k_work;
    law.convergence_tv = tv;
    law.tail_limit = m;
    law.marginals.clear();
    GroupMeasure cur = convolve(m, noise.measure_at(opts.k_work));
    law.marginals.push_back(cur);
    for (int k = opts.k_work + 1; k <= 0; ++k) {
        cur = convolve(cur, noise.measure_at(k));
        law.marginals.push_back(cur);
    }
    return law;
}

EntranceLaw translate(const EntranceLaw& law, int g) {
    const FiniteGroup& grp = *law.noise->group;
    auto shift = [&](const GroupMeasure& m) {
        std::vector<double> w(grp.order, 0.0);
        for (int h = 0; h < grp.order; ++h) w[grp.table[g][h]] = m.weights[h];
        return GroupMeasure(grp, std::move(w));
    };
    EntranceLaw out = law;
    out.tail_limit = shift(law.tail_limit);
    for (auto& m : out.marginals) m = shift(m);
    return out;
}

bool laws_equal(const EntranceLaw& a, const EntranceLaw& b, double tol) {
    if (a.k_work != b.k_work) return false;
    if (total_variation(a.tail_limit, b.tail_limit) >= tol) return false;
    for (size_t i = 0; i < a.marginals.size(); ++i)
        if (total_variation(a.marginals[i], b.marginals[i]) >= tol) return false;
    return true;
}

namespace {

Eigen::VectorXd stacked_marginals(const EntranceLaw& law) {
    const int n = law.noise->group->order;
    Eigen::VectorXd v((law.marginals.size() + 1) * n);
    int at = 0;
    for (int i = 0; i < n; ++i) v(at++) = law.tail_limit.weights[i];
    for (const auto& m : law.marginals)
        for (int i = 0; i < n; ++i) v(at++) = m.weights[i];
    return v;
}

// Lawson-Hanson nonnegative least squares.
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    const int nvar = (int)a.cols();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(nvar);
    std::vector<bool> passive(nvar, false);
    for (int outer = 0; outer < 3 * nvar + 30; ++outer) {
        Eigen::VectorXd grad = a.transpose() * (b - a * x);
        int best = -1;
        double best_val = 1e-12;
        for (int i = 0; i < nvar; ++i)
            if (!passive[i] && grad(i) > best_val) {
                best_val = grad(i);
                best = i;
            }
        if (best < 0) break;
        passive[best] = true;
        for (int inner = 0; inner < 3 * nvar + 30; ++inner) {
            std::vector<int> idx;
            for (int i = 0; i < nvar; ++i)
                if (passive[i]) idx.push_back(i);
            Eigen::MatrixXd ap(a.rows(), (int)idx.size());
            for (size_t c = 0; c < idx.size(); ++c) ap.col((int)c) = a.col(idx[c]);
            Eigen::VectorXd z =
                ap.colPivHouseholderQr().solve(b);
            bool all_pos = true;
            for (int c = 0; c < z.size(); ++c)
                if (z(c) <= 1e-12) all_pos = false;
            if (all_pos) {
                x.setZero();
                for (size_t c = 0; c < idx.size(); ++c) x(idx[c]) = z(c);
                break;
            }
            double alpha = 1.0;
            for (size_t c = 0; c < idx.size(); ++c)
                if (z((int)c) <= 1e-12) {
                    double xi = x(idx[c]);
                    if (xi - z((int)c) > 1e-15)
                        alpha = std::min(alpha, xi / (xi - z((int)c)));
                }
            for (size_t c = 0; c < idx.size(); ++c) {
                x(idx[c]) += alpha * (z((int)c) - x(idx[c]));
                if (x(idx[c]) <= 1e-12) {
                    x(idx[c]) = 0.0;
                    passive[idx[c]] = false;
                }
            }
        }
    }
    return x;
}

}  // namespace

OrbitReport orbit_and_isotropy(const EntranceLaw& law, double tol) {
    const FiniteGroup& g = *law.noise->group;
    OrbitReport rep;
    rep.representative = law;
    Subgroup iso;
    iso.parent = &g;
    for (int x = 0; x < g.order; ++x) {
        EntranceLaw t = translate(law, x);
        if (laws_equal(t, law, tol)) iso.members.push_back(x);
        bool fresh = true;
        for (const auto& seen : rep.orbit)
            if (laws_equal(t, seen, tol)) {
                fresh = false;
                break;
            }
        if (fresh) {
            rep.orbit.push_back(std::move(t));
            rep.orbit_translators.push_back(x);
        }
    }
    rep.isotropy = std::move(iso);
    if ((int)(rep.orbit.size() * rep.isotropy.members.size()) != g.order)
        throw std::runtime_error("orbit-stabilizer identity violated");
    rep.extremality = extremality_check(law, tol);
    return rep;
}

ExtremalityGrade extremality_check(const EntranceLaw& law, double tol) {
    const FiniteGroup& g = *law.noise->group;
    std::vector<EntranceLaw> others;
    for (int x = 1; x < g.order; ++x) {
        EntranceLaw t = translate(law, x);
        if (laws_equal(t, law, tol)) continue;
        bool fresh = true;
        for (const auto& seen : others)
            if (laws_equal(t, seen, tol)) {
                fresh = false;
                break;
            }
        if (fresh) others.push_back(std::move(t));
    }

    if (others.empty()) {
        // the law is its own full orbit, i.e. the center; it is extremal
        // only when the solution set is a single point
        ExtremalOptions opts;
        opts.k_work = law.k_work;
        opts.tol = tol;
        EntranceLaw seeded = find_extremal_entrance_law(*law.noise, opts);
        return laws_equal(seeded, law, tol) ? ExtremalityGrade::heuristic
                                            : ExtremalityGrade::failed;
    }

    Eigen::VectorXd b = stacked_marginals(law);
    Eigen::MatrixXd cols(b.size(), (int)others.size());
    for (size_t i = 0; i < others.size(); ++i) cols.col((int)i) = stacked_marginals(others[i]);

    // feasibility of b in conv(cols): weights sum to 1 via a penalty row
    const double alpha = 16.0;
    Eigen::MatrixXd a(cols.rows() + 1, cols.cols());
    a.topRows(cols.rows()) = cols;
    a.row(cols.rows()).setConstant(alpha);
    Eigen::VectorXd rhs(b.size() + 1);
    rhs.head(b.size()) = b;
    rhs(b.size()) = alpha;
    Eigen::VectorXd w = nnls(a, rhs);
    double residual = (cols * w - b).lpNorm<Eigen::Infinity>() +
                      std::abs(w.sum() - 1.0);
    return residual < std::max(tol, 1e-9) ? ExtremalityGrade::failed
                                          : ExtremalityGrade::verified_vertex;
}

bool center_formula_check(const EntranceLaw& law, double tol) {
    const FiniteGroup& g = *law.noise->group;
    const GroupMeasure hm = haar(g);
    for (size_t i = 0; i < law.marginals.size(); ++i) {
        std::vector<double> avg(g.order, 0.0);
        for (int x = 0; x < g.order; ++x)
            for (int h = 0; h < g.order; ++h)
                avg[g.table[x][h]] += law.marginals[i].weights[h] / g.order;
        GroupMeasure m(g, std::move(avg));
        if (total_variation(m, hm) > tol) return false;
    }
    return true;
}

}  // namespace styre
