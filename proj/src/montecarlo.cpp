#include "styre/montecarlo.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "styre/rng.hpp"

namespace styre {

namespace {

// regularized upper incomplete gamma Q(a, x), series / continued fraction
double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
    if (x == 0.0) return 1.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        // P(a,x) by series, return 1 - P
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    // continued fraction for Q directly
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

}  // namespace

double chi_square_pvalue(double statistic, int dof) {
    if (dof <= 0) return 1.0;
    return gamma_q(dof / 2.0, statistic / 2.0);
}

TrajectoryBatch simulate(const EntranceLaw& law, int k_min, int n_samples,
                         std::uint64_t seed) {
    if (k_min < law.k_work || k_min > 0)
        throw std::invalid_argument("simulate: k_min outside the law's window");
    const NoiseLaw& noise = *law.noise;
    const FiniteGroup& g = *noise.group;
    TrajectoryBatch batch;
    batch.noise = &noise;
    batch.k_min = k_min;
    batch.seed = seed;
    const int horizon = 1 - k_min;
    batch.eta.assign(n_samples, std::vector<int>(horizon));
    batch.xi.assign(n_samples, std::vector<int>(horizon));
    for (int s = 0; s < n_samples; ++s) {
        Rng rng(seed, (std::uint64_t)s);
        int cur = rng.sample(law.at(k_min).weights);
        batch.eta[s][0] = cur;
        batch.xi[s][0] = -1;
        for (int k = k_min + 1; k <= 0; ++k) {
            int x = rng.sample(noise.measure_at(k).weights);
            cur = g.table[cur][x];
            batch.eta[s][k - k_min] = cur;
            batch.xi[s][k - k_min] = x;
        }
    }
    return batch;
}

TestReport independence_test(const TrajectoryBatch& batch, int k, int window_m,
                             double alpha) {
    const FiniteGroup& g = *batch.noise->group;
    const int n = batch.n_samples();
    const int w_lo = k - window_m + 1;
    if (w_lo <= batch.k_min)
        throw std::invalid_argument("independence_test: window exceeds simulated history");

    // column index = mixed-radix code of the xi tuple
    long long n_cols = 1;
    for (int i = 0; i < (0 - w_lo + 1); ++i) {
        n_cols *= g.order;
        if (n_cols > 1000000) throw std::invalid_argument("independence window too large");
    }
    const long long cells = (long long)g.order * n_cols;
    if (n < 20 * cells)
        throw std::invalid_argument("independence_test: need at least 20 samples per cell");

    std::vector<std::vector<long long>> counts(g.order, std::vector<long long>(n_cols, 0));
    for (int s = 0; s < n; ++s) {
        long long code = 0;
        for (int j = w_lo; j <= 0; ++j)
            code = code * g.order + batch.xi[s][j - batch.k_min];
        counts[batch.eta[s][k - batch.k_min]][code]++;
    }
    std::vector<long long> row(g.order, 0), col(n_cols, 0);
    for (int r = 0; r < g.order; ++r)
        for (long long c = 0; c < n_cols; ++c) {
            row[r] += counts[r][c];
            col[c] += counts[r][c];
        }
    int n_rows_used = 0, n_cols_used = 0;
    for (int r = 0; r < g.order; ++r) n_rows_used += row[r] > 0;
    for (long long c = 0; c < n_cols; ++c) n_cols_used += col[c] > 0;
    double stat = 0.0;
    for (int r = 0; r < g.order; ++r)
        for (long long c = 0; c < n_cols; ++c) {
            if (row[r] == 0 || col[c] == 0) continue;
            double expected = (double)row[r] * col[c] / n;
            double diff = counts[r][c] - expected;
            stat += diff * diff / expected;
        }
    int dof = (n_rows_used - 1) * (n_cols_used - 1);
    TestReport rep;
    rep.statistic = "chi_square_independence";
    rep.value = stat;
    rep.p_value = chi_square_pvalue(stat, dof);
    rep.sample_size = n;
    rep.pass = rep.p_value > alpha;
    rep.detail = "dof=" + std::to_string(dof);
    return rep;
}

ReconstructionResult reconstruct_strong(const TrajectoryBatch& batch, const Irrep& rho,
                                        int k0, int depth_n) {
    const NoiseLaw& noise = *batch.noise;
    const FiniteGroup& g = *noise.group;
    if (k0 > 0 || k0 - depth_n + 1 <= batch.k_min)
        throw std::invalid_argument("reconstruct_strong: depth exceeds available history");

    Cmat expected = Cmat::Identity(rho.dim, rho.dim);
    for (int j = k0 - depth_n + 1; j <= k0; ++j)
        expected *= fourier_coefficient(noise.measure_at(j), rho);
    const double det_mean = std::abs(expected.determinant());
    if (det_mean < 1e-12)
        throw std::runtime_error("reconstruct_strong: E[Xi_n] is singular, irrep is outside "
                                 "the det-positive class");
    Eigen::JacobiSVD<Cmat> svd(expected);
    ReconstructionResult res;
    res.det_mean_xi = det_mean;
    res.condition_number =
        svd.singularValues()(0) / svd.singularValues()(rho.dim - 1);
    res.ill_conditioned = res.condition_number > 1e8;
    const Cmat expected_inv = expected.inverse();

    const int n = batch.n_samples();
    res.phi.resize(n);
    Cmat psi_sum = Cmat::Zero(rho.dim, rho.dim);
    std::vector<Cmat> xi_prod(n);
    for (int s = 0; s < n; ++s) {
        Cmat prod = Cmat::Identity(rho.dim, rho.dim);
        for (int j = k0 - depth_n + 1; j <= k0; ++j)
            prod *= rho.matrices[batch.xi[s][j - batch.k_min]];
        xi_prod[s] = prod;
        res.phi[s] = expected_inv * prod;
        // Phi^{-1} = prod^{-1} * expected; prod is unitary
        psi_sum += rho.matrices[batch.eta[s][k0 - batch.k_min]] * prod.adjoint() * expected;
    }
    res.psi_hat = psi_sum / (double)n;

    // project Psi_hat * Phi_n to the nearest element image (operator norm)
    int agree = 0;
    for (int s = 0; s < n; ++s) {
        Cmat rec = res.psi_hat * res.phi[s];
        int best = -1;
        double best_d = 1e300;
        for (int x = 0; x < g.order; ++x) {
            double d = Eigen::JacobiSVD<Cmat>(rec - rho.matrices[x]).singularValues()(0);
            if (d < best_d) {
                best_d = d;
                best = x;
            }
        }
        // agreement up to ker(rho): rho(best) must equal rho(eta_{k0})
        int truth = batch.eta[s][k0 - batch.k_min];
        int diff = g.table[best][g.inverse[truth]];
        if (std::abs(rho.character[diff] - std::complex<double>(rho.dim, 0)) < 1e-8) ++agree;
    }
    res.agreement_rate = (double)agree / n;
    return res;
}

HsEstimate estimate_Hs_membership(const NoiseLaw& noise, const EntranceLaw& law,
                                  const Irrep& rho, int depth, int n_samples,
                                  std::uint64_t seed, double in_threshold,
                                  double out_threshold) {
    const int k_min = -depth;
    if (k_min < law.k_work) throw std::invalid_argument("estimate_Hs_membership: depth too deep");
    TrajectoryBatch batch = simulate(law, k_min, n_samples, seed);
    const FiniteGroup& g = *noise.group;

    struct Bin {
        long long count = 0;
        Cmat sum;
        double sum_sq = 0.0;
    };
    std::map<std::vector<int>, Bin> bins;
    for (int s = 0; s < n_samples; ++s) {
        std::vector<int> key(batch.xi[s].begin() + 1, batch.xi[s].end());
        auto& b = bins[key];
        if (b.count == 0) b.sum = Cmat::Zero(rho.dim, rho.dim);
        const Cmat& m = rho.matrices[batch.eta[s].back()];
        b.count++;
        b.sum += m;
        b.sum_sq += m.squaredNorm();
    }
    double weighted_var = 0.0, weight = 0.0;
    std::vector<double> per_bin;
    std::vector<double> per_bin_weight;
    for (auto& [key, b] : bins) {
        if (b.count < 5) continue;
        double mean_sq = (b.sum / (double)b.count).squaredNorm();
        double var = b.sum_sq / (double)b.count - mean_sq;
        weighted_var += var * (double)b.count;
        weight += (double)b.count;
        per_bin.push_back(var);
        per_bin_weight.push_back((double)b.count);
    }
    if (weight < 0.5 * n_samples)
        throw std::runtime_error("estimate_Hs_membership: bin starvation at requested depth");

    HsEstimate est;
    est.bins_used = (int)per_bin.size();
    est.mean_conditional_variance = weighted_var / weight;
    double ss = 0.0;
    for (size_t i = 0; i < per_bin.size(); ++i)
        ss += per_bin_weight[i] * (per_bin[i] - est.mean_conditional_variance) *
              (per_bin[i] - est.mean_conditional_variance);
    est.std_error = per_bin.size() > 1
                        ? std::sqrt(ss / weight / (double)(per_bin.size() - 1))
                        : 0.0;
    (void)g;
    if (est.mean_conditional_variance < in_threshold)
        est.verdict = Membership::in;
    else if (est.mean_conditional_variance > out_threshold &&
             est.mean_conditional_variance - 2.58 * est.std_error > in_threshold)
        est.verdict = Membership::out;
    else
        est.verdict = Membership::undetermined;
    return est;
}

CouplingReport coupling_epsilon_check(const EntranceLaw& law1, const EntranceLaw& law2,
                                      int n_samples, int k_min, std::uint64_t seed,
                                      bool matched_start) {
    if (law1.noise != law2.noise)
        throw std::invalid_argument("coupling requires a shared noise law");
    const NoiseLaw& noise = *law1.noise;
    const FiniteGroup& g = *noise.group;

    int g0 = -1;
    if (matched_start) {
        for (int x = 0; x < g.order; ++x)
            if (laws_equal(translate(law1, x), law2)) {
                g0 = x;
                break;
            }
        if (g0 < 0)
            throw std::invalid_argument("matched_start: law2 is not a translate of law1");
    }

    CouplingReport rep;
    rep.n_samples = n_samples;
    rep.epsilon_distribution.assign(g.order, 0.0);
    std::vector<long long> counts(g.order, 0);
    for (int s = 0; s < n_samples; ++s) {
        Rng rng(seed, (std::uint64_t)s);
        int e1 = rng.sample(law1.at(k_min).weights);
        int e2 = matched_start ? g.table[g0][e1] : rng.sample(law2.at(k_min).weights);
        int eps = g.table[e2][g.inverse[e1]];
        for (int k = k_min + 1; k <= 0; ++k) {
            int x = rng.sample(noise.measure_at(k).weights);
            e1 = g.table[e1][x];
            e2 = g.table[e2][x];
            if (g.table[e2][g.inverse[e1]] != eps) rep.epsilon_constant = false;
        }
        counts[eps]++;
    }
    for (int x = 0; x < g.order; ++x) {
        rep.epsilon_distribution[x] = (double)counts[x] / n_samples;
        if (counts[x] == n_samples) rep.fixed_epsilon = x;
    }
    return rep;
}

TestReport tail_triviality_proxy(const EntranceLaw& law, int k_far, int k_near,
                                 int n_samples, std::uint64_t seed,
                                 double pass_threshold) {
    if (k_far >= k_near) throw std::invalid_argument("tail_triviality_proxy: need k_far < k_near");
    const FiniteGroup& g = *law.noise->group;
    TrajectoryBatch batch = simulate(law, k_far, n_samples, seed);
    std::vector<std::vector<long long>> cond(g.order, std::vector<long long>(g.order, 0));
    std::vector<long long> far_count(g.order, 0), near_count(g.order, 0);
    for (int s = 0; s < n_samples; ++s) {
        int f = batch.eta[s][0];
        int nr = batch.eta[s][k_near - k_far];
        cond[f][nr]++;
        far_count[f]++;
        near_count[nr]++;
    }
    double max_tv = 0.0;
    int bins_used = 0;
    for (int f = 0; f < g.order; ++f) {
        if (far_count[f] < 50) continue;
        ++bins_used;
        double tv = 0.0;
        for (int x = 0; x < g.order; ++x)
            tv += std::abs((double)cond[f][x] / far_count[f] -
                           (double)near_count[x] / n_samples);
        max_tv = std::max(max_tv, 0.5 * tv);
    }
    if (bins_used == 0)
        throw std::runtime_error("tail_triviality_proxy: bin starvation");
    TestReport rep;
    rep.statistic = "max_conditional_tv";
    rep.value = max_tv;
    rep.sample_size = n_samples;
    rep.pass = max_tv < pass_threshold;
    rep.detail = "bins=" + std::to_string(bins_used);
    return rep;
}

}  // namespace styre
