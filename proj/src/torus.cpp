#include "styre/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace styre {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

TorusCoeff TorusCoeff::wrapped_gaussian(double m, double sigma2) {
    if (sigma2 <= 0.0) throw std::invalid_argument("wrapped gaussian needs variance > 0");
    TorusCoeff c;
    c.family = Family::wrapped_gaussian;
    c.mean = m;
    c.variance = sigma2;
    return c;
}

TorusCoeff TorusCoeff::point_mass(double a) {
    TorusCoeff c;
    c.family = Family::point_mass;
    c.atom = a;
    return c;
}

TorusCoeff TorusCoeff::uniform_set(std::vector<double> pts) {
    if (pts.empty()) throw std::invalid_argument("uniform_set needs at least one point");
    TorusCoeff c;
    c.family = Family::uniform_set;
    c.points = std::move(pts);
    return c;
}

TorusCoeff TorusCoeff::explicit_table(std::map<int, std::complex<double>> t) {
    TorusCoeff c;
    c.family = Family::explicit_table;
    c.table = std::move(t);
    auto it = c.table.find(0);
    if (it == c.table.end() || std::abs(it->second - 1.0) > 1e-12)
        throw std::invalid_argument("explicit table must have coefficient 1 at n = 0");
    for (auto& [n, v] : c.table)
        if (std::abs(v) > 1.0 + 1e-12)
            throw std::invalid_argument("character coefficient modulus exceeds 1");
    return c;
}

TorusCoeff TorusCoeff::uniform_interval(double a, double b) {
    if (b <= a) throw std::invalid_argument("uniform_interval needs a < b");
    TorusCoeff c;
    c.family = Family::uniform_interval;
    c.lo = a;
    c.hi = b;
    return c;
}

TorusCoeff TorusCoeff::atoms(std::vector<double> pts, std::vector<double> w) {
    if (pts.empty() || pts.size() != w.size())
        throw std::invalid_argument("atoms needs matching point and weight lists");
    double total = 0.0;
    for (double x : w) {
        if (x < 0.0) throw std::invalid_argument("atom weights must be nonnegative");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("atom weights must sum to 1");
    TorusCoeff c;
    c.family = Family::atoms;
    c.points = std::move(pts);
    c.weights = std::move(w);
    return c;
}

std::complex<double> TorusCoeff::operator()(int n) const {
    switch (family) {
        case Family::wrapped_gaussian:
            return std::exp(std::complex<double>(-2.0 * std::numbers::pi * std::numbers::pi *
                                                     n * (double)n * variance,
                                                 two_pi * n * mean));
        case Family::point_mass:
            return std::polar(1.0, two_pi * n * atom);
        case Family::uniform_set: {
            std::complex<double> s = 0.0;
            for (double a : points) s += std::polar(1.0, two_pi * n * a);
            return s / (double)points.size();
        }
        case Family::explicit_table: {
            auto it = table.find(n);
            if (it != table.end()) return it->second;
            auto neg = table.find(-n);
            if (neg != table.end()) return std::conj(neg->second);
            throw std::out_of_range("explicit table has no coefficient for this n");
        }
        case Family::uniform_interval: {
            if (n == 0) return 1.0;
            const std::complex<double> num =
                std::polar(1.0, two_pi * n * hi) - std::polar(1.0, two_pi * n * lo);
            return num / std::complex<double>(0.0, two_pi * n * (hi - lo));
        }
        case Family::atoms: {
            std::complex<double> s = 0.0;
            for (size_t i = 0; i < points.size(); ++i)
                s += weights[i] * std::polar(1.0, two_pi * n * points[i]);
            return s;
        }
    }
    throw std::logic_error("unreachable");
}

const TorusCoeff& TorusNoise::coeff_at(int k) const {
    if (k >= k_head && k - k_head < (int)head.size()) return head[k - k_head];
    if (k >= k_head) throw std::out_of_range("coeff_at: k above the head window");
    if (periodic_tail.empty()) throw std::logic_error("torus noise has no tail");
    const int p = (int)periodic_tail.size();
    int t = (k_head - 1) - k;  // 0 maps to the last tail entry
    return periodic_tail[(p - 1 - (t % p) + p) % p];
}

std::complex<double> char_coeff(const TorusNoise& noise, int k, int n) {
    return noise.coeff_at(k)(n);
}

namespace {

enum class OneDimLimit { positive, zero, inconclusive };

// lim_{m -> -inf} prod_{j=m..0} |mu_hat_j(n)|, same truncation rules as the
// matrix classifier specialized to dimension one
OneDimLimit modulus_limit(const TorusNoise& noise, int n, const ZmuOptions& opts) {
    double prod = 1.0;
    int j = 0;
    int steps = 0;
    while (j >= noise.k_head && steps < opts.max_n) {
        prod *= std::min(1.0, std::abs(noise.coeff_at(j)(n)));
        --j;
        ++steps;
        if (prod == 0.0) return OneDimLimit::zero;
    }
    if (j >= noise.k_head) return OneDimLimit::inconclusive;

    double block = 1.0;
    for (const auto& c : noise.periodic_tail) block *= std::min(1.0, std::abs(c(n)));
    if (block >= 1.0 - opts.exact_band)
        return prod > opts.eps_zero ? OneDimLimit::positive : OneDimLimit::zero;
    if (block < 1.0 - opts.degenerate_band) return OneDimLimit::zero;

    // near-degenerate tail: truncate and decide by decay
    for (; steps < opts.max_n; ++steps) {
        prod *= std::min(1.0, std::abs(noise.coeff_at(j)(n)));
        --j;
        if (prod < opts.eps_zero) return OneDimLimit::zero;
    }
    return OneDimLimit::inconclusive;
}

}  // namespace

ZmuResult compute_Z_mu(const TorusNoise& noise, int N_max, const ZmuOptions& opts) {
    if (N_max < 1) throw std::invalid_argument("compute_Z_mu requires N_max >= 1");
    ZmuResult res;
    res.n_max = N_max;
    res.survivors.push_back(0);
    for (int n = 1; n <= N_max; ++n) {
        switch (modulus_limit(noise, n, opts)) {
            case OneDimLimit::positive: res.survivors.push_back(n); break;
            case OneDimLimit::zero: break;
            case OneDimLimit::inconclusive: res.inconclusive.push_back(n); break;
        }
    }
    int d = 0;
    for (int n : res.survivors) d = std::gcd(d, n);
    res.generator_d = d;
    // subgroup property within the window: survivors must be exactly dZ
    if (d > 0) {
        std::vector<int> expect;
        for (int n = 0; n <= N_max; n += d) expect.push_back(n);
        res.subgroup_closed = res.survivors == expect;
    } else {
        res.subgroup_closed = res.survivors == std::vector<int>{0};
    }
    return res;
}

TorusNoise tsirelson_grid_noise(const std::vector<double>& grid) {
    if (grid.size() < 2) throw std::invalid_argument("grid needs at least two points");
    for (size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] <= 0.0 || grid[i] > 1.0)
            throw std::invalid_argument("grid points must lie in (0, 1]");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw std::invalid_argument("grid must be strictly increasing");
    }
    TorusNoise noise;
    const int m = (int)grid.size() - 1;  // number of increments
    noise.k_head = 1 - m;
    for (int i = 1; i <= m; ++i)
        noise.head.push_back(TorusCoeff::wrapped_gaussian(0.0, 1.0 / (grid[i] - grid[i - 1])));
    noise.periodic_tail.push_back(TorusCoeff::wrapped_gaussian(0.0, 1.0 / (grid[1] - grid[0])));
    return noise;
}

std::complex<double> wrapped_gaussian_coeff_lattice(double mean, double sigma2, int n,
                                                    double tol) {
    // integrate e^{2 pi i n x} against the lattice-summed density with the
    // periodic trapezoid rule
    const int N = 1 << 13;
    const double sd = std::sqrt(sigma2);
    const int j_span = (int)std::ceil(10.0 * sd + std::abs(mean)) + 2;
    std::complex<double> acc = 0.0;
    for (int i = 0; i < N; ++i) {
        double x = (double)i / N;
        double dens = 0.0;
        for (int j = -j_span; j <= j_span; ++j) {
            double u = x + j - mean;
            dens += std::exp(-u * u / (2.0 * sigma2));
        }
        dens /= std::sqrt(2.0 * std::numbers::pi * sigma2);
        acc += dens * std::polar(1.0, two_pi * n * x);
    }
    (void)tol;
    return acc / (double)N;
}

}  // namespace styre
