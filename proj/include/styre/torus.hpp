#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace styre {

// character-coefficient oracle for one time index
struct TorusCoeff {
    enum class Family {
        wrapped_gaussian,
        point_mass,
        uniform_set,
        explicit_table,
        uniform_interval,
        atoms
    };
    Family family = Family::point_mass;
    double mean = 0.0;      // wrapped_gaussian
    double variance = 0.0;  // wrapped_gaussian
    double atom = 0.0;      // point_mass
    double lo = 0.0, hi = 1.0;            // uniform_interval
    std::vector<double> points;           // uniform_set / atoms
    std::vector<double> weights;          // atoms
    std::map<int, std::complex<double>> table;  // explicit_table

    static TorusCoeff wrapped_gaussian(double m, double sigma2);
    static TorusCoeff point_mass(double a);
    static TorusCoeff uniform_set(std::vector<double> pts);
    static TorusCoeff explicit_table(std::map<int, std::complex<double>> t);
    static TorusCoeff uniform_interval(double a, double b);
    static TorusCoeff atoms(std::vector<double> pts, std::vector<double> w);

    std::complex<double> operator()(int n) const;
};

// noise on T = R/Z given through character coefficients; head covers
// k_head..0 and the periodic tail repeats leftward below k_head
struct TorusNoise {
    int k_head = 1;  // k of the first head entry; 1 when head is empty
    std::vector<TorusCoeff> head;          // index i holds k = k_head + i
    std::vector<TorusCoeff> periodic_tail;  // non-empty

    const TorusCoeff& coeff_at(int k) const;
};

std::complex<double> char_coeff(const TorusNoise& noise, int k, int n);

struct ZmuResult {
    int generator_d = 0;                // 0 means only n = 0 survives
    std::vector<int> survivors;         // nonnegative survivors <= N_max
    std::vector<int> inconclusive;      // n with undecided limits
    bool truncation_caveat = true;      // always: certified only up to N_max
    bool subgroup_closed = true;
    int n_max = 0;
};

struct ZmuOptions {
    int max_n = 10000;
    double eps_zero = 1e-12;
    double degenerate_band = 1e-8;
    double exact_band = 1e-12;
};

ZmuResult compute_Z_mu(const TorusNoise& noise, int N_max,
                       const ZmuOptions& opts = {});

// grid t_{k0} < ... < t_0 <= 1 decreasing toward 0 as k -> -inf; the head
// holds sigma_k^2 = 1/(t_k - t_{k-1}) and the tail extends the earliest
// variance as a constant
TorusNoise tsirelson_grid_noise(const std::vector<double>& grid);

// slowly convergent lattice-sum oracle for the wrapped Gaussian coefficient
std::complex<double> wrapped_gaussian_coeff_lattice(double mean, double sigma2,
                                                    int n, double tol = 1e-14);

}  // namespace styre
