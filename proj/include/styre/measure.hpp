#pragma once

#include <Eigen/Dense>
#include <vector>

#include "styre/group.hpp"

namespace styre {

using Cmat = Eigen::MatrixXcd;

// Probability measure on a finite group: nonnegative weights summing to 1.
// Construction renormalizes if the sum is off by less than 1e-9 and throws
// otherwise.
struct GroupMeasure {
    const FiniteGroup* group = nullptr;
    std::vector<double> weights;

    GroupMeasure() = default;
    GroupMeasure(const FiniteGroup& g, std::vector<double> w);

    double operator()(int i) const { return weights[i]; }
};

GroupMeasure haar(const FiniteGroup& g);
GroupMeasure point_mass(const FiniteGroup& g, int at);
GroupMeasure uniform_on(const FiniteGroup& g, const std::vector<int>& support);

// (a*b)(x) = sum_{gh=x} a(g) b(h); noncommutative, argument order matters.
GroupMeasure convolve(const GroupMeasure& a, const GroupMeasure& b);

double total_variation(const GroupMeasure& a, const GroupMeasure& b);

struct Irrep;  // irrep.hpp

// R = sum_g weights[g] rho(g); operator norm <= 1, |det| <= 1.
Cmat fourier_coefficient(const GroupMeasure& m, const Irrep& rho);

}  // namespace styre
