#include "styre/measure.hpp"

#include <cmath>
#include <stdexcept>

#include "styre/irrep.hpp"

namespace styre {

GroupMeasure::GroupMeasure(const FiniteGroup& g, std::vector<double> w)
    : group(&g), weights(std::move(w)) {
    if ((int)weights.size() != g.order)
        throw std::invalid_argument("measure weight count != group order");
    double sum = 0.0;
    for (double x : weights) {
        if (x < -1e-15) throw std::invalid_argument("negative measure weight");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("measure weights do not sum to 1");
    for (double& x : weights) x = std::max(x, 0.0) / sum;
}

GroupMeasure haar(const FiniteGroup& g) {
    return GroupMeasure(g, std::vector<double>(g.order, 1.0 / g.order));
}

GroupMeasure point_mass(const FiniteGroup& g, int at) {
    if (at < 0 || at >= g.order) throw std::invalid_argument("point mass index out of range");
    std::vector<double> w(g.order, 0.0);
    w[at] = 1.0;
    return GroupMeasure(g, std::move(w));
}

GroupMeasure uniform_on(const FiniteGroup& g, const std::vector<int>& support) {
    if (support.empty()) throw std::invalid_argument("empty support");
    std::vector<double> w(g.order, 0.0);
    for (int i : support) {
        if (i < 0 || i >= g.order) throw std::invalid_argument("support index out of range");
        w[i] += 1.0 / support.size();
    }
    return GroupMeasure(g, std::move(w));
}

GroupMeasure convolve(const GroupMeasure& a, const GroupMeasure& b) {
    if (a.group != b.group) throw std::invalid_argument("convolve: group mismatch");
    const FiniteGroup& g = *a.group;
    std::vector<double> w(g.order, 0.0);
    for (int i = 0; i < g.order; ++i) {
        if (a.weights[i] == 0.0) continue;
        for (int j = 0; j < g.order; ++j)
            w[g.table[i][j]] += a.weights[i] * b.weights[j];
    }
    return GroupMeasure(g, std::move(w));
}

double total_variation(const GroupMeasure& a, const GroupMeasure& b) {
    if (a.group != b.group) throw std::invalid_argument("total_variation: group mismatch");
    double s = 0.0;
    for (int i = 0; i < a.group->order; ++i) s += std::abs(a.weights[i] - b.weights[i]);
    return 0.5 * s;
}

Cmat fourier_coefficient(const GroupMeasure& m, const Irrep& rho) {
    if (m.group != rho.group) throw std::invalid_argument("fourier_coefficient: group mismatch");
    Cmat r = Cmat::Zero(rho.dim, rho.dim);
    for (int g = 0; g < m.group->order; ++g)
        if (m.weights[g] != 0.0) r += m.weights[g] * rho.matrices[g];
    return r;
}

}  // namespace styre
