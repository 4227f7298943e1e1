#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "styre/group.hpp"

namespace styre {

// Irreducible unitary representation of a finite group: one unitary matrix
// per element, rho(0) = identity, homomorphism rho(gh) = rho(g) rho(h).
struct Irrep {
    const FiniteGroup* group = nullptr;
    int dim = 0;
    std::vector<Eigen::MatrixXcd> matrices;
    std::vector<std::complex<double>> character;

    std::string name;  // "rho_k (dim d)" in the stable report ordering
};

// Complete list of inequivalent irreps, one per equivalence class,
// sum dim^2 = |G|. Cyclic groups get exact character formulas; every
// other group is decomposed numerically from the regular representation.
std::vector<Irrep> irreps_of(const FiniteGroup& g);

// {g : rho(g) = id for every rho in reps}, via the character test
// chi(g) = dim within 1e-8.
Subgroup joint_kernel(const FiniteGroup& g, const std::vector<const Irrep*>& reps);
Subgroup joint_kernel(const FiniteGroup& g, const std::vector<Irrep>& reps);

// Invariant checks used by construction and by tests.
void validate_irrep(const Irrep& rho);

}  // namespace styre
