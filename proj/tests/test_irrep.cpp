#include <doctest.h>

#include <cmath>
#include <complex>

#include "styre/irrep.hpp"

using namespace styre;

namespace {
void check_complete(const FiniteGroup& g) {
    auto irreps = irreps_of(g);
    int dim2 = 0;
    for (const auto& r : irreps) {
        validate_irrep(r);
        dim2 += r.dim * r.dim;
    }
    CHECK(dim2 == g.order);

    // character orthogonality: <chi_a, chi_b> = delta_ab
    for (size_t a = 0; a < irreps.size(); ++a)
        for (size_t b = 0; b < irreps.size(); ++b) {
            std::complex<double> ip = 0.0;
            for (int x = 0; x < g.order; ++x)
                ip += irreps[a].character[x] * std::conj(irreps[b].character[x]);
            ip /= (double)g.order;
            CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-7);
        }
}
}  // namespace

TEST_CASE("irrep lists are complete and orthogonal") {
    check_complete(make_cyclic(2));
    check_complete(make_cyclic(6));
    check_complete(make_symmetric(3));
    check_complete(make_symmetric(4));
    check_complete(make_dihedral(4));
    check_complete(make_dihedral(5));
    check_complete(make_product(make_cyclic(2), make_cyclic(2)));
    check_complete(make_product(make_cyclic(2), make_cyclic(3)));
}

TEST_CASE("cyclic characters are exact roots of unity") {
    FiniteGroup z4 = make_cyclic(4);
    auto irreps = irreps_of(z4);
    REQUIRE(irreps.size() == 4);
    // trivial irrep first
    for (int x = 0; x < 4; ++x)
        CHECK(std::abs(irreps[0].character[x] - std::complex<double>(1, 0)) < 1e-15);
    for (const auto& r : irreps) {
        CHECK(r.dim == 1);
        for (int x = 0; x < 4; ++x) CHECK(std::abs(std::abs(r.character[x]) - 1.0) < 1e-15);
    }
}

TEST_CASE("S3 has irreps of dimensions 1,1,2") {
    auto irreps = irreps_of(make_symmetric(3));
    REQUIRE(irreps.size() == 3);
    CHECK(irreps[0].dim == 1);
    CHECK(irreps[1].dim == 1);
    CHECK(irreps[2].dim == 2);
    // sign irrep: -1 on transpositions
    CHECK(std::abs(irreps[1].character[1] - std::complex<double>(-1, 0)) < 1e-8);
    CHECK(std::abs(irreps[1].character[4] - std::complex<double>(1, 0)) < 1e-8);
    // 2-dim character: 2, 0 on transpositions, -1 on 3-cycles
    CHECK(std::abs(irreps[2].character[0] - std::complex<double>(2, 0)) < 1e-8);
    CHECK(std::abs(irreps[2].character[1]) < 1e-8);
    CHECK(std::abs(irreps[2].character[4] - std::complex<double>(-1, 0)) < 1e-8);
}

TEST_CASE("joint kernels") {
    FiniteGroup s3 = make_symmetric(3);
    auto irreps = irreps_of(s3);
    // sign irrep alone: kernel = A3
    Subgroup a3 = joint_kernel(s3, {&irreps[1]});
    CHECK(a3.members.size() == 3);
    CHECK(a3.contains(s3.label_index("(123)")));
    // all irreps: trivial kernel
    CHECK(joint_kernel(s3, irreps).members == std::vector<int>{0});
    // trivial irrep alone: whole group
    CHECK(joint_kernel(s3, {&irreps[0]}).members.size() == 6);
}

TEST_CASE("deterministic across calls") {
    FiniteGroup d4 = make_dihedral(4);
    auto a = irreps_of(d4), b = irreps_of(d4);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        for (int x = 0; x < d4.order; ++x)
            CHECK(std::abs(a[i].character[x] - b[i].character[x]) < 1e-12);
    }
}
