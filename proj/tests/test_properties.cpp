#include <doctest.h>

#include <cmath>

#include "styre/rng.hpp"
#include "styre/solutions.hpp"

using namespace styre;

namespace {

// noise with subgroup/coset structure so the chain has nontrivial content
NoiseLaw random_instance(const FiniteGroup& g, Rng& rng) {
    // random subgroup from one or two generators
    std::vector<int> gens{(int)(rng.next_u64() % g.order)};
    if (rng.next_double() < 0.5) gens.push_back((int)(rng.next_u64() % g.order));
    Subgroup h = subgroup_generated(g, gens);

    std::vector<GroupMeasure> tail;
    double pick = rng.next_double();
    if (pick < 0.4) {
        tail.push_back(uniform_on(g, h.members));
    } else if (pick < 0.6) {
        tail.push_back(point_mass(g, (int)(rng.next_u64() % g.order)));
    } else if (pick < 0.8) {
        tail.push_back(haar(g));
    } else {
        // random full-support measure
        std::vector<double> w(g.order);
        double total = 0.0;
        for (auto& x : w) total += (x = rng.next_double() + 0.05);
        for (auto& x : w) x /= total;
        tail.push_back(GroupMeasure(g, std::move(w)));
    }

    std::vector<GroupMeasure> head;
    int head_len = (int)(rng.next_u64() % 3);
    for (int i = 0; i < head_len; ++i) {
        if (rng.next_double() < 0.5) {
            head.push_back(point_mass(g, (int)(rng.next_u64() % g.order)));
        } else {
            std::vector<double> w(g.order);
            double total = 0.0;
            for (auto& x : w) total += (x = rng.next_double() + 0.05);
            for (auto& x : w) x /= total;
            head.push_back(GroupMeasure(g, std::move(w)));
        }
    }
    return NoiseLaw(g, std::move(head), std::move(tail), false);
}

bool subset(const Subgroup& a, const Subgroup& b) {
    for (int x : a.members)
        if (!b.contains(x)) return false;
    return true;
}

}  // namespace

TEST_CASE("chain, normality and orbit-stabilizer on randomized instances") {
    std::vector<FiniteGroup> pool;
    pool.push_back(make_cyclic(4));
    pool.push_back(make_cyclic(6));
    pool.push_back(make_symmetric(3));
    pool.push_back(make_dihedral(4));
    pool.push_back(make_product(make_cyclic(2), make_cyclic(2)));

    Rng rng(0xc4a1, 0);
    int checked = 0;
    for (int trial = 0; trial < 15; ++trial) {
        const FiniteGroup& g = pool[trial % pool.size()];
        NoiseLaw noise = random_instance(g, rng);
        TrichotomyReport rep = classify_trichotomy(noise);
        ++checked;

        CHECK(subset(rep.h1, rep.h_isotropy));
        CHECK(subset(rep.h_isotropy, rep.h2));
        CHECK(is_normal(g, rep.h1));
        CHECK(is_normal(g, rep.h2));
        if (g.is_abelian()) {
            CHECK(rep.h1 == rep.h_isotropy);
            CHECK(rep.h_isotropy == rep.h2);
        }

        OrbitReport orbit = orbit_and_isotropy(find_extremal_entrance_law(noise));
        CHECK((int)(orbit.orbit.size() * orbit.isotropy.members.size()) == g.order);
        CHECK(orbit.isotropy == rep.h_isotropy);
    }
    CHECK(checked == 15);
}

TEST_CASE("det bound and decreasing partial products on random measures") {
    FiniteGroup d4 = make_dihedral(4);
    auto irreps = irreps_of(d4);
    Rng rng(0xdeb, 0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> w(d4.order);
        double total = 0.0;
        for (auto& x : w) total += (x = rng.next_double());
        for (auto& x : w) x /= total;
        GroupMeasure m(d4, std::move(w));
        for (const auto& rho : irreps) {
            Cmat r = fourier_coefficient(m, rho);
            CHECK(std::abs(r.determinant()) <= 1.0 + 1e-12);
            Eigen::JacobiSVD<Cmat> svd(r);
            CHECK(svd.singularValues()(0) <= 1.0 + 1e-12);
        }
    }
}
