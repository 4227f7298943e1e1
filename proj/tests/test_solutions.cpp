#include <doctest.h>

#include <cmath>

#include "styre/solutions.hpp"

using namespace styre;

TEST_CASE("center law is consistent and has Haar marginals") {
    FiniteGroup s3 = make_symmetric(3);
    NoiseLaw noise(s3, {uniform_on(s3, {0, 4})}, {uniform_on(s3, {0, 1})}, false);
    EntranceLaw center = center_entrance_law(noise);
    CHECK(consistency_residual(center) < 1e-12);
    CHECK(total_variation(center.at(0), haar(s3)) < 1e-12);
    CHECK(total_variation(center.at(-32), haar(s3)) < 1e-12);
}

TEST_CASE("window convolution composes head measures") {
    FiniteGroup z2 = make_cyclic(2);
    GroupMeasure a(z2, {0.9, 0.1});
    NoiseLaw noise(z2, {a, a}, {point_mass(z2, 0)}, false);
    GroupMeasure two = window_convolution(noise, 0, 2);
    CHECK(two.weights[0] == doctest::Approx(0.9 * 0.9 + 0.1 * 0.1));
}

TEST_CASE("extremal law for S3 coset noise is uniform on the subgroup") {
    FiniteGroup s3 = make_symmetric(3);
    NoiseLaw noise(s3, {}, {uniform_on(s3, {0, 1})}, false);
    EntranceLaw law = find_extremal_entrance_law(noise);
    GroupMeasure expected = uniform_on(s3, {0, 1});
    for (int k = law.k_work; k <= 0; ++k)
        CHECK(total_variation(law.at(k), expected) < 1e-8);
    CHECK(total_variation(law.tail_limit, expected) < 1e-8);
    CHECK(consistency_residual(law) < 1e-8);
}

TEST_CASE("extremal law for the Z/2 geometric fixture") {
    FiniteGroup z2 = make_cyclic(2);
    std::vector<GroupMeasure> head;
    for (int j = -59; j <= 0; ++j) {
        double p = (1.0 + std::exp(std::ldexp(-1.0, j))) / 2.0;
        head.push_back(GroupMeasure(z2, {p, 1.0 - p}));
    }
    NoiseLaw noise(z2, std::move(head), {point_mass(z2, 0)}, false);
    EntranceLaw law = find_extremal_entrance_law(noise);
    // lambda_0(0) = (1 + exp(-sum 2^j))/2 = (1 + e^{-2})/2 up to head truncation
    CHECK(law.at(0).weights[0] == doctest::Approx((1.0 + std::exp(-2.0)) / 2).epsilon(1e-9));
    CHECK(consistency_residual(law) < 1e-10);
}

TEST_CASE("translate shifts weights by left multiplication") {
    FiniteGroup s3 = make_symmetric(3);
    NoiseLaw noise(s3, {}, {uniform_on(s3, {0, 1})}, false);
    EntranceLaw law = find_extremal_entrance_law(noise);
    int g = s3.label_index("(13)");
    EntranceLaw moved = translate(law, g);
    // support of the translate is the left coset {(13),(132)}
    CHECK(moved.at(0).weights[s3.label_index("(13)")] == doctest::Approx(0.5));
    CHECK(moved.at(0).weights[s3.label_index("(132)")] == doctest::Approx(0.5));
    CHECK(laws_equal(translate(moved, s3.inv(g)), law));
}

TEST_CASE("orbit and isotropy on the S3 fixture") {
    FiniteGroup s3 = make_symmetric(3);
    NoiseLaw noise(s3, {}, {uniform_on(s3, {0, 1})}, false);
    EntranceLaw law = find_extremal_entrance_law(noise);
    OrbitReport rep = orbit_and_isotropy(law);
    CHECK(rep.orbit.size() == 3);
    CHECK(rep.isotropy.members == std::vector<int>{0, 1});
    CHECK(rep.orbit.size() * rep.isotropy.members.size() == 6);
    CHECK(rep.extremality == ExtremalityGrade::verified_vertex);
    // the orbit contains the (13)- and (123)-translates
    bool has_t13 = false, has_t123 = false;
    for (const auto& point : rep.orbit) {
        if (laws_equal(point, translate(law, s3.label_index("(13)")))) has_t13 = true;
        if (laws_equal(point, translate(law, s3.label_index("(123)")))) has_t123 = true;
    }
    CHECK(has_t13);
    CHECK(has_t123);
}

TEST_CASE("orbit on Z/4 with uniform {0,2} noise") {
    FiniteGroup z4 = make_cyclic(4);
    NoiseLaw noise(z4, {}, {uniform_on(z4, {0, 2})}, false);
    OrbitReport rep = orbit_and_isotropy(find_extremal_entrance_law(noise));
    CHECK(rep.orbit.size() == 2);
    CHECK(rep.isotropy.members == std::vector<int>{0, 2});
    CHECK(rep.extremality == ExtremalityGrade::verified_vertex);
}

TEST_CASE("haar noise: center law is the unique solution, orbit is one point") {
    FiniteGroup s3 = make_symmetric(3);
    NoiseLaw noise(s3, {}, {haar(s3)}, false);
    EntranceLaw law = find_extremal_entrance_law(noise);
    CHECK(laws_equal(law, center_entrance_law(noise)));
    OrbitReport rep = orbit_and_isotropy(law);
    CHECK(rep.orbit.size() == 1);
    CHECK(rep.isotropy.members.size() == 6);
    CHECK(rep.extremality == ExtremalityGrade::heuristic);
}

TEST_CASE("periodic point-mass noise resolves along the period") {
    FiniteGroup z3 = make_cyclic(3);
    NoiseLaw noise(z3, {}, {point_mass(z3, 1), point_mass(z3, 2)}, true);
    EntranceLaw law = find_extremal_entrance_law(noise);
    CHECK(consistency_residual(law) < 1e-10);
    // each marginal is a point mass
    for (int k = law.k_work; k <= 0; ++k) {
        double mx = 0.0;
        for (double w : law.at(k).weights) mx = std::max(mx, w);
        CHECK(mx == doctest::Approx(1.0));
    }
    OrbitReport rep = orbit_and_isotropy(law);
    CHECK(rep.orbit.size() == 3);
    CHECK(rep.isotropy.members == std::vector<int>{0});
}

TEST_CASE("center formula: orbit average of any law is Haar") {
    FiniteGroup s3 = make_symmetric(3);
    NoiseLaw noise(s3, {}, {uniform_on(s3, {0, 1})}, false);
    CHECK(center_formula_check(find_extremal_entrance_law(noise)));
    CHECK(center_formula_check(center_entrance_law(noise)));
}

TEST_CASE("the center law of a C2 fixture is not extremal") {
    FiniteGroup z2 = make_cyclic(2);
    NoiseLaw noise(z2, {}, {point_mass(z2, 1)}, false);
    EntranceLaw center = center_entrance_law(noise);
    CHECK(extremality_check(center) == ExtremalityGrade::failed);
}
