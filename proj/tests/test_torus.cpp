#include <doctest.h>

#include <cmath>

#include "styre/torus.hpp"

using namespace styre;

TEST_CASE("character coefficients per family") {
    SUBCASE("point mass has modulus 1 everywhere") {
        TorusCoeff c = TorusCoeff::point_mass(0.3);
        for (int n = -5; n <= 5; ++n) CHECK(std::abs(c(n)) == doctest::Approx(1.0));
        CHECK(c(0) == std::complex<double>(1.0, 0.0));
    }
    SUBCASE("uniform on {0, 1/2}: 0 at odd n, 1 at even n") {
        TorusCoeff c = TorusCoeff::uniform_set({0.0, 0.5});
        CHECK(std::abs(c(1)) < 1e-15);
        CHECK(std::abs(c(3)) < 1e-15);
        CHECK(std::abs(c(2) - 1.0) < 1e-15);
        CHECK(std::abs(c(-4) - 1.0) < 1e-15);
    }
    SUBCASE("wrapped gaussian closed form vs lattice-sum oracle") {
        TorusCoeff c = TorusCoeff::wrapped_gaussian(0.0, 1.0);
        CHECK(std::abs(c(1)) == doctest::Approx(std::exp(-2.0 * M_PI * M_PI)).epsilon(1e-12));
        for (double sigma2 : {0.02, 0.1, 0.5}) {
            for (int n : {0, 1, 2}) {
                auto closed = TorusCoeff::wrapped_gaussian(0.17, sigma2)(n);
                auto lattice = wrapped_gaussian_coeff_lattice(0.17, sigma2, n);
                CHECK(std::abs(closed - lattice) < 1e-12);
            }
        }
    }
    SUBCASE("uniform interval") {
        // uniform on [0,1) is Haar: all nonzero coefficients vanish
        TorusCoeff h = TorusCoeff::uniform_interval(0.0, 1.0);
        CHECK(std::abs(h(1)) < 1e-15);
        CHECK(std::abs(h(7)) < 1e-15);
        CHECK(h(0) == std::complex<double>(1.0, 0.0));
        // quarter interval, n=2: |(e^{i pi} - 1)/(i pi)| = 2/pi
        TorusCoeff q = TorusCoeff::uniform_interval(0.0, 0.25);
        CHECK(std::abs(q(2)) == doctest::Approx(2.0 / M_PI));
    }
    SUBCASE("explicit table uses conjugate symmetry and validates") {
        TorusCoeff t = TorusCoeff::explicit_table({{0, 1.0}, {1, {0.5, 0.25}}});
        CHECK(t(-1) == std::conj(t(1)));
        CHECK_THROWS(t(2));
        CHECK_THROWS(TorusCoeff::explicit_table({{1, 0.5}}));        // no n=0
        CHECK_THROWS(TorusCoeff::explicit_table({{0, 1.0}, {1, 2.0}}));  // modulus > 1
    }
}

TEST_CASE("coeff_at follows the head/tail layout") {
    TorusNoise noise;
    noise.k_head = -1;
    noise.head = {TorusCoeff::point_mass(0.1), TorusCoeff::point_mass(0.2)};
    noise.periodic_tail = {TorusCoeff::point_mass(0.3), TorusCoeff::point_mass(0.4)};
    CHECK(char_coeff(noise, 0, 1) == TorusCoeff::point_mass(0.2)(1));
    CHECK(char_coeff(noise, -1, 1) == TorusCoeff::point_mass(0.1)(1));
    CHECK(char_coeff(noise, -2, 1) == TorusCoeff::point_mass(0.4)(1));  // last of period
    CHECK(char_coeff(noise, -3, 1) == TorusCoeff::point_mass(0.3)(1));
}

TEST_CASE("compute_Z_mu fixtures") {
    SUBCASE("gaussian tail: only n = 0 survives") {
        TorusNoise noise;
        noise.periodic_tail.push_back(TorusCoeff::wrapped_gaussian(0.0, 1.0));
        ZmuResult res = compute_Z_mu(noise, 64);
        CHECK(res.generator_d == 0);
        CHECK(res.survivors == std::vector<int>{0});
        CHECK(res.inconclusive.empty());
        CHECK(res.subgroup_closed);
        CHECK(res.truncation_caveat);
    }
    SUBCASE("point-mass noise: everything survives, d = 1") {
        TorusNoise noise;
        noise.periodic_tail.push_back(TorusCoeff::point_mass(0.37));
        ZmuResult res = compute_Z_mu(noise, 64);
        CHECK(res.generator_d == 1);
        CHECK(res.survivors.size() == 65);
        CHECK(res.subgroup_closed);
    }
    SUBCASE("uniform on {0,1/2}: even n survive, d = 2") {
        TorusNoise noise;
        noise.periodic_tail.push_back(TorusCoeff::uniform_set({0.0, 0.5}));
        ZmuResult res = compute_Z_mu(noise, 64);
        CHECK(res.generator_d == 2);
        CHECK(res.subgroup_closed);
        for (int n : res.survivors) CHECK(n % 2 == 0);
    }
    SUBCASE("head survives over a point-mass tail") {
        TorusNoise noise;
        noise.k_head = 0;
        noise.head.push_back(TorusCoeff::wrapped_gaussian(0.0, 1e-6));
        noise.periodic_tail.push_back(TorusCoeff::point_mass(0.0));
        ZmuResult res = compute_Z_mu(noise, 8);
        CHECK(res.generator_d == 1);
    }
}

TEST_CASE("survivor set is a subgroup within the window") {
    TorusNoise noise;
    noise.periodic_tail.push_back(TorusCoeff::uniform_set({0.0, 1.0 / 3, 2.0 / 3}));
    ZmuResult res = compute_Z_mu(noise, 30);
    CHECK(res.generator_d == 3);
    CHECK(res.subgroup_closed);
}

TEST_CASE("tsirelson grid") {
    SUBCASE("t_k = 2^k gives d = 0") {
        std::vector<double> grid;
        for (int k = -39; k <= 0; ++k) grid.push_back(std::ldexp(1.0, k));
        TorusNoise noise = tsirelson_grid_noise(grid);
        CHECK(noise.head.size() == grid.size() - 1);
        // sigma_0^2 = 1/(2^0 - 2^-1) = 2
        CHECK(noise.head.back().variance == doctest::Approx(2.0));
        ZmuResult res = compute_Z_mu(noise, 64);
        CHECK(res.generator_d == 0);
        CHECK(res.inconclusive.empty());
    }
    SUBCASE("mu_hat(0) = 1 on any grid") {
        TorusNoise noise = tsirelson_grid_noise({0.25, 0.5, 1.0});
        for (int k = -5; k <= 0; ++k) CHECK(char_coeff(noise, k, 0) == 1.0);
    }
    SUBCASE("non-monotone or out-of-range grids are rejected") {
        CHECK_THROWS(tsirelson_grid_noise({0.5, 0.25, 1.0}));
        CHECK_THROWS(tsirelson_grid_noise({0.0, 0.5}));
        CHECK_THROWS(tsirelson_grid_noise({0.5, 1.5}));
        CHECK_THROWS(tsirelson_grid_noise({0.5}));
    }
}

TEST_CASE("rational embedding agrees with the finite classifier shape") {
    // uniform on {0, 1/2} embedded in Z/4 as uniform on {0, 2}: the torus
    // survivors (even characters) mirror H = {0, 2} having index 2
    TorusNoise noise;
    noise.periodic_tail.push_back(TorusCoeff::uniform_set({0.0, 0.5}));
    ZmuResult res = compute_Z_mu(noise, 16);
    CHECK(res.generator_d == 2);
    // the surviving characters n = 2m restricted to Z/4 = {0, 1/4, 1/2, 3/4}
    // are exactly the characters of Z/4 that kill {0, 1/2}
    for (int n : res.survivors) {
        auto chi = [&](double x) { return std::polar(1.0, 2 * M_PI * n * x); };
        CHECK(std::abs(chi(0.5) - 1.0) < 1e-12);
    }
}
