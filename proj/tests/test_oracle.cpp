#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "capflow/oracle.hpp"

using namespace capflow;
using namespace capflow::oracle;

TEST_CASE("radial capacity closed forms") {
    // H^2, p = 2: 4 pi / log((cosh r + 1)/(cosh r - 1))
    const double h2 =
        4.0 * M_PI / std::log((std::cosh(1.0) + 1.0) / (std::cosh(1.0) - 1.0));
    CHECK(h2 == doctest::Approx(8.1395).epsilon(1e-4));
    CHECK(radial_capacity({2, true, 1.0, 2.0}) == doctest::Approx(h2).epsilon(1e-10));

    // R^3, p = 2: 4 pi r
    CHECK(radial_capacity({3, false, 1.0, 2.0}) == doctest::Approx(4.0 * M_PI).epsilon(1e-10));

    // R^3 general p < 3: ((3-p)/(p-1))^{p-1} 4 pi r^{3-p}
    const double expected = std::pow(0.5 / 1.5, 1.5) * 4.0 * M_PI * std::pow(2.0, 0.5);
    CHECK(expected == doctest::Approx(3.4201).epsilon(1e-4));
    CHECK(radial_capacity({3, false, 2.0, 2.5}) == doctest::Approx(expected).epsilon(1e-9));

    // H^2 p = 2 alternate closed form 2 pi / arsinh(2 pi / L), L = circle length
    const double L = 2.0 * M_PI * std::sinh(1.0);
    CHECK(radial_capacity({2, true, 1.0, 2.0}) ==
          doctest::Approx(2.0 * M_PI / std::asinh(2.0 * M_PI / L)).epsilon(1e-10));
}

TEST_CASE("divergent euclidean regime is reported") {
    CHECK_THROWS_AS(radial_capacity({3, false, 1.0, 3.0}), CapacityDivergent);
    CHECK_THROWS_AS(radial_capacity({2, false, 1.0, 2.0}), CapacityDivergent);
    CHECK_THROWS_AS(radial_energy_check({3, false, 1.0, 3.5}), CapacityDivergent);
}

TEST_CASE("wulff capacity") {
    const auto w_euclid = anisotropic::wulff_shape(anisotropic::euclidean_norm(), 64, 128);
    CHECK(wulff_capacity(w_euclid, 1.0, 2.0) == doctest::Approx(4.0 * M_PI).epsilon(1e-3));

    const auto w_ell = anisotropic::wulff_shape(anisotropic::ellipsoidal_norm_diag(1, 4, 9), 96, 192);
    CHECK(wulff_capacity(w_ell, 1.0, 2.0) == doctest::Approx(24.0 * M_PI).epsilon(0.01));

    const double factor = std::sqrt(3.0) * 2.0 * std::sqrt(2.0);
    CHECK(wulff_capacity(w_euclid, 2.0, 1.5) ==
          doctest::Approx(factor * w_euclid.anisotropic_area).epsilon(1e-12));
}

TEST_CASE("energy check agrees with the capacity integral") {
    CHECK(radial_energy_check({2, true, 1.0, 2.0}) ==
          doctest::Approx(radial_capacity({2, true, 1.0, 2.0})).epsilon(1e-6));
    CHECK(radial_energy_check({3, false, 1.0, 2.0}) == doctest::Approx(4.0 * M_PI).epsilon(1e-8));
    CHECK(radial_energy_check({3, true, 1.0, 2.0}) ==
          doctest::Approx(radial_capacity({3, true, 1.0, 2.0})).epsilon(1e-6));
}

TEST_CASE("energy check across a parameter grid") {
    for (int dim : {2, 3, 4})
        for (double p : {1.5, 2.0, 2.5})
            for (double r : {0.5, 1.0, 2.0}) {
                if (!(p < dim)) continue;
                const RadialCapacityQuery qh{dim, true, r, p};
                CHECK(radial_energy_check(qh) ==
                      doctest::Approx(radial_capacity(qh)).epsilon(1e-6));
                const RadialCapacityQuery qe{dim, false, r, p};
                CHECK(radial_energy_check(qe) ==
                      doctest::Approx(radial_capacity(qe)).epsilon(1e-6));
            }
}

TEST_CASE("capacity increases with radius") {
    for (bool hyp : {true, false}) {
        double prev = 0;
        for (double r = 0.25; r <= 3.01; r += 0.25) {
            const double c = radial_capacity({3, hyp, r, 2.0});
            CHECK(c > prev);
            prev = c;
        }
    }
}

TEST_CASE("small-radius limit: hyperbolic over euclidean ratio") {
    // Pairs with (n-1)/(p-1) >= 8/3 so the ratio deviation is o(r) at r = 1e-2.
    for (auto [dim, p] : {std::pair{2, 1.5}, std::pair{3, 1.5}, std::pair{3, 1.75}}) {
        const double ratio =
            radial_capacity({dim, true, 1e-2, p}) / radial_capacity({dim, false, 1e-2, p});
        CHECK(std::fabs(ratio - 1.0) <= 0.01);
    }
    // At (n, p) = (3, 2) the deviation is r + O(r^2) exactly: the explicit
    // forms give ratio = (1/r) / (coth r - 1).
    const double r = 1e-2;
    const double ratio = radial_capacity({3, true, r, 2.0}) / radial_capacity({3, false, r, 2.0});
    const double exact = (1.0 / r) / (1.0 / std::tanh(r) - 1.0);
    CHECK(ratio == doctest::Approx(exact).epsilon(1e-9));
    CHECK(std::fabs(ratio - 1.0 - r) <= 0.1 * r);
}
