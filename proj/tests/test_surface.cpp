#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "capflow/surface.hpp"

using namespace capflow::surface;

TEST_CASE("icosphere: area, Willmore energy, Euler characteristic, Gauss-Bonnet") {
    const auto mesh = make_icosphere(4, 1.0);
    const auto s = summarize_mesh(mesh);
    CHECK(std::fabs(s.area - 4.0 * M_PI) <= 0.005 * 4.0 * M_PI);
    CHECK(std::fabs(s.sigma1_sq_integral - 16.0 * M_PI) <= 0.01 * 16.0 * M_PI);
    CHECK(s.euler_char == 2);
    CHECK(std::fabs(s.gauss_integral - 4.0 * M_PI) <= 1e-9);
    CHECK(s.connected);
    CHECK(s.enclosed_volume == doctest::Approx(4.0 * M_PI / 3.0).epsilon(0.01));
    CHECK(s.min_sigma1 > 0.0);
}

TEST_CASE("icosphere scaled by 2: area x4, Willmore invariant") {
    auto mesh = make_icosphere(3, 1.0);
    const auto s1 = summarize_mesh(mesh);
    for (auto& v : mesh.vertices) v *= 2.0;
    const auto s2 = summarize_mesh(mesh);
    CHECK(s2.area == doctest::Approx(4.0 * s1.area).epsilon(1e-12));
    CHECK(s2.sigma1_sq_integral == doctest::Approx(s1.sigma1_sq_integral).epsilon(1e-12));
}

TEST_CASE("torus: Euler characteristic zero, defects telescope") {
    const auto mesh = make_torus(2.0, 0.5, 64, 64);
    const auto s = summarize_mesh(mesh);
    CHECK(s.euler_char == 0);
    CHECK(std::fabs(s.gauss_integral) <= 1e-9);
    // tube curvature 1/0.5 dominates: mean convex, but one principal direction
    // bends inward on the inner ring
    CHECK(s.min_sigma1 > 0.0);
    CHECK(s.min_principal < 0.0);
    CHECK(s.connected);
}

TEST_CASE("willmore lower bound holds on assorted meshes") {
    for (const auto& mesh : {make_icosphere(3, 1.0), make_icosphere(2, 0.5),
                             make_torus(2.0, 0.5, 48, 48), make_torus(1.0, 0.35, 40, 40)}) {
        const auto s = summarize_mesh(mesh);
        CHECK(s.sigma1_sq_integral >= 16.0 * M_PI * (1.0 - 0.02));
    }
}

TEST_CASE("cauchy-schwarz between integrals") {
    for (const auto& mesh : {make_icosphere(3, 1.3), make_torus(2.0, 0.6, 32, 32)}) {
        const auto s = summarize_mesh(mesh);
        CHECK(s.sigma1_sq_integral * s.area >= s.sigma1_integral * s.sigma1_integral * (1.0 - 1e-12));
    }
}

TEST_CASE("mesh validation names the offending edge") {
    auto mesh = make_icosphere(1, 1.0);
    mesh.faces.pop_back();  // open the mesh
    try {
        mesh.validate();
        CHECK(false);
    } catch (const MeshValidationError& e) {
        CHECK(std::string(e.what()).find("(") != std::string::npos);
    }

    auto flipped = make_icosphere(1, 1.0);
    std::swap(flipped.faces[0][0], flipped.faces[0][1]);
    CHECK_THROWS_AS(flipped.validate(), MeshValidationError);
}

TEST_CASE("radial graph: geodesic sphere in H3") {
    const auto surf = make_sphere_graph(Ambient::Hyperbolic3, 1.0, 128, 256);
    const auto s = summarize_radial_graph(surf);
    const double area_exact = 4.0 * M_PI * std::pow(std::sinh(1.0), 2);
    const double sigma1_exact = 2.0 / std::tanh(1.0);
    CHECK(std::fabs(s.area - area_exact) <= 0.005 * area_exact);
    CHECK(std::fabs(s.sigma1_integral / s.area - sigma1_exact) <= 0.005 * sigma1_exact);
    CHECK(s.min_sigma1 == doctest::Approx(sigma1_exact).epsilon(1e-6));
    CHECK(s.enclosed_volume ==
          doctest::Approx(M_PI * (std::sinh(2.0) - 2.0)).epsilon(1e-4));
    // intrinsic Gauss-Bonnet: integral of (sigma_2 - 1) = 4 pi
    CHECK(s.gauss_integral == doctest::Approx(4.0 * M_PI).epsilon(1e-4));
}

TEST_CASE("radial graph: unit sphere in R3") {
    const auto surf = make_sphere_graph(Ambient::Euclidean3, 1.0, 96, 192);
    const auto s = summarize_radial_graph(surf);
    CHECK(std::fabs(s.area - 4.0 * M_PI) <= 1e-3 * 4.0 * M_PI);
    CHECK(s.min_sigma1 == doctest::Approx(2.0).epsilon(1e-9));
    // umbilic surface: splitting sigma_1 into principal values carries sqrt(eps) noise
    CHECK(s.max_principal == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s.gauss_integral == doctest::Approx(4.0 * M_PI).epsilon(1e-3));
}

TEST_CASE("radial graph: ellipsoid volume") {
    const auto surf = make_ellipsoid_graph(1.0, 1.0, 1.5, 128, 256);
    const auto s = summarize_radial_graph(surf);
    CHECK(std::fabs(s.enclosed_volume - 2.0 * M_PI) <= 0.01 * 2.0 * M_PI);
}

TEST_CASE("radial graph refinement: second-order convergence of the integrals") {
    const double area_exact = 4.0 * M_PI * std::pow(std::sinh(1.0), 2);
    const double s1_exact = 2.0 / std::tanh(1.0) * area_exact;
    auto err = [&](int nt, int np) {
        const auto s = summarize_radial_graph(make_sphere_graph(Ambient::Hyperbolic3, 1.0, nt, np));
        return std::pair{std::fabs(s.area - area_exact), std::fabs(s.sigma1_integral - s1_exact)};
    };
    const auto coarse = err(64, 128);
    const auto fine = err(128, 256);
    CHECK(coarse.first / fine.first >= 3.0);
    CHECK(coarse.second / fine.second >= 3.0);
}

TEST_CASE("radial graph validation") {
    auto surf = make_sphere_graph(Ambient::Euclidean3, 1.0, 32, 64);
    surf.at(5, 7) = -0.2;
    CHECK_THROWS_AS(surf.validate(), SurfaceValidationError);

    auto tiny = make_sphere_graph(Ambient::Euclidean3, 1.0, 4, 8);
    CHECK_THROWS_AS(tiny.validate(), SurfaceValidationError);

    auto pole = make_sphere_graph(Ambient::Euclidean3, 1.0, 32, 64);
    pole.at(0, 3) = 2.0;
    CHECK_THROWS_AS(pole.validate(), SurfaceValidationError);
}

TEST_CASE("hawking masses") {
    // round sphere in R^3
    auto s = euclidean_sphere_summary(1.0);
    auto m = hawking_masses(s, Ambient::Euclidean3);
    CHECK(std::fabs(m.hawking) <= 1e-14);
    CHECK(std::fabs(m.modified_hawking) <= 1e-14);
    CHECK(std::isnan(m.hyperbolic_modified));

    // geodesic sphere in H^3
    auto hs = geodesic_sphere_summary(3, 1.3);
    auto hm = hawking_masses(hs, Ambient::Hyperbolic3);
    CHECK(std::fabs(hm.hyperbolic_modified) <= 1e-9 * hs.area * 16.0 * M_PI);
    CHECK(std::isnan(hm.hawking));

    // direct substitution: willmore = 32 pi, area = 4 pi -> modified = -1/4
    CurvatureSummary x = euclidean_sphere_summary(1.0);
    x.sigma1_sq_integral = 32.0 * M_PI;
    auto mx = hawking_masses(x, Ambient::Euclidean3);
    CHECK(mx.modified_hawking == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("exact geodesic sphere summaries") {
    const auto s = geodesic_sphere_summary(3, 1.0);
    CHECK(s.area == doctest::Approx(4.0 * M_PI * std::pow(std::sinh(1.0), 2)).epsilon(1e-14));
    CHECK(s.sigma_integrals.size() == 3);
    CHECK(s.sigma_integrals[1] == doctest::Approx(s.sigma1_integral));
    CHECK(s.gauss_integral == doctest::Approx(4.0 * M_PI).epsilon(1e-13));
    const auto c = geodesic_sphere_summary(2, 1.0);
    CHECK(c.area == doctest::Approx(2.0 * M_PI * std::sinh(1.0)).epsilon(1e-14));
    CHECK(c.sigma_integrals[1] == doctest::Approx(c.area / std::tanh(1.0)));
}

TEST_CASE("check_hypotheses") {
    const auto sphere = euclidean_sphere_summary(1.0);
    CHECK(check_hypotheses(sphere, TheoremId::Thm5, 2.0).all_passed());

    const auto bad_p = check_hypotheses(sphere, TheoremId::Thm5, 3.5);
    CHECK(!bad_p.all_passed());
    CHECK(bad_p.failures().find("1<p< 3") != std::string::npos);

    auto nonconvex = geodesic_sphere_summary(3, 1.0);
    nonconvex.min_sigma1 = -0.1;
    const auto rep = check_hypotheses(nonconvex, TheoremId::Thm3, 2.0);
    CHECK(!rep.all_passed());
    CHECK(rep.failures().find("mean-convex") != std::string::npos);
}

TEST_CASE("obj round trip") {
    const auto mesh = make_icosphere(2, 1.0);
    std::stringstream ss;
    write_obj(mesh, ss);
    const auto back = read_obj(ss);
    REQUIRE(back.vertices.size() == mesh.vertices.size());
    REQUIRE(back.faces.size() == mesh.faces.size());
    const auto s1 = summarize_mesh(mesh);
    const auto s2 = summarize_mesh(back);
    CHECK(s1.area == doctest::Approx(s2.area).epsilon(1e-14));
    CHECK(s2.euler_char == 2);
}

TEST_CASE("obj reader tolerates extra records and slash indices") {
    std::stringstream ss;
    ss << "# comment\nvn 0 0 1\nv 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n"
       << "f 1/1 2/2 3/3\nf 1//1 3//2 4//3\nf 1 4 2\nf 2/1/1 4/2/2 3/3/3\n";
    const auto mesh = read_obj(ss);
    CHECK(mesh.vertices.size() == 4);
    CHECK(mesh.faces.size() == 4);
    CHECK_NOTHROW(mesh.validate());
}

TEST_CASE("radial grid file round trip") {
    const auto surf = make_perturbed_sphere_graph(Ambient::Hyperbolic3, 1.0, 0.1, 2, 16, 32);
    std::stringstream ss;
    write_radial_grid(surf, ss);
    const auto back = read_radial_grid(ss);
    CHECK(back.ambient == Ambient::Hyperbolic3);
    REQUIRE(back.radius.size() == surf.radius.size());
    for (size_t i = 0; i < surf.radius.size(); ++i)
        CHECK(back.radius[i] == doctest::Approx(surf.radius[i]).epsilon(1e-15));
}

TEST_CASE("mesh_from_radial_graph produces a valid closed mesh") {
    const auto surf = make_ellipsoid_graph(1.0, 1.2, 0.8, 24, 48);
    const auto mesh = mesh_from_radial_graph(surf);
    CHECK_NOTHROW(mesh.validate());
    const auto s = summarize_mesh(mesh);
    CHECK(s.euler_char == 2);
    const auto sg = summarize_radial_graph(surf);
    CHECK(s.enclosed_volume == doctest::Approx(sg.enclosed_volume).epsilon(0.01));
}

TEST_CASE("mesh star-shapedness detection") {
    CHECK(summarize_mesh(make_icosphere(2, 1.0)).star_shaped);
    // a torus around the origin is not star-shaped about it
    CHECK(!summarize_mesh(make_torus(2.0, 0.5, 32, 32)).star_shaped);
    // shifting a sphere away from the origin breaks the property
    auto off = make_icosphere(2, 1.0);
    for (auto& v : off.vertices) v += Eigen::Vector3d(2.0, 0, 0);
    CHECK(!summarize_mesh(off).star_shaped);
}
