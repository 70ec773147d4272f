#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "capflow/cli_support.hpp"

using namespace capflow;
using namespace capflow::cli;

TEST_CASE("parse_grid") {
    const auto g = parse_grid("128x256");
    CHECK(g.first == 128);
    CHECK(g.second == 256);
    CHECK_THROWS_AS(parse_grid("128"), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid("4x4"), std::invalid_argument);
}

TEST_CASE("parse_builtin") {
    const auto sphere = parse_builtin("sphere:r=2.5");
    CHECK(sphere.name == "sphere");
    CHECK(sphere.get("r", 1.0) == doctest::Approx(2.5));

    const auto ell = parse_builtin("ellipsoid:1,4,9");
    CHECK(ell.positional.size() == 3);
    CHECK(ell.positional[2] == doctest::Approx(9.0));

    const auto pert = parse_builtin("perturbed:r=1,amp=0.2,mode=2");
    CHECK(pert.get("amp", 0.0) == doctest::Approx(0.2));
    CHECK(pert.get("mode", 0.0) == doctest::Approx(2.0));

    const auto bare = parse_builtin("wulff");
    CHECK(bare.name == "wulff");
    CHECK(bare.params.empty());

    CHECK_THROWS_AS(parse_builtin("sphere:r=abc"), std::invalid_argument);
}

TEST_CASE("parse_norm") {
    CHECK(parse_norm("euclidean")->family() == "euclidean");
    const auto ell = parse_norm("ellipsoid:1,4,9");
    CHECK(ell->family() == "ellipsoidal");
    CHECK(ell->value(Eigen::Vector3d(1, 0, 0)) == doctest::Approx(1.0));
    CHECK(ell->value(Eigen::Vector3d(0, 0, 1)) == doctest::Approx(3.0));
    CHECK(parse_norm("lq:4,0.1")->family() == "lq");
    CHECK_THROWS_AS(parse_norm("taxicab"), std::invalid_argument);
    CHECK_THROWS_AS(parse_norm("ellipsoid:1,2"), std::invalid_argument);
}

TEST_CASE("parse_theorem") {
    CHECK(parse_theorem("thm1") == surface::TheoremId::Thm1);
    CHECK(parse_theorem("thm6") == surface::TheoremId::Thm6);
    CHECK(parse_theorem("cor1") == surface::TheoremId::Thm6);
    CHECK(!parse_theorem("thm9"));
}

TEST_CASE("bound report json is stable and schema-tagged") {
    bounds::BoundReport rep;
    rep.theorem = "thm5";
    rep.case_label = "strict";
    rep.p = 2.0;
    rep.inputs = {{"area", 1.0}, {"willmore", 2.0}};
    rep.value = 3.5;
    rep.quadrature_error = 1e-12;
    rep.hypotheses.checks.push_back({"p-range", true, "ok"});
    const std::string a = bound_report_json(rep, false);
    const std::string b = bound_report_json(rep, false);
    CHECK(a == b);
    CHECK(a.find("\"schema\": 1") != std::string::npos);
    // insertion order preserved
    CHECK(a.find("\"area\"") < a.find("\"willmore\""));
}

TEST_CASE("atomic file write") {
    const std::string path = "cli_support_test_output.txt";
    write_file_atomic(path, "payload\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "payload");
    std::remove(path.c_str());
}
