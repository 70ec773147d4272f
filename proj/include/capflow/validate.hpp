#pragma once

#include <string>
#include <vector>

namespace capflow::validate {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Options {
    int n_theta = 128;
    int n_phi = 256;
    double tol_scale = 1.0;  // widened on coarse grids
    std::string only;        // substring filter on criterion names; empty = all
};

Options coarse_options();

// Runs the acceptance criteria and returns one result per criterion.
std::vector<CriterionResult> run_validation(const Options& opts = {});

// Fixed-format text report; no wall-clock content, byte-stable across runs.
std::string render_report(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace capflow::validate
