#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "capflow/anisotropic.hpp"
#include "capflow/surface.hpp"

namespace capflow::bounds {

// Surface data that cannot come from any real surface (Holder/Willmore-type
// consistency violated).
class DataConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BoundReport {
    std::string theorem;
    std::string case_label;
    double p = 0;
    std::vector<std::pair<std::string, double>> inputs;
    double value = 0;
    double quadrature_error = 0;
    surface::HypothesisReport hypotheses;  // data-level checks done here
};

struct TpBound {
    double value = 0;
    double quadrature_error = 0;
    std::string case_label;
};

// (int_0^inf T_p(t)^{-1/(p-1)} dt)^{1-p}.  A provably diverging inner
// integral collapses the bound to zero (degenerate); a quadrature failure
// yields +inf (vacuous but valid).
TpBound cap_upper_from_Tp(const std::function<double(double)>& Tp, double p);

// Capacity bound from W_2 and the boundary area; p = 2 only.  n = 2 has a
// closed form; n >= 3 runs the nested-integral evolution in one pass.
BoundReport thm1_bound(int n, double W2, double boundary_area);

// H^2, p >= 3, convex boundary; Tp0 = integral of sigma_1^{p-1}.
BoundReport thm2_bound(double area, double Tp0, double p);

// H^3, 1 < p <= 3, mean convex star-shaped boundary.
BoundReport thm3_bound(double area, double sigma1_sq, double p);

// H^n, p > 1, convex boundary; closed-form expanding-area bound.
BoundReport thm4_bound(const std::vector<double>& sigma_integrals, int n, double p);

// theta(s, p) = int_0^{s^{(3-p)/(2(p-1))}} (1 + r^{2(p-1)/(3-p)})^{-1/2} dr.
double theta_integral(double s, double p);

// R^3, 1 < p < 3, connected boundary; case split on the Willmore energy.
BoundReport thm5_bound(double area, double willmore, double p, double eq_tol = 1e-3);

// R^3 anisotropic, 1 < p < 3, F-mean convex star-shaped boundary.
BoundReport thm6_bound(const anisotropic::AnisotropicSummary& summary,
                       const anisotropic::WulffShape& wulff, double p, double eq_tol = 1e-3);

// Earlier published comparison bound at p = 2 (weaker than thm6's).
double old_bound(const anisotropic::AnisotropicSummary& summary,
                 const anisotropic::WulffShape& wulff);

}  // namespace capflow::bounds
