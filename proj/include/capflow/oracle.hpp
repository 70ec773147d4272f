#pragma once

#include <stdexcept>

#include "capflow/anisotropic.hpp"

namespace capflow::oracle {

class CapacityDivergent : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RadialCapacityQuery {
    int dim = 3;              // ambient dimension n
    bool hyperbolic = true;   // H^n when true, R^n otherwise
    double radius = 1.0;
    double p = 2.0;
};

// Reference p-capacity of the ball of the given radius:
// (int_r^inf A(t)^{-1/(p-1)} dt)^{1-p} with A the geodesic-sphere area.
// Throws CapacityDivergent for R^n with p >= n.
double radial_capacity(const RadialCapacityQuery& q);

// Capacity of the scaled Wulff ball r0 * W, 1 < p < 3.
double wulff_capacity(const anisotropic::WulffShape& wulff, double r0, double p);

// Independent check: builds the radial equilibrium profile u with u(r) = 1,
// u(inf) = 0 explicitly and evaluates its p-energy with a fixed-grid midpoint
// rule.  Shares no code path with radial_capacity's adaptive quadrature.
double radial_energy_check(const RadialCapacityQuery& q, long grid = 200'000);

}  // namespace capflow::oracle
