#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace capflow::numerics {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute
    long evaluations = 0;
};

// Evaluation budget ran out before the tolerance was met.  Carries the best
// estimate accumulated so far so callers can decide what to do with it.
class BudgetExhausted : public std::runtime_error {
public:
    QuadratureResult best;
    explicit BudgetExhausted(const QuadratureResult& r, const std::string& what)
        : std::runtime_error(what), best(r) {}
};

// Tail probes of an improper integrand show no decay.
class DivergenceDetected : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Root target lies outside [g(lo), g(hi)].
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Fn = std::function<double(double)>;

inline constexpr double kDefaultTol = 1e-10;
inline constexpr long kDefaultBudget = 1'000'000;

// Adaptive Gauss-Kronrod (G7/K15) bisection on a finite interval.
// Converged when the accumulated error estimate drops below
// max(tol, tol*|value|).
QuadratureResult integrate(const Fn& f, double a, double b,
                           double tol = kDefaultTol, long budget = kDefaultBudget);

// Integral of f over [a, inf) for integrands with an exponentially decaying
// tail.  Substitutes v = e^{-(t-a)} and integrates over (0, 1].
QuadratureResult integrate_to_infinity(const Fn& f, double a,
                                       double tol = kDefaultTol,
                                       long budget = kDefaultBudget);

// Solves g(r) = target for a strictly increasing g on [lo, hi].
double solve_monotone(const Fn& g, double target, double lo, double hi,
                      double tol = kDefaultTol);

// Componentwise central differences, error O(h^2).
std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x, double h);

}  // namespace capflow::numerics
