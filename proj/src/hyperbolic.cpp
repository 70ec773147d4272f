#include "capflow/hyperbolic.hpp"

#include <cmath>
#include <stdexcept>

#include "capflow/numerics.hpp"

namespace capflow::hyperbolic {

namespace {
void require_dim(int n) {
    if (n < 2) throw std::invalid_argument("hyperbolic: dimension must be >= 2");
}
}  // namespace

double unit_sphere_area(int n) {
    require_dim(n);
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double sphere_area(int n, double r) {
    require_dim(n);
    return unit_sphere_area(n) * std::pow(std::sinh(r), n - 1);
}

double ball_volume(int n, double r) {
    require_dim(n);
    if (r <= 0.0) return 0.0;
    if (n == 2) return 2.0 * M_PI * (std::cosh(r) - 1.0);
    if (n == 3) return M_PI * (std::sinh(2.0 * r) - 2.0 * r);
    return numerics::integrate([n](double t) { return sphere_area(n, t); }, 0.0, r, 1e-12).value;
}

double isoperimetric_I(int n, double area) {
    require_dim(n);
    if (area < 0.0) throw std::invalid_argument("isoperimetric_I: area must be nonnegative");
    if (area == 0.0) return 0.0;
    if (n == 2) {
        // sqrt(4 pi^2 + s^2) - 2 pi, written to stay accurate for small s.
        const double two_pi = 2.0 * M_PI;
        return area * area / (std::hypot(two_pi, area) + two_pi);
    }
    double hi = 1.0;
    while (sphere_area(n, hi) < area) {
        hi *= 2.0;
        if (hi > 1e6) throw std::invalid_argument("isoperimetric_I: area out of range");
    }
    const double r = numerics::solve_monotone(
        [n](double t) { return sphere_area(n, t); }, area, 0.0, hi, 1e-12 * area);
    return ball_volume(n, r);
}

Quermassintegrals quermassintegrals(int n, double volume, double area,
                                    double sigma1_integral) {
    require_dim(n);
    Quermassintegrals q;
    q.W0 = volume;
    q.W1 = area / n;
    q.W2 = sigma1_integral / (static_cast<double>(n) * (n - 1)) - volume / n;
    return q;
}

}  // namespace capflow::hyperbolic
