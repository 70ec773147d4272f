#include "capflow/oracle.hpp"

#include <cmath>

#include "capflow/hyperbolic.hpp"
#include "capflow/numerics.hpp"

namespace capflow::oracle {

namespace {

void validate(const RadialCapacityQuery& q) {
    if (q.dim < 2) throw std::invalid_argument("radial capacity: dimension must be >= 2");
    if (!(q.radius > 0)) throw std::invalid_argument("radial capacity: radius must be positive");
    if (!(q.p > 1)) throw std::invalid_argument("radial capacity: p must exceed 1");
    if (!q.hyperbolic && q.p >= q.dim)
        throw CapacityDivergent(
            "radial capacity: in R^n the integral diverges for p >= n (no positive capacity)");
}

double area_at(const RadialCapacityQuery& q, double t) {
    if (q.hyperbolic) return hyperbolic::sphere_area(q.dim, t);
    return hyperbolic::unit_sphere_area(q.dim) * std::pow(t, q.dim - 1);
}

}  // namespace

double radial_capacity(const RadialCapacityQuery& q) {
    validate(q);
    const double beta = 1.0 / (q.p - 1.0);
    numerics::QuadratureResult integral;
    if (q.hyperbolic) {
        integral = numerics::integrate_to_infinity(
            [&](double t) { return std::pow(area_at(q, t), -beta); }, q.radius, 1e-12);
    } else {
        // power-law tail: t = r u^{-k} maps [r, inf) to (0, 1] with the
        // exponent k chosen to keep the transformed integrand bounded
        const double gamma = (q.dim - 1.0) * beta;  // > 1 by the p < n check
        const double k = std::max(1.0, 2.0 / (gamma - 1.0));
        integral = numerics::integrate(
            [&](double u) {
                const double t = q.radius * std::pow(u, -k);
                const double a = area_at(q, t);
                if (!std::isfinite(a) || !(a > 0)) return 0.0;
                const double val = std::pow(a, -beta);
                if (val == 0.0) return 0.0;
                return val * q.radius * k * std::pow(u, -k - 1.0);
            },
            0.0, 1.0, 1e-12);
    }
    return std::pow(integral.value, 1.0 - q.p);
}

double wulff_capacity(const anisotropic::WulffShape& wulff, double r0, double p) {
    if (!(r0 > 0)) throw std::invalid_argument("wulff_capacity: r0 must be positive");
    if (!(p > 1 && p < 3)) throw std::invalid_argument("wulff_capacity: requires 1 < p < 3");
    return std::pow((3.0 - p) / (p - 1.0), p - 1.0) * wulff.anisotropic_area * std::pow(r0, 3.0 - p);
}

double radial_energy_check(const RadialCapacityQuery& q, long grid) {
    validate(q);
    if (grid < 100) throw std::invalid_argument("radial_energy_check: grid too small");
    const double beta = 1.0 / (q.p - 1.0);
    const double n1 = q.dim - 1.0;

    // Substitутion picked so the transformed integrand vanishes at v = 0:
    // hyperbolic tails decay like e^{-n1 beta t}; Euclidean ones like t^{-n1 beta}.
    std::function<double(double)> rho, jac;  // rho(v) on (0,1], |d rho / d v|
    if (q.hyperbolic) {
        const double bsub = 0.5 * n1 * beta;
        rho = [r = q.radius, bsub](double v) { return r - std::log(v) / bsub; };
        jac = [bsub](double v) { return 1.0 / (bsub * v); };
    } else {
        const double gamma = n1 * beta;  // > 1 by the p < n check
        const double k = std::max(1.0, 2.0 / (gamma - 1.0));
        rho = [r = q.radius, k](double v) { return r * std::pow(v, -k); };
        jac = [r = q.radius, k](double v) { return r * k * std::pow(v, -k - 1.0); };
    }

    const double dv = 1.0 / grid;
    auto midpoint = [&](auto&& f) {
        double acc = 0;
        for (long i = 0; i < grid; ++i) {
            const double v = (i + 0.5) * dv;
            acc += f(v);
        }
        return acc * dv;
    };

    // normalization: u'(t) = -c A(t)^{-beta} with int_r^inf |u'| = 1
    const double i1 = midpoint([&](double v) {
        const double a = area_at(q, rho(v));
        if (!std::isfinite(a)) return 0.0;
        return std::pow(a, -beta) * jac(v);
    });
    const double c = 1.0 / i1;

    // p-energy of the profile: int |u'|^p A dt
    return midpoint([&](double v) {
        const double a = area_at(q, rho(v));
        if (!std::isfinite(a)) return 0.0;
        const double du = c * std::pow(a, -beta);
        if (!(du > 0.0)) return 0.0;
        return std::pow(du, q.p) * a * jac(v);
    });
}

}  // namespace capflow::oracle
