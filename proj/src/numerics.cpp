#include "capflow/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace capflow::numerics {

namespace {

// Kronrod-15 abscissae (positive half) and weights, with the embedded
// Gauss-7 weights on the shared nodes.  Values as in QUADPACK's dqk15.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double integral = 0;       // K15 value
    double error = 0;          // scaled error estimate
    double resabs = 0;         // K15 of |f|
};

PanelResult gauss_kronrod_15(const Fn& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    const double fc = f(center);
    fv[14] = fc;
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    double resabs = kWgk[7] * std::fabs(fc);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv[i] = f1;
        fv[7 + i] = f2;
        k15 += kWgk[i] * (f1 + f2);
        resabs += kWgk[i] * (std::fabs(f1) + std::fabs(f2));
        if (i % 2 == 1) g7 += kWg[i / 2] * (f1 + f2);
    }

    const double mean = 0.5 * k15;
    double resasc = kWgk[7] * std::fabs(fc - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] * (std::fabs(fv[i] - mean) + std::fabs(fv[7 + i] - mean));

    PanelResult r;
    r.integral = k15 * half;
    r.resabs = resabs * std::fabs(half);
    resasc *= std::fabs(half);

    double err = std::fabs((k15 - g7) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double round = 50.0 * std::numeric_limits<double>::epsilon() * r.resabs;
    r.error = std::max(err, round);
    return r;
}

struct Interval {
    double a, b;
    double integral;
    double error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace

QuadratureResult integrate(const Fn& f, double a, double b, double tol, long budget) {
    if (!(a < b)) throw std::invalid_argument("integrate: requires a < b");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("integrate: endpoints must be finite");

    long evals = 0;
    auto panel = [&](double lo, double hi) {
        evals += 15;
        return gauss_kronrod_15(f, lo, hi);
    };

    std::priority_queue<Interval> active;
    const PanelResult first = panel(a, b);
    double total = first.integral;
    double total_err = first.error;
    double finalized_value = 0.0;   // intervals too narrow to split further
    double finalized_error = 0.0;
    active.push({a, b, first.integral, first.error});

    const double eps = std::numeric_limits<double>::epsilon();
    auto converged = [&] {
        return total_err + finalized_error <= std::max(tol, tol * std::fabs(total + finalized_value));
    };

    while (!active.empty() && !converged()) {
        if (evals + 30 > budget) {
            QuadratureResult best{total + finalized_value, total_err + finalized_error, evals};
            throw BudgetExhausted(best, "integrate: evaluation budget exhausted");
        }
        const Interval worst = active.top();
        active.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const double width = worst.b - worst.a;
        const double scale = std::max({std::fabs(worst.a), std::fabs(worst.b), 1.0});
        if (width <= 100.0 * eps * scale || mid <= worst.a || mid >= worst.b) {
            // Cannot be refined further; keep its estimate.
            finalized_value += worst.integral;
            finalized_error += worst.error;
            total -= worst.integral;
            total_err -= worst.error;
            continue;
        }
        const PanelResult left = panel(worst.a, mid);
        const PanelResult right = panel(mid, worst.b);
        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;
        active.push({worst.a, mid, left.integral, left.error});
        active.push({mid, worst.b, right.integral, right.error});
    }

    QuadratureResult result{total + finalized_value, total_err + finalized_error, evals};
    if (!converged())
        throw BudgetExhausted(result, "integrate: tolerance unreachable");
    return result;
}

QuadratureResult integrate_to_infinity(const Fn& f, double a, double tol, long budget) {
    if (!std::isfinite(a)) throw std::invalid_argument("integrate_to_infinity: a must be finite");

    // Tail probes: the integrand must decay.  A non-decaying tail makes the
    // integral diverge, which we report rather than returning garbage.
    const double probe_near = std::fabs(f(a + 10.0));
    const double probe_far = std::fabs(f(a + 40.0));
    double scale = probe_near;
    for (double s : {0.5, 1.0, 2.0, 5.0}) scale = std::max(scale, std::fabs(f(a + s)));
    const bool far_significant = probe_far > std::max(1e-300, 1e-14 * scale);
    if (far_significant && probe_far >= 0.999999 * probe_near)
        throw DivergenceDetected("integrate_to_infinity: integrand does not decay (tail probes)");

    // v = e^{-beta (t-a)} maps [a, inf) to (0, 1].  For f ~ e^{-ct} the
    // transformed integrand behaves like v^{c/beta - 1}, so picking beta at
    // half the probed decay rate makes it vanish at v = 0 instead of blowing
    // up there when c < 1.
    double beta = 1.0;
    if (probe_near > 0.0 && probe_far > 0.0) {
        const double c_est = std::log(probe_near / probe_far) / 30.0;
        beta = std::clamp(0.5 * c_est, 1e-3, 1.0);
    }
    auto g = [&f, a, beta](double v) { return f(a - std::log(v) / beta) / (beta * v); };
    QuadratureResult r = integrate(g, 0.0, 1.0, tol, budget - 6);
    r.evaluations += 6;
    return r;
}

double solve_monotone(const Fn& g, double target, double lo, double hi, double tol) {
    if (!(lo <= hi)) throw BracketError("solve_monotone: requires lo <= hi");
    double flo = g(lo) - target;
    double fhi = g(hi) - target;
    if (std::fabs(flo) <= tol) return lo;
    if (std::fabs(fhi) <= tol) return hi;
    if (flo > 0.0 || fhi < 0.0)
        throw BracketError("solve_monotone: target outside [g(lo), g(hi)]");

    // Bisection with a secant probe; robust for any monotone g.
    double best = lo, best_err = std::fabs(flo);
    for (int it = 0; it < 200; ++it) {
        double mid;
        if (it % 2 == 1 && fhi != flo) {
            mid = lo - flo * (hi - lo) / (fhi - flo);  // secant
            if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        } else {
            mid = 0.5 * (lo + hi);
        }
        const double fm = g(mid) - target;
        if (std::fabs(fm) < best_err) {
            best = mid;
            best_err = std::fabs(fm);
        }
        if (std::fabs(fm) <= tol) return mid;
        if (fm < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        if (hi - lo <= std::numeric_limits<double>::epsilon() * std::max({std::fabs(lo), std::fabs(hi), 1.0}))
            break;
    }
    return best;
}

std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite_difference_gradient: h must be positive");
    std::vector<double> grad(x.size());
    std::vector<double> xp = x;
    for (size_t i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h;
        const double fp = f(xp);
        xp[i] = x[i] - h;
        const double fm = f(xp);
        xp[i] = x[i];
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

}  // namespace capflow::numerics
