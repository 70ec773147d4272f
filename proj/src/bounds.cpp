#include "capflow/bounds.hpp"

#include <cmath>

#include "capflow/hyperbolic.hpp"
#include "capflow/numerics.hpp"

namespace capflow::bounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

surface::HypothesisCheck check(const std::string& name, bool ok, const std::string& detail) {
    return {name, ok, detail};
}

// Embedded Cash-Karp 4(5) step for a 2-component system.
struct Rk2State {
    double y0, y1;
};

template <typename Rhs>
bool rk_step(const Rhs& rhs, double t, Rk2State y, double h, Rk2State& out, double& err) {
    static const double a[6] = {0, 0.2, 0.3, 0.6, 1.0, 0.875};
    static const double b2[] = {0.2};
    static const double b3[] = {3.0 / 40, 9.0 / 40};
    static const double b4[] = {0.3, -0.9, 1.2};
    static const double b5[] = {-11.0 / 54, 2.5, -70.0 / 27, 35.0 / 27};
    static const double b6[] = {1631.0 / 55296, 175.0 / 512, 575.0 / 13824, 44275.0 / 110592,
                                253.0 / 4096};
    static const double c5[6] = {37.0 / 378, 0, 250.0 / 621, 125.0 / 594, 0, 512.0 / 1771};
    static const double c4[6] = {2825.0 / 27648, 0,           18575.0 / 48384,
                                 13525.0 / 55296, 277.0 / 14336, 0.25};

    Rk2State k[6];
    k[0] = rhs(t, y);
    auto at = [&](const double* b, int m) {
        Rk2State s = y;
        for (int i = 0; i < m; ++i) {
            s.y0 += h * b[i] * k[i].y0;
            s.y1 += h * b[i] * k[i].y1;
        }
        return s;
    };
    k[1] = rhs(t + a[1] * h, at(b2, 1));
    k[2] = rhs(t + a[2] * h, at(b3, 2));
    k[3] = rhs(t + a[3] * h, at(b4, 3));
    k[4] = rhs(t + a[4] * h, at(b5, 4));
    k[5] = rhs(t + a[5] * h, at(b6, 5));

    Rk2State y5 = y, y4 = y;
    for (int i = 0; i < 6; ++i) {
        y5.y0 += h * c5[i] * k[i].y0;
        y5.y1 += h * c5[i] * k[i].y1;
        y4.y0 += h * c4[i] * k[i].y0;
        y4.y1 += h * c4[i] * k[i].y1;
    }
    const double scale0 = 1e-14 + 1e-12 * std::fabs(y5.y0);
    const double scale1 = 1e-14 + 1e-12 * std::fabs(y5.y1);
    err = std::max(std::fabs(y5.y0 - y4.y0) / scale0, std::fabs(y5.y1 - y4.y1) / scale1);
    out = y5;
    return std::isfinite(err);
}

}  // namespace

TpBound cap_upper_from_Tp(const std::function<double(double)>& Tp, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("cap_upper_from_Tp: p > 1 required");
    const double beta = 1.0 / (p - 1.0);
    auto f = [&](double t) {
        const double tp = Tp(t);
        if (tp < 0.0) throw std::invalid_argument("cap_upper_from_Tp: T_p must be positive");
        return std::pow(tp, -beta);
    };
    numerics::QuadratureResult r;
    try {
        r = numerics::integrate_to_infinity(f, 0.0, 1e-11);
    } catch (const numerics::DivergenceDetected&) {
        return {0.0, 0.0, "degenerate: T_p^{-1/(p-1)} has a non-decaying tail, bound collapses to 0"};
    } catch (const numerics::BudgetExhausted&) {
        return {kInf, kInf, "vacuous: quadrature did not converge, +inf reported"};
    }
    TpBound out;
    out.value = std::pow(r.value, 1.0 - p);
    out.quadrature_error = (p - 1.0) * std::pow(r.value, -p) * r.error_estimate;
    out.case_label = "evaluated";
    return out;
}

BoundReport thm1_bound(int n, double W2, double boundary_area) {
    if (n < 2) throw std::invalid_argument("thm1_bound: n >= 2 required");
    if (!(boundary_area > 0)) throw std::invalid_argument("thm1_bound: boundary area must be positive");

    BoundReport rep;
    rep.theorem = "thm1";
    rep.p = 2.0;
    rep.inputs = {{"n", static_cast<double>(n)}, {"boundary_area", boundary_area}};

    if (n == 2) {
        // W2 is forced to pi by Gauss-Bonnet and drops out of the closed form.
        rep.inputs.emplace_back("W2", M_PI);
        rep.value = 2.0 * M_PI / std::asinh(2.0 * M_PI / boundary_area);
        rep.quadrature_error = 0.0;
        rep.case_label = "closed-form (n=2)";
        return rep;
    }

    rep.inputs.emplace_back("W2", W2);
    const double lambda = (n - 2.0) / (n - 1.0);
    const double mu = (n - 2.0) / (static_cast<double>(n) * (n - 1.0));
    auto iso = [n, boundary_area](double t) {
        return hyperbolic::isoperimetric_I(n, std::exp(t) * boundary_area);
    };
    auto G = [&](double t, double J, double iso_t) {
        return std::exp(lambda * t) * (W2 + mu * J) + iso_t / n;
    };
    if (!(G(0.0, 0.0, iso(0.0)) > 0.0))
        throw std::invalid_argument("thm1_bound: nonpositive integrand (invalid W2)");

    auto rhs = [&](double t, Rk2State y) {
        const double it = iso(t);
        return Rk2State{std::exp(-lambda * t) * it, 1.0 / G(t, y.y0, it)};
    };

    Rk2State y{0.0, 0.0};
    double t = 0.0, h = 1e-3;
    double g_prev = G(0, 0, iso(0));
    double t_prev = 0.0;
    double tail = kInf;
    while (t < 400.0) {
        Rk2State next;
        double err;
        if (!rk_step(rhs, t, y, h, next, err))
            throw std::runtime_error("thm1_bound: integrator failure");
        if (err <= 1.0) {
            t += h;
            y = next;
            h = std::min(h * std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2)), 2.0);
            const double g_now = G(t, y.y0, iso(t));
            if (t > t_prev + 0.5) {
                const double rate =
                    std::max(0.25, std::log(g_now / g_prev) / (t - t_prev));
                tail = 1.0 / (g_now * rate);
                g_prev = g_now;
                t_prev = t;
            }
            if (t > 8.0 && tail <= 1e-13 * y.y1) break;
        } else {
            h *= std::max(0.1, 0.9 * std::pow(err, -0.25));
        }
    }
    if (!(y.y1 > 0.0) || !std::isfinite(y.y1)) {
        rep.value = kInf;
        rep.quadrature_error = kInf;
        rep.case_label = "vacuous: outer integral diverged numerically";
        return rep;
    }
    const double q = y.y1 + tail;  // add the estimated remainder
    rep.value = n * (n - 1.0) / q;
    rep.quadrature_error = rep.value * (tail / q + 1e-10);
    rep.case_label = "quadrature (n>=3)";
    return rep;
}

BoundReport thm2_bound(double area, double Tp0, double p) {
    if (!(area > 0) || !(Tp0 > 0))
        throw std::invalid_argument("thm2_bound: area and Tp0 must be positive");

    BoundReport rep;
    rep.theorem = "thm2";
    rep.p = p;
    rep.inputs = {{"area", area}, {"Tp0", Tp0}};
    rep.hypotheses.checks.push_back(
        check("p-range", p >= 3.0, "admissible p: p >= 3, got p = " + std::to_string(p)));

    double C = std::pow(std::pow(area, p - 2.0) * Tp0, 2.0 / (p - 1.0)) - area * area;
    if (C < -1e-12 * area * area)
        throw DataConsistencyError(
            "thm2_bound: (|M|^{p-2} Tp0)^{2/(p-1)} < |M|^2 violates Holder; data not from a real curve");
    if (C < 0) C = 0;
    rep.inputs.emplace_back("C", C);
    rep.case_label = C == 0.0 ? "degenerate C=0" : "generic";

    const double e1 = (p - 2.0) / (p - 1.0);
    const double apow = std::pow(area, e1);
    auto f = [&](double t) {
        const double et = std::exp(t);
        const double inner = et * et * area * area + C;
        return std::exp(e1 * t) * apow / std::sqrt(inner);
    };
    const auto r = numerics::integrate_to_infinity(f, 0.0, 1e-12);
    rep.value = std::pow(r.value, 1.0 - p);
    rep.quadrature_error = (p - 1.0) * std::pow(r.value, -p) * r.error_estimate;
    return rep;
}

namespace {

// int_0^inf (a e^{-t} + b e^t + c)^{-1/2} e^{-t/2} dt in closed form (p = 2).
std::pair<double, std::string> thm3_closed_integral(double a, double b, double c) {
    const double scale = b + c;
    if (a <= 1e-12 * scale)
        return {2.0 / c * (std::sqrt(b + c) - std::sqrt(b)), "a=0-limit"};
    const double disc = 4.0 * a * b - c * c;
    const double sa = std::sqrt(a);
    if (disc > 1e-12 * c * c) {
        const double d = std::sqrt(disc);
        return {(std::asinh((2.0 * a + c) / d) - std::asinh(c / d)) / sa, "arsinh-branch"};
    }
    if (disc < -1e-12 * c * c) {
        const double d = std::sqrt(-disc);
        return {(std::acosh((2.0 * a + c) / d) - std::acosh(c / d)) / sa, "arcosh-branch"};
    }
    return {std::log((2.0 * a + c) / c) / sa, "log-branch"};
}

}  // namespace

BoundReport thm3_bound(double area, double sigma1_sq, double p) {
    if (!(area > 0)) throw std::invalid_argument("thm3_bound: area must be positive");

    BoundReport rep;
    rep.theorem = "thm3";
    rep.p = p;
    const double a_raw = sigma1_sq - 4.0 * area - 16.0 * M_PI;
    const double b = 4.0 * area;
    const double c = 16.0 * M_PI;
    rep.inputs = {{"area", area}, {"sigma1_sq_integral", sigma1_sq}, {"a", a_raw}, {"b", b}, {"c", c}};
    rep.hypotheses.checks.push_back(check("p-range", p > 1.0 && p <= 3.0,
                                          "admissible p: 1<p<=3, got p = " + std::to_string(p)));
    // a >= 0 for smooth closed surfaces; allow discretization noise on the
    // same footing as the thm5 Willmore floor
    if (a_raw < -0.02 * (b + c))
        throw DataConsistencyError(
            "thm3_bound: integral of sigma_1^2 below 4|M| + 16 pi beyond grid tolerance; "
            "no smooth closed surface does that");
    const double a = std::max(a_raw, 0.0);

    const double expo = (3.0 - p) / (2.0 * (p - 1.0));
    auto f = [&](double t) {
        return std::exp(-expo * t) / std::sqrt(a * std::exp(-t) + b * std::exp(t) + c);
    };
    const auto quad = numerics::integrate_to_infinity(f, 0.0, 1e-12);
    const double area_factor = std::pow(area, (3.0 - p) / 2.0);
    const double quad_value = std::pow(quad.value, 1.0 - p) * area_factor;

    if (std::fabs(p - 2.0) < 1e-12) {
        const auto [integral, branch] = thm3_closed_integral(a, b, c);
        rep.value = area_factor / integral;
        rep.case_label = branch;
        rep.quadrature_error = 0.0;
        rep.inputs.emplace_back("quadrature_value", quad_value);
    } else {
        rep.value = quad_value;
        rep.case_label = "quadrature";
        rep.quadrature_error =
            (p - 1.0) * std::pow(quad.value, -p) * quad.error_estimate * area_factor;
    }
    return rep;
}

BoundReport thm4_bound(const std::vector<double>& sigma_integrals, int n, double p) {
    if (n < 2) throw std::invalid_argument("thm4_bound: n >= 2 required");
    if (static_cast<int>(sigma_integrals.size()) != n)
        throw std::invalid_argument("thm4_bound: need the sigma_i integrals for i = 0..n-1");
    if (!(sigma_integrals[0] > 0)) throw std::invalid_argument("thm4_bound: |M| must be positive");

    BoundReport rep;
    rep.theorem = "thm4";
    rep.p = p;
    rep.inputs = {{"n", static_cast<double>(n)}};
    for (int i = 0; i < n; ++i)
        rep.inputs.emplace_back("sigma" + std::to_string(i) + "_integral", sigma_integrals[i]);
    rep.hypotheses.checks.push_back(
        check("p-range", p > 1.0, "admissible p: p > 1, got p = " + std::to_string(p)));

    auto Tp = [&](double t) {
        const double ch = std::cosh(t), sh = std::sinh(t);
        double acc = 0;
        for (int i = 0; i < n; ++i)
            acc += std::pow(ch, n - 1 - i) * std::pow(sh, i) * sigma_integrals[i];
        return acc;
    };
    const TpBound generic = cap_upper_from_Tp(Tp, p);

    // geodesic-sphere data makes this bound sharp; label it (sufficient, not
    // a rigidity claim)
    bool ball_data = true;
    {
        const double coth = sigma_integrals[1] / ((n - 1.0) * sigma_integrals[0]);
        double binom = 1.0;
        for (int i = 1; i < n && ball_data; ++i) {
            binom *= static_cast<double>(n - i) / i;
            const double expect = binom * std::pow(coth, i) * sigma_integrals[0];
            if (std::fabs(sigma_integrals[i] - expect) > 1e-9 * std::fabs(expect)) ball_data = false;
        }
        if (coth <= 1.0) ball_data = false;
    }

    if (n == 2 && std::fabs(p - 2.0) < 1e-12) {
        const double M = sigma_integrals[0], K = sigma_integrals[1];
        double closed;
        std::string branch;
        const double disc = K * K - M * M;
        if (std::fabs(disc) <= 1e-12 * M * M) {
            closed = M;  // common limit of both branches
            branch = "boundary K=M";
        } else if (K >= M) {
            const double d = std::sqrt(disc);
            closed = d / std::log((K + d) / M);
            branch = "log-branch";
        } else {
            const double d = std::sqrt(-disc);
            closed = 0.5 * d / std::atan(std::sqrt((M - K) / (M + K)));
            branch = "arctan-branch";
        }
        rep.value = closed;
        rep.case_label = branch;
        rep.quadrature_error = 0.0;
        rep.inputs.emplace_back("quadrature_value", generic.value);
    } else {
        rep.value = generic.value;
        rep.case_label = generic.case_label;
        rep.quadrature_error = generic.quadrature_error;
    }
    if (ball_data) rep.case_label += "; sharp (sufficient: geodesic-sphere data)";
    return rep;
}

double theta_integral(double s, double p) {
    if (!(s > 0)) throw std::invalid_argument("theta_integral: s > 0 required");
    if (!(p > 1 && p < 3)) throw std::invalid_argument("theta_integral: 1 < p < 3 required");
    const double upper = std::pow(s, (3.0 - p) / (2.0 * (p - 1.0)));
    const double expo = 2.0 * (p - 1.0) / (3.0 - p);
    return numerics::integrate(
               [expo](double r) { return 1.0 / std::sqrt(1.0 + std::pow(r, expo)); }, 0.0, upper,
               1e-12)
        .value;
}

BoundReport thm5_bound(double area, double willmore, double p, double eq_tol) {
    if (!(area > 0)) throw std::invalid_argument("thm5_bound: area must be positive");

    BoundReport rep;
    rep.theorem = "thm5";
    rep.p = p;
    rep.inputs = {{"area", area}, {"willmore", willmore}};
    rep.hypotheses.checks.push_back(
        check("p-range", p > 1.0 && p < 3.0, "admissible p: 1<p< 3, got p = " + std::to_string(p)));
    if (!(p > 1.0 && p < 3.0))
        throw std::invalid_argument("thm5_bound: admissible range is 1<p< 3, got p = " +
                                    std::to_string(p));

    const double w0 = 16.0 * M_PI;
    if (willmore < w0 * (1.0 - 0.02))
        throw DataConsistencyError(
            "thm5_bound: Willmore energy below 16 pi beyond grid tolerance; mesh data is broken");

    const double factor = std::pow((3.0 - p) / (p - 1.0), p - 1.0);
    const double s = willmore / w0 - 1.0;
    rep.inputs.emplace_back("s", s);
    if (s <= eq_tol) {
        const double r0 = std::sqrt(area / (4.0 * M_PI));
        rep.inputs.emplace_back("r0", r0);
        rep.value = factor * 4.0 * M_PI * std::pow(r0, 3.0 - p);
        rep.case_label = "equality/round-sphere";
        return rep;
    }
    const double theta = theta_integral(s, p);
    rep.inputs.emplace_back("theta", theta);
    rep.value = factor * std::pow(4.0 * M_PI, (p - 1.0) / 2.0) * std::pow(area, (3.0 - p) / 2.0) *
                std::pow(s, (3.0 - p) / 2.0) * std::pow(theta, 1.0 - p);
    rep.case_label = "strict";
    rep.quadrature_error = rep.value * 1e-10;
    if (std::fabs(p - 2.0) < 1e-12)
        rep.inputs.emplace_back("closed_form_p2", std::sqrt(4.0 * M_PI * area) * std::sqrt(s) /
                                                      std::asinh(std::sqrt(s)));
    return rep;
}

BoundReport thm6_bound(const anisotropic::AnisotropicSummary& summary,
                       const anisotropic::WulffShape& wulff, double p, double eq_tol) {
    BoundReport rep;
    rep.theorem = "thm6";
    rep.p = p;
    const double wf = wulff.anisotropic_area;
    rep.inputs = {{"area_F", summary.area_F},
                  {"HF_sq_integral", summary.HF_sq_integral},
                  {"wulff_area_F", wf},
                  {"s", summary.s}};
    rep.hypotheses.checks.push_back(
        check("p-range", p > 1.0 && p < 3.0, "admissible p: 1<p<3, got p = " + std::to_string(p)));
    rep.hypotheses.checks.push_back(check("F-mean-convex", summary.min_HF > 0.0,
                                          "min H_F = " + std::to_string(summary.min_HF)));
    if (!(p > 1.0 && p < 3.0))
        throw std::invalid_argument("thm6_bound: admissible range is 1<p<3, got p = " +
                                    std::to_string(p));
    if (summary.s < -0.02)
        throw DataConsistencyError(
            "thm6_bound: int H_F^2 dmu_F below 4|dW|_F beyond tolerance; data is inconsistent");

    const double factor = std::pow((3.0 - p) / (p - 1.0), p - 1.0);
    const double s = summary.s;
    if (s <= eq_tol) {
        const double r0 = std::sqrt(summary.area_F / wf);
        rep.inputs.emplace_back("r0", r0);
        rep.value = factor * wf * std::pow(r0, 3.0 - p);
        rep.case_label = "equality/wulff-shape";
        return rep;
    }
    const double theta = theta_integral(s, p);
    rep.inputs.emplace_back("theta", theta);
    rep.value = factor * std::pow(wf, (p - 1.0) / 2.0) * std::pow(summary.area_F, (3.0 - p) / 2.0) *
                std::pow(s, (3.0 - p) / 2.0) * std::pow(theta, 1.0 - p);
    rep.case_label = "strict";
    rep.quadrature_error = rep.value * 1e-10;
    if (std::fabs(p - 2.0) < 1e-12) {
        const double closed =
            std::sqrt(wf * summary.area_F) * std::sqrt(s) / std::asinh(std::sqrt(s));
        rep.inputs.emplace_back("closed_form_p2", closed);
        if (std::fabs(closed - rep.value) > 1e-8 * rep.value)
            throw std::logic_error("thm6_bound: p=2 closed form and theta quadrature disagree");
    }
    return rep;
}

double old_bound(const anisotropic::AnisotropicSummary& summary,
                 const anisotropic::WulffShape& wulff) {
    const double wf = wulff.anisotropic_area;
    return 0.5 * std::sqrt(wf * summary.area_F) *
           (1.0 + std::sqrt(summary.HF_sq_integral / (4.0 * wf)));
}

}  // namespace capflow::bounds
