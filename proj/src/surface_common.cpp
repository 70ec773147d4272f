#include <cmath>
#include <limits>
#include <sstream>

#include "capflow/hyperbolic.hpp"
#include "capflow/surface.hpp"

namespace capflow::surface {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double binom(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
    return v;
}
}  // namespace

std::string theorem_name(TheoremId id) {
    switch (id) {
        case TheoremId::Thm1: return "thm1";
        case TheoremId::Thm2: return "thm2";
        case TheoremId::Thm3: return "thm3";
        case TheoremId::Thm4: return "thm4";
        case TheoremId::Thm5: return "thm5";
        case TheoremId::Thm6: return "thm6";
    }
    return "?";
}

bool HypothesisReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::string HypothesisReport::failures() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& c : checks)
        if (!c.passed) {
            if (!first) os << "; ";
            os << c.name << ": " << c.detail;
            first = false;
        }
    return os.str();
}

CurvatureSummary geodesic_sphere_summary(int n, double r) {
    if (n < 2) throw std::invalid_argument("geodesic_sphere_summary: n >= 2 required");
    if (r <= 0) throw std::invalid_argument("geodesic_sphere_summary: r > 0 required");
    CurvatureSummary s;
    const double coth = 1.0 / std::tanh(r);
    s.area = hyperbolic::sphere_area(n, r);
    s.sigma_integrals.resize(n);
    for (int i = 0; i < n; ++i)
        s.sigma_integrals[i] = binom(n - 1, i) * std::pow(coth, i) * s.area;
    s.sigma1_integral = (n - 1) * coth * s.area;
    s.sigma1_sq_integral = (n - 1) * (n - 1) * coth * coth * s.area;
    const double csch2 = coth * coth - 1.0;
    s.gauss_integral = n == 2 ? 0.0 : csch2 * s.area;  // intrinsic sectional curvature integral
    s.euler_char = (n - 1) % 2 == 0 ? 2 : 0;
    s.enclosed_volume = hyperbolic::ball_volume(n, r);
    s.min_sigma1 = (n - 1) * coth;
    s.min_principal = coth;
    s.max_principal = coth;
    s.dim = n;
    s.hyperbolic = true;
    s.star_shaped = true;
    s.connected = true;
    return s;
}

CurvatureSummary euclidean_sphere_summary(double r) {
    if (r <= 0) throw std::invalid_argument("euclidean_sphere_summary: r > 0 required");
    CurvatureSummary s;
    s.area = 4.0 * M_PI * r * r;
    s.sigma1_integral = 8.0 * M_PI * r;
    s.sigma1_sq_integral = 16.0 * M_PI;
    s.sigma_integrals = {s.area, s.sigma1_integral, 4.0 * M_PI};
    s.gauss_integral = 4.0 * M_PI;
    s.euler_char = 2;
    s.enclosed_volume = 4.0 * M_PI * r * r * r / 3.0;
    s.min_sigma1 = 2.0 / r;
    s.min_principal = 1.0 / r;
    s.max_principal = 1.0 / r;
    s.dim = 3;
    s.hyperbolic = false;
    s.star_shaped = true;
    s.connected = true;
    return s;
}

HawkingMasses hawking_masses(const CurvatureSummary& s, Ambient ambient) {
    HawkingMasses m{kNaN, kNaN, kNaN};
    if (ambient == Ambient::Euclidean3) {
        const double deficit = 1.0 - s.sigma1_sq_integral / (16.0 * M_PI);
        m.hawking = std::sqrt(s.area / (16.0 * M_PI)) * deficit;
        m.modified_hawking = s.area / (16.0 * M_PI) * deficit;
    } else {
        m.hyperbolic_modified = s.area * (16.0 * M_PI + 4.0 * s.area - s.sigma1_sq_integral);
    }
    return m;
}

HypothesisReport check_hypotheses(const CurvatureSummary& s, TheoremId id, double p) {
    HypothesisReport rep;
    auto add = [&rep](const std::string& name, bool ok, const std::string& detail) {
        rep.checks.push_back({name, ok, detail});
    };
    auto num = [](double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    };

    switch (id) {
        case TheoremId::Thm1:
            add("ambient", s.hyperbolic, "requires a hyperbolic ambient space");
            add("p-range", std::fabs(p - 2.0) < 1e-12, "admissible p: p = 2, got p = " + num(p));
            add("mean-convex", s.min_sigma1 > 0.0, "min sigma_1 = " + num(s.min_sigma1));
            add("star-shaped", s.star_shaped, "surface not known to be star-shaped");
            break;
        case TheoremId::Thm2:
            add("ambient", s.hyperbolic && s.dim == 2, "requires H^2");
            add("p-range", p >= 3.0, "admissible p: p >= 3, got p = " + num(p));
            add("convex", s.min_principal > 0.0, "min principal curvature = " + num(s.min_principal));
            break;
        case TheoremId::Thm3:
            add("ambient", s.hyperbolic && s.dim == 3, "requires H^3");
            add("p-range", p > 1.0 && p <= 3.0, "admissible p: 1<p<=3, got p = " + num(p));
            add("mean-convex", s.min_sigma1 > 0.0, "min sigma_1 = " + num(s.min_sigma1));
            add("star-shaped", s.star_shaped, "surface not known to be star-shaped");
            break;
        case TheoremId::Thm4:
            add("ambient", s.hyperbolic, "requires a hyperbolic ambient space");
            add("p-range", p > 1.0, "admissible p: p > 1, got p = " + num(p));
            add("convex", s.min_principal > 0.0, "min principal curvature = " + num(s.min_principal));
            break;
        case TheoremId::Thm5:
            add("ambient", !s.hyperbolic && s.dim == 3, "requires R^3");
            add("p-range", p > 1.0 && p < 3.0, "admissible p: 1<p< 3, got p = " + num(p));
            add("connected", s.connected, "boundary must be connected");
            add("willmore", s.sigma1_sq_integral >= 16.0 * M_PI * (1.0 - 0.02),
                "Willmore energy below 16 pi beyond grid tolerance: " + num(s.sigma1_sq_integral));
            break;
        case TheoremId::Thm6:
            add("ambient", !s.hyperbolic && s.dim == 3, "requires R^3");
            add("p-range", p > 1.0 && p < 3.0, "admissible p: 1<p<3, got p = " + num(p));
            add("star-shaped", s.star_shaped, "surface not known to be star-shaped");
            break;
    }
    return rep;
}

}  // namespace capflow::surface
