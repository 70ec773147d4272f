#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "capflow/anisotropic.hpp"
#include "capflow/surface.hpp"

namespace capflow::flows {

enum class FlowKind { IMCF_H3, NormalFlow_Hn, IAMCF_R3 };

std::string flow_kind_name(FlowKind k);

struct FlowSample {
    double t = 0;
    double area = 0;      // |M_t|, or |Sigma_t|_F for the anisotropic flow
    double mass = 0;      // ambient-appropriate Hawking-type mass (NaN if n/a)
    double min_curv = 0;  // principal curvatures (IMCF) or H_F (IAMCF)
    double max_curv = 0;
};

struct DtPolicy {
    double dt_user = 0;            // requested cap on the step
    double cfl = 0.2;              // dt <= cfl * spacing^2 * curvature scale
    double sample_interval = 0.05;
    double dt_floor_factor = 1e-6; // halving below dt_user * this aborts
};

struct FlowTrace {
    FlowKind kind = FlowKind::IMCF_H3;
    DtPolicy dt_policy;
    std::vector<FlowSample> samples;
    long steps = 0;
};

class FlowBreakdown : public std::runtime_error {
public:
    FlowTrace partial;
    FlowBreakdown(const std::string& what, FlowTrace trace)
        : std::runtime_error(what), partial(std::move(trace)) {}
};

// Inverse mean curvature flow of a mean-convex star-shaped graph in H^3:
// radial speed (1/sigma_1) / <nu, radial>.
FlowTrace run_imcf_h3(const surface::RadialGraphSurface& initial, double t_end, double dt);

// Closed-form area of the unit-speed normal flow at time t from the sigma_i
// integrals of the initial surface; no PDE is solved.
double normal_flow_area(const surface::CurvatureSummary& summary, int n, double t);

// Trace of the unit-speed normal flow built from the closed form.
FlowTrace run_normal_flow(const surface::CurvatureSummary& summary, int n, double t_end);

// Inverse anisotropic mean curvature flow of a star-shaped F-mean convex
// graph in R^3: radial speed (F(nu)/H_F) / <nu, radial>.
FlowTrace run_iamcf_r3(const surface::RadialGraphSurface& initial,
                       const anisotropic::MinkowskiNorm& norm,
                       const anisotropic::WulffShape& wulff, double t_end, double dt);

// CSV with header "t,area,mass,min_curv,max_curv".
void write_csv(const FlowTrace& trace, std::ostream& out);

}  // namespace capflow::flows
