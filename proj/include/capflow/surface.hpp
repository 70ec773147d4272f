#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace capflow::surface {

enum class Ambient { Euclidean3, Hyperbolic3 };

class MeshValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SurfaceValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TriangleMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> faces;  // outward-oriented

    // Throws MeshValidationError naming the offending edge/face when the mesh
    // is open, non-manifold, inconsistently oriented or degenerate.
    void validate() const;
};

// Star-shaped surface as a radius function over a latitude-longitude grid.
// Row i = 0 and i = n_theta-1 are the poles; the radius must be constant
// along those rows.  phi is periodic; n_phi must be even.
struct RadialGraphSurface {
    Ambient ambient = Ambient::Euclidean3;
    int n_theta = 0;
    int n_phi = 0;
    std::vector<double> radius;  // row-major [i * n_phi + j]

    double theta(int i) const { return M_PI * i / (n_theta - 1); }
    double phi(int j) const { return 2.0 * M_PI * j / n_phi; }
    double& at(int i, int j) { return radius[static_cast<size_t>(i) * n_phi + j]; }
    double at(int i, int j) const { return radius[static_cast<size_t>(i) * n_phi + j]; }

    void validate() const;  // throws SurfaceValidationError
};

// Integrated invariants of a closed surface, plus the context the bound
// evaluators need for hypothesis checks.
struct CurvatureSummary {
    double area = 0;
    double sigma1_integral = 0;
    double sigma1_sq_integral = 0;
    std::vector<double> sigma_integrals;  // i = 0..n-1, sigma_0 == 1
    double gauss_integral = 0;            // intrinsic curvature integral
    int euler_char = 0;
    double enclosed_volume = 0;
    double min_sigma1 = 0;

    int dim = 3;             // ambient dimension n
    bool hyperbolic = false; // H^n when true, R^n otherwise
    double min_principal = 0;
    double max_principal = 0;
    bool star_shaped = false;
    bool connected = true;
};

// NaN marks the fields that do not apply in the given ambient.
struct HawkingMasses {
    double hawking = 0;
    double modified_hawking = 0;
    double hyperbolic_modified = 0;
};

enum class TheoremId { Thm1, Thm2, Thm3, Thm4, Thm5, Thm6 };

std::string theorem_name(TheoremId id);

struct HypothesisCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;
    bool all_passed() const;
    std::string failures() const;  // "" when everything passed
};

CurvatureSummary summarize_mesh(const TriangleMesh& mesh);
CurvatureSummary summarize_radial_graph(const RadialGraphSurface& surf);
HawkingMasses hawking_masses(const CurvatureSummary& summary, Ambient ambient);
HypothesisReport check_hypotheses(const CurvatureSummary& summary, TheoremId id, double p);

// Per-node geometry of a radial graph, shared by the summaries, the
// anisotropic module and the flow stepping.  Pole rows carry zero area
// weight; their curvature entries hold the adjacent-ring average.
struct RadialGeometry {
    int n_theta = 0, n_phi = 0;
    double d_theta = 0, d_phi = 0;
    std::vector<double> sigma1;        // per node
    std::vector<double> sigma2;        // det of the shape operator
    std::vector<double> kappa_min;     // smaller principal curvature
    std::vector<double> kappa_max;
    std::vector<double> area_element;  // sqrt(det g); 0 on pole rows
    std::vector<double> radial_factor; // <nu, unit radial direction>
    std::vector<double> solid_angle_integrand;  // volume accumulator, sin(theta)*V'(r)
    std::vector<Eigen::Vector3d> normal;    // Euclidean ambient only
    std::vector<Eigen::Vector3d> frame_e1;  // Euclidean ambient only
    std::vector<Eigen::Vector3d> frame_e2;  // Euclidean ambient only
    std::vector<Eigen::Matrix2d> second_form_frame;  // 2FF in {e1,e2}; Euclidean only
    double min_spacing = 0;  // min over nodes of sqrt(g_theta_theta) * d_theta

    double quad_weight(int i) const {
        return (i == 0 || i == n_theta - 1) ? 0.0 : d_theta * d_phi;
    }
    // Sum of f * area_element over the grid with trapezoid weights.
    template <typename F>
    double integrate(F&& f) const {
        double acc = 0;
        for (int i = 1; i < n_theta - 1; ++i)
            for (int j = 0; j < n_phi; ++j) {
                const size_t k = static_cast<size_t>(i) * n_phi + j;
                acc += f(k) * area_element[k];
            }
        return acc * d_theta * d_phi;
    }
};

RadialGeometry compute_radial_geometry(const RadialGraphSurface& surf, bool need_frames);

// Workspace-reusing variant for callers that evaluate geometry in a loop.
void compute_radial_geometry(const RadialGraphSurface& surf, bool need_frames, RadialGeometry& out,
                             std::vector<double>& rtheta_scratch);

// Per-vertex discrete geometry of a closed mesh: mixed Voronoi areas, the
// cotangent mean curvature (kappa_1 + kappa_2 convention, positive for the
// outward-oriented sphere), angle defects and a least-squares shape operator
// whose trace is corrected to the cotangent value.
struct MeshVertexData {
    std::vector<double> vertex_area;
    std::vector<double> sigma1;
    std::vector<double> defect;
    std::vector<Eigen::Vector3d> normal;
    std::vector<Eigen::Vector3d> frame_e1, frame_e2;
    std::vector<Eigen::Matrix2d> shape_frame;
    double total_area = 0;
    int edge_count = 0;
    bool connected = true;
};

MeshVertexData compute_mesh_vertex_data(const TriangleMesh& mesh);

// Builders.
TriangleMesh make_icosphere(int subdivisions, double radius);
TriangleMesh make_torus(double major, double minor, int nu, int nv);
TriangleMesh mesh_from_radial_graph(const RadialGraphSurface& surf);  // Euclidean only
RadialGraphSurface make_sphere_graph(Ambient ambient, double r, int n_theta, int n_phi);
RadialGraphSurface make_ellipsoid_graph(double a, double b, double c, int n_theta, int n_phi);
RadialGraphSurface make_perturbed_sphere_graph(Ambient ambient, double r, double amplitude,
                                               int mode, int n_theta, int n_phi);

// Exact summaries for model surfaces.
CurvatureSummary geodesic_sphere_summary(int n, double r);   // H^n
CurvatureSummary euclidean_sphere_summary(double r);         // R^3

// Wavefront OBJ, v/f records only.
TriangleMesh read_obj(std::istream& in);
TriangleMesh read_obj_file(const std::string& path);
void write_obj(const TriangleMesh& mesh, std::ostream& out);

// Plain-text radial grid file: "ambient n_theta n_phi" then radii row-major.
RadialGraphSurface read_radial_grid(std::istream& in);
RadialGraphSurface read_radial_grid_file(const std::string& path);
void write_radial_grid(const RadialGraphSurface& surf, std::ostream& out);

}  // namespace capflow::surface
