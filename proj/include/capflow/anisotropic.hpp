#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "capflow/surface.hpp"

namespace capflow::anisotropic {

class EllipticityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Smooth, even, 1-homogeneous, uniformly elliptic norm on R^3.
class MinkowskiNorm {
public:
    virtual ~MinkowskiNorm() = default;

    virtual double value(const Eigen::Vector3d& xi) const = 0;

    // DF; default is a central difference of value().
    virtual Eigen::Vector3d gradient(const Eigen::Vector3d& xi) const;

    // A_F(xi) = (spherical Hessian of F) + F(xi) * id, expressed in the
    // orthonormal tangent frame {e1, e2} at unit xi.  Equals the restriction
    // of the ambient Hessian of F to the tangent plane.  Default: second
    // differences of F along great circles.
    virtual Eigen::Matrix2d anisotropy_tensor(const Eigen::Vector3d& xi,
                                              const Eigen::Vector3d& e1,
                                              const Eigen::Vector3d& e2) const;

    // Closed-form dual norm where the family has one.
    virtual std::optional<double> dual_closed_form(const Eigen::Vector3d& x) const {
        (void)x;
        return std::nullopt;
    }

    virtual std::string family() const = 0;
    virtual std::vector<double> parameters() const { return {}; }
};

using NormPtr = std::shared_ptr<const MinkowskiNorm>;

NormPtr euclidean_norm();
NormPtr ellipsoidal_norm(const Eigen::Matrix3d& A);
NormPtr ellipsoidal_norm_diag(double a11, double a22, double a33);
// (sum_i (xi_i^2 + eps^2 |xi|^2)^{q/2})^{1/q}: smooth elliptic stand-in for l^q.
NormPtr smoothed_lq_norm(double q, double eps);
NormPtr plugin_norm(std::function<double(const Eigen::Vector3d&)> f,
                    std::function<Eigen::Vector3d(const Eigen::Vector3d&)> df,  // may be empty
                    const std::string& name);

// Spherical Hessian (A_F minus F * id) in the given frame.
Eigen::Matrix2d spherical_hessian(const MinkowskiNorm& norm, const Eigen::Vector3d& xi,
                                  const Eigen::Vector3d& e1, const Eigen::Vector3d& e2);

// Deterministic tangent frame at a unit vector.
void tangent_frame(const Eigen::Vector3d& xi, Eigen::Vector3d& e1, Eigen::Vector3d& e2);

// F0(x) = sup <xi, x> / F(xi); exact for families with a closed form,
// multi-start projected ascent over S^2 otherwise.
double dual_norm(const MinkowskiNorm& norm, const Eigen::Vector3d& x);

// min/max eigenvalue of A_F over a deterministic spherical sample.
std::pair<double, double> ellipticity_range(const MinkowskiNorm& norm, int samples = 256);

struct WulffShape {
    NormPtr norm;
    int n_theta = 0, n_phi = 0;
    std::vector<Eigen::Vector3d> samples;  // DF(xi) over the xi grid, row-major
    double anisotropic_area = 0;           // |dW|_F
    double volume = 0;                     // |W|
    double identity_residual = 0;          // | |dW|_F - 3|W| | / |dW|_F
    double dual_residual = 0;              // max |F0(sample) - 1| over a subsample
};

WulffShape wulff_shape(const NormPtr& norm, int n_theta = 128, int n_phi = 256);

struct AnisotropicSummary {
    double area_F = 0;           // |Sigma|_F
    double HF_sq_integral = 0;   // int H_F^2 dmu_F
    double min_HF = 0;
    double max_HF = 0;
    double mass_F = 0;           // modified anisotropic Hawking mass
    double s = 0;                // HF_sq_integral / (4 |dW|_F) - 1
};

AnisotropicSummary anisotropic_summary(const surface::RadialGraphSurface& surf,
                                       const MinkowskiNorm& norm, const WulffShape& wulff);
AnisotropicSummary anisotropic_summary(const surface::TriangleMesh& mesh,
                                       const MinkowskiNorm& norm, const WulffShape& wulff);

// Boundary of scale * W as a radial graph: r = scale / F0(m).
surface::RadialGraphSurface make_wulff_graph(const MinkowskiNorm& norm, double scale,
                                             int n_theta, int n_phi);

// Triangulated Wulff samples (UV-sphere topology) for OBJ export.
surface::TriangleMesh wulff_mesh(const WulffShape& wulff);

}  // namespace capflow::anisotropic
