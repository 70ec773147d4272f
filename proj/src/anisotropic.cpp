#include "capflow/anisotropic.hpp"

#include <cmath>

namespace capflow::anisotropic {

namespace {

constexpr double kEllipticityFloor = 1e-8;

std::vector<Eigen::Vector3d> fibonacci_sphere(int n) {
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(n);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
        const double z = 1.0 - (2.0 * k + 1.0) / n;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        pts.emplace_back(rho * std::cos(golden * k), rho * std::sin(golden * k), z);
    }
    return pts;
}

class EuclideanNorm final : public MinkowskiNorm {
public:
    double value(const Eigen::Vector3d& xi) const override { return xi.norm(); }
    Eigen::Vector3d gradient(const Eigen::Vector3d& xi) const override { return xi.normalized(); }
    Eigen::Matrix2d anisotropy_tensor(const Eigen::Vector3d&, const Eigen::Vector3d&,
                                      const Eigen::Vector3d&) const override {
        return Eigen::Matrix2d::Identity();
    }
    std::optional<double> dual_closed_form(const Eigen::Vector3d& x) const override {
        return x.norm();
    }
    std::string family() const override { return "euclidean"; }
};

class EllipsoidalNorm final : public MinkowskiNorm {
public:
    explicit EllipsoidalNorm(const Eigen::Matrix3d& A) : a_(0.5 * (A + A.transpose())) {
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a_);
        if (es.eigenvalues()[0] <= 0.0)
            throw EllipticityError("ellipsoidal norm: matrix must be positive definite");
        a_inv_ = a_.inverse();
    }
    double value(const Eigen::Vector3d& xi) const override {
        return std::sqrt(xi.dot(a_ * xi));
    }
    Eigen::Vector3d gradient(const Eigen::Vector3d& xi) const override {
        return a_ * xi / value(xi);
    }
    Eigen::Matrix2d anisotropy_tensor(const Eigen::Vector3d& xi, const Eigen::Vector3d& e1,
                                      const Eigen::Vector3d& e2) const override {
        // restriction of Hess F = A/F - (A xi)(A xi)^T / F^3 to the tangent plane
        const double f = value(xi);
        const Eigen::Vector3d axi = a_ * xi;
        Eigen::Matrix2d t;
        t(0, 0) = e1.dot(a_ * e1) / f - std::pow(e1.dot(axi), 2) / (f * f * f);
        t(1, 1) = e2.dot(a_ * e2) / f - std::pow(e2.dot(axi), 2) / (f * f * f);
        t(0, 1) = t(1, 0) = e1.dot(a_ * e2) / f - e1.dot(axi) * e2.dot(axi) / (f * f * f);
        return t;
    }
    std::optional<double> dual_closed_form(const Eigen::Vector3d& x) const override {
        return std::sqrt(x.dot(a_inv_ * x));
    }
    std::string family() const override { return "ellipsoidal"; }
    std::vector<double> parameters() const override {
        return {a_(0, 0), a_(1, 1), a_(2, 2)};
    }

private:
    Eigen::Matrix3d a_, a_inv_;
};

class SmoothedLqNorm final : public MinkowskiNorm {
public:
    SmoothedLqNorm(double q, double eps) : q_(q), eps2_(eps * eps) {
        if (q < 2.0) throw std::invalid_argument("smoothed_lq_norm: q >= 2 required");
        if (eps <= 0.0) throw std::invalid_argument("smoothed_lq_norm: eps > 0 required");
    }
    double value(const Eigen::Vector3d& xi) const override {
        const double n2 = xi.squaredNorm();
        double s = 0;
        for (int i = 0; i < 3; ++i) s += std::pow(xi[i] * xi[i] + eps2_ * n2, 0.5 * q_);
        return std::pow(s, 1.0 / q_);
    }
    Eigen::Vector3d gradient(const Eigen::Vector3d& xi) const override {
        const double n2 = xi.squaredNorm();
        double s = 0, usum = 0;
        double upow[3];
        for (int i = 0; i < 3; ++i) {
            const double u = xi[i] * xi[i] + eps2_ * n2;
            upow[i] = std::pow(u, 0.5 * q_ - 1.0);
            s += upow[i] * u;
            usum += upow[i];
        }
        const double spow = std::pow(s, 1.0 / q_ - 1.0);
        Eigen::Vector3d g;
        for (int i = 0; i < 3; ++i) g[i] = spow * (upow[i] * xi[i] + eps2_ * xi[i] * usum);
        return g;
    }
    std::string family() const override { return "lq"; }
    std::vector<double> parameters() const override { return {q_, std::sqrt(eps2_)}; }

private:
    double q_, eps2_;
};

class PluginNorm final : public MinkowskiNorm {
public:
    PluginNorm(std::function<double(const Eigen::Vector3d&)> f,
               std::function<Eigen::Vector3d(const Eigen::Vector3d&)> df, std::string name)
        : f_(std::move(f)), df_(std::move(df)), name_(std::move(name)) {}
    double value(const Eigen::Vector3d& xi) const override { return f_(xi); }
    Eigen::Vector3d gradient(const Eigen::Vector3d& xi) const override {
        if (df_) return df_(xi);
        return MinkowskiNorm::gradient(xi);
    }
    std::string family() const override { return name_; }

private:
    std::function<double(const Eigen::Vector3d&)> f_;
    std::function<Eigen::Vector3d(const Eigen::Vector3d&)> df_;
    std::string name_;
};

}  // namespace

Eigen::Vector3d MinkowskiNorm::gradient(const Eigen::Vector3d& xi) const {
    const double h = 1e-6 * std::max(xi.norm(), 1e-30);
    Eigen::Vector3d g;
    for (int i = 0; i < 3; ++i) {
        Eigen::Vector3d xp = xi, xm = xi;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (value(xp) - value(xm)) / (2.0 * h);
    }
    return g;
}

Eigen::Matrix2d MinkowskiNorm::anisotropy_tensor(const Eigen::Vector3d& xi,
                                                 const Eigen::Vector3d& e1,
                                                 const Eigen::Vector3d& e2) const {
    // second differences along great circles; geodesics make the covariant
    // correction vanish
    const double h = 1e-4;
    const double f0 = value(xi);
    auto second = [&](const Eigen::Vector3d& dir) {
        const Eigen::Vector3d plus = std::cos(h) * xi + std::sin(h) * dir;
        const Eigen::Vector3d minus = std::cos(h) * xi - std::sin(h) * dir;
        return (value(plus) - 2.0 * f0 + value(minus)) / (h * h);
    };
    const double a11 = second(e1) + f0;
    const double a22 = second(e2) + f0;
    const Eigen::Vector3d mix = (e1 + e2).normalized();
    const double amix = second(mix) + f0;
    Eigen::Matrix2d t;
    t(0, 0) = a11;
    t(1, 1) = a22;
    t(0, 1) = t(1, 0) = amix - 0.5 * (a11 + a22);
    return t;
}

NormPtr euclidean_norm() { return std::make_shared<EuclideanNorm>(); }

NormPtr ellipsoidal_norm(const Eigen::Matrix3d& A) { return std::make_shared<EllipsoidalNorm>(A); }

NormPtr ellipsoidal_norm_diag(double a11, double a22, double a33) {
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    A(0, 0) = a11;
    A(1, 1) = a22;
    A(2, 2) = a33;
    return ellipsoidal_norm(A);
}

NormPtr smoothed_lq_norm(double q, double eps) { return std::make_shared<SmoothedLqNorm>(q, eps); }

NormPtr plugin_norm(std::function<double(const Eigen::Vector3d&)> f,
                    std::function<Eigen::Vector3d(const Eigen::Vector3d&)> df,
                    const std::string& name) {
    return std::make_shared<PluginNorm>(std::move(f), std::move(df), name);
}

Eigen::Matrix2d spherical_hessian(const MinkowskiNorm& norm, const Eigen::Vector3d& xi,
                                  const Eigen::Vector3d& e1, const Eigen::Vector3d& e2) {
    return norm.anisotropy_tensor(xi, e1, e2) - norm.value(xi) * Eigen::Matrix2d::Identity();
}

void tangent_frame(const Eigen::Vector3d& xi, Eigen::Vector3d& e1, Eigen::Vector3d& e2) {
    const Eigen::Vector3d aux =
        std::fabs(xi.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
    e1 = aux.cross(xi).normalized();
    e2 = xi.cross(e1);
}

double dual_norm(const MinkowskiNorm& norm, const Eigen::Vector3d& x) {
    if (x.norm() == 0.0) throw std::invalid_argument("dual_norm: x must be nonzero");
    if (const auto closed = norm.dual_closed_form(x)) return *closed;

    // maximize G = <xi, x> / F(xi) over S^2: 32 deterministic starts,
    // projected gradient ascent with backtracking
    auto G = [&](const Eigen::Vector3d& xi) { return xi.dot(x) / norm.value(xi); };
    double best = 0;
    for (const auto& start : fibonacci_sphere(32)) {
        Eigen::Vector3d xi = start;
        double g = G(xi);
        double step = 0.5;
        for (int it = 0; it < 200; ++it) {
            const double f = norm.value(xi);
            const Eigen::Vector3d grad_full = x / f - xi.dot(x) * norm.gradient(xi) / (f * f);
            const Eigen::Vector3d grad = grad_full - grad_full.dot(xi) * xi;
            if (grad.norm() <= 1e-13 * x.norm()) break;
            bool improved = false;
            for (int bt = 0; bt < 30; ++bt) {
                const Eigen::Vector3d cand = (xi + step * grad).normalized();
                const double gc = G(cand);
                if (gc > g) {
                    xi = cand;
                    g = gc;
                    step *= 1.5;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
        }
        best = std::max(best, g);
    }
    return best;
}

std::pair<double, double> ellipticity_range(const MinkowskiNorm& norm, int samples) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& xi : fibonacci_sphere(samples)) {
        Eigen::Vector3d e1, e2;
        tangent_frame(xi, e1, e2);
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(norm.anisotropy_tensor(xi, e1, e2));
        lo = std::min(lo, es.eigenvalues()[0]);
        hi = std::max(hi, es.eigenvalues()[1]);
    }
    return {lo, hi};
}

WulffShape wulff_shape(const NormPtr& norm, int n_theta, int n_phi) {
    if (!norm) throw std::invalid_argument("wulff_shape: null norm");
    if (n_theta < 8 || n_phi < 8 || n_phi % 2 != 0)
        throw std::invalid_argument("wulff_shape: grid must be at least 8x8 with even n_phi");

    WulffShape w;
    w.norm = norm;
    w.n_theta = n_theta;
    w.n_phi = n_phi;
    const size_t n = static_cast<size_t>(n_theta) * n_phi;
    w.samples.resize(n);

    std::vector<Eigen::Vector3d> xi_grid(n);
    const double dt = M_PI / (n_theta - 1);
    const double dp = 2.0 * M_PI / n_phi;
    for (int i = 0; i < n_theta; ++i) {
        const double th = i * dt;
        for (int j = 0; j < n_phi; ++j) {
            const double ph = j * dp;
            const Eigen::Vector3d xi(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                                     std::cos(th));
            const size_t k = static_cast<size_t>(i) * n_phi + j;
            xi_grid[k] = xi;
            w.samples[k] = norm->gradient(xi);
            Eigen::Vector3d e1, e2;
            tangent_frame(xi, e1, e2);
            const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(
                norm->anisotropy_tensor(xi, e1, e2));
            if (!(es.eigenvalues()[0] > kEllipticityFloor))
                throw EllipticityError("wulff_shape: A_F not positive definite at a sample (min eig " +
                                       std::to_string(es.eigenvalues()[0]) + ")");
        }
    }
    // pole rows: single boundary point each
    for (int row : {0, n_theta - 1})
        for (int j = 1; j < n_phi; ++j)
            w.samples[static_cast<size_t>(row) * n_phi + j] = w.samples[static_cast<size_t>(row) * n_phi];

    // across-pole view of the vector-valued samples
    auto at = [&](int i, int j) -> const Eigen::Vector3d& {
        if (i < 0) {
            i = -i;
            j += n_phi / 2;
        } else if (i > n_theta - 1) {
            i = 2 * (n_theta - 1) - i;
            j += n_phi / 2;
        }
        j %= n_phi;
        if (j < 0) j += n_phi;
        return w.samples[static_cast<size_t>(i) * n_phi + j];
    };

    double area_f = 0, vol = 0;
    for (int i = 1; i < n_theta - 1; ++i) {
        for (int j = 0; j < n_phi; ++j) {
            const Eigen::Vector3d yt =
                (-at(i + 2, j) + 8.0 * at(i + 1, j) - 8.0 * at(i - 1, j) + at(i - 2, j)) / (12.0 * dt);
            const Eigen::Vector3d yp =
                (-at(i, j + 2) + 8.0 * at(i, j + 1) - 8.0 * at(i, j - 1) + at(i, j - 2)) / (12.0 * dp);
            const Eigen::Vector3d N = yt.cross(yp);
            const double mu = N.norm();
            if (mu == 0.0) continue;
            Eigen::Vector3d nu = N / mu;
            const size_t k = static_cast<size_t>(i) * n_phi + j;
            if (nu.dot(xi_grid[k]) < 0.0) nu = -nu;  // Gauss map preserves orientation
            area_f += norm->value(nu) * mu;
            vol += w.samples[k].dot(nu) * mu / 3.0;
        }
    }
    w.anisotropic_area = area_f * dt * dp;
    w.volume = vol * dt * dp;
    w.identity_residual =
        std::fabs(w.anisotropic_area - 3.0 * w.volume) / std::max(w.anisotropic_area, 1e-300);

    // dual-norm spot check F0(DF(xi)) = 1 on a deterministic subsample
    double worst = 0;
    const int stride_i = std::max(1, (n_theta - 2) / 8);
    const int stride_j = std::max(1, n_phi / 8);
    for (int i = 1; i < n_theta - 1; i += stride_i)
        for (int j = 0; j < n_phi; j += stride_j) {
            const size_t k = static_cast<size_t>(i) * n_phi + j;
            worst = std::max(worst, std::fabs(dual_norm(*norm, w.samples[k]) - 1.0));
        }
    w.dual_residual = worst;
    return w;
}

namespace {

AnisotropicSummary finalize_summary(double area_f, double hf_sq, double min_hf, double max_hf,
                                    const WulffShape& wulff) {
    AnisotropicSummary s;
    s.area_F = area_f;
    s.HF_sq_integral = hf_sq;
    s.min_HF = min_hf;
    s.max_HF = max_hf;
    const double denom = 4.0 * wulff.anisotropic_area;
    s.mass_F = (area_f / denom) * (1.0 - hf_sq / denom);
    s.s = hf_sq / denom - 1.0;
    return s;
}

}  // namespace

AnisotropicSummary anisotropic_summary(const surface::RadialGraphSurface& surf,
                                       const MinkowskiNorm& norm, const WulffShape& wulff) {
    if (surf.ambient != surface::Ambient::Euclidean3)
        throw std::invalid_argument("anisotropic_summary: Euclidean surfaces only");
    const surface::RadialGeometry geo = surface::compute_radial_geometry(surf, true);

    const size_t n = geo.sigma1.size();
    std::vector<double> hf(n, 0.0), fnu(n, 0.0);
    double min_hf = std::numeric_limits<double>::infinity(), max_hf = -min_hf;
    for (int i = 1; i < geo.n_theta - 1; ++i)
        for (int j = 0; j < geo.n_phi; ++j) {
            const size_t k = static_cast<size_t>(i) * geo.n_phi + j;
            const Eigen::Matrix2d af =
                norm.anisotropy_tensor(geo.normal[k], geo.frame_e1[k], geo.frame_e2[k]);
            hf[k] = af.cwiseProduct(geo.second_form_frame[k]).sum();
            fnu[k] = norm.value(geo.normal[k]);
            min_hf = std::min(min_hf, hf[k]);
            max_hf = std::max(max_hf, hf[k]);
        }
    const double area_f = geo.integrate([&](size_t k) { return fnu[k]; });
    const double hf_sq = geo.integrate([&](size_t k) { return hf[k] * hf[k] * fnu[k]; });
    return finalize_summary(area_f, hf_sq, min_hf, max_hf, wulff);
}

AnisotropicSummary anisotropic_summary(const surface::TriangleMesh& mesh,
                                       const MinkowskiNorm& norm, const WulffShape& wulff) {
    const surface::MeshVertexData d = surface::compute_mesh_vertex_data(mesh);
    double area_f = 0, hf_sq = 0;
    double min_hf = std::numeric_limits<double>::infinity(), max_hf = -min_hf;
    for (size_t i = 0; i < d.vertex_area.size(); ++i) {
        const Eigen::Matrix2d af = norm.anisotropy_tensor(d.normal[i], d.frame_e1[i], d.frame_e2[i]);
        const double hf = af.cwiseProduct(d.shape_frame[i]).sum();
        const double f = norm.value(d.normal[i]);
        area_f += f * d.vertex_area[i];
        hf_sq += hf * hf * f * d.vertex_area[i];
        min_hf = std::min(min_hf, hf);
        max_hf = std::max(max_hf, hf);
    }
    return finalize_summary(area_f, hf_sq, min_hf, max_hf, wulff);
}

surface::RadialGraphSurface make_wulff_graph(const MinkowskiNorm& norm, double scale,
                                             int n_theta, int n_phi) {
    if (scale <= 0.0) throw std::invalid_argument("make_wulff_graph: scale must be positive");
    surface::RadialGraphSurface s;
    s.ambient = surface::Ambient::Euclidean3;
    s.n_theta = n_theta;
    s.n_phi = n_phi;
    s.radius.resize(static_cast<size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        const double th = s.theta(i);
        for (int j = 0; j < n_phi; ++j) {
            const double ph = s.phi(j);
            const Eigen::Vector3d m(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                                    std::cos(th));
            s.at(i, j) = scale / dual_norm(norm, m);
        }
    }
    for (int row : {0, n_theta - 1})
        for (int j = 0; j < n_phi; ++j) s.at(row, j) = s.at(row, 0);
    return s;
}

surface::TriangleMesh wulff_mesh(const WulffShape& w) {
    surface::TriangleMesh m;
    const int nt = w.n_theta, np = w.n_phi;
    m.vertices.push_back(w.samples[0]);
    for (int i = 1; i < nt - 1; ++i)
        for (int j = 0; j < np; ++j)
            m.vertices.push_back(w.samples[static_cast<size_t>(i) * np + j]);
    m.vertices.push_back(w.samples[static_cast<size_t>(nt - 1) * np]);
    const int south = static_cast<int>(m.vertices.size()) - 1;
    auto ring = [&](int i, int j) { return 1 + (i - 1) * np + (j % np); };
    for (int j = 0; j < np; ++j) m.faces.push_back({0, ring(1, j), ring(1, j + 1)});
    for (int i = 1; i < nt - 2; ++i)
        for (int j = 0; j < np; ++j) {
            m.faces.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
            m.faces.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
        }
    for (int j = 0; j < np; ++j) m.faces.push_back({south, ring(nt - 2, j + 1), ring(nt - 2, j)});
    return m;
}

}  // namespace capflow::anisotropic
