#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "capflow/surface.hpp"

namespace capflow::surface {

namespace {

// Padded copy of a scalar sphere field with two ghost rows across each pole
// (r(-theta, phi) = r(theta, phi + pi)) and two wrap columns on each side.
// Every stencil read afterwards is branch-free.
class PaddedGrid {
public:
    // dest must hold (nt + 4) * (np + 4) doubles
    void build(const double* values, int nt, int np, double* dest) {
        nt_ = nt;
        np_ = np;
        stride_ = np + 4;
        data_ = dest;
        (void)nt_;
        for (int pi = 0; pi < nt + 4; ++pi) {
            const int i = pi - 2;
            int si = i, shift = 0;
            if (i < 0) {
                si = -i;
                shift = np / 2;
            } else if (i > nt - 1) {
                si = 2 * (nt - 1) - i;
                shift = np / 2;
            }
            const double* srow = values + static_cast<size_t>(si) * np;
            double* drow = data_ + static_cast<size_t>(pi) * stride_ + 2;
            if (shift == 0) {
                for (int j = 0; j < np; ++j) drow[j] = srow[j];
            } else {
                for (int j = 0; j < np; ++j) drow[j] = srow[(j + shift) % np];
            }
            drow[-1] = drow[np - 1];
            drow[-2] = drow[np - 2];
            drow[np] = drow[0];
            drow[np + 1] = drow[1];
        }
    }

    // value at grid node (i, j) with i in [-2, nt+1], j in [-2, np+1]
    const double* row(int i) const { return data_ + static_cast<size_t>(i + 2) * stride_ + 2; }

private:
    double* data_ = nullptr;
    int nt_ = 0, np_ = 0, stride_ = 0;
};

struct NodeDerivs {
    double r, rt, rp, rtt, rtp, rpp;
};

inline double lorentz_dot(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3];
}

// Vector Lorentz-orthogonal to a, b, c in R^{3,1}.
Eigen::Vector4d lorentz_normal(const Eigen::Vector4d& a, const Eigen::Vector4d& b,
                               const Eigen::Vector4d& c) {
    auto minor3 = [&](int k) {
        int cols[3], m = 0;
        for (int q = 0; q < 4; ++q)
            if (q != k) cols[m++] = q;
        const double d =
            a[cols[0]] * (b[cols[1]] * c[cols[2]] - b[cols[2]] * c[cols[1]]) -
            a[cols[1]] * (b[cols[0]] * c[cols[2]] - b[cols[2]] * c[cols[0]]) +
            a[cols[2]] * (b[cols[0]] * c[cols[1]] - b[cols[1]] * c[cols[0]]);
        return d;
    };
    const Eigen::Vector4d cov(minor3(0), -minor3(1), minor3(2), -minor3(3));
    return {cov[0], cov[1], cov[2], -cov[3]};  // raise the index
}

}  // namespace

void RadialGraphSurface::validate() const {
    if (n_theta < 8 || n_phi < 8)
        throw SurfaceValidationError("radial graph: grid too coarse for pole regularity (need >= 8x8)");
    if (n_phi % 2 != 0)
        throw SurfaceValidationError("radial graph: n_phi must be even");
    if (radius.size() != static_cast<size_t>(n_theta) * n_phi)
        throw SurfaceValidationError("radial graph: radius array size mismatch");
    double scale = 0;
    for (double v : radius) {
        if (!std::isfinite(v)) throw SurfaceValidationError("radial graph: non-finite radius");
        if (v <= 0.0) throw SurfaceValidationError("radial graph: not star-shaped (radius <= 0)");
        scale = std::max(scale, std::fabs(v));
    }
    for (int row : {0, n_theta - 1}) {
        const double r0 = at(row, 0);
        for (int j = 1; j < n_phi; ++j)
            if (std::fabs(at(row, j) - r0) > 1e-9 * scale)
                throw SurfaceValidationError("radial graph: radius not constant along pole row " +
                                             std::to_string(row));
    }
}

RadialGeometry compute_radial_geometry(const RadialGraphSurface& surf, bool need_frames) {
    RadialGeometry geo;
    std::vector<double> scratch;
    compute_radial_geometry(surf, need_frames, geo, scratch);
    return geo;
}

void compute_radial_geometry(const RadialGraphSurface& surf, bool need_frames, RadialGeometry& geo,
                             std::vector<double>& rtheta) {
    surf.validate();
    const int nt = surf.n_theta, np = surf.n_phi;
    const size_t n = static_cast<size_t>(nt) * np;
    const double dt = M_PI / (nt - 1);
    const double dp = 2.0 * M_PI / np;
    const bool euclid = surf.ambient == Ambient::Euclidean3;

    geo.n_theta = nt;
    geo.n_phi = np;
    geo.d_theta = dt;
    geo.d_phi = dp;
    geo.sigma1.assign(n, 0.0);
    geo.sigma2.assign(n, 0.0);
    geo.kappa_min.assign(n, 0.0);
    geo.kappa_max.assign(n, 0.0);
    geo.area_element.assign(n, 0.0);
    geo.radial_factor.assign(n, 1.0);
    geo.solid_angle_integrand.assign(n, 0.0);
    if (need_frames && euclid) {
        geo.normal.assign(n, Eigen::Vector3d::Zero());
        geo.frame_e1.assign(n, Eigen::Vector3d::Zero());
        geo.frame_e2.assign(n, Eigen::Vector3d::Zero());
        geo.second_form_frame.assign(n, Eigen::Matrix2d::Zero());
    }

    // Scratch layout: padded radius field, then the column-padded theta
    // derivative needed by the mixed stencil.
    const int stride = np + 4;
    const size_t pad_sz = static_cast<size_t>(nt + 4) * stride;
    rtheta.resize(pad_sz + static_cast<size_t>(nt) * stride);
    PaddedGrid pg;
    pg.build(surf.radius.data(), nt, np, rtheta.data());

    double* rt_pad = rtheta.data() + pad_sz;
    const double ct1 = 1.0 / (12.0 * dt);
    for (int i = 0; i < nt; ++i) {
        const double* rm2 = pg.row(i - 2);
        const double* rm1 = pg.row(i - 1);
        const double* rp1 = pg.row(i + 1);
        const double* rp2 = pg.row(i + 2);
        double* out = rt_pad + static_cast<size_t>(i) * stride + 2;
        for (int j = 0; j < np; ++j)
            out[j] = (-rp2[j] + 8.0 * rp1[j] - 8.0 * rm1[j] + rm2[j]) * ct1;
        out[-1] = out[np - 1];
        out[-2] = out[np - 2];
        out[np] = out[0];
        out[np + 1] = out[1];
    }

    std::vector<double> sin_p(np), cos_p(np);
    for (int j = 0; j < np; ++j) {
        sin_p[j] = std::sin(surf.phi(j));
        cos_p[j] = std::cos(surf.phi(j));
    }

    double min_spacing = std::numeric_limits<double>::infinity();

    const double cp1 = 1.0 / (12.0 * dp);
    const double ct2 = 1.0 / (12.0 * dt * dt);
    const double cp2 = 1.0 / (12.0 * dp * dp);
    for (int i = 1; i < nt - 1; ++i) {
        const double th = surf.theta(i);
        const double st = std::sin(th), ct = std::cos(th);
        const double* rm2 = pg.row(i - 2);
        const double* rm1 = pg.row(i - 1);
        const double* r0 = pg.row(i);
        const double* rp1 = pg.row(i + 1);
        const double* rp2 = pg.row(i + 2);
        const double* rtr = rt_pad + static_cast<size_t>(i) * stride + 2;
        for (int j = 0; j < np; ++j) {
            const size_t k = static_cast<size_t>(i) * np + j;
            NodeDerivs d;
            d.r = r0[j];
            d.rt = (-rp2[j] + 8.0 * rp1[j] - 8.0 * rm1[j] + rm2[j]) * ct1;
            d.rtt = (-rp2[j] + 16.0 * rp1[j] - 30.0 * r0[j] + 16.0 * rm1[j] - rm2[j]) * ct2;
            d.rp = (-r0[j + 2] + 8.0 * r0[j + 1] - 8.0 * r0[j - 1] + r0[j - 2]) * cp1;
            d.rpp = (-r0[j + 2] + 16.0 * r0[j + 1] - 30.0 * r0[j] + 16.0 * r0[j - 1] - r0[j - 2]) * cp2;
            d.rtp = (-rtr[j + 2] + 8.0 * rtr[j + 1] - 8.0 * rtr[j - 1] + rtr[j - 2]) * cp1;

            const double sp = sin_p[j], cp = cos_p[j];
            const Eigen::Vector3d m(st * cp, st * sp, ct);
            const Eigen::Vector3d mt(ct * cp, ct * sp, -st);
            const Eigen::Vector3d mp(-st * sp, st * cp, 0.0);
            const Eigen::Vector3d mtt = -m;
            const Eigen::Vector3d mtp(-ct * sp, ct * cp, 0.0);
            const Eigen::Vector3d mpp(-st * cp, -st * sp, 0.0);

            double g11, g12, g22, h11, h12, h22, area, rad_fac;
            Eigen::Vector3d nu3 = Eigen::Vector3d::Zero();

            if (euclid) {
                const Eigen::Vector3d Xt = d.rt * m + d.r * mt;
                const Eigen::Vector3d Xp = d.rp * m + d.r * mp;
                const Eigen::Vector3d Xtt = d.rtt * m + 2.0 * d.rt * mt + d.r * mtt;
                const Eigen::Vector3d Xtp = d.rtp * m + d.rt * mp + d.rp * mt + d.r * mtp;
                const Eigen::Vector3d Xpp = d.rpp * m + 2.0 * d.rp * mp + d.r * mpp;
                g11 = Xt.dot(Xt);
                g12 = Xt.dot(Xp);
                g22 = Xp.dot(Xp);
                const Eigen::Vector3d N = Xt.cross(Xp);
                area = N.norm();
                if (!(area > 0.0))
                    throw SurfaceValidationError("radial graph: degenerate area element");
                nu3 = N / area;
                rad_fac = nu3.dot(m);
                h11 = -nu3.dot(Xtt);
                h12 = -nu3.dot(Xtp);
                h22 = -nu3.dot(Xpp);
                geo.solid_angle_integrand[k] = st * d.r * d.r * d.r / 3.0;
                if (need_frames) {
                    geo.normal[k] = nu3;
                    const Eigen::Vector3d aux =
                        std::fabs(nu3.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
                    const Eigen::Vector3d e1 = aux.cross(nu3).normalized();
                    const Eigen::Vector3d e2 = nu3.cross(e1);
                    geo.frame_e1[k] = e1;
                    geo.frame_e2[k] = e2;
                    const double det = g11 * g22 - g12 * g12;
                    auto coords = [&](const Eigen::Vector3d& e) {
                        const double b1 = e.dot(Xt), b2 = e.dot(Xp);
                        return Eigen::Vector2d((g22 * b1 - g12 * b2) / det,
                                               (g11 * b2 - g12 * b1) / det);
                    };
                    const Eigen::Vector2d c1 = coords(e1), c2 = coords(e2);
                    auto h_of = [&](const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
                        return u[0] * v[0] * h11 + (u[0] * v[1] + u[1] * v[0]) * h12 + u[1] * v[1] * h22;
                    };
                    Eigen::Matrix2d hf;
                    hf(0, 0) = h_of(c1, c1);
                    hf(0, 1) = hf(1, 0) = h_of(c1, c2);
                    hf(1, 1) = h_of(c2, c2);
                    geo.second_form_frame[k] = hf;
                }
            } else {
                const double s = std::sinh(d.r), c = std::cosh(d.r);
                const Eigen::Vector4d X(s * m.x(), s * m.y(), s * m.z(), c);
                auto emb = [&](const Eigen::Vector3d& sv, double tv) {
                    return Eigen::Vector4d(sv.x(), sv.y(), sv.z(), tv);
                };
                const Eigen::Vector4d Xt = emb(c * d.rt * m + s * mt, s * d.rt);
                const Eigen::Vector4d Xp = emb(c * d.rp * m + s * mp, s * d.rp);
                const Eigen::Vector4d Xtt =
                    emb((s * d.rt * d.rt + c * d.rtt) * m + 2.0 * c * d.rt * mt + s * mtt,
                        c * d.rt * d.rt + s * d.rtt);
                const Eigen::Vector4d Xtp =
                    emb((s * d.rt * d.rp + c * d.rtp) * m + c * d.rt * mp + c * d.rp * mt + s * mtp,
                        c * d.rt * d.rp + s * d.rtp);
                const Eigen::Vector4d Xpp =
                    emb((s * d.rp * d.rp + c * d.rpp) * m + 2.0 * c * d.rp * mp + s * mpp,
                        c * d.rp * d.rp + s * d.rpp);
                g11 = lorentz_dot(Xt, Xt);
                g12 = lorentz_dot(Xt, Xp);
                g22 = lorentz_dot(Xp, Xp);
                Eigen::Vector4d w = lorentz_normal(X, Xt, Xp);
                const double q = lorentz_dot(w, w);
                if (!(q > 0.0))
                    throw SurfaceValidationError("radial graph: degenerate normal (H3)");
                w /= std::sqrt(q);
                const Eigen::Vector4d radial = emb(c * m, s);
                rad_fac = lorentz_dot(w, radial);
                if (rad_fac < 0.0) {
                    w = -w;
                    rad_fac = -rad_fac;
                }
                h11 = -lorentz_dot(w, Xtt);
                h12 = -lorentz_dot(w, Xtp);
                h22 = -lorentz_dot(w, Xpp);
                const double detg = g11 * g22 - g12 * g12;
                if (!(detg > 0.0))
                    throw SurfaceValidationError("radial graph: degenerate metric (H3)");
                area = std::sqrt(detg);
                geo.solid_angle_integrand[k] = st * 0.5 * (s * c - d.r);
            }

            const double detg = g11 * g22 - g12 * g12;
            const double s1 = (g22 * h11 - 2.0 * g12 * h12 + g11 * h22) / detg;
            const double s2 = (h11 * h22 - h12 * h12) / detg;
            const double disc = std::max(0.0, s1 * s1 - 4.0 * s2);
            const double root = std::sqrt(disc);

            if (!(rad_fac > 0.0))
                throw SurfaceValidationError("radial graph: normal not outward (not a graph?)");

            geo.sigma1[k] = s1;
            geo.sigma2[k] = s2;
            geo.kappa_min[k] = 0.5 * (s1 - root);
            geo.kappa_max[k] = 0.5 * (s1 + root);
            geo.area_element[k] = area;
            geo.radial_factor[k] = rad_fac;
            min_spacing = std::min(min_spacing, std::sqrt(g11) * dt);
        }
    }
    geo.min_spacing = min_spacing;

    // Pole rows: adjacent-ring averages for the pointwise fields; zero weight
    // in every integral.
    for (int pole : {0, nt - 1}) {
        const int ring = pole == 0 ? 1 : nt - 2;
        double s1 = 0, s2 = 0, kmin = 0, kmax = 0, rf = 0;
        for (int j = 0; j < np; ++j) {
            const size_t k = static_cast<size_t>(ring) * np + j;
            s1 += geo.sigma1[k];
            s2 += geo.sigma2[k];
            kmin += geo.kappa_min[k];
            kmax += geo.kappa_max[k];
            rf += geo.radial_factor[k];
        }
        for (int j = 0; j < np; ++j) {
            const size_t k = static_cast<size_t>(pole) * np + j;
            geo.sigma1[k] = s1 / np;
            geo.sigma2[k] = s2 / np;
            geo.kappa_min[k] = kmin / np;
            geo.kappa_max[k] = kmax / np;
            geo.radial_factor[k] = rf / np;
            geo.area_element[k] = 0.0;
        }
    }
}

CurvatureSummary summarize_radial_graph(const RadialGraphSurface& surf) {
    const RadialGeometry geo = compute_radial_geometry(surf, false);
    const bool euclid = surf.ambient == Ambient::Euclidean3;

    CurvatureSummary s;
    s.area = geo.integrate([](size_t) { return 1.0; });
    s.sigma1_integral = geo.integrate([&](size_t k) { return geo.sigma1[k]; });
    s.sigma1_sq_integral = geo.integrate([&](size_t k) { return geo.sigma1[k] * geo.sigma1[k]; });
    const double sigma2_integral = geo.integrate([&](size_t k) { return geo.sigma2[k]; });
    s.sigma_integrals = {s.area, s.sigma1_integral, sigma2_integral};
    s.gauss_integral = euclid ? sigma2_integral : sigma2_integral - s.area;
    s.euler_char = 2;

    double vol = 0;
    for (int i = 1; i < geo.n_theta - 1; ++i)
        for (int j = 0; j < geo.n_phi; ++j)
            vol += geo.solid_angle_integrand[static_cast<size_t>(i) * geo.n_phi + j];
    s.enclosed_volume = vol * geo.d_theta * geo.d_phi;

    double min_s1 = std::numeric_limits<double>::infinity();
    double min_k = min_s1, max_k = -min_s1;
    for (int i = 1; i < geo.n_theta - 1; ++i)
        for (int j = 0; j < geo.n_phi; ++j) {
            const size_t k = static_cast<size_t>(i) * geo.n_phi + j;
            min_s1 = std::min(min_s1, geo.sigma1[k]);
            min_k = std::min(min_k, geo.kappa_min[k]);
            max_k = std::max(max_k, geo.kappa_max[k]);
        }
    s.min_sigma1 = min_s1;
    s.min_principal = min_k;
    s.max_principal = max_k;
    s.dim = 3;
    s.hyperbolic = !euclid;
    s.star_shaped = true;
    s.connected = true;
    return s;
}

RadialGraphSurface make_sphere_graph(Ambient ambient, double r, int n_theta, int n_phi) {
    if (r <= 0.0) throw std::invalid_argument("make_sphere_graph: radius must be positive");
    RadialGraphSurface s;
    s.ambient = ambient;
    s.n_theta = n_theta;
    s.n_phi = n_phi;
    s.radius.assign(static_cast<size_t>(n_theta) * n_phi, r);
    return s;
}

RadialGraphSurface make_ellipsoid_graph(double a, double b, double c, int n_theta, int n_phi) {
    if (a <= 0 || b <= 0 || c <= 0)
        throw std::invalid_argument("make_ellipsoid_graph: semi-axes must be positive");
    RadialGraphSurface s;
    s.ambient = Ambient::Euclidean3;
    s.n_theta = n_theta;
    s.n_phi = n_phi;
    s.radius.resize(static_cast<size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        const double th = s.theta(i);
        for (int j = 0; j < n_phi; ++j) {
            const double ph = s.phi(j);
            const double mx = std::sin(th) * std::cos(ph);
            const double my = std::sin(th) * std::sin(ph);
            const double mz = std::cos(th);
            s.at(i, j) = 1.0 / std::sqrt(mx * mx / (a * a) + my * my / (b * b) + mz * mz / (c * c));
        }
    }
    // exact pole consistency
    for (int row : {0, n_theta - 1})
        for (int j = 0; j < n_phi; ++j) s.at(row, j) = s.at(row, 0);
    return s;
}

RadialGraphSurface make_perturbed_sphere_graph(Ambient ambient, double r, double amplitude,
                                               int mode, int n_theta, int n_phi) {
    if (r <= 0.0) throw std::invalid_argument("make_perturbed_sphere_graph: radius must be positive");
    if (mode < 1) throw std::invalid_argument("make_perturbed_sphere_graph: mode must be >= 1");
    RadialGraphSurface s;
    s.ambient = ambient;
    s.n_theta = n_theta;
    s.n_phi = n_phi;
    s.radius.resize(static_cast<size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        const double th = s.theta(i);
        const double bump_lat = std::pow(std::sin(th), mode);
        for (int j = 0; j < n_phi; ++j) {
            // restriction of a solid harmonic: smooth on the sphere, zero at the poles
            s.at(i, j) = r * (1.0 + amplitude * bump_lat * std::cos(mode * s.phi(j)));
        }
    }
    return s;
}

RadialGraphSurface read_radial_grid(std::istream& in) {
    std::string ambient_word;
    int nt = 0, np = 0;
    if (!(in >> ambient_word >> nt >> np))
        throw SurfaceValidationError("radial grid file: bad header (want 'ambient n_theta n_phi')");
    RadialGraphSurface s;
    if (ambient_word == "euclidean3" || ambient_word == "r3")
        s.ambient = Ambient::Euclidean3;
    else if (ambient_word == "hyperbolic3" || ambient_word == "h3")
        s.ambient = Ambient::Hyperbolic3;
    else
        throw SurfaceValidationError("radial grid file: unknown ambient '" + ambient_word + "'");
    s.n_theta = nt;
    s.n_phi = np;
    if (nt < 2 || np < 2 || static_cast<long long>(nt) * np > 100'000'000)
        throw SurfaceValidationError("radial grid file: unreasonable grid size");
    s.radius.resize(static_cast<size_t>(nt) * np);
    for (double& v : s.radius)
        if (!(in >> v)) throw SurfaceValidationError("radial grid file: truncated radius data");
    s.validate();
    return s;
}

RadialGraphSurface read_radial_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open radial grid file: " + path);
    return read_radial_grid(in);
}

void write_radial_grid(const RadialGraphSurface& surf, std::ostream& out) {
    out << (surf.ambient == Ambient::Euclidean3 ? "euclidean3" : "hyperbolic3") << ' '
        << surf.n_theta << ' ' << surf.n_phi << '\n';
    char buf[32];
    for (int i = 0; i < surf.n_theta; ++i) {
        for (int j = 0; j < surf.n_phi; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", surf.at(i, j));
            out << buf << (j + 1 == surf.n_phi ? '\n' : ' ');
        }
    }
}

}  // namespace capflow::surface
