#include "capflow/flows.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <ostream>

namespace capflow::flows {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * M_PI / len * (inverse ? 1 : -1);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (size_t j = 0; j < len / 2; ++j) {
                const auto u = a[i + j];
                const auto v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Removes azimuthal modes a latitude ring cannot resolve: near the poles the
// physical phi spacing shrinks like sin(theta), so explicit stepping sized for
// the theta spacing is only stable once wavenumbers beyond the theta Nyquist
// are projected out.  Standard treatment for lat-long grids.
class PolarFilter {
public:
    explicit PolarFilter(const surface::RadialGraphSurface& surf)
        : nt_(surf.n_theta), np_(surf.n_phi), buf_(np_) {
        keep_.resize(nt_);
        for (int i = 0; i < nt_; ++i) {
            const double st = std::sin(surf.theta(i));
            keep_[i] = std::max(4, static_cast<int>((nt_ - 1) * st));
        }
        if (!is_pow2(np_)) {
            cos_table_.resize(np_);
            sin_table_.resize(np_);
            for (int k = 0; k < np_; ++k) {
                cos_table_[k] = std::cos(2.0 * M_PI * k / np_);
                sin_table_[k] = std::sin(2.0 * M_PI * k / np_);
            }
            scratch_.resize(np_);
        }
    }

    void apply(surface::RadialGraphSurface& surf) {
        const bool pow2 = is_pow2(np_);
        for (int i = 1; i < nt_ - 1; ++i) {
            double* row = &surf.radius[static_cast<size_t>(i) * np_];
            if (pow2) {
                if (keep_[i] >= np_ / 2) continue;
                for (int j = 0; j < np_; ++j) buf_[j] = row[j];
                fft_radix2(buf_, false);
                for (int k = 0; k < np_; ++k)
                    if (std::min(k, np_ - k) > keep_[i]) buf_[k] = 0.0;
                fft_radix2(buf_, true);
                for (int j = 0; j < np_; ++j) row[j] = buf_[j].real();
            } else {
                // only rings whose azimuthal spacing undercuts the theta
                // spacing threaten the explicit step; the rest stay stable
                // unfiltered at the configured CFL number
                if (keep_[i] >= 3 * np_ / 8) continue;
                dft_filter(row, keep_[i]);
            }
        }
    }

private:
    void dft_filter(double* row, int keep) {
        // direct projection onto the low modes with table lookups and an
        // incrementally wrapped index; used when n_phi is not a power of two
        std::fill(scratch_.begin(), scratch_.end(), 0.0);
        for (int m = 0; m <= keep; ++m) {
            double cre = 0, cim = 0;
            int idx = 0;
            for (int j = 0; j < np_; ++j) {
                cre += row[j] * cos_table_[idx];
                cim -= row[j] * sin_table_[idx];
                idx += m;
                if (idx >= np_) idx -= np_;
            }
            const double w = ((m == 0 || 2 * m == np_) ? 1.0 : 2.0) / np_;
            const double wc = w * cre, ws = w * cim;
            idx = 0;
            for (int j = 0; j < np_; ++j) {
                scratch_[j] += wc * cos_table_[idx] - ws * sin_table_[idx];
                idx += m;
                if (idx >= np_) idx -= np_;
            }
        }
        for (int j = 0; j < np_; ++j) row[j] = scratch_[j];
    }

    int nt_, np_;
    std::vector<std::complex<double>> buf_;
    std::vector<int> keep_;
    std::vector<double> cos_table_, sin_table_, scratch_;
};

struct StepData {
    std::vector<double> speed;  // radial speed per node
    double area = 0;
    double mass = 0;
    double min_curv = 0, max_curv = 0;
    double dt_cfl = 0;
    bool valid = true;
    std::string why;
};

// Per-step geometry evaluation for both parabolic flows.  Implementations
// keep their geometry buffers between calls.
class FlowProblem {
public:
    virtual ~FlowProblem() = default;
    virtual void evaluate(const surface::RadialGraphSurface& surf, StepData& d) = 0;
};

class ImcfH3 final : public FlowProblem {
public:
    explicit ImcfH3(double cfl) : cfl_(cfl) {}
    void evaluate(const surface::RadialGraphSurface& surf, StepData& d) override {
        surface::compute_radial_geometry(surf, false, geo_, scratch_);
        const auto& geo = geo_;
        d.valid = true;
        d.why.clear();
        const size_t n = geo.sigma1.size();
        d.speed.assign(n, 0.0);
        double min_s1 = std::numeric_limits<double>::infinity();
        double min_k = min_s1, max_k = -min_s1;
        for (int i = 1; i < geo.n_theta - 1; ++i)
            for (int j = 0; j < geo.n_phi; ++j) {
                const size_t k = static_cast<size_t>(i) * geo.n_phi + j;
                min_s1 = std::min(min_s1, geo.sigma1[k]);
                min_k = std::min(min_k, geo.kappa_min[k]);
                max_k = std::max(max_k, geo.kappa_max[k]);
            }
        if (!(min_s1 > 0.0) || !std::isfinite(min_s1)) {
            d.valid = false;
            d.why = "mean curvature reached zero";
            return;
        }
        for (int i = 1; i < geo.n_theta - 1; ++i)
            for (int j = 0; j < geo.n_phi; ++j) {
                const size_t k = static_cast<size_t>(i) * geo.n_phi + j;
                d.speed[k] = 1.0 / (geo.sigma1[k] * geo.radial_factor[k]);
            }
        fill_pole_speeds(d.speed, geo);
        d.area = geo.integrate([](size_t) { return 1.0; });
        const double s1sq = geo.integrate([&](size_t k) { return geo.sigma1[k] * geo.sigma1[k]; });
        d.mass = d.area * (16.0 * M_PI + 4.0 * d.area - s1sq);
        d.min_curv = min_k;
        d.max_curv = max_k;
        d.dt_cfl = cfl_ * geo.min_spacing * geo.min_spacing * min_s1;
    }

private:
    static void fill_pole_speeds(std::vector<double>& speed, const surface::RadialGeometry& geo) {
        for (int pole : {0, geo.n_theta - 1}) {
            const int ring = pole == 0 ? 1 : geo.n_theta - 2;
            double avg = 0;
            for (int j = 0; j < geo.n_phi; ++j) avg += speed[static_cast<size_t>(ring) * geo.n_phi + j];
            avg /= geo.n_phi;
            for (int j = 0; j < geo.n_phi; ++j) speed[static_cast<size_t>(pole) * geo.n_phi + j] = avg;
        }
    }
    double cfl_;
    surface::RadialGeometry geo_;
    std::vector<double> scratch_;
};

class IamcfR3 final : public FlowProblem {
public:
    IamcfR3(const anisotropic::MinkowskiNorm& norm, const anisotropic::WulffShape& wulff, double cfl)
        : norm_(norm), wulff_(wulff), cfl_(cfl) {
        af_max_ = anisotropic::ellipticity_range(norm, 128).second;
    }
    void evaluate(const surface::RadialGraphSurface& surf, StepData& d) override {
        surface::compute_radial_geometry(surf, true, geo_, scratch_);
        const auto& geo = geo_;
        d.valid = true;
        d.why.clear();
        const size_t n = geo.sigma1.size();
        d.speed.assign(n, 0.0);
        hf_.assign(n, 0.0);
        fnu_.assign(n, 0.0);
        auto& hf = hf_;
        auto& fnu = fnu_;
        double min_hf = std::numeric_limits<double>::infinity(), max_hf = -min_hf;
        for (int i = 1; i < geo.n_theta - 1; ++i)
            for (int j = 0; j < geo.n_phi; ++j) {
                const size_t k = static_cast<size_t>(i) * geo.n_phi + j;
                const Eigen::Matrix2d af =
                    norm_.anisotropy_tensor(geo.normal[k], geo.frame_e1[k], geo.frame_e2[k]);
                hf[k] = af.cwiseProduct(geo.second_form_frame[k]).sum();
                fnu[k] = norm_.value(geo.normal[k]);
                min_hf = std::min(min_hf, hf[k]);
                max_hf = std::max(max_hf, hf[k]);
            }
        if (!(min_hf > 0.0) || !std::isfinite(min_hf)) {
            d.valid = false;
            d.why = "anisotropic mean curvature reached zero";
            return;
        }
        for (int i = 1; i < geo.n_theta - 1; ++i)
            for (int j = 0; j < geo.n_phi; ++j) {
                const size_t k = static_cast<size_t>(i) * geo.n_phi + j;
                d.speed[k] = fnu[k] / (hf[k] * geo.radial_factor[k]);
            }
        for (int pole : {0, geo.n_theta - 1}) {
            const int ring = pole == 0 ? 1 : geo.n_theta - 2;
            double avg = 0;
            for (int j = 0; j < geo.n_phi; ++j) avg += d.speed[static_cast<size_t>(ring) * geo.n_phi + j];
            avg /= geo.n_phi;
            for (int j = 0; j < geo.n_phi; ++j) d.speed[static_cast<size_t>(pole) * geo.n_phi + j] = avg;
        }
        d.area = geo.integrate([&](size_t k) { return fnu[k]; });
        const double hf_sq = geo.integrate([&](size_t k) { return hf[k] * hf[k] * fnu[k]; });
        const double denom = 4.0 * wulff_.anisotropic_area;
        d.mass = (d.area / denom) * (1.0 - hf_sq / denom);
        d.min_curv = min_hf;
        d.max_curv = max_hf;
        d.dt_cfl = cfl_ * geo.min_spacing * geo.min_spacing * min_hf / af_max_;
    }

private:
    const anisotropic::MinkowskiNorm& norm_;
    const anisotropic::WulffShape& wulff_;
    double cfl_;
    double af_max_ = 1.0;
    surface::RadialGeometry geo_;
    std::vector<double> scratch_, hf_, fnu_;
};

FlowTrace run_flow(FlowProblem& problem, FlowKind kind,
                   const surface::RadialGraphSurface& initial, double t_end, double dt_user) {
    if (!(t_end > 0)) throw std::invalid_argument("flow: t_end must be positive");
    if (!(dt_user > 0)) throw std::invalid_argument("flow: dt must be positive");
    initial.validate();

    FlowTrace trace;
    trace.kind = kind;
    trace.dt_policy.dt_user = dt_user;

    surface::RadialGraphSurface surf = initial;
    PolarFilter filter(surf);
    const double sample_dt = trace.dt_policy.sample_interval;
    const double dt_floor = dt_user * trace.dt_policy.dt_floor_factor;
    double dt_cap = dt_user;
    double t = 0.0;
    double next_sample = 0.0;

    StepData d;
    problem.evaluate(surf, d);
    if (!d.valid) throw FlowBreakdown("flow: invalid initial surface (" + d.why + ")", trace);
    surface::RadialGraphSurface cand = surf;
    StepData nd;

    while (true) {
        if (t >= next_sample - 1e-12) {
            trace.samples.push_back({t, d.area, d.mass, d.min_curv, d.max_curv});
            next_sample += sample_dt;
        }
        if (t >= t_end - 1e-12) break;

        const double dt = std::min({dt_cap, d.dt_cfl, next_sample - t, t_end - t});
        cand.radius = surf.radius;
        for (size_t k = 0; k < cand.radius.size(); ++k) cand.radius[k] += dt * d.speed[k];
        filter.apply(cand);

        bool ok = true;
        for (double v : cand.radius)
            if (!std::isfinite(v) || v <= 0.0) {
                ok = false;
                break;
            }
        if (ok) {
            try {
                problem.evaluate(cand, nd);
            } catch (const surface::SurfaceValidationError&) {
                ok = false;
            }
        }
        if (ok && !nd.valid) {
            trace.steps++;
            throw FlowBreakdown("flow breakdown at t = " + std::to_string(t + dt) + ": " + nd.why,
                                trace);
        }
        if (!ok) {
            dt_cap *= 0.5;  // CFL violation: halve and retry from the same state
            if (dt_cap < dt_floor)
                throw FlowBreakdown("flow: step size collapsed below the floor at t = " +
                                        std::to_string(t), trace);
            continue;
        }
        std::swap(surf.radius, cand.radius);
        std::swap(d, nd);
        t += dt;
        trace.steps++;
    }
    return trace;
}

}  // namespace

std::string flow_kind_name(FlowKind k) {
    switch (k) {
        case FlowKind::IMCF_H3: return "imcf-h3";
        case FlowKind::NormalFlow_Hn: return "normal-hn";
        case FlowKind::IAMCF_R3: return "iamcf-r3";
    }
    return "?";
}

FlowTrace run_imcf_h3(const surface::RadialGraphSurface& initial, double t_end, double dt) {
    if (initial.ambient != surface::Ambient::Hyperbolic3)
        throw std::invalid_argument("run_imcf_h3: initial surface must live in H^3");
    ImcfH3 problem(0.2);
    return run_flow(problem, FlowKind::IMCF_H3, initial, t_end, dt);
}

FlowTrace run_iamcf_r3(const surface::RadialGraphSurface& initial,
                       const anisotropic::MinkowskiNorm& norm,
                       const anisotropic::WulffShape& wulff, double t_end, double dt) {
    if (initial.ambient != surface::Ambient::Euclidean3)
        throw std::invalid_argument("run_iamcf_r3: initial surface must live in R^3");
    IamcfR3 problem(norm, wulff, 0.2);
    return run_flow(problem, FlowKind::IAMCF_R3, initial, t_end, dt);
}

double normal_flow_area(const surface::CurvatureSummary& summary, int n, double t) {
    if (n < 2) throw std::invalid_argument("normal_flow_area: n >= 2 required");
    if (static_cast<int>(summary.sigma_integrals.size()) < n)
        throw std::invalid_argument("normal_flow_area: summary lacks the sigma_i integrals");
    const double ch = std::cosh(t), sh = std::sinh(t);
    double acc = 0;
    for (int i = 0; i < n; ++i)
        acc += std::pow(ch, n - 1 - i) * std::pow(sh, i) * summary.sigma_integrals[i];
    return acc;
}

FlowTrace run_normal_flow(const surface::CurvatureSummary& summary, int n, double t_end) {
    if (!(t_end > 0)) throw std::invalid_argument("run_normal_flow: t_end must be positive");
    FlowTrace trace;
    trace.kind = FlowKind::NormalFlow_Hn;
    trace.dt_policy.dt_user = trace.dt_policy.sample_interval;
    auto curv = [](double k0, double t) {
        const double ch = std::cosh(t), sh = std::sinh(t);
        return (k0 * ch + sh) / (ch + k0 * sh);
    };
    for (double t = 0.0; t < t_end + 1e-12; t += trace.dt_policy.sample_interval) {
        const double tt = std::min(t, t_end);
        trace.samples.push_back({tt, normal_flow_area(summary, n, tt), kNaN,
                                 curv(summary.min_principal, tt), curv(summary.max_principal, tt)});
        trace.steps++;
    }
    return trace;
}

void write_csv(const FlowTrace& trace, std::ostream& out) {
    out << "t,area,mass,min_curv,max_curv\n";
    char buf[160];
    for (const auto& s : trace.samples) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g\n", s.t, s.area, s.mass,
                      s.min_curv, s.max_curv);
        out << buf;
    }
}

}  // namespace capflow::flows
