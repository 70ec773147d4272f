#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <sstream>

#include "capflow/bounds.hpp"
#include "capflow/cli_support.hpp"
#include "capflow/flows.hpp"
#include "capflow/hyperbolic.hpp"
#include "capflow/oracle.hpp"
#include "capflow/surface.hpp"
#include "capflow/validate.hpp"

namespace {

using namespace capflow;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;       // I/O or parameter errors
constexpr int kExitHypothesis = 2;  // hypothesis or ellipticity failures
constexpr int kExitBreakdown = 3;   // flow breakdown (partial trace written)
constexpr int kExitValidation = 4;  // validation suite failures

struct SourceOptions {
    std::string builtin;
    std::string obj_path;
    std::string radial_path;
    std::string norm = "euclidean";
    std::string grid = "128x256";
    std::string ambient = "r3";
    std::string out;
    bool force = false;
    bool no_banner = false;
    double eq_tol = 1e-3;
};

void emit(const SourceOptions& opts, const std::string& content) {
    if (opts.out.empty())
        std::cout << content;
    else
        cli::write_file_atomic(opts.out, content);
}

// Star-shaped source surface plus its summary; the graph/mesh stay around for
// the anisotropic evaluators.
struct SourceData {
    surface::CurvatureSummary summary;
    std::optional<surface::RadialGraphSurface> graph;
    std::optional<surface::TriangleMesh> mesh;
    double builtin_radius = 0;  // > 0 when the source is an exact model shape
};

SourceData build_source(const SourceOptions& opts) {
    const auto [nt, np] = cli::parse_grid(opts.grid);
    const bool euclid = opts.ambient == "r3";
    if (!euclid && opts.ambient != "h2" && opts.ambient != "h3")
        throw std::invalid_argument("ambient must be one of h2, h3, r3");

    SourceData src;
    if (!opts.obj_path.empty()) {
        if (!euclid) throw std::invalid_argument("OBJ input is Euclidean-only");
        src.mesh = surface::read_obj_file(opts.obj_path);
        src.summary = surface::summarize_mesh(*src.mesh);
        return src;
    }
    if (!opts.radial_path.empty()) {
        src.graph = surface::read_radial_grid_file(opts.radial_path);
        const bool graph_euclid = src.graph->ambient == surface::Ambient::Euclidean3;
        if (graph_euclid != euclid)
            throw std::invalid_argument("radial grid ambient does not match --ambient");
        src.summary = surface::summarize_radial_graph(*src.graph);
        return src;
    }
    if (opts.builtin.empty())
        throw std::invalid_argument("no surface source: pass --builtin, --obj or --radial");

    const auto spec = cli::parse_builtin(opts.builtin);
    const auto amb = euclid ? surface::Ambient::Euclidean3 : surface::Ambient::Hyperbolic3;
    if (spec.name == "circle") {
        if (opts.ambient != "h2")
            throw std::invalid_argument("builtin circle lives in ambient h2");
        const double r = spec.get("r", spec.positional_or(0, 1.0));
        src.summary = surface::geodesic_sphere_summary(2, r);
        src.builtin_radius = r;
        return src;
    }
    if (spec.name == "sphere") {
        const double r = spec.get("r", spec.positional_or(0, 1.0));
        src.builtin_radius = r;
        if (opts.ambient == "h2") {
            src.summary = surface::geodesic_sphere_summary(2, r);
        } else if (opts.ambient == "h3") {
            src.summary = surface::geodesic_sphere_summary(3, r);
            src.graph = surface::make_sphere_graph(amb, r, nt, np);
        } else {
            src.summary = surface::euclidean_sphere_summary(r);
            src.graph = surface::make_sphere_graph(amb, r, nt, np);
        }
        return src;
    }
    if (spec.name == "ellipsoid") {
        if (!euclid) throw std::invalid_argument("builtin ellipsoid lives in ambient r3");
        src.graph = surface::make_ellipsoid_graph(spec.positional_or(0, 1.0), spec.positional_or(1, 1.0),
                                                  spec.positional_or(2, 1.5), nt, np);
        src.summary = surface::summarize_radial_graph(*src.graph);
        return src;
    }
    if (spec.name == "perturbed") {
        if (opts.ambient == "h2") throw std::invalid_argument("builtin perturbed needs h3 or r3");
        src.graph = surface::make_perturbed_sphere_graph(
            amb, spec.get("r", 1.0), spec.get("amp", 0.2),
            static_cast<int>(spec.get("mode", 2.0)), nt, np);
        src.summary = surface::summarize_radial_graph(*src.graph);
        return src;
    }
    if (spec.name == "wulff") {
        if (!euclid) throw std::invalid_argument("builtin wulff lives in ambient r3");
        const auto norm = cli::parse_norm(opts.norm);
        src.graph = anisotropic::make_wulff_graph(*norm, spec.get("scale", 1.0), nt, np);
        src.summary = surface::summarize_radial_graph(*src.graph);
        return src;
    }
    throw std::invalid_argument("unknown builtin '" + spec.name +
                                "' (supported: circle, sphere, ellipsoid, perturbed, wulff)");
}

int cmd_bound(const std::string& theorem, double p, const SourceOptions& opts) {
    const auto tid = cli::parse_theorem(theorem);
    if (!tid) throw std::invalid_argument("unknown theorem id '" + theorem + "'");

    const SourceData src = build_source(opts);
    const auto& s = src.summary;
    const surface::HypothesisReport surface_checks = surface::check_hypotheses(s, *tid, p);

    for (const auto& c : surface_checks.checks) {
        if (c.name == "p-range" && !c.passed) {
            std::cerr << "hypothesis failure: " << c.detail << "\n";
            return kExitHypothesis;
        }
    }
    if (!surface_checks.all_passed() && !opts.force) {
        std::cerr << "hypothesis failure: " << surface_checks.failures()
                  << " (use --force to evaluate anyway)\n";
        return kExitHypothesis;
    }

    bounds::BoundReport rep;
    switch (*tid) {
        case surface::TheoremId::Thm1: {
            const auto q = hyperbolic::quermassintegrals(s.dim, s.enclosed_volume, s.area,
                                                         s.sigma1_integral);
            rep = bounds::thm1_bound(s.dim, q.W2, s.area);
            break;
        }
        case surface::TheoremId::Thm2: {
            if (src.builtin_radius <= 0)
                throw std::invalid_argument(
                    "thm2 needs exact circle data; use --builtin circle:r=...");
            const double coth = 1.0 / std::tanh(src.builtin_radius);
            rep = bounds::thm2_bound(s.area, std::pow(coth, p - 1.0) * s.area, p);
            break;
        }
        case surface::TheoremId::Thm3:
            rep = bounds::thm3_bound(s.area, s.sigma1_sq_integral, p);
            break;
        case surface::TheoremId::Thm4:
            rep = bounds::thm4_bound(s.sigma_integrals, s.dim, p);
            break;
        case surface::TheoremId::Thm5:
            rep = bounds::thm5_bound(s.area, s.sigma1_sq_integral, p, opts.eq_tol);
            break;
        case surface::TheoremId::Thm6: {
            const auto norm = cli::parse_norm(opts.norm);
            const auto [nt, np] = cli::parse_grid(opts.grid);
            const auto wulff = anisotropic::wulff_shape(norm, nt, np);
            anisotropic::AnisotropicSummary asum;
            if (src.graph)
                asum = anisotropic::anisotropic_summary(*src.graph, *norm, wulff);
            else if (src.mesh)
                asum = anisotropic::anisotropic_summary(*src.mesh, *norm, wulff);
            else
                throw std::invalid_argument("thm6 needs a surface (graph or mesh), not bare data");
            rep = bounds::thm6_bound(asum, wulff, p, opts.eq_tol);
            break;
        }
    }

    // merge the surface-level checks in front of the evaluator's data checks
    std::vector<surface::HypothesisCheck> all = surface_checks.checks;
    for (auto& c : rep.hypotheses.checks)
        if (c.name != "p-range") all.push_back(c);  // p-range already covered
    rep.hypotheses.checks = std::move(all);

    emit(opts, cli::bound_report_json(rep, opts.force));
    if (!rep.hypotheses.all_passed() && !opts.force) return kExitHypothesis;
    return kExitOk;
}

int cmd_flow(const std::string& kind, double t_end, double dt, const SourceOptions& opts) {
    std::string banner = "# capflow flow --kind " + kind + " --builtin " + opts.builtin +
                         " --grid " + opts.grid + " --t-end " + std::to_string(t_end) + " --dt " +
                         std::to_string(dt) + "\n";
    auto emit_trace = [&](const flows::FlowTrace& trace) {
        std::ostringstream os;
        if (!opts.no_banner) os << banner;
        flows::write_csv(trace, os);
        emit(opts, os.str());
    };

    try {
        flows::FlowTrace trace;
        if (kind == "imcf-h3") {
            SourceOptions h3 = opts;
            h3.ambient = "h3";
            const SourceData src = build_source(h3);
            if (!src.graph) throw std::invalid_argument("imcf-h3 needs a radial-graph source");
            trace = flows::run_imcf_h3(*src.graph, t_end, dt);
        } else if (kind == "iamcf-r3") {
            SourceOptions r3 = opts;
            r3.ambient = "r3";
            const SourceData src = build_source(r3);
            if (!src.graph) throw std::invalid_argument("iamcf-r3 needs a radial-graph source");
            const auto norm = cli::parse_norm(opts.norm);
            const auto [nt, np] = cli::parse_grid(opts.grid);
            const auto wulff = anisotropic::wulff_shape(norm, nt, np);
            trace = flows::run_iamcf_r3(*src.graph, *norm, wulff, t_end, dt);
        } else if (kind == "normal-hn") {
            const SourceData src = build_source(opts);
            trace = flows::run_normal_flow(src.summary, src.summary.dim, t_end);
        } else {
            throw std::invalid_argument("unknown flow kind '" + kind +
                                        "' (supported: imcf-h3, iamcf-r3, normal-hn)");
        }
        emit_trace(trace);
        return kExitOk;
    } catch (const flows::FlowBreakdown& e) {
        emit_trace(e.partial);
        std::cerr << "flow breakdown: " << e.what() << " (partial trace written)\n";
        return kExitBreakdown;
    }
}

int cmd_wulff(const SourceOptions& opts) {
    const auto norm = cli::parse_norm(opts.norm);
    const auto [nt, np] = cli::parse_grid(opts.grid);
    const auto wulff = anisotropic::wulff_shape(norm, nt, np);
    std::ostringstream os;
    if (!opts.no_banner) os << "# capflow wulff --norm " << opts.norm << " --grid " << opts.grid << "\n";
    surface::write_obj(anisotropic::wulff_mesh(wulff), os);
    emit(opts, os.str());
    std::cerr << "anisotropic_area = " << wulff.anisotropic_area << "\n"
              << "volume = " << wulff.volume << "\n"
              << "identity_residual = " << wulff.identity_residual << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& only, const std::string& grid, const SourceOptions& opts) {
    validate::Options vopts;
    if (grid == "coarse")
        vopts = validate::coarse_options();
    else if (grid != "default")
        throw std::invalid_argument("validate --grid takes 'default' or 'coarse'");
    vopts.only = only;
    const auto results = validate::run_validation(vopts);
    emit(opts, validate::render_report(results));
    return validate::all_passed(results) ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sharp capacity upper bounds, geometric flows and their validation"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key = value file mirroring the flags, one [section] per subcommand (flags win)");

    SourceOptions opts;
    std::string theorem, kind = "imcf-h3", only, vgrid = "default";
    double p = 2.0, t_end = 1.0, dt = 0.05;

    auto add_common = [&](CLI::App* sub, bool with_source) {
        sub->add_option("--out", opts.out, "output path (stdout when omitted)");
        sub->add_flag("--no-banner", opts.no_banner, "suppress the leading comment line");
        if (with_source) {
            sub->add_option("--builtin", opts.builtin,
                            "builtin shape: circle:r=R | sphere:r=R | ellipsoid:a,b,c | "
                            "perturbed:r=R,amp=A,mode=M | wulff[:scale=S]");
            sub->add_option("--obj", opts.obj_path, "Wavefront OBJ input (v/f records)");
            sub->add_option("--radial", opts.radial_path, "radial grid file input");
            sub->add_option("--grid", opts.grid, "surface grid as NxM (default 128x256)");
            sub->add_option("--norm", opts.norm,
                            "Minkowski norm: euclidean | ellipsoid:a,b,c | lq:q,eps");
        }
    };

    CLI::App* bound = app.add_subcommand("bound", "evaluate a capacity upper bound");
    bound->add_option("--theorem", theorem, "thm1 | thm2 | thm3 | thm4 | thm5 | thm6 | cor1")
        ->required();
    bound->add_option("--p", p, "capacity exponent p");
    bound->add_option("--ambient", opts.ambient, "h2 | h3 | r3");
    bound->add_option("--eq-tol", opts.eq_tol, "relative tolerance for the equality-case split");
    bound->add_flag("--force", opts.force, "evaluate despite failed geometric hypotheses");
    add_common(bound, true);

    CLI::App* flow = app.add_subcommand("flow", "run a geometric flow and write its trace as CSV");
    flow->add_option("--kind", kind, "imcf-h3 | iamcf-r3 | normal-hn");
    flow->add_option("--t-end", t_end, "final flow time");
    flow->add_option("--dt", dt, "step-size cap (CFL still applies)");
    flow->add_option("--ambient", opts.ambient, "h2 | h3 | r3 (normal-hn only)");
    add_common(flow, true);

    CLI::App* val = app.add_subcommand("validate", "run the validation suite");
    val->add_option("--only", only, "run only criteria whose name contains this substring");
    val->add_option("--grid", vgrid, "default | coarse");
    add_common(val, false);

    CLI::App* wulff = app.add_subcommand("wulff", "sample a Wulff shape and write it as OBJ");
    add_common(wulff, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (bound->parsed()) return cmd_bound(theorem, p, opts);
        if (flow->parsed()) return cmd_flow(kind, t_end, dt, opts);
        if (val->parsed()) return cmd_validate(only, vgrid, opts);
        if (wulff->parsed()) return cmd_wulff(opts);
    } catch (const bounds::DataConsistencyError& e) {
        std::cerr << "data consistency failure: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const anisotropic::EllipticityError& e) {
        std::cerr << "ellipticity failure: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
