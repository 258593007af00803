// Command-line front end: builds the cubic curve attached to four branch
// points, runs the requested analysis stage, and emits JSON/CSV/SVG results.

#include <array>
#include <complex>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcurve/hcurve.hpp"

namespace {

using hcurve::cplx;
using ordered_json = nlohmann::ordered_json;

struct InputError : hcurve::Error {
    using Error::Error;
};

ordered_json to_json(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json to_json(const std::vector<cplx>& v) {
    ordered_json out = ordered_json::array();
    for (cplx z : v) out.push_back(to_json(z));
    return out;
}

ordered_json rootset_json(const hcurve::RootSet& rs) {
    ordered_json out = ordered_json::array();
    for (const auto& r : rs.roots) {
        ordered_json e;
        e["value"] = to_json(r.value);
        e["multiplicity"] = r.multiplicity;
        out.push_back(e);
    }
    return out;
}

ordered_json poly_json(const hcurve::Poly& p) {
    ordered_json out = ordered_json::array();
    for (const cplx& c : p.coeffs()) out.push_back(to_json(c));
    return out;
}

cplx parse_complex(const std::string& s) {
    double re = 0.0, im = 0.0;
    if (std::sscanf(s.c_str(), "%lf,%lf", &re, &im) == 2) return {re, im};
    if (std::sscanf(s.c_str(), "%lf", &re) == 1) return {re, 0.0};
    throw InputError("cannot parse complex number '" + s + "' (expected re,im)");
}

struct JobSpec {
    std::vector<std::string> point_args;
    std::string points_file;
    std::string mode = "given-cd";
    std::string c_arg, d_arg, r0_arg, bracket_arg, hp_n_arg;
    double tol = 1e-6;
    std::string out_json, out_csv, out_svg;

    std::array<cplx, 4> points() const {
        std::vector<cplx> pts;
        if (!points_file.empty()) {
            std::ifstream f(points_file);
            if (!f) throw InputError("cannot open points file " + points_file);
            ordered_json doc = ordered_json::parse(f);
            for (const auto& item : doc)
                pts.push_back(cplx(item.at(0).get<double>(), item.at(1).get<double>()));
        } else {
            for (const std::string& s : point_args) pts.push_back(parse_complex(s));
        }
        if (pts.size() != 4)
            throw InputError("exactly four branch points are required (got " +
                             std::to_string(pts.size()) + ")");
        return {pts[0], pts[1], pts[2], pts[3]};
    }
};

/// Antipodal pairing {a,-a,b,-b} of the four points for symmetric mode.
std::pair<cplx, cplx> symmetry_generators(const std::array<cplx, 4>& pts, double scale) {
    for (int j = 1; j < 4; ++j) {
        if (std::abs(pts[0] + pts[static_cast<std::size_t>(j)]) > 1e-9 * scale) continue;
        std::array<int, 2> rest{};
        int k = 0;
        for (int i = 1; i < 4; ++i)
            if (i != j) rest[static_cast<std::size_t>(k++)] = i;
        if (std::abs(pts[static_cast<std::size_t>(rest[0])] +
                     pts[static_cast<std::size_t>(rest[1])]) <= 1e-9 * scale)
            return {pts[0], pts[static_cast<std::size_t>(rest[0])]};
    }
    throw hcurve::DegenerateInput(
        "symmetric mode requires the points to form two antipodal pairs {a,-a,b,-b}");
}

hcurve::CurveParams resolve_params(const JobSpec& spec, const hcurve::BranchConfig& cfg,
                                   ordered_json& doc) {
    if (spec.mode == "symmetric") {
        auto [a, b] = symmetry_generators(cfg.points(), cfg.scale);
        doc["mode"] = "symmetric";
        doc["symmetry_generators"] = ordered_json::array({to_json(a), to_json(b)});
        return hcurve::symmetric_params(a, b);
    }
    if (spec.mode == "genus1") {
        if (spec.r0_arg.empty()) throw InputError("genus1 mode requires --r0");
        hcurve::Genus1Params g = hcurve::params_from_r0(cfg, parse_complex(spec.r0_arg));
        doc["mode"] = "genus1";
        doc["r0"] = to_json(g.R0);
        return g.params;
    }
    if (spec.mode == "given-cd") {
        if (spec.c_arg.empty() || spec.d_arg.empty())
            throw InputError("given-cd mode requires --c and --d");
        doc["mode"] = "given-cd";
        return {parse_complex(spec.c_arg), parse_complex(spec.d_arg)};
    }
    throw InputError("unknown mode '" + spec.mode + "'");
}

void fill_curve_doc(ordered_json& doc, const hcurve::CubicCurve& cv) {
    doc["c"] = to_json(cv.params.c);
    doc["d"] = to_json(cv.params.d);
    doc["genus"] = cv.genus;
    doc["dtilde"] = poly_json(cv.dtilde);
    std::array<cplx, 4> pts = cv.config.points();
    doc["hard_edges"] = to_json(std::vector<cplx>(pts.begin(), pts.end()));
    doc["soft_edges"] = rootset_json(cv.soft_points);
}

void emit(const JobSpec& spec, const ordered_json& doc) {
    std::string text = doc.dump(2) + "\n";
    if (spec.out_json.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream f(spec.out_json, std::ios::binary);
        if (!f) throw hcurve::Error("cannot open " + spec.out_json);
        f << text;
    }
}

void emit_gamma_csv(const std::string& path, const hcurve::GammaSet& gs) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw hcurve::Error("cannot open " + path);
    f << "arc_id,pair,x,y\n";
    char buf[96];
    for (std::size_t i = 0; i < gs.arcs.size(); ++i) {
        const hcurve::GammaArc& a = gs.arcs[i];
        for (cplx p : a.points) {
            std::snprintf(buf, sizeof buf, "%zu,%d-%d,%.12g,%.12g\n", i, a.branch_l, a.branch_k,
                          p.real(), p.imag());
            f << buf;
        }
    }
}

int run_verify(const hcurve::BranchConfig& cfg, const hcurve::CubicCurve& cv, ordered_json& doc) {
    // round-trip and residual self checks at deterministic sample points
    int failures = 0;
    auto record = [&](const std::string& name, bool ok) {
        doc["checks"].push_back(ordered_json{{"name", name}, {"pass", ok}});
        if (!ok) ++failures;
    };

    bool vieta_ok = true, ultra_ok = true, trip_ok = true;
    int samples = 0;
    for (int i = 0; i < 64 && samples < 24; ++i) {
        double ang = 0.39996 * static_cast<double>(i + 1);
        double rad = 0.35 + 0.11 * static_cast<double>(i % 13);
        cplx z = cv.config.scale * rad * std::exp(cplx(0.0, ang));
        if (std::abs(cfg.pi4(z)) < 1e-3) continue;
        bool near_root = false;
        for (const auto& r : cv.dtilde_roots.roots)
            if (std::abs(z - r.value) < 1e-2) near_root = true;
        if (near_root) continue;
        ++samples;
        std::array<cplx, 3> h;
        try {
            h = hcurve::branches_at(cv, z);
        } catch (const hcurve::NearSingular&) {
            continue;
        }
        cplx sum = h[0] + h[1] + h[2];
        if (std::abs(sum) > 1e-10 * (1.0 + std::abs(h[0]) + std::abs(h[1]) + std::abs(h[2])))
            vieta_ok = false;
        for (cplx hv : h) {
            if (std::abs(hv) < 1e-8) continue;
            hcurve::SurfacePoint sp = hcurve::forward(cv, z, hv);
            if (hcurve::ultra_residual(cv, sp.R, sp.Delta) >
                1e-9 * (1.0 + std::pow(std::abs(sp.R), 6)))
                ultra_ok = false;
            hcurve::Poly k2 = hcurve::k2_poly(cfg, cv.params);
            if (std::abs(k2(sp.R)) < 1e-4 || std::abs(cfg.pi4(sp.R)) < 1e-4) continue;
            hcurve::SurfacePoint back = hcurve::inverse(cv, sp.R, sp.Delta);
            if (std::abs(back.z - z) > 1e-10 * (1.0 + std::abs(z)) ||
                std::abs(back.h - hv) > 1e-10 * (1.0 + std::abs(hv)))
                trip_ok = false;
        }
    }
    record("vieta_sum_zero", vieta_ok && samples > 0);
    record("ultraelliptic_residual", ultra_ok);
    record("uniformization_round_trip", trip_ok);

    hcurve::Poly raw = cv.p2 * cv.p2 * cv.p2 - cfg.pi4 * (cv.p1 * cv.p1);
    record("dtilde_degree_bound", raw.degree() <= 4);

    hcurve::HyperCurve hc = hcurve::build_hyper(cv);
    int doubles = 0, simples = 0;
    for (const auto& r : hc.eps.roots) (r.multiplicity >= 2 ? doubles : simples)++;
    int genus_hyper = (doubles == 0 && simples == 6) ? 2 : (doubles == 1 && simples == 4) ? 1 : 0;
    record("genus_agreement", genus_hyper == cv.genus);

    doc["pass"] = (failures == 0);
    return failures == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"third-order curve analysis for four branch points"};
    app.require_subcommand(1);

    JobSpec spec;
    app.add_option("--point,--points", spec.point_args,
                   "branch point as re,im (four values)");
    app.add_option("--points-file", spec.points_file, "JSON file with four [re,im] pairs");
    app.add_option("--mode", spec.mode, "symmetric | genus1 | given-cd");
    app.add_option("--c", spec.c_arg, "parameter c as re,im (given-cd mode)");
    app.add_option("--d", spec.d_arg, "parameter d as re,im (given-cd mode)");
    app.add_option("--r0", spec.r0_arg, "double-zero location R0 as re,im (genus1 mode)");
    app.add_option("--r0-bracket", spec.bracket_arg, "solve-r0 bracket as lo,hi");
    app.add_option("--tol", spec.tol, "target for |Re I| in solve-r0");
    app.add_option("--hp-n", spec.hp_n_arg, "multi-index n1,n2 for the hp command");
    app.add_option("--out-json", spec.out_json, "write the result document here");
    app.add_option("--out-csv", spec.out_csv, "write traced arcs as CSV here");
    app.add_option("--out-svg", spec.out_svg, "write an SVG rendering here");

    auto* cmd_curve = app.add_subcommand("curve", "build the curve and classify its genus");
    auto* cmd_hyper = app.add_subcommand("hyper", "two-sheeted data: K2, delta2, branch points");
    auto* cmd_genus1 = app.add_subcommand("genus1", "R0-parametrized coefficients");
    auto* cmd_solve = app.add_subcommand("solve-r0", "find R0 with vanishing Re I");
    auto* cmd_gamma = app.add_subcommand("gamma", "trace the equal-potential set");
    auto* cmd_hp = app.add_subcommand("hp", "simultaneous-approximant denominator zeros");
    auto* cmd_verify = app.add_subcommand("verify", "run self checks, exit 0 iff all pass");
    for (CLI::App* sub : {cmd_curve, cmd_hyper, cmd_genus1, cmd_solve, cmd_gamma, cmd_hp, cmd_verify})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    ordered_json doc;
    try {
        std::array<cplx, 4> pts = spec.points();
        doc["points"] = to_json(std::vector<cplx>(pts.begin(), pts.end()));
        hcurve::BranchConfig cfg = hcurve::build_config(pts[0], pts[1], pts[2], pts[3]);

        if (cmd_hp->parsed()) {
            int n1 = 0, n2 = 0;
            if (std::sscanf(spec.hp_n_arg.c_str(), "%d,%d", &n1, &n2) != 2)
                throw InputError("hp requires --hp-n n1,n2");
            hcurve::HPSystem sys = hcurve::solve_hp(pts[0], pts[1], pts[2], pts[3], {n1, n2});
            doc["command"] = "hp";
            doc["n"] = ordered_json::array({n1, n2});
            doc["degree"] = sys.denominator.degree();
            doc["non_normal"] = sys.non_normal;
            doc["defect"] = sys.defect;
            doc["denominator"] = poly_json(sys.denominator);
            doc["zeros"] = rootset_json(sys.zeros);
            if (!spec.out_svg.empty()) {
                hcurve::SvgPlot plot;
                for (cplx e : pts) plot.add_hard_edge(e);
                for (const auto& r : sys.zeros.roots) plot.add_dot(r.value);
                plot.save(spec.out_svg);
            }
            emit(spec, doc);
            return 0;
        }

        if (cmd_solve->parsed()) {
            double lo = 0.0, hi = 0.0;
            if (std::sscanf(spec.bracket_arg.c_str(), "%lf,%lf", &lo, &hi) != 2)
                throw InputError("solve-r0 requires --r0-bracket lo,hi");
            hcurve::SolveR0Result sol = hcurve::solve_r0(cfg, {lo, hi}, spec.tol);
            doc["command"] = "solve-r0";
            doc["r0"] = to_json(sol.params.R0);
            doc["re_I"] = sol.period.re_I;
            doc["quadrature_error"] = sol.period.quadrature_error;
            doc["evaluations"] = sol.period.evaluations;
            ordered_json brackets = ordered_json::array();
            for (const auto& b : sol.sign_changes)
                brackets.push_back(ordered_json::array({b[0], b[1]}));
            doc["sign_changes"] = brackets;
            hcurve::CubicCurve cv = hcurve::build_curve(cfg, sol.params.params);
            fill_curve_doc(doc, cv);
            emit(spec, doc);
            return 0;
        }

        hcurve::CubicCurve cv = hcurve::build_curve(cfg, resolve_params(spec, cfg, doc));

        if (cmd_curve->parsed()) {
            doc["command"] = "curve";
            fill_curve_doc(doc, cv);
        } else if (cmd_hyper->parsed()) {
            doc["command"] = "hyper";
            fill_curve_doc(doc, cv);
            hcurve::HyperCurve hc = hcurve::build_hyper(cv);
            doc["k2"] = poly_json(hc.k2);
            doc["delta2"] = poly_json(hc.delta2);
            doc["eps"] = rootset_json(hc.eps);
        } else if (cmd_genus1->parsed()) {
            if (spec.mode != "genus1") throw hcurve::Error("genus1 command requires --mode genus1");
            doc["command"] = "genus1";
            fill_curve_doc(doc, cv);
            hcurve::HyperCurve hc = hcurve::build_hyper(cv);
            doc["delta2_at_r0"] = std::abs(hc.delta2(parse_complex(spec.r0_arg)));
        } else if (cmd_gamma->parsed()) {
            doc["command"] = "gamma";
            fill_curve_doc(doc, cv);
            hcurve::GammaSet gs = hcurve::trace_gamma(cv);
            doc["arc_count"] = gs.arcs.size();
            ordered_json arcs = ordered_json::array();
            for (const auto& a : gs.arcs) {
                ordered_json e;
                e["pair"] = std::to_string(a.branch_l) + "-" + std::to_string(a.branch_k);
                e["seed"] = to_json(a.seed_edge);
                e["soft_seed"] = a.seed_is_soft;
                e["termination"] = a.termination;
                e["length"] = a.length;
                e["points"] = a.points.size();
                arcs.push_back(e);
            }
            doc["arcs"] = arcs;
            if (!spec.out_csv.empty()) emit_gamma_csv(spec.out_csv, gs);
            if (!spec.out_svg.empty()) {
                hcurve::SvgPlot plot;
                plot.add(gs);
                plot.save(spec.out_svg);
            }
        } else if (cmd_verify->parsed()) {
            doc["command"] = "verify";
            doc["checks"] = ordered_json::array();
            int code = run_verify(cfg, cv, doc);
            emit(spec, doc);
            return code;
        }
        emit(spec, doc);
        return 0;
    } catch (const InputError& e) {
        ordered_json err{{"error", {{"type", "input"}, {"message", e.what()}}}};
        std::fputs((err.dump(2) + "\n").c_str(), stderr);
        return 2;
    } catch (const hcurve::DegenerateInput& e) {
        ordered_json err{{"error", {{"type", "DegenerateInput"}, {"message", e.what()}}}};
        std::fputs((err.dump(2) + "\n").c_str(), stderr);
        return 2;
    } catch (const hcurve::Error& e) {
        ordered_json err{{"error", {{"type", "numerical"}, {"message", e.what()}}}};
        std::fputs((err.dump(2) + "\n").c_str(), stderr);
        return 3;
    } catch (const std::exception& e) {
        ordered_json err{{"error", {{"type", "input"}, {"message", e.what()}}}};
        std::fputs((err.dump(2) + "\n").c_str(), stderr);
        return 2;
    }
}
