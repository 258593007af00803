#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "hcurve/gamma.hpp"
#include "hcurve/genus1.hpp"
#include "hcurve/periods.hpp"

using namespace hcurve;

namespace {

CubicCurve nested_example_curve() {
    BranchConfig cfg = build_config(1.0, -1.0, 0.1, -0.1);
    return build_curve(cfg, symmetric_params(1.0, 0.1));
}

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    auto one_sided = [](const std::vector<cplx>& u, const std::vector<cplx>& v) {
        double worst = 0.0;
        for (cplx p : u) {
            double best = 1e300;
            for (cplx q : v) best = std::min(best, std::abs(p - q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

std::vector<cplx> all_points(const GammaSet& gs) {
    std::vector<cplx> out;
    for (const GammaArc& a : gs.arcs)
        for (cplx p : a.points) out.push_back(p);
    return out;
}

} // namespace

TEST_CASE("pair potential of a closed contour enclosing no branch points") {
    CubicCurve cv = nested_example_curve();
    std::vector<cplx> path = {cplx(2.0, 1.0), cplx(3.0, 1.0), cplx(3.0, 2.0), cplx(2.0, 2.0),
                              cplx(2.0, 1.0)};
    for (auto [l, k] : {std::pair<int, int>{0, 1}, {0, 2}, {1, 2}}) {
        double v = pair_potential(cv, l, k, path);
        CHECK(std::abs(v) < 1e-8);
    }
}

TEST_CASE("pair potential (1,2) stabilizes at large radius") {
    CubicCurve cv = nested_example_curve();
    // radial path from 3 to 30 to 300 along a fixed ray: the (1,2) integrand
    // decays like t^-2, so the tail contributions shrink
    std::vector<cplx> p1 = {cplx(0.0, 3.0), cplx(0.0, 30.0)};
    std::vector<cplx> p2 = {cplx(0.0, 30.0), cplx(0.0, 300.0)};
    double v1 = pair_potential(cv, 1, 2, p1);
    double v2 = pair_potential(cv, 1, 2, p2);
    CHECK(std::abs(v2) < 0.2 * std::abs(v1) + 1e-6);
}

TEST_CASE("pair potential guards") {
    CubicCurve cv = nested_example_curve();
    std::vector<cplx> bad = {cplx(0.5, 0.5), cplx(1.0, 1e-9)};
    CHECK_THROWS_AS(pair_potential(cv, 0, 1, bad), NearSingular);
    std::vector<cplx> ok = {cplx(0.5, 0.5), cplx(0.6, 0.5)};
    CHECK_THROWS_AS(pair_potential(cv, 0, 0, ok), Error);
}

TEST_CASE("nested symmetric structure of the traced set") {
    CubicCurve cv = nested_example_curve();
    REQUIRE(cv.genus == 1);
    GammaOptions opts;
    GammaSet gs = trace_gamma(cv, opts);
    double step = 1e-3 * cv.config.scale;

    CHECK(gs.hard_edges.size() == 4);
    CHECK(gs.soft_edges.size() == 2);

    // soft edges of the symmetric curve at +-(a^2+b^2)^2/(3 sqrt(a^6+b^6))
    auto [sp, sm] = soft_edges_symmetric(1.0, 0.1);
    double best = 1e300;
    for (cplx e : gs.soft_edges) best = std::min(best, std::abs(e - sp));
    CHECK(best < 1e-8);

    // drift invariant on every arc
    for (const GammaArc& a : gs.arcs) {
        if (a.termination == "collapse") continue;
        CHECK(a.max_drift <= opts.drift_tol * std::max(a.length, 1.0));
    }

    // edge incidence: every hard edge is an endpoint of some arc
    for (cplx e : gs.hard_edges) {
        bool incident = false;
        for (const GammaArc& a : gs.arcs) {
            if (a.points.empty()) continue;
            if (std::abs(a.points.front() - e) < 5.0 * step ||
                std::abs(a.points.back() - e) < 5.0 * step)
                incident = true;
        }
        CHECK(incident);
    }

    // symmetry z -> -z of the whole point set
    std::vector<cplx> pts = all_points(gs);
    REQUIRE(pts.size() > 100);
    std::vector<cplx> neg;
    neg.reserve(pts.size());
    for (cplx p : pts) neg.push_back(-p);
    CHECK(hausdorff(pts, neg) < 2.0 * step);

    // mirror symmetry z -> conj(-z) holds as well for this real configuration
    std::vector<cplx> mir;
    mir.reserve(pts.size());
    for (cplx p : pts) mir.push_back(std::conj(-p));
    CHECK(hausdorff(pts, mir) < 2.0 * step);

    // hard edges emit one arc, soft edges three
    int from_soft = 0;
    for (const GammaArc& a : gs.arcs)
        if (a.seed_is_soft) ++from_soft;
    CHECK(from_soft == 6);
    CHECK(gs.arcs.size() == 4 + 6);
}

TEST_CASE("reversibility: tracing back from the far end reproduces the arc") {
    CubicCurve cv = nested_example_curve();
    GammaOptions opts;
    GammaSet gs = trace_gamma(cv, opts);
    double step = 1e-3 * cv.config.scale;
    int tested = 0;
    for (const GammaArc& a : gs.arcs) {
        if (a.termination != "edge" || a.points.size() < 30) continue;
        // re-seed at the terminal edge and trace back along the arc; the
        // terminal edge plays the seed's role now, so it leaves the stop set
        cplx terminal = a.points.back();
        bool terminal_hard = false;
        for (cplx e : gs.hard_edges)
            if (std::abs(e - terminal) < 1e-9) terminal_hard = true;
        cplx back = (a.end_state_point - terminal) / std::abs(a.end_state_point - terminal);
        cplx z0 = terminal + 2.0 * step * back;
        std::pair<cplx, cplx> pr = detail::colliding_pair(cv, z0, terminal_hard);
        std::vector<cplx> stops;
        for (cplx e : gs.hard_edges)
            if (std::abs(e - terminal) > 1e-9) stops.push_back(e);
        for (cplx e : gs.soft_edges)
            if (std::abs(e - terminal) > 1e-9) stops.push_back(e);
        detail::TraceResult tr = detail::trace_level_line(
            cv, z0, pr, back, opts, step, cplx(0.0), 2.5 * cv.config.scale, stops);
        tr.points.insert(tr.points.begin(), terminal);
        CHECK(tr.termination == "edge");
        CHECK(hausdorff(tr.points, a.points) < 3.0 * step);
        if (++tested >= 3) break;
    }
    CHECK(tested >= 3);
}

TEST_CASE("genus-2 overlapping case traces without collapse") {
    BranchConfig cfg = build_config(-2.0, 1.0, -1.0, 4.0);
    CubicCurve cv = build_curve(cfg, {cplx(-0.2736665608), cplx(-1.689837898)});
    REQUIRE(cv.genus == 2);
    GammaOptions opts;
    GammaSet gs = trace_gamma(cv, opts);
    CHECK(gs.soft_edges.size() == 4);
    CHECK(gs.arcs.size() == 4 * 1 + 4 * 3);
    int collapsed = 0, reached_edge = 0;
    for (const GammaArc& a : gs.arcs) {
        if (a.termination == "collapse") ++collapsed;
        if (a.termination == "edge") ++reached_edge;
    }
    CHECK(collapsed == 0);
    CHECK(reached_edge >= 8);
    // every hard edge incident to an arc
    double step = 1e-3 * cv.config.scale;
    for (cplx e : gs.hard_edges) {
        bool incident = false;
        for (const GammaArc& a : gs.arcs)
            if (!a.points.empty() && (std::abs(a.points.front() - e) < 5.0 * step ||
                                      std::abs(a.points.back() - e) < 5.0 * step))
                incident = true;
        CHECK(incident);
    }
}

TEST_CASE("closed cycle around the inner pair: period condition after solve_r0") {
    BranchConfig cfg = build_config(-1.0, 1.0, -3.0 / 8, 0.5);
    SolveR0Result sol = solve_r0(cfg, {0.05, 0.10}, 1e-7);
    CubicCurve cv = build_curve(cfg, sol.params.params);

    std::vector<cplx> cycle = {cplx(-0.55, 0.25), cplx(0.7, 0.25), cplx(0.7, -0.25),
                               cplx(-0.55, -0.25), cplx(-0.55, 0.25)};
    // the pair that collides at the inner edges: identified from the arcs of
    // the cut [a2, b2]; on this contour it is the pair whose potential
    // difference integrates to (nearly) zero once Re I vanishes
    double best = 1e300;
    for (auto [l, k] : {std::pair<int, int>{0, 1}, {0, 2}, {1, 2}}) {
        double v = std::abs(pair_potential(cv, l, k, cycle));
        best = std::min(best, v);
    }
    CHECK(best < 1e-5);

    // away from the solved R0 the same cycle integral is visibly nonzero
    Genus1Params wrong = params_from_r0(cfg, cplx(0.06));
    CubicCurve cv_wrong = build_curve(cfg, wrong.params);
    double worst = 0.0;
    for (auto [l, k] : {std::pair<int, int>{0, 2}, {1, 2}})
        worst = std::max(worst, std::abs(pair_potential(cv_wrong, l, k, cycle)));
    CHECK(worst > 0.1);
}
