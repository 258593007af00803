#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "curve.hpp"

namespace hcurve {

struct GammaOptions {
    double step = 0.0;        // 0 -> 1e-3 * scale
    double drift_tol = 1e-6;  // allowed |Re int (h_l - h_k) dz| per unit arclength
    double box_halfwidth = 0.0; // 0 -> 2.5 * scale around the edge centroid
    int max_steps = 40000;
};

/// One traced trajectory along which Re((h_l - h_k) dz) vanishes.
struct GammaArc {
    std::vector<cplx> points;
    int branch_l = 0;
    int branch_k = 1;
    cplx seed_edge;
    bool seed_is_soft = false;
    int direction_index = 0;
    std::string termination; // "edge", "loop", "box", "steps"
    double max_drift = 0.0;  // largest |accumulated Re| seen along the arc
    double length = 0.0;
    // state at the far end, enough to retrace the arc backwards
    cplx end_state_point; // last point where the pair/tangent state is valid
    cplx end_pair_first, end_pair_second;
    cplx end_tangent;
};

struct GammaSet {
    std::vector<GammaArc> arcs;
    std::vector<cplx> hard_edges;
    std::vector<cplx> soft_edges;
};

namespace detail {

/// The pair of branch values colliding at a nearby edge. At a soft edge the
/// colliding branches approach a common finite value, so they are the two
/// closest; at a hard edge they blow up like +-C/sqrt(z - a), so they are the
/// two of largest magnitude.
inline std::pair<cplx, cplx> colliding_pair(const CubicCurve& cv, cplx z, bool hard_edge) {
    std::array<cplx, 3> v = branch_values(cv, z);
    if (hard_edge) {
        int small = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(v[static_cast<std::size_t>(i)]) < std::abs(v[static_cast<std::size_t>(small)]))
                small = i;
        std::array<cplx, 2> big{};
        int j = 0;
        for (int i = 0; i < 3; ++i)
            if (i != small) big[static_cast<std::size_t>(j++)] = v[static_cast<std::size_t>(i)];
        return {big[0], big[1]};
    }
    double d01 = std::abs(v[0] - v[1]), d02 = std::abs(v[0] - v[2]), d12 = std::abs(v[1] - v[2]);
    if (d01 <= d02 && d01 <= d12) return {v[0], v[1]};
    if (d02 <= d12) return {v[0], v[2]};
    return {v[1], v[2]};
}

/// Transport an ordered pair of branch values to the point `z`.
inline std::pair<cplx, cplx> continue_pair(const CubicCurve& cv, std::pair<cplx, cplx> pair,
                                           cplx z) {
    std::array<cplx, 3> v = branch_values(cv, z);
    int best_i = 0, best_j = 1;
    double best = 1e300;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            double cost = std::abs(v[static_cast<std::size_t>(i)] - pair.first) +
                          std::abs(v[static_cast<std::size_t>(j)] - pair.second);
            if (cost < best) {
                best = cost;
                best_i = i;
                best_j = j;
            }
        }
    cplx a = v[static_cast<std::size_t>(best_i)], b = v[static_cast<std::size_t>(best_j)];
    if (std::abs(a - b) < 1e-9 * (1.0 + std::abs(a)))
        throw BranchCollision("continue_pair: tracked branches collided");
    return {a, b};
}

/// Local model q(z) ~ C (z - e)^m of the squared branch difference at an
/// edge; returns {m, arg C}. q is single valued, so no continuation is needed.
inline std::pair<int, double> local_exponent(const CubicCurve& cv, cplx edge, double r1,
                                             bool hard_edge) {
    auto q_at = [&](double r) {
        auto [ha, hb] = colliding_pair(cv, edge + cplx(r, 0.0), hard_edge);
        cplx d = ha - hb;
        return d * d;
    };
    cplx q1 = q_at(r1), q2 = q_at(2.0 * r1);
    double m_est = std::log(std::abs(q2) / std::abs(q1)) / std::log(2.0);
    int m = static_cast<int>(std::lround(m_est));
    // the probe sits at angle 0 from the edge, so arg C is read off directly
    return {m, std::arg(q1)};
}

struct TraceResult {
    std::vector<cplx> points;
    std::string termination;
    double max_drift = 0.0;
    double length = 0.0;
    cplx end_state_point;
    std::pair<cplx, cplx> end_pair;
    cplx end_tangent;
};

/// Predictor-corrector tracing of the level line Re int (h_a - h_b) dz = 0
/// from z0 with initial branch pair `pair` and initial direction `dir`.
inline TraceResult trace_level_line(const CubicCurve& cv, cplx z0, std::pair<cplx, cplx> pair,
                                    cplx dir, const GammaOptions& opts, double step, cplx center,
                                    double halfwidth,
                                    const std::vector<cplx>& stop_edges) {
    TraceResult out;
    out.points.push_back(z0);
    cplx z = z0;
    cplx tangent = dir / std::abs(dir);
    double pot = 0.0;     // accumulated Re int (h_a - h_b) dz since launch
    double length = 0.0;
    for (int stepno = 0; stepno < opts.max_steps; ++stepno) {
        cplx w = pair.first - pair.second;
        if (std::abs(w) == 0.0) throw BranchCollision("trace: branch pair degenerate");
        cplx t = cplx(0.0, 1.0) * std::conj(w) / std::abs(w);
        if ((t * std::conj(tangent)).real() < 0.0) t = -t;

        double h = step;
        bool placed = false;
        for (int attempt = 0; attempt < 30 && !placed; ++attempt) {
            cplx zp = z + h * t;
            try {
                std::pair<cplx, cplx> pp = continue_pair(cv, pair, zp);
                cplx wp = pp.first - pp.second;
                double dpot = (0.5 * (w + wp) * (zp - z)).real();
                double newpot = pot + dpot;
                cplx corr = -newpot * std::conj(wp) / (std::abs(wp) * std::abs(wp));
                if (std::abs(corr) > 0.1 * h) {
                    h *= 0.5;
                    continue;
                }
                cplx zc = zp + corr;
                std::pair<cplx, cplx> pc = continue_pair(cv, pp, zc);
                cplx wc = pc.first - pc.second;
                newpot += (0.5 * (wp + wc) * (zc - zp)).real();
                z = zc;
                pair = pc;
                tangent = t;
                pot = newpot;
                length += std::abs(zc - out.points.back());
                out.points.push_back(z);
                out.max_drift = std::max(out.max_drift, std::abs(pot));
                placed = true;
            } catch (const BranchCollision&) {
                h *= 0.5;
            } catch (const NearSingular&) {
                h *= 0.5;
            }
            if (h < 1e-6 * step)
                throw StepCollapse("trace: projection failed near " + std::to_string(z.real()) +
                                   (z.imag() < 0 ? "-" : "+") +
                                   std::to_string(std::abs(z.imag())) + "i");
        }
        if (!placed)
            throw StepCollapse("trace: no admissible step near " + std::to_string(z.real()));

        for (cplx e : stop_edges)
            if (std::abs(z - e) < 5.0 * step) {
                out.termination = "edge";
                // fill the terminal gap so the polyline reaches the edge
                int fill = std::max(1, static_cast<int>(std::abs(e - z) / step));
                for (int i = 1; i <= fill; ++i)
                    out.points.push_back(z + (e - z) * (static_cast<double>(i) / fill));
                length += std::abs(e - z);
                goto done;
            }
        if (length > 10.0 * step && std::abs(z - z0) < step) {
            out.termination = "loop";
            goto done;
        }
        if (std::abs(z.real() - center.real()) > halfwidth ||
            std::abs(z.imag() - center.imag()) > halfwidth) {
            out.termination = "box";
            goto done;
        }
    }
    out.termination = "steps";
done:
    out.length = length;
    out.end_state_point = z;
    out.end_pair = pair;
    out.end_tangent = tangent;
    return out;
}

} // namespace detail

/// Re int over `path` of (h_l - h_k) dz with branch labels fixed at the path
/// start by the anchor convention and transported along the way.
///
/// For pairs containing branch 0 the integrand has a -3/z (or +3/z) tail, and
/// the value carries the logarithmic counterterm 3 ln|z_end / z_start| (with
/// the matching sign) so that it stabilizes on paths escaping to infinity.
inline double pair_potential(const CubicCurve& cv, int l, int k, const std::vector<cplx>& path) {
    if (path.size() < 2) throw Error("pair_potential: path needs at least two points");
    if (l < 0 || l > 2 || k < 0 || k > 2 || l == k) throw Error("pair_potential: bad pair");
    std::array<cplx, 3> labeled = branches_at(cv, path.front());
    std::pair<cplx, cplx> pr = {labeled[static_cast<std::size_t>(l)],
                                labeled[static_cast<std::size_t>(k)]};

    double guard = 1e-6 * cv.config.scale;
    for (cplx z : path) {
        for (cplx e : cv.config.points())
            if (std::abs(z - e) < guard)
                throw NearSingular("pair_potential: path too close to a hard edge");
        for (const auto& r : cv.dtilde_roots.roots)
            if (std::abs(z - r.value) < guard)
                throw NearSingular("pair_potential: path too close to a soft edge");
    }

    // adaptive trapezoid refinement per polyline segment, transporting the pair
    double total = 0.0;
    for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
        cplx za = path[seg], zb = path[seg + 1];
        int pieces = 8;
        double prev_val = 0.0;
        std::pair<cplx, cplx> end_pair = pr;
        for (int refine = 0;; ++refine) {
            std::pair<cplx, cplx> cur = pr;
            double acc = 0.0;
            cplx zprev = za;
            for (int i = 1; i <= pieces; ++i) {
                cplx zi = za + (zb - za) * (static_cast<double>(i) / pieces);
                std::pair<cplx, cplx> nxt = detail::continue_pair(cv, cur, zi);
                acc += (0.5 * ((cur.first - cur.second) + (nxt.first - nxt.second)) *
                        (zi - zprev))
                           .real();
                cur = nxt;
                zprev = zi;
            }
            if (refine > 0 && std::abs(acc - prev_val) < 1e-9 * (1.0 + std::abs(acc))) {
                total += acc;
                end_pair = cur;
                break;
            }
            if (refine >= 14) {
                total += acc;
                end_pair = cur;
                break;
            }
            prev_val = acc;
            pieces *= 2;
        }
        pr = end_pair;
    }

    if (l == 0 || k == 0) {
        double sign = (l == 0) ? 3.0 : -3.0;
        total += sign * (std::log(std::abs(path.back())) - std::log(std::abs(path.front())));
    }
    return total;
}

/// Trace the level set Gamma: launch trajectories from every hard and soft
/// edge along the local critical directions of the squared branch difference
/// and follow them until another edge, a closed loop, or the bounding box.
inline GammaSet trace_gamma(const CubicCurve& cv, const GammaOptions& opts_in = {}) {
    GammaOptions opts = opts_in;
    double scale = cv.config.scale;
    double step = (opts.step > 0.0) ? opts.step : 1e-3 * scale;

    GammaSet out;
    for (cplx e : cv.config.points()) out.hard_edges.push_back(e);
    for (const auto& r : cv.soft_points.roots) out.soft_edges.push_back(r.value);

    std::vector<cplx> all_edges = out.hard_edges;
    for (cplx e : out.soft_edges) all_edges.push_back(e);

    cplx center(0.0);
    for (cplx e : all_edges) center += e;
    center /= static_cast<double>(all_edges.size());
    double halfwidth = (opts.box_halfwidth > 0.0) ? opts.box_halfwidth : 2.5 * scale;

    struct Seed {
        cplx edge;
        bool soft;
    };
    std::vector<Seed> seeds;
    for (cplx e : out.hard_edges) seeds.push_back({e, false});
    for (cplx e : out.soft_edges) seeds.push_back({e, true});
    std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) {
        if (a.edge.real() != b.edge.real()) return a.edge.real() < b.edge.real();
        return a.edge.imag() < b.edge.imag();
    });

    for (const Seed& seed : seeds) {
        // probe inside the zone the seed's own singularity dominates
        double nearest = 1e300;
        for (cplx e : all_edges)
            if (std::abs(e - seed.edge) > 1e-12)
                nearest = std::min(nearest, std::abs(e - seed.edge));
        for (const auto& r : cv.dtilde_roots.roots)
            if (std::abs(r.value - seed.edge) > 1e-12)
                nearest = std::min(nearest, std::abs(r.value - seed.edge));
        double r_probe = std::min(2.0 * step, 0.2 * nearest);
        auto [m, argc] = detail::local_exponent(cv, seed.edge, r_probe, !seed.soft);
        // For this curve family the exponent is pinned by the root structure:
        // a soft edge is a simple root of dtilde (q ~ C (z-e)) and a hard
        // edge carries the simple pole pair (q ~ C / (z-e)). The probe
        // normally confirms this; when a crowded neighborhood pollutes the
        // estimate, the structural value wins.
        int m_expected = seed.soft ? 1 : -1;
        if (m != m_expected) m = m_expected;
        // Departure angles solve cos(argC/2 + (m/2 + 1) theta) = 0; there are
        // m + 2 of them (1 at a hard edge where m = -1, 3 at a simple soft
        // edge where m = 1).
        int count = std::max(m + 2, 1);
        double p = 0.5 * m + 1.0;
        for (int kdir = 0; kdir < count; ++kdir) {
            double theta = (0.5 * std::numbers::pi + kdir * std::numbers::pi - 0.5 * argc) / p;
            cplx dir = std::exp(cplx(0.0, theta));
            cplx z0 = seed.edge + r_probe * dir;
            GammaArc arc;
            arc.seed_edge = seed.edge;
            arc.seed_is_soft = seed.soft;
            arc.direction_index = kdir;
            try {
                std::pair<cplx, cplx> pr = detail::colliding_pair(cv, z0, !seed.soft);
                // tag the pair with anchor labels for annotation purposes
                std::array<cplx, 3> lab = branches_at(cv, z0);
                int li = 0, ki = 1;
                double best = 1e300;
                for (int i = 0; i < 3; ++i)
                    for (int j = i + 1; j < 3; ++j) {
                        double cost = std::abs(lab[static_cast<std::size_t>(i)] - pr.first) +
                                      std::abs(lab[static_cast<std::size_t>(j)] - pr.second);
                        double cost2 = std::abs(lab[static_cast<std::size_t>(i)] - pr.second) +
                                       std::abs(lab[static_cast<std::size_t>(j)] - pr.first);
                        if (std::min(cost, cost2) < best) {
                            best = std::min(cost, cost2);
                            li = i;
                            ki = j;
                        }
                    }
                arc.branch_l = li;
                arc.branch_k = ki;

                std::vector<cplx> stops;
                for (cplx e : all_edges)
                    if (std::abs(e - seed.edge) > 1e-12) stops.push_back(e);
                detail::TraceResult tr = detail::trace_level_line(
                    cv, z0, pr, dir, opts, step, center, halfwidth, stops);
                arc.points = std::move(tr.points);
                arc.points.insert(arc.points.begin(), seed.edge);
                arc.termination = tr.termination;
                arc.max_drift = tr.max_drift;
                arc.length = tr.length + 2.0 * step;
                arc.end_state_point = tr.end_state_point;
                arc.end_pair_first = tr.end_pair.first;
                arc.end_pair_second = tr.end_pair.second;
                arc.end_tangent = tr.end_tangent;
            } catch (const StepCollapse&) {
                arc.termination = "collapse";
            }
            out.arcs.push_back(std::move(arc));
        }
    }
    return out;
}

} // namespace hcurve
