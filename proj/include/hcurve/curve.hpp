#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "poly.hpp"

namespace hcurve {

/// The four given branch points together with their monic quartic and the
/// elementary symmetric values, signed so that
///   pi4(x) = x^4 - s1 x^3 + s2 x^2 - s3 x + s4.
struct BranchConfig {
    cplx a1, b1, a2, b2;
    Poly pi4;
    cplx s1, s2, s3, s4;
    double scale = 0.0; // max pairwise distance between the four points

    std::array<cplx, 4> points() const { return {a1, b1, a2, b2}; }
};

inline BranchConfig build_config(cplx a1, cplx b1, cplx a2, cplx b2) {
    BranchConfig cfg;
    cfg.a1 = a1;
    cfg.b1 = b1;
    cfg.a2 = a2;
    cfg.b2 = b2;
    const std::array<cplx, 4> pts = {a1, b1, a2, b2};
    double scale = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            scale = std::max(scale, std::abs(pts[i] - pts[j]));
    cfg.scale = scale;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(pts[i] - pts[j]) <= 1e-12 * scale)
                throw DegenerateInput("build_config: branch points must be pairwise distinct");

    cfg.pi4 = Poly::from_roots({a1, b1, a2, b2});
    cfg.s1 = -cfg.pi4.coeff(3);
    cfg.s2 = cfg.pi4.coeff(2);
    cfg.s3 = -cfg.pi4.coeff(1);
    cfg.s4 = cfg.pi4.coeff(0);
    return cfg;
}

/// The free parameters of the curve family; any pair is admissible.
struct CurveParams {
    cplx c;
    cplx d;
};

struct CurveOptions {
    /// Relative clustering tolerance used to detect double roots of the
    /// reduced discriminant for the genus trichotomy. Chosen wide enough that
    /// a floating-point split of an exact double root is always merged.
    double genus_cluster_tol = 1e-5;
};

/// The cubic curve  h^3 - 3 (P2/Pi4) h + 2 (P1/Pi4) = 0  for given (c, d),
/// with its reduced discriminant  dtilde = P2^3 - Pi4 P1^2  and genus data.
struct CubicCurve {
    BranchConfig config;
    CurveParams params;
    Poly p1;      // z - c
    Poly p2;      // z^2 - (s1+2c)/3 z + d
    Poly dtilde;  // degree <= 4
    int genus = 2;
    RootSet dtilde_roots;
    RootSet soft_points; // simple roots of dtilde (the soft edges)
};

inline CubicCurve build_curve(const BranchConfig& config, CurveParams params,
                              const CurveOptions& opts = {}) {
    CubicCurve cv;
    cv.config = config;
    cv.params = params;
    cv.p1 = Poly{-params.c, cplx(1.0)};
    cv.p2 = Poly{params.d, -(config.s1 + 2.0 * params.c) / 3.0, cplx(1.0)};

    Poly raw = cv.p2 * cv.p2 * cv.p2 - config.pi4 * (cv.p1 * cv.p1);
    // The z^5 and z^6 terms cancel identically for this P1, P2 family; their
    // survival beyond rounding indicates a coefficient-arithmetic bug.
    double mag = std::max(raw.max_abs_coeff(),
                          (cv.p2 * cv.p2 * cv.p2).max_abs_coeff());
    for (int k = 5; k <= 6; ++k)
        if (std::abs(raw.coeff(k)) > 1e-10 * mag)
            throw DegreeViolation("build_curve: z^5/z^6 coefficient of dtilde did not cancel");
    std::vector<cplx> kept(raw.coeffs().begin(),
                           raw.coeffs().begin() + std::min<std::size_t>(raw.coeffs().size(), 5));
    cv.dtilde = Poly(std::move(kept));

    if (cv.dtilde.is_zero() || cv.dtilde.degree() < 1) {
        cv.genus = 0;
        return cv;
    }

    cv.dtilde_roots = roots(cv.dtilde, opts.genus_cluster_tol);

    // Genus trichotomy on the root multiset of dtilde. A degree drop puts the
    // missing roots at infinity; they enter the multiset with that multiplicity.
    std::vector<int> mults;
    for (const RootEntry& r : cv.dtilde_roots.roots) mults.push_back(r.multiplicity);
    int at_infinity = 4 - cv.dtilde.degree();
    if (at_infinity > 0) mults.push_back(at_infinity);
    int doubles = 0, simples = 0, higher = 0;
    for (int m : mults) {
        if (m == 1) ++simples;
        else if (m == 2) ++doubles;
        else ++higher;
    }
    if (higher == 0 && doubles == 0 && simples == 4) cv.genus = 2;
    else if (higher == 0 && doubles == 1 && simples == 2) cv.genus = 1;
    else cv.genus = 0;

    for (const RootEntry& r : cv.dtilde_roots.roots)
        if (r.multiplicity == 1) cv.soft_points.roots.push_back(r);
    cv.soft_points.residual_bound = cv.dtilde_roots.residual_bound;
    return cv;
}

/// Radius beyond which the branches are labeled by their z -> infinity
/// behavior; below it labels come from continuation off the anchor point.
inline double sort_radius(const BranchConfig& config) {
    double m = 0.0;
    for (cplx p : config.points()) m = std::max(m, std::abs(p));
    return 10.0 * (1.0 + m);
}

namespace detail {

/// Unlabeled branch values at z: the roots of the cleared cubic
///   Pi4(z) h^3 - 3 P2(z) h + 2 P1(z) = 0.
inline std::array<cplx, 3> branch_values(const CubicCurve& cv, cplx z) {
    Poly cubic{2.0 * cv.p1(z), -3.0 * cv.p2(z), cplx(0.0), cv.config.pi4(z)};
    if (cubic.degree() != 3)
        throw NearSingular("branch_values: cubic degenerates (z too close to a pole of h)");
    RootSet rs = roots(cubic, 1e-13);
    std::array<cplx, 3> out{};
    int idx = 0;
    for (const RootEntry& r : rs.roots)
        for (int k = 0; k < r.multiplicity && idx < 3; ++k) out[idx++] = r.value;
    return out;
}

/// Asymptotic labeling valid for |z| >= sort_radius: h0 is the root nearest
/// -2/z; the other two are ordered lexicographically by (Re, Im).
inline std::array<cplx, 3> label_at_infinity(const std::array<cplx, 3>& vals, cplx z) {
    cplx target = -2.0 / z;
    int i0 = 0;
    double best = 1e300;
    for (int i = 0; i < 3; ++i) {
        double d = std::abs(vals[static_cast<std::size_t>(i)] - target);
        if (d < best) {
            best = d;
            i0 = i;
        }
    }
    std::array<cplx, 2> rest{};
    int j = 0;
    for (int i = 0; i < 3; ++i)
        if (i != i0) rest[static_cast<std::size_t>(j++)] = vals[static_cast<std::size_t>(i)];
    bool swap = (rest[1].real() < rest[0].real()) ||
                (rest[1].real() == rest[0].real() && rest[1].imag() < rest[0].imag());
    if (swap) std::swap(rest[0], rest[1]);
    return {vals[static_cast<std::size_t>(i0)], rest[0], rest[1]};
}

/// Match new branch values to a previously labeled triple by the assignment
/// of least total displacement over all six permutations.
inline std::array<cplx, 3> match_triple(const std::array<cplx, 3>& prev,
                                        const std::array<cplx, 3>& next,
                                        double* worst_move = nullptr) {
    static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    double best = 1e300;
    int bi = 0;
    for (int p = 0; p < 6; ++p) {
        double cost = 0.0;
        for (int i = 0; i < 3; ++i)
            cost += std::abs(next[static_cast<std::size_t>(perms[p][i])] -
                             prev[static_cast<std::size_t>(i)]);
        if (cost < best) {
            best = cost;
            bi = p;
        }
    }
    std::array<cplx, 3> out{};
    double wm = 0.0;
    for (int i = 0; i < 3; ++i) {
        out[static_cast<std::size_t>(i)] = next[static_cast<std::size_t>(perms[bi][i])];
        wm = std::max(wm, std::abs(out[static_cast<std::size_t>(i)] -
                                   prev[static_cast<std::size_t>(i)]));
    }
    if (worst_move) *worst_move = wm;
    return out;
}

inline double min_separation(const std::array<cplx, 3>& v) {
    return std::min({std::abs(v[0] - v[1]), std::abs(v[0] - v[2]), std::abs(v[1] - v[2])});
}

inline double segment_point_distance(cplx a, cplx b, cplx p) {
    cplx d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

/// Straight-line transport of a labeled triple from `pos` to `target` with
/// adaptive step halving. Returns false (leaving pos/labeled at the last good
/// point) when the step collapses, which happens only where the segment runs
/// almost exactly through a branch point.
inline bool advance_triple(const CubicCurve& cv, std::array<cplx, 3>& labeled, cplx& pos,
                           cplx target) {
    double seg_len = std::abs(target - pos);
    double step = seg_len / 8.0;
    if (step == 0.0) return true;
    const double floor = 1e-12 * (1.0 + std::abs(target));
    // Bail out well before the tracked triple degenerates: needing steps this
    // far below the segment scale means it runs into a collision point, and
    // stopping while the labels are still separated lets the caller route
    // around it. Short segments keep a proportionally smaller bail so escape
    // moves near a singularity stay possible.
    const double bail = 1e-6 * seg_len + 1e-13 * (1.0 + std::abs(target));
    int guard = 0;
    for (;;) {
        if (++guard > 100000) return false;
        double remaining = std::abs(target - pos);
        if (remaining < 1e-14 * (1.0 + std::abs(target))) return true;
        cplx dir = (target - pos) / remaining;
        double h = std::min(step, remaining);
        bool placed = false;
        while (h >= floor) {
            cplx trial = pos + h * dir;
            try {
                std::array<cplx, 3> vals = branch_values(cv, trial);
                double move = 0.0;
                std::array<cplx, 3> matched = match_triple(labeled, vals, &move);
                if (move <= 0.35 * min_separation(vals)) {
                    labeled = matched;
                    pos = trial;
                    step = std::min(std::abs(target - pos), std::max(h * 1.7, floor));
                    placed = true;
                    break;
                }
            } catch (const NearSingular&) {
            }
            if (h < bail) break;
            h *= 0.5;
        }
        if (!placed) return false;
    }
}

/// Continue a labeled triple from z0 to z1. When the straight segment passes
/// (numerically) through a branch point, the transport retreats radially and
/// arcs around it; the detour side is fixed by the orientation toward z1, so
/// the result is deterministic.
inline std::array<cplx, 3> continue_triple(const CubicCurve& cv, std::array<cplx, 3> labeled,
                                           cplx z0, cplx z1) {
    cplx pos = z0;
    int detours = 0;
    while (!advance_triple(cv, labeled, pos, z1)) {
        if (++detours > 32)
            throw NearSingular("continue_triple: could not route around branch points");
        cplx trouble = cv.config.points()[0];
        double best = 1e300;
        for (cplx e : cv.config.points())
            if (std::abs(pos - e) < best) {
                best = std::abs(pos - e);
                trouble = e;
            }
        for (const RootEntry& r : cv.dtilde_roots.roots)
            if (std::abs(pos - r.value) < best) {
                best = std::abs(pos - r.value);
                trouble = r.value;
            }
        double rho = std::clamp(4.0 * best, 0.01 * cv.config.scale, 0.08 * cv.config.scale);
        cplx radial = (best > 0.0) ? (pos - trouble) / best : cplx(1.0);
        if (!advance_triple(cv, labeled, pos, trouble + rho * radial))
            throw NearSingular("continue_triple: stuck at a branch point");
        for (int turn = 0; turn < 4; ++turn) {
            if (segment_point_distance(pos, z1, trouble) > 0.5 * rho) break;
            double side = (((z1 - trouble) * std::conj(pos - trouble)).imag() >= 0.0) ? 1.0 : -1.0;
            cplx spoke = pos - trouble;
            for (int j = 1; j <= 4; ++j) {
                cplx next = trouble + spoke * std::exp(cplx(0.0, side * 0.125 * std::numbers::pi *
                                                                     static_cast<double>(j)));
                if (!advance_triple(cv, labeled, pos, next))
                    throw NearSingular("continue_triple: detour arc failed");
            }
        }
    }
    return labeled;
}

} // namespace detail

/// The three labeled branch values (h0, h1, h2) at z.
///
/// For |z| >= sort_radius the labels follow the infinity behavior
/// (h0 ~ -2/z, h1 and h2 ~ 1/z, the latter pair ordered by (Re, Im)); closer
/// in they are transported by continuation along the straight path from the
/// real anchor point z = sort_radius.
inline std::array<cplx, 3> branches_at(const CubicCurve& cv, cplx z) {
    double guard = 1e-10 * cv.config.scale;
    for (cplx p : cv.config.points())
        if (std::abs(z - p) < guard)
            throw NearSingular("branches_at: z too close to a hard edge");
    for (const RootEntry& r : cv.dtilde_roots.roots)
        if (std::abs(z - r.value) < guard)
            throw NearSingular("branches_at: z too close to a root of dtilde");

    double rs = sort_radius(cv.config);
    std::array<cplx, 3> vals = detail::branch_values(cv, z);
    if (std::abs(z) >= rs) return detail::label_at_infinity(vals, z);

    cplx anchor(rs, 0.0);
    std::array<cplx, 3> labeled =
        detail::label_at_infinity(detail::branch_values(cv, anchor), anchor);
    labeled = detail::continue_triple(cv, labeled, anchor, z);
    return detail::match_triple(labeled, vals);
}

} // namespace hcurve
