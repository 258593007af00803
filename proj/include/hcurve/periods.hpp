#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "genus1.hpp"

namespace hcurve {

struct PeriodOptions {
    double abs_tol = 1e-7; // quadrature error target for Re I
    int max_depth = 24;
    int sweep_points = 25; // bracket sweep resolution in solve_r0
};

/// Real part of the period integral with a refinement-difference error
/// estimate; |re_I| is only meaningful above quadrature_error.
struct PeriodResult {
    double re_I = 0.0;
    double quadrature_error = 0.0;
    std::int64_t evaluations = 0;
};

namespace detail {

/// sqrt of a polynomial along the real axis, branch continued from +infinity
/// just above the axis, normalized positive at +infinity.
///
/// Each root contributes |R - r|^(1/2) exp(i theta/2) where theta is the
/// argument of (R + i0) - r; for roots on the axis this means theta = 0 to
/// the right of the root and theta = pi to the left. The product reproduces
/// the continued branch without any interval bookkeeping.
class RealAxisSqrt {
public:
    RealAxisSqrt(const Poly& p, double real_tol = 1e-8) {
        if (p.is_zero()) throw Error("RealAxisSqrt: zero polynomial");
        RootSet rs = roots(p, 1e-12);
        for (const RootEntry& r : rs.roots)
            for (int k = 0; k < r.multiplicity; ++k) roots_.push_back(r.value);
        for (cplx& r : roots_)
            if (std::abs(r.imag()) <= real_tol * (1.0 + std::abs(r))) r = cplx(r.real(), 0.0);
        lead_ = p.lead();
        sqrt_lead_ = std::sqrt(lead_);
        if (sqrt_lead_.real() < 0.0) sqrt_lead_ = -sqrt_lead_;
    }

    cplx operator()(double R) const {
        cplx acc = sqrt_lead_;
        for (cplx r : roots_) {
            double theta;
            if (r.imag() == 0.0)
                theta = (R >= r.real()) ? 0.0 : std::numbers::pi;
            else
                theta = std::arg(cplx(R, 0.0) - r);
            double mag = std::sqrt(std::abs(cplx(R, 0.0) - r));
            acc *= mag * std::exp(cplx(0.0, 0.5 * theta));
        }
        return acc;
    }

    std::vector<double> real_roots() const {
        std::vector<double> out;
        for (cplx r : roots_)
            if (r.imag() == 0.0) out.push_back(r.real());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end(),
                              [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                  out.end());
        return out;
    }

private:
    std::vector<cplx> roots_;
    cplx lead_;
    cplx sqrt_lead_;
};

} // namespace detail

/// Evaluator for the regularized period integrand of the R0-parametrized
/// genus-1 curve:  J(R) = -(R - R0) sqrt(S(R)) / (2 Pi4(R))  with
/// S = delta2 / (R - R0)^2 and the square-root branch continued along the
/// real axis from +infinity.
class PeriodIntegrand {
public:
    PeriodIntegrand(const BranchConfig& config, const Genus1Params& gparams)
        : config_(config), gparams_(gparams) {
        CubicCurve cv = build_curve(config, gparams.params);
        HyperCurve hc = build_hyper(cv);
        double bound = 1e-6 * (1.0 + std::pow(std::abs(gparams.R0), 6));
        if (std::abs(hc.delta2(gparams.R0)) > bound ||
            std::abs(hc.delta2.derivative()(gparams.R0)) > bound)
            throw Error("PeriodIntegrand: delta2 has no double zero at R0");
        s_poly_ = hc.delta2.deflate(gparams.R0).deflate(gparams.R0);
        sqrt_s_.emplace(s_poly_);
        pi4_ = config.pi4;
    }

    cplx j(double R) const {
        guard_near_edges(R);
        return j_raw(R);
    }

    cplx j_raw(double R) const {
        cplx s = (*sqrt_s_)(R);
        return -(cplx(R) - gparams_.R0) * s / (2.0 * pi4_(cplx(R)));
    }

    /// Rational regularizer whose principal-value integral over the real line
    /// vanishes: poles cancel J at the hard edges and the -R/(R^2+1) term
    /// matches the -1/R tail, leaving an O(R^-2) integrand.
    cplx reg(double R) const {
        guard_near_edges(R);
        return reg_raw(R);
    }

    cplx reg_raw(double R) const {
        cplx r(R);
        return 0.5 / (r - config_.a2) + 0.5 / (r - config_.b2) - 0.5 / (r - config_.a1) -
               0.5 / (r - config_.b1) - r / (r * r + 1.0);
    }

    double re_j_minus_reg(double R) const { return (j_raw(R) - reg_raw(R)).real(); }

    const std::vector<double>& split_points() const { return splits_; }
    const Poly& s_poly() const { return s_poly_; }
    std::vector<double> sqrt_real_roots() const { return sqrt_s_->real_roots(); }

    /// Residue pattern check: at each real hard edge the pole of J must carry
    /// the sign the regularizer assumes (-1 on the first pair, +1 on the
    /// second), otherwise the difference is not integrable.
    void check_edge_signs() const {
        auto check = [&](cplx a, double expected) {
            if (std::abs(a.imag()) > 1e-9 * (1.0 + std::abs(a))) return;
            double R = a.real();
            cplx dpi = pi4_.derivative()(cplx(R));
            if (std::abs(dpi) == 0.0) return;
            cplx sigma = -(cplx(R) - gparams_.R0) * (*sqrt_s_)(R) / dpi;
            if (std::abs(sigma - cplx(expected)) > 0.05)
                throw QuadratureFailure(
                    "re_period: hard-edge pole signs do not match the regularizer");
        };
        check(config_.a1, -1.0);
        check(config_.b1, -1.0);
        check(config_.a2, 1.0);
        check(config_.b2, 1.0);
    }

    void build_splits() {
        splits_ = sqrt_s_->real_roots();
        for (cplx a : config_.points())
            if (std::abs(a.imag()) <= 1e-9 * (1.0 + std::abs(a))) splits_.push_back(a.real());
        if (std::abs(gparams_.R0.imag()) <= 1e-9 * (1.0 + std::abs(gparams_.R0)))
            splits_.push_back(gparams_.R0.real());
        std::sort(splits_.begin(), splits_.end());
        splits_.erase(std::unique(splits_.begin(), splits_.end(),
                                  [](double a, double b) { return std::abs(a - b) < 1e-11; }),
                      splits_.end());
    }

    bool is_sqrt_singularity(double x) const {
        for (double r : sqrt_s_->real_roots())
            if (std::abs(x - r) < 1e-11) return true;
        return false;
    }

private:
    void guard_near_edges(double R) const {
        for (cplx a : config_.points())
            if (std::abs(a.imag()) <= 1e-9 * (1.0 + std::abs(a)) &&
                std::abs(R - a.real()) < 1e-9)
                throw NearPole("period integrand evaluated within 1e-9 of a real edge");
    }

    BranchConfig config_;
    Genus1Params gparams_;
    Poly pi4_;
    Poly s_poly_;
    std::optional<detail::RealAxisSqrt> sqrt_s_;
    std::vector<double> splits_;
};

/// J(R) with the continued square-root branch (see PeriodIntegrand).
inline cplx integrand_J(const BranchConfig& config, const Genus1Params& gparams, double R) {
    return PeriodIntegrand(config, gparams).j(R);
}

inline cplx regularizer(const BranchConfig& config, double R) {
    for (cplx a : config.points())
        if (std::abs(a.imag()) <= 1e-9 * (1.0 + std::abs(a)) && std::abs(R - a.real()) < 1e-9)
            throw NearPole("regularizer evaluated within 1e-9 of a real edge");
    cplx r(R);
    return 0.5 / (r - config.a2) + 0.5 / (r - config.b2) - 0.5 / (r - config.a1) -
           0.5 / (r - config.b1) - r / (r * r + 1.0);
}

namespace detail {

struct QuadCtx {
    double error = 0.0;
    std::int64_t evals = 0;
};

// Gauss 7 / Kronrod 15 pair on [-1, 1].
inline constexpr std::array<double, 15> kKronrodNodes = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

inline constexpr std::array<double, 15> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

inline constexpr std::array<double, 8> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082, 0.0}; // last slot unused

template <class F>
std::pair<double, double> gk15(F&& f, double a, double b, QuadCtx& ctx) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double k = 0.0, g = 0.0;
    for (int i = 0; i < 15; ++i) {
        double v = f(mid + half * kKronrodNodes[static_cast<std::size_t>(i)]);
        ++ctx.evals;
        k += kKronrodWeights[static_cast<std::size_t>(i)] * v;
        if (i % 2 == 1) g += kGaussWeights[static_cast<std::size_t>(i / 2)] * v;
    }
    k *= half;
    g *= half;
    double err = std::pow(200.0 * std::abs(k - g), 1.5);
    if (!(err < std::abs(k - g))) err = std::abs(k - g);
    return {k, err};
}

template <class F>
double adapt(F&& f, double a, double b, double tol, int depth, int max_depth, QuadCtx& ctx) {
    auto [v, e] = gk15(f, a, b, ctx);
    if (e <= tol || depth >= max_depth) {
        ctx.error += e;
        return v;
    }
    double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.55 * tol, depth + 1, max_depth, ctx) +
           adapt(f, mid, b, 0.55 * tol, depth + 1, max_depth, ctx);
}

} // namespace detail

/// Re I = Re Int (J - Reg) dR over the real line: the real part of the period
/// of h dz along the contour through the first hard-edge pair.
inline PeriodResult re_period(const BranchConfig& config, const Genus1Params& gparams,
                              const PeriodOptions& opts = {}) {
    PeriodIntegrand f(config, gparams);
    f.check_edge_signs();
    f.build_splits();

    double reach = 10.0 * (1.0 + config.scale);
    reach = std::max(reach, std::abs(gparams.R0) + 5.0);
    for (double s : f.split_points()) reach = std::max(reach, std::abs(s) + 5.0);

    std::vector<double> nodes;
    nodes.push_back(-reach);
    for (double s : f.split_points()) nodes.push_back(s);
    nodes.push_back(reach);

    detail::QuadCtx ctx;
    double total = 0.0;
    double panel_tol = opts.abs_tol / (static_cast<double>(nodes.size()) + 1.0);
    auto plain = [&f](double R) { return f.re_j_minus_reg(R); };
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        double a = nodes[i], b = nodes[i + 1];
        if (b - a <= 1e-13) continue;
        // Substitute out the sqrt endpoint singularities: R = a + t^2 (or
        // b - t^2) turns |R - r|^(1/2) into a smooth factor.
        bool left_sing = f.is_sqrt_singularity(a);
        bool right_sing = f.is_sqrt_singularity(b);
        double mid = 0.5 * (a + b);
        auto left_part = [&](double lo, double hi) {
            if (left_sing) {
                auto g = [&](double t) { return 2.0 * t * f.re_j_minus_reg(lo + t * t); };
                return detail::adapt(g, 0.0, std::sqrt(hi - lo), panel_tol / 2.0, 0,
                                     opts.max_depth, ctx);
            }
            return detail::adapt(plain, lo, hi, panel_tol / 2.0, 0, opts.max_depth, ctx);
        };
        auto right_part = [&](double lo, double hi) {
            if (right_sing) {
                auto g = [&](double t) { return 2.0 * t * f.re_j_minus_reg(hi - t * t); };
                return detail::adapt(g, 0.0, std::sqrt(hi - lo), panel_tol / 2.0, 0,
                                     opts.max_depth, ctx);
            }
            return detail::adapt(plain, lo, hi, panel_tol / 2.0, 0, opts.max_depth, ctx);
        };
        total += left_part(a, mid);
        total += right_part(mid, b);
    }

    // Tails: R = 1/u maps [reach, inf) to (0, 1/reach]; the regularized
    // integrand is O(R^-2), so the transformed one is bounded.
    auto tail_pos = [&f](double u) { return f.re_j_minus_reg(1.0 / u) / (u * u); };
    auto tail_neg = [&f](double u) { return f.re_j_minus_reg(-1.0 / u) / (u * u); };
    total += detail::adapt(tail_pos, 1e-12, 1.0 / reach, opts.abs_tol / 8.0, 0, opts.max_depth,
                           ctx);
    total += detail::adapt(tail_neg, 1e-12, 1.0 / reach, opts.abs_tol / 8.0, 0, opts.max_depth,
                           ctx);

    PeriodResult out;
    out.re_I = total;
    out.quadrature_error = ctx.error;
    out.evaluations = ctx.evals;
    if (!(out.quadrature_error < 1e4 * opts.abs_tol))
        throw QuadratureFailure("re_period: error estimate stuck above target");
    return out;
}

/// Real parts of the periods of h dz over a homology basis of the genus-1
/// surface: elliptical contours around the branch-point pairs (e0,e1) and
/// (e1,e2) of the deflated discriminant, with the square-root branch
/// transported around each contour. Hard edges enclosed along the way do not
/// matter: the integrand's residues there are exactly +-1/2, so they shift
/// the periods by imaginary amounts only.
struct CyclePeriodResult {
    std::array<double, 2> re_periods{};
    double quadrature_error = 0.0;
    std::array<std::array<cplx, 2>, 2> cycle_endpoints{}; // the branch-point pairs used
};

namespace detail {

inline cplx ellipse_point(cplx u, cplx v, double pad, double theta) {
    cplx center = 0.5 * (u + v);
    double major = 0.5 * std::abs(v - u) + pad;
    cplx dir = (std::abs(v - u) > 0.0) ? (v - u) / std::abs(v - u) : cplx(1.0);
    return center + dir * cplx(major * std::cos(theta), 0.0) +
           dir * cplx(0.0, 1.0) * cplx(pad * std::sin(theta), 0.0);
}

} // namespace detail

inline CyclePeriodResult cycle_re_periods(const BranchConfig& config,
                                          const Genus1Params& gparams) {
    CubicCurve cv = build_curve(config, gparams.params);
    HyperCurve hc = build_hyper(cv);
    Poly s_poly = hc.delta2.deflate(gparams.R0).deflate(gparams.R0);
    if (s_poly.degree() != 4)
        throw QuadratureFailure("cycle_re_periods: deflated discriminant is not quartic");
    RootSet rs = roots(s_poly, 1e-9);
    std::vector<cplx> eps = rs.values();
    if (eps.size() != 4)
        throw QuadratureFailure("cycle_re_periods: branch points are not four simple roots");
    std::sort(eps.begin(), eps.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    std::vector<cplx> singular(eps);
    for (cplx p : config.points()) singular.push_back(p);

    CyclePeriodResult out;
    const std::array<std::array<int, 2>, 2> basis = {{{0, 1}, {1, 2}}};
    for (int c = 0; c < 2; ++c) {
        cplx u = eps[static_cast<std::size_t>(basis[static_cast<std::size_t>(c)][0])];
        cplx v = eps[static_cast<std::size_t>(basis[static_cast<std::size_t>(c)][1])];
        out.cycle_endpoints[static_cast<std::size_t>(c)] = {u, v};
        double d_ref = 1e300;
        for (cplx s : singular)
            if (std::abs(s - u) > 1e-9 && std::abs(s - v) > 1e-9)
                d_ref = std::min(d_ref, std::min(std::abs(s - u), std::abs(s - v)));
        d_ref = std::min(d_ref, std::max(0.5 * std::abs(v - u), 1e-3));
        double pad = 0.25 * d_ref;

        auto integrate = [&](int n, double padx, double& closure) {
            cplx start = detail::ellipse_point(u, v, padx, 0.0);
            cplx sq = std::sqrt(s_poly(start));
            SqrtTracker tracker(s_poly, start, sq);
            cplx total(0.0);
            cplx prev = start;
            cplx fprev = -(prev - gparams.R0) * sq / (2.0 * config.pi4(prev));
            cplx f0 = fprev;
            for (int i = 1; i < n; ++i) {
                double theta = 2.0 * std::numbers::pi * i / n;
                cplx z = detail::ellipse_point(u, v, padx, theta);
                cplx sv = tracker.advance(z);
                cplx f = -(z - gparams.R0) * sv / (2.0 * config.pi4(z));
                total += 0.5 * (fprev + f) * (z - prev);
                fprev = f;
                prev = z;
            }
            // close the loop: the transported root must return to its start
            cplx sv = tracker.advance(start);
            closure = std::abs(sv - sq) / (1.0 + std::abs(sq));
            total += 0.5 * (fprev + f0) * (start - prev);
            return total;
        };

        bool done = false;
        for (int attempt = 0; attempt < 6 && !done; ++attempt) {
            // keep quadrature nodes away from every singular point
            bool clear = true;
            for (int i = 0; i < 256 && clear; ++i) {
                cplx z = detail::ellipse_point(u, v, pad, 2.0 * std::numbers::pi * i / 256.0);
                for (cplx s : singular)
                    if (std::abs(z - s) < 0.04 * d_ref) clear = false;
                if (std::abs(z - gparams.R0) < 1e-12) clear = false;
            }
            if (!clear) {
                pad *= 1.37;
                continue;
            }
            double closure1 = 0.0, closure2 = 0.0;
            cplx coarse = integrate(512, pad, closure1);
            cplx fine = integrate(1024, pad, closure2);
            if (closure2 > 1e-6) {
                pad *= 1.37;
                continue;
            }
            out.re_periods[static_cast<std::size_t>(c)] = fine.real();
            out.quadrature_error += std::abs(fine.real() - coarse.real());
            done = true;
        }
        if (!done)
            throw QuadratureFailure("cycle_re_periods: no admissible contour around the pair");
    }
    return out;
}

struct SolveComplexR0Result {
    Genus1Params params;
    CyclePeriodResult periods;
    int iterations = 0;
};

/// Experimental: drive the real parts of both basis periods to zero with a
/// damped finite-difference Newton iteration over complex R0. The real-line
/// solve covers the worked configurations; this exposes the full two-cycle
/// condition for data without a real axis of symmetry.
inline SolveComplexR0Result solve_r0_complex(const BranchConfig& config, cplx r0_guess,
                                             double tol, int max_iter = 40) {
    if (!(tol > 0.0)) throw Error("solve_r0_complex: tol must be positive");
    auto value = [&](cplx r0) {
        CyclePeriodResult p = cycle_re_periods(config, params_from_r0(config, r0));
        return p;
    };
    cplx x = r0_guess;
    CyclePeriodResult fx = value(x);
    auto norm_of = [](const CyclePeriodResult& p) {
        return std::max(std::abs(p.re_periods[0]), std::abs(p.re_periods[1]));
    };
    SolveComplexR0Result out;
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it;
        if (norm_of(fx) < tol) break;
        const double h = 1e-6 * (1.0 + std::abs(x));
        CyclePeriodResult fxr = value(x + cplx(h, 0.0));
        CyclePeriodResult fxi = value(x + cplx(0.0, h));
        double j11 = (fxr.re_periods[0] - fx.re_periods[0]) / h;
        double j12 = (fxi.re_periods[0] - fx.re_periods[0]) / h;
        double j21 = (fxr.re_periods[1] - fx.re_periods[1]) / h;
        double j22 = (fxi.re_periods[1] - fx.re_periods[1]) / h;
        double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-14)
            throw QuadratureFailure("solve_r0_complex: singular period Jacobian");
        double dx = -(j22 * fx.re_periods[0] - j12 * fx.re_periods[1]) / det;
        double dy = -(-j21 * fx.re_periods[0] + j11 * fx.re_periods[1]) / det;
        double damp = 1.0;
        for (int cut = 0; cut < 8; ++cut) {
            cplx cand = x + damp * cplx(dx, dy);
            try {
                CyclePeriodResult fc = value(cand);
                if (norm_of(fc) < norm_of(fx)) {
                    x = cand;
                    fx = fc;
                    break;
                }
            } catch (const Error&) {
            }
            damp *= 0.5;
            if (cut == 7)
                throw QuadratureFailure("solve_r0_complex: damping failed to reduce the residual");
        }
    }
    if (norm_of(fx) >= tol)
        throw QuadratureFailure("solve_r0_complex: no convergence of the two-cycle conditions");
    out.params = params_from_r0(config, x);
    out.periods = fx;
    return out;
}

struct SolveR0Result {
    Genus1Params params;
    PeriodResult period;
    std::vector<std::array<double, 2>> sign_changes; // all brackets found in the sweep
};

/// Scan the bracket for sign changes of Re I and refine the first one by a
/// secant/bisection hybrid until |Re I| < tol.
inline SolveR0Result solve_r0(const BranchConfig& config, std::array<double, 2> bracket,
                              double tol, const PeriodOptions& opts = {}) {
    if (!(bracket[1] > bracket[0])) throw Error("solve_r0: empty bracket");
    if (!(tol > 0.0)) throw Error("solve_r0: tol must be positive");

    // Sweep points where the parametrization breaks down (R0 at a pole, or
    // the edge-sign pattern invalidating the regularized integral) are simply
    // skipped; they cannot carry the period condition anyway.
    bool any_valid = false;
    auto eval = [&](double r0) -> std::optional<double> {
        try {
            double v = re_period(config, params_from_r0(config, cplx(r0)), opts).re_I;
            any_valid = true;
            return v;
        } catch (const PoleAtR0&) {
            return std::nullopt;
        } catch (const QuadratureFailure&) {
            return std::nullopt;
        }
    };

    int n = std::max(opts.sweep_points, 3);
    std::vector<double> xs(static_cast<std::size_t>(n));
    std::vector<std::optional<double>> fs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        xs[static_cast<std::size_t>(i)] =
            bracket[0] + (bracket[1] - bracket[0]) * i / (n - 1.0);
        fs[static_cast<std::size_t>(i)] = eval(xs[static_cast<std::size_t>(i)]);
    }
    SolveR0Result out;
    for (int i = 0; i + 1 < n; ++i) {
        if (!fs[static_cast<std::size_t>(i)] || !fs[static_cast<std::size_t>(i + 1)]) continue;
        double fa = *fs[static_cast<std::size_t>(i)], fb = *fs[static_cast<std::size_t>(i + 1)];
        if (fa == 0.0 || fa * fb < 0.0)
            out.sign_changes.push_back(
                {xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(i + 1)]});
    }
    if (out.sign_changes.empty()) {
        if (!any_valid)
            throw QuadratureFailure("solve_r0: no sweep point admits the period integral");
        throw NoSignChange("solve_r0: Re I does not change sign over the bracket");
    }

    double a = out.sign_changes[0][0], b = out.sign_changes[0][1];
    double fa = *eval(a), fb = *eval(b);
    double x = a, fx = fa;
    for (int it = 0; it < 80; ++it) {
        if (std::abs(fx) < tol) break;
        double secant = (fb != fa) ? (a - fa * (b - a) / (fb - fa)) : 0.5 * (a + b);
        double width = b - a;
        if (!(secant > a + 1e-3 * width && secant < b - 1e-3 * width))
            secant = 0.5 * (a + b);
        x = secant;
        auto v = eval(x);
        if (!v) {
            x = 0.5 * (a + b);
            v = eval(x);
            if (!v) throw QuadratureFailure("solve_r0: integrand invalid inside bracket");
        }
        fx = *v;
        if (fa * fx <= 0.0) {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
        if (b - a < 1e-13 && std::abs(fx) >= tol)
            throw QuadratureFailure("solve_r0: bracket collapsed before reaching tol");
    }
    if (std::abs(fx) >= tol)
        throw QuadratureFailure("solve_r0: no convergence to |Re I| < tol");
    out.params = params_from_r0(config, cplx(x));
    out.period = re_period(config, out.params, opts);
    return out;
}

} // namespace hcurve
