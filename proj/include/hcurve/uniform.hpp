#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "curve.hpp"

namespace hcurve {

/// K2(x) = 3x^2 + 2(c - s1)x - 3d + s2 for the given curve.
inline Poly k2_poly(const BranchConfig& config, const CurveParams& params) {
    return Poly{-3.0 * params.d + config.s2, 2.0 * (params.c - config.s1), cplx(3.0)};
}

/// The two-sheeted side of the uniformization:
///   Delta^2 = delta2(R) := Pi4'(R)^2 - 4 Pi4(R) K2(R),
/// a degree-6 polynomial whose branch points eps are the branch points of the
/// hyperelliptic surface.
struct HyperCurve {
    Poly k2;
    Poly delta2;
    RootSet eps;
};

inline HyperCurve build_hyper(const CubicCurve& cv, double cluster_tol = 1e-7) {
    HyperCurve hc;
    hc.k2 = k2_poly(cv.config, cv.params);
    Poly dp = cv.config.pi4.derivative();
    hc.delta2 = dp * dp - 4.0 * (cv.config.pi4 * hc.k2);
    hc.eps = roots(hc.delta2, cluster_tol);
    return hc;
}

/// Genus read off the two-sheeted side: delta2 has exact degree 6, and its
/// root multiplicities classify the surface just like dtilde does on the
/// three-sheeted side (six simple roots: genus 2; one double: genus 1).
inline int genus_from_hyper(const HyperCurve& hc) {
    int doubles = 0, simples = 0, higher = 0;
    for (const RootEntry& r : hc.eps.roots) {
        if (r.multiplicity == 1) ++simples;
        else if (r.multiplicity == 2) ++doubles;
        else ++higher;
    }
    if (higher == 0 && doubles == 0 && simples == 6) return 2;
    if (higher == 0 && doubles == 1 && simples == 4) return 1;
    return 0;
}

/// A point carried in both coordinate systems: (z, h) on the cubic curve and
/// (R, Delta) on the hyperelliptic one.
struct SurfacePoint {
    cplx z, h, R, Delta;
};

/// Residual of the cubic equation at (z, h), normalized by the term sizes.
inline double curve_residual(const CubicCurve& cv, cplx z, cplx h) {
    cplx pi = cv.config.pi4(z), p1 = cv.p1(z), p2 = cv.p2(z);
    cplx num = pi * h * h * h - 3.0 * p2 * h + 2.0 * p1;
    double den = std::abs(pi) * std::pow(std::abs(h), 3) + 3.0 * std::abs(p2) * std::abs(h) +
                 2.0 * std::abs(p1) + 1e-300;
    return std::abs(num) / den;
}

/// |Delta^2 - Pi4'(R)^2 + 4 Pi4(R) K2(R)|, the defect of the two-sheeted
/// equation; callers compare it against 1e-9 * (1 + |R|^6).
inline double ultra_residual(const CubicCurve& cv, cplx R, cplx Delta) {
    Poly k2 = k2_poly(cv.config, cv.params);
    cplx dp = cv.config.pi4.derivative()(R);
    return std::abs(Delta * Delta - dp * dp + 4.0 * cv.config.pi4(R) * k2(R));
}

/// (z, h) -> (R, Delta):  R = z - 1/h,  Delta = 2 K2(R)/h + Pi4'(R).
inline SurfacePoint forward(const CubicCurve& cv, cplx z, cplx h) {
    if (std::abs(h) < 1e-14) throw ZeroBranch("forward: |h| below 1e-14");
    if (curve_residual(cv, z, h) > 1e-9)
        throw OffCurve("forward: (z, h) does not satisfy the curve equation");
    SurfacePoint sp;
    sp.z = z;
    sp.h = h;
    sp.R = z - 1.0 / h;
    Poly k2 = k2_poly(cv.config, cv.params);
    sp.Delta = 2.0 * k2(sp.R) / h + cv.config.pi4.derivative()(sp.R);
    return sp;
}

namespace detail {

inline void check_uniform_denominators(const CubicCurve& cv, cplx R) {
    const double guard = 1e-8 * std::max(cv.config.scale, 1.0);
    Poly k2 = k2_poly(cv.config, cv.params);
    // quadratic formula for the zeros of K2
    cplx a = k2.coeff(2), b = k2.coeff(1), c0 = k2.coeff(0);
    cplx disc = std::sqrt(b * b - 4.0 * a * c0);
    for (cplx root : {(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)})
        if (std::abs(R - root) < guard)
            throw SingularDenominator("uniform: R within guard radius of a zero of K2");
    for (cplx p : cv.config.points())
        if (std::abs(R - p) < guard)
            throw SingularDenominator("uniform: R within guard radius of a zero of Pi4");
}

} // namespace detail

/// (R, Delta) -> (z, h):
///   z = R + (-Pi4'(R) + Delta) / (2 K2(R)),  h = -(Pi4'(R) + Delta) / (2 Pi4(R)).
inline SurfacePoint inverse(const CubicCurve& cv, cplx R, cplx Delta) {
    detail::check_uniform_denominators(cv, R);
    if (ultra_residual(cv, R, Delta) > 1e-9 * (1.0 + std::pow(std::abs(R), 6)))
        throw OffCurve("inverse: (R, Delta) does not satisfy the two-sheeted equation");
    SurfacePoint sp;
    sp.R = R;
    sp.Delta = Delta;
    Poly k2 = k2_poly(cv.config, cv.params);
    cplx dp = cv.config.pi4.derivative()(R);
    sp.z = R + (-dp + Delta) / (2.0 * k2(R));
    sp.h = -(dp + Delta) / (2.0 * cv.config.pi4(R));
    return sp;
}

/// Density of h dz in the R variable on a fixed sheet:
///   (Pi4' K2' + 4 K2^2 - 2 K2 Pi4'') / (2 K2 Delta) - K2' / (2 K2).
inline cplx hdz_integrand(const CubicCurve& cv, cplx R, cplx Delta) {
    detail::check_uniform_denominators(cv, R);
    if (std::abs(Delta) < 1e-12 * (1.0 + std::pow(std::abs(R), 3)))
        throw SingularDenominator("hdz_integrand: Delta too close to zero");
    Poly k2 = k2_poly(cv.config, cv.params);
    Poly dpi = cv.config.pi4.derivative();
    cplx K = k2(R), Kp = k2.derivative()(R);
    cplx Pp = dpi(R), Ppp = dpi.derivative()(R);
    return (Pp * Kp + 4.0 * K * K - 2.0 * K * Ppp) / (2.0 * K * Delta) - Kp / (2.0 * K);
}

/// Continuous branch of sqrt(p(.)) transported along user-supplied paths.
///
/// The branch is pinned by the starting value and advanced by sign selection
/// with automatic sub-stepping, never by the principal square root alone.
class SqrtTracker {
public:
    SqrtTracker(const Poly& p, cplx start, cplx start_value)
        : p_(&p), at_(start), value_(start_value) {}

    cplx value() const { return value_; }
    cplx position() const { return at_; }

    /// Move to `next`, assuming the straight segment stays on one sheet.
    cplx advance(cplx next) {
        advance_impl(next, 0);
        return value_;
    }

private:
    void advance_impl(cplx next, int depth) {
        cplx s = std::sqrt((*p_)(next));
        cplx pick = (std::abs(s - value_) <= std::abs(s + value_)) ? s : -s;
        double jump = std::abs(pick - value_);
        double size = std::max(std::abs(pick), std::abs(value_));
        if (jump > 0.5 * size && size > 0.0 && depth < 40) {
            cplx mid = 0.5 * (at_ + next);
            advance_impl(mid, depth + 1);
            advance_impl(next, depth + 1);
            return;
        }
        at_ = next;
        value_ = pick;
    }

    const Poly* p_;
    cplx at_;
    cplx value_;
};

} // namespace hcurve
