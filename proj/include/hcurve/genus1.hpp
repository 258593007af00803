#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "uniform.hpp"

namespace hcurve {

/// The R0-parametrization data: c1 = 2(c - s1), c2 = s2 - 3d, chosen so that
/// delta2 has a double zero at R0.
struct Genus1Params {
    cplx R0;
    cplx c1;
    cplx c2;
    CurveParams params;
};

/// Closed-form (c, d) forcing a double zero of delta2 at R0; the resulting
/// curve has genus <= 1 (special R0 can degenerate further to genus 0).
inline Genus1Params params_from_r0(const BranchConfig& config, cplx R0) {
    const Poly& pi4 = config.pi4;
    Poly d1 = pi4.derivative();
    Poly d2 = d1.derivative();
    cplx P = pi4(R0);
    if (std::abs(P) < 1e-10 * (1.0 + pi4.eval_magnitude(R0)))
        throw PoleAtR0("params_from_r0: Pi4(R0) vanishes");
    cplx Pp = d1(R0), Ppp = d2(R0);
    cplx P2 = P * P;
    cplx Pp3 = Pp * Pp * Pp;
    Genus1Params g;
    g.R0 = R0;
    g.c1 = (8.0 * P * Pp * Ppp - 96.0 * R0 * P2 - 4.0 * Pp3) / (16.0 * P2);
    g.c2 = (-8.0 * R0 * P * Pp * Ppp + 48.0 * R0 * R0 * P2 + 4.0 * Pp3 * R0 + 4.0 * Pp * Pp * P) /
           (16.0 * P2);
    g.params.c = config.s1 + g.c1 / 2.0;
    g.params.d = (config.s2 - g.c2) / 3.0;
    return g;
}

/// K2 expanded in powers of (R - R0). The double-zero conditions
/// delta2(R0) = delta2'(R0) = 0 fix
///   K2(R0)  = Pi4'^2 / (4 Pi4),
///   K2'(R0) = (2 Pi4 Pi4' Pi4'' - Pi4'^3) / (4 Pi4^2),
/// everything evaluated at R0.
inline Poly k2_from_r0(const BranchConfig& config, cplx R0) {
    const Poly& pi4 = config.pi4;
    Poly d1 = pi4.derivative();
    cplx P = pi4(R0);
    if (std::abs(P) < 1e-10 * (1.0 + pi4.eval_magnitude(R0)))
        throw PoleAtR0("k2_from_r0: Pi4(R0) vanishes");
    cplx Pp = d1(R0), Ppp = d1.derivative()(R0);
    cplx denom = 4.0 * P * P;
    Poly shifted{-R0, cplx(1.0)}; // (x - R0)
    Poly out = (12.0 * P * P / denom) * (shifted * shifted) +
               ((2.0 * P * Pp * Ppp - Pp * Pp * Pp) / denom) * shifted +
               Poly::constant(P * Pp * Pp / denom);
    return out;
}

/// Central-symmetric configuration {a, -a, b, -b}: c = 0 and
/// d = -(a^2 + b^2)/3 put the double zero of dtilde at infinity.
inline CurveParams symmetric_params(cplx a, cplx b) {
    double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    if (std::abs(a) < 1e-12 * scale || std::abs(b) < 1e-12 * scale ||
        std::abs(a - b) < 1e-12 * scale || std::abs(a + b) < 1e-12 * scale)
        throw DegenerateInput("symmetric_params: {a, -a, b, -b} must be four distinct points");
    return CurveParams{cplx(0.0), -(a * a + b * b) / 3.0};
}

/// Soft edges of the symmetric genus-1 curve:
///   +- (a^2 + b^2)^2 / (3 sqrt(a^6 + b^6)),
/// with the square root branch of nonnegative real part.
inline std::pair<cplx, cplx> soft_edges_symmetric(cplx a, cplx b) {
    cplx a2 = a * a, b2 = b * b;
    cplx s = a2 * a2 * a2 + b2 * b2 * b2;
    double mag = std::pow(std::abs(a), 6) + std::pow(std::abs(b), 6);
    if (std::abs(s) < 1e-12 * (mag + 1e-300))
        throw DegenerateInput("soft_edges_symmetric: a^6 + b^6 vanishes");
    cplx root = std::sqrt(s);
    if (root.real() < 0.0) root = -root;
    cplx edge = (a2 + b2) * (a2 + b2) / (3.0 * root);
    return {edge, -edge};
}

/// The double root of a degree-6 delta2 with one double zero: the root of
/// delta2' at which delta2 itself is smallest in the backward-error sense.
inline cplx extract_double_root(const Poly& delta2) {
    Poly dp = delta2.derivative();
    if (dp.degree() < 1) throw Error("extract_double_root: derivative is constant");
    RootSet rs = roots(dp, 1e-12);
    cplx best(0.0);
    double best_score = 1e300;
    for (const RootEntry& r : rs.roots) {
        double score = std::abs(delta2(r.value)) / (1.0 + delta2.eval_magnitude(r.value));
        if (score < best_score) {
            best_score = score;
            best = r.value;
        }
    }
    return best;
}

} // namespace hcurve
