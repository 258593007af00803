#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace hcurve {

using cplx = std::complex<double>;

/// Dense univariate polynomial over the complex numbers.
///
/// Coefficients are stored in ascending degree order. The zero polynomial is
/// the empty coefficient vector; otherwise the leading coefficient is nonzero
/// after construction (trailing entries below 1e-12 of the largest coefficient
/// magnitude are dropped).
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<cplx> coeffs) : c_(coeffs) { trim(); }

    static Poly constant(cplx a) { return Poly(std::vector<cplx>{a}); }

    /// The monic polynomial whose root multiset is `roots`.
    static Poly from_roots(const std::vector<cplx>& roots) {
        std::vector<cplx> a{cplx(1.0)};
        for (cplx r : roots) {
            std::vector<cplx> next(a.size() + 1, cplx(0.0));
            for (std::size_t k = 0; k < a.size(); ++k) {
                next[k + 1] += a[k];
                next[k] -= r * a[k];
            }
            a = std::move(next);
        }
        return Poly(std::move(a));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<cplx>& coeffs() const { return c_; }
    cplx coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : cplx(0.0);
    }
    cplx lead() const { return c_.empty() ? cplx(0.0) : c_.back(); }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const cplx& a : c_) m = std::max(m, std::abs(a));
        return m;
    }

    /// Horner evaluation.
    cplx operator()(cplx z) const {
        cplx acc(0.0);
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * z + c_[k];
        return acc;
    }

    /// Value and derivative in one Horner pass.
    std::pair<cplx, cplx> eval_with_derivative(cplx z) const {
        cplx p(0.0), dp(0.0);
        for (std::size_t k = c_.size(); k-- > 0;) {
            dp = dp * z + p;
            p = p * z + c_[k];
        }
        return {p, dp};
    }

    /// Sum of |c_k| |z|^k, the natural backward-error scale at z.
    double eval_magnitude(cplx z) const {
        double az = std::abs(z), acc = 0.0, pw = 1.0;
        for (const cplx& a : c_) {
            acc += std::abs(a) * pw;
            pw *= az;
        }
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<cplx> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k)
            d[k - 1] = c_[k] * static_cast<double>(k);
        return Poly(std::move(d));
    }

    /// Synthetic division by (z - r); the remainder is discarded.
    Poly deflate(cplx r) const {
        if (c_.size() <= 1) return Poly();
        std::vector<cplx> q(c_.size() - 1);
        cplx acc = c_.back();
        for (std::size_t k = c_.size() - 1; k-- > 0;) {
            q[k] = acc;
            acc = c_[k] + acc * r;
        }
        return Poly(std::move(q));
    }

    Poly operator+(const Poly& o) const {
        std::vector<cplx> out(std::max(c_.size(), o.c_.size()), cplx(0.0));
        for (std::size_t k = 0; k < c_.size(); ++k) out[k] += c_[k];
        for (std::size_t k = 0; k < o.c_.size(); ++k) out[k] += o.c_[k];
        return Poly(std::move(out));
    }
    Poly operator-(const Poly& o) const {
        std::vector<cplx> out(std::max(c_.size(), o.c_.size()), cplx(0.0));
        for (std::size_t k = 0; k < c_.size(); ++k) out[k] += c_[k];
        for (std::size_t k = 0; k < o.c_.size(); ++k) out[k] -= o.c_[k];
        return Poly(std::move(out));
    }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<cplx> out(c_.size() + o.c_.size() - 1, cplx(0.0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j)
                out[i + j] += c_[i] * o.c_[j];
        return Poly(std::move(out));
    }
    Poly operator*(cplx a) const {
        std::vector<cplx> out(c_);
        for (cplx& x : out) x *= a;
        return Poly(std::move(out));
    }
    friend Poly operator*(cplx a, const Poly& p) { return p * a; }
    Poly operator-() const { return (*this) * cplx(-1.0); }

private:
    // Relative drop tolerance for trailing (leading-degree) coefficients.
    static constexpr double kDropTol = 1e-12;

    void trim() {
        double m = max_abs_coeff();
        double tol = kDropTol * m;
        while (!c_.empty() && std::abs(c_.back()) <= tol) c_.pop_back();
    }

    std::vector<cplx> c_;
};

struct RootEntry {
    cplx value;
    int multiplicity;
};

/// Roots of a polynomial with cluster-detected multiplicities.
struct RootSet {
    std::vector<RootEntry> roots;
    double residual_bound = 0.0;

    int total_multiplicity() const {
        int m = 0;
        for (const RootEntry& r : roots) m += r.multiplicity;
        return m;
    }

    std::vector<cplx> values() const {
        std::vector<cplx> v;
        v.reserve(roots.size());
        for (const RootEntry& r : roots) v.push_back(r.value);
        return v;
    }

    std::vector<cplx> simple_values() const {
        std::vector<cplx> v;
        for (const RootEntry& r : roots)
            if (r.multiplicity == 1) v.push_back(r.value);
        return v;
    }
};

namespace detail {

/// One Aberth-Ehrlich sweep; returns the largest correction applied.
inline double aberth_sweep(const Poly& p, std::vector<cplx>& zs) {
    const std::size_t n = zs.size();
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        auto [pv, dv] = p.eval_with_derivative(zs[k]);
        if (pv == cplx(0.0)) continue;
        cplx newton = (dv != cplx(0.0)) ? pv / dv : cplx(1e-3, 1e-3);
        cplx sum(0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            cplx diff = zs[k] - zs[j];
            if (std::abs(diff) < 1e-300) diff = cplx(1e-30, 1e-30);
            sum += cplx(1.0) / diff;
        }
        cplx denom = cplx(1.0) - newton * sum;
        cplx step = (std::abs(denom) > 1e-300) ? newton / denom : newton;
        zs[k] -= step;
        worst = std::max(worst, std::abs(step) / (1.0 + std::abs(zs[k])));
    }
    return worst;
}

} // namespace detail

/// All complex roots of p with multiplicities detected by relative clustering.
///
/// Roots closer than cluster_tol*(1 + |r|) are merged into one entry whose
/// value is the cluster mean and whose multiplicity is the cluster size.
/// Throws NonConvergence when the simultaneous iteration cannot reach the
/// residual target, which signals ill-conditioned input.
inline RootSet roots(const Poly& p, double cluster_tol = 1e-7) {
    if (p.is_zero() || p.degree() < 1) throw Error("roots: polynomial must have degree >= 1");
    if (cluster_tol <= 0.0) throw Error("roots: cluster_tol must be positive");

    // Peel off exact zero roots so the iteration works on a nonzero constant term.
    std::vector<cplx> work = p.coeffs();
    int zero_mult = 0;
    while (work.size() > 1 && work.front() == cplx(0.0)) {
        work.erase(work.begin());
        ++zero_mult;
    }
    Poly q{std::vector<cplx>(work)};
    const int n = q.degree();

    std::vector<cplx> zs;
    if (n >= 1) {
        // Cauchy bound for the initial circle, angles spread to avoid symmetry locks.
        double bound = 0.0;
        for (int k = 0; k < n; ++k)
            bound = std::max(bound, std::abs(q.coeff(k) / q.lead()));
        double radius = 1.0 + bound;
        zs.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            double ang = 2.0 * std::numbers::pi * k / n + 0.3968;
            double rad = radius * (0.6 + 0.4 * (k + 1.0) / n);
            zs[static_cast<std::size_t>(k)] = rad * std::exp(cplx(0.0, ang));
        }

        const int max_iter = 400;
        bool done = false;
        for (int it = 0; it < max_iter; ++it) {
            double worst = detail::aberth_sweep(q, zs);
            if (worst < 1e-15) {
                done = true;
                break;
            }
        }
        if (!done) {
            // Accept if residuals are already at backward-error level.
            for (const cplx& z : zs) {
                double res = std::abs(q(z));
                if (res > 1e-10 * (1.0 + q.eval_magnitude(z)))
                    throw NonConvergence("roots: residual target not reached");
            }
        }
    }

    for (int k = 0; k < zero_mult; ++k) zs.push_back(cplx(0.0));

    // Single-linkage clustering under the relative tolerance.
    const std::size_t m = zs.size();
    std::vector<std::size_t> parent(m);
    for (std::size_t i = 0; i < m; ++i) parent[i] = i;
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            double d = std::abs(zs[i] - zs[j]);
            double lim = cluster_tol * (1.0 + 0.5 * (std::abs(zs[i]) + std::abs(zs[j])));
            if (d <= lim) parent[find(i)] = find(j);
        }

    RootSet out;
    std::vector<char> seen(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t r = find(i);
        if (seen[r]) continue;
        seen[r] = 1;
        cplx mean(0.0);
        int count = 0;
        for (std::size_t j = 0; j < m; ++j)
            if (find(j) == r) {
                mean += zs[j];
                ++count;
            }
        mean /= static_cast<double>(count);
        out.roots.push_back({mean, count});
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const RootEntry& a, const RootEntry& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    for (const RootEntry& r : out.roots)
        out.residual_bound = std::max(out.residual_bound, std::abs(p(r.value)));
    return out;
}

} // namespace hcurve
