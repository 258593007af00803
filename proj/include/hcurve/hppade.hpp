#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <boost/multiprecision/cpp_complex.hpp>

#include "poly.hpp"

namespace hcurve {

/// Simultaneous rational approximation data for the pair of logarithmic
/// Markov functions f_j(z) = log((z - a_j)/(z - b_j)): the common denominator
/// of degree <= n1 + n2 solved from the moment conditions, and its zeros.
struct HPSystem {
    std::array<int, 2> n{0, 0};
    std::array<std::vector<cplx>, 2> moments; // f_{j,k}, k = 0.., scaled variable
    double variable_scale = 1.0;              // z = variable_scale * zeta
    Poly denominator;                         // monic when the index is normal
    RootSet zeros;
    bool non_normal = false;
    int numerical_rank = 0;
    double defect = 0.0; // max residual of the order conditions, scaled basis
};

namespace detail {

/// Null vector of an m x (m+1) matrix by Householder QR with column
/// pivoting, templated so the same factorization runs at any precision.
template <class C>
std::pair<std::vector<C>, int> nullspace_cpqr(std::vector<std::vector<C>> a,
                                              double rank_tol) {
    using real_t = decltype(abs(std::declval<C>()));
    const int m = static_cast<int>(a.size());
    const int n = m + 1;
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) perm[static_cast<std::size_t>(j)] = j;

    auto col_norm2 = [&](int j, int from) {
        real_t s = real_t(0);
        for (int i = from; i < m; ++i) {
            real_t v = abs(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            s += v * v;
        }
        return s;
    };

    int rank = 0;
    real_t first_pivot = real_t(0);
    for (int k = 0; k < m; ++k) {
        int best = k;
        real_t best_norm = col_norm2(k, k);
        for (int j = k + 1; j < n; ++j) {
            real_t cn = col_norm2(j, k);
            if (cn > best_norm) {
                best_norm = cn;
                best = j;
            }
        }
        if (best != k) {
            for (int i = 0; i < m; ++i)
                std::swap(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                          a[static_cast<std::size_t>(i)][static_cast<std::size_t>(best)]);
            std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(best)]);
        }

        real_t norm = sqrt(best_norm);
        if (k == 0) first_pivot = norm;
        if (!(norm > rank_tol * first_pivot)) break;
        ++rank;

        // Householder reflector sending column k below the diagonal to zero.
        C akk = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        real_t aabs = abs(akk);
        C phase = (aabs > real_t(0)) ? akk / C(aabs) : C(1);
        C alpha = -phase * C(norm);
        std::vector<C> v(static_cast<std::size_t>(m - k));
        v[0] = akk - alpha;
        for (int i = k + 1; i < m; ++i)
            v[static_cast<std::size_t>(i - k)] =
                a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        real_t vnorm2 = real_t(0);
        for (const C& x : v) {
            real_t ax = abs(x);
            vnorm2 += ax * ax;
        }
        if (vnorm2 > real_t(0)) {
            for (int j = k; j < n; ++j) {
                C dot = C(0);
                for (int i = k; i < m; ++i)
                    dot += conj(v[static_cast<std::size_t>(i - k)]) *
                           a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                C f = C(2) * dot / C(vnorm2);
                for (int i = k; i < m; ++i)
                    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                        f * v[static_cast<std::size_t>(i - k)];
            }
        }
    }

    // Back-substitute R x = 0 with the free variable at pivot column `rank`.
    std::vector<C> y(static_cast<std::size_t>(n), C(0));
    y[static_cast<std::size_t>(rank)] = C(1);
    for (int i = rank - 1; i >= 0; --i) {
        C s = C(0);
        for (int j = i + 1; j <= rank; ++j)
            s += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                 y[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = -s / a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    std::vector<C> x(static_cast<std::size_t>(n), C(0));
    for (int j = 0; j < n; ++j)
        x[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = y[static_cast<std::size_t>(j)];
    return {x, rank};
}

} // namespace detail

/// Solve the order conditions for the common denominator P of the type-II
/// simultaneous approximants to f_j(z) = log((z - a_j)/(z - b_j)).
///
/// The conditions say the z^-1 .. z^-n_j Laurent coefficients of f_j P
/// vanish; with moments f_{j,k} = (b_j^k - a_j^k)/k they form a homogeneous
/// (n1+n2) x (n1+n2+1) system over the coefficients of P. The system is
/// notoriously ill-conditioned in the monomial basis, so the factorization
/// runs at extended precision; the data enter it exactly.
inline HPSystem solve_hp(cplx a1, cplx b1, cplx a2, cplx b2, std::array<int, 2> n) {
    if (n[0] < 0 || n[1] < 0) throw Error("solve_hp: negative index");
    if (n[0] + n[1] > 40) throw Error("solve_hp: total index above 40 is not supported");
    HPSystem out;
    out.n = n;
    const int N = n[0] + n[1];

    double rho = std::max({std::abs(a1), std::abs(b1), std::abs(a2), std::abs(b2), 1e-30});
    out.variable_scale = rho;
    std::array<std::pair<cplx, cplx>, 2> pts = {{{a1 / rho, b1 / rho}, {a2 / rho, b2 / rho}}};

    int max_k = N + std::max(n[0], n[1]) + 1;
    for (int j = 0; j < 2; ++j) {
        auto [a, b] = pts[static_cast<std::size_t>(j)];
        std::vector<cplx>& mom = out.moments[static_cast<std::size_t>(j)];
        mom.assign(static_cast<std::size_t>(max_k) + 1, cplx(0.0));
        cplx ak = 1.0, bk = 1.0;
        for (int k = 1; k <= max_k; ++k) {
            ak *= a;
            bk *= b;
            mom[static_cast<std::size_t>(k)] = (bk - ak) / static_cast<double>(k);
        }
    }

    if (N == 0) {
        out.denominator = Poly::constant(cplx(1.0));
        out.numerical_rank = 0;
        return out;
    }

    // The system's conditioning amplifies even the final rounding of the
    // moments, so the matrix is formed from the exactly-embedded points at
    // extended precision; the double moments above are reporting metadata.
    using mpc = boost::multiprecision::cpp_complex_50;
    std::array<std::array<mpc, 2>, 2> mp_pts = {
        {{mpc(a1.real(), a1.imag()) / rho, mpc(b1.real(), b1.imag()) / rho},
         {mpc(a2.real(), a2.imag()) / rho, mpc(b2.real(), b2.imag()) / rho}}};
    std::array<std::vector<mpc>, 2> mp_moments;
    for (int j = 0; j < 2; ++j) {
        mp_moments[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(max_k) + 1,
                                                       mpc(0));
        mpc ak(1), bk(1);
        for (int k = 1; k <= max_k; ++k) {
            ak *= mp_pts[static_cast<std::size_t>(j)][0];
            bk *= mp_pts[static_cast<std::size_t>(j)][1];
            mp_moments[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                (bk - ak) / mpc(k);
        }
    }

    std::vector<std::vector<mpc>> rows;
    rows.reserve(static_cast<std::size_t>(N));
    for (int j = 0; j < 2; ++j)
        for (int t = 1; t <= n[static_cast<std::size_t>(j)]; ++t) {
            std::vector<mpc> row(static_cast<std::size_t>(N) + 1);
            auto row_scale = abs(mp_moments[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)]);
            for (int mcol = 0; mcol <= N; ++mcol) {
                auto m = abs(
                    mp_moments[static_cast<std::size_t>(j)][static_cast<std::size_t>(t + mcol)]);
                if (m > row_scale) row_scale = m;
            }
            if (!(row_scale > 0)) row_scale = 1;
            for (int mcol = 0; mcol <= N; ++mcol)
                row[static_cast<std::size_t>(mcol)] =
                    mp_moments[static_cast<std::size_t>(j)][static_cast<std::size_t>(t + mcol)] /
                    row_scale;
            rows.push_back(std::move(row));
        }

    auto [null_vec, rank] = detail::nullspace_cpqr<mpc>(std::move(rows), 1e-40);
    out.numerical_rank = rank;
    if (rank < N) out.non_normal = true;

    std::vector<cplx> scaled(static_cast<std::size_t>(N) + 1);
    double big = 0.0;
    for (int k = 0; k <= N; ++k) {
        cplx c(static_cast<double>(null_vec[static_cast<std::size_t>(k)].real()),
               static_cast<double>(null_vec[static_cast<std::size_t>(k)].imag()));
        scaled[static_cast<std::size_t>(k)] = c;
        big = std::max(big, std::abs(c));
    }
    for (auto& c : scaled) c /= big;

    // order-condition defect in the scaled basis (coefficient max-norm 1)
    for (int j = 0; j < 2; ++j)
        for (int t = 1; t <= n[static_cast<std::size_t>(j)]; ++t) {
            cplx acc(0.0);
            for (int mcol = 0; mcol <= N; ++mcol)
                acc += scaled[static_cast<std::size_t>(mcol)] *
                       out.moments[static_cast<std::size_t>(j)][static_cast<std::size_t>(t + mcol)];
            out.defect = std::max(out.defect, std::abs(acc));
        }

    // Degree decision, monicization, and root finding all happen in the
    // scaled variable, where the coefficients are O(1); the z-basis monomial
    // representation can legitimately span ten orders of magnitude.
    bool full_degree = std::abs(scaled.back()) > 1e-12;
    if (!full_degree) out.non_normal = true;

    std::vector<cplx> zcoef(static_cast<std::size_t>(N) + 1);
    if (full_degree) {
        // c_k = (x_k / x_N) rho^(N-k) gives the monic z-basis coefficients
        cplx lead = scaled.back();
        double rpow = 1.0;
        for (int k = N; k >= 0; --k) {
            zcoef[static_cast<std::size_t>(k)] = scaled[static_cast<std::size_t>(k)] / lead * rpow;
            rpow *= rho;
        }
    } else {
        double rpow = 1.0;
        for (int k = 0; k <= N; ++k) {
            zcoef[static_cast<std::size_t>(k)] = scaled[static_cast<std::size_t>(k)] / rpow;
            rpow *= rho;
        }
    }
    out.denominator = Poly(std::move(zcoef));

    Poly scaled_poly(std::move(scaled));
    if (scaled_poly.degree() >= 1) {
        RootSet rs = roots(scaled_poly);
        for (RootEntry& r : rs.roots) r.value *= rho;
        out.zeros = rs; // residual_bound refers to the scaled-basis polynomial
    }
    return out;
}

} // namespace hcurve
