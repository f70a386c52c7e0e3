#pragma once

// Self-contained dense complex-matrix kernel: cyclic-Jacobi Hermitian
// eigendecomposition, one-sided-Jacobi SVD with polar decomposition on top,
// deterministic unitary completion, and the ancilla partial trace.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "krauskit/matrix.hpp"

namespace krauskit {

namespace detail {

inline cx dot(const std::vector<cx>& a, const std::vector<cx>& b) {
    cx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double norm2(const std::vector<cx>& a) {
    double s = 0.0;
    for (const cx& e : a) s += std::norm(e);
    return std::sqrt(s);
}

// Phase-fix a column so its first component of largest modulus is real
// non-negative. Returns the phase that was divided out.
inline cx fix_column_gauge(ComplexMatrix& m, std::size_t j) {
    std::size_t k = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double a = std::abs(m(r, j));
        if (a > best) {
            best = a;
            k = r;
        }
    }
    if (best <= 0.0) return cx{1.0, 0.0};
    const cx phase = m(k, j) / best;
    const cx inv = std::conj(phase);
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, j) *= inv;
    m(k, j) = cx{std::abs(m(k, j)), 0.0};
    return phase;
}

// Entry-wise (re, im) lexicographic order on columns, larger first.
inline bool column_lex_greater(const ComplexMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const cx& x = m(r, a);
        const cx& y = m(r, b);
        if (x.real() != y.real()) return x.real() > y.real();
        if (x.imag() != y.imag()) return x.imag() > y.imag();
    }
    return false;
}

// 2x2 unitary zeroing the off-diagonal entry of the Hermitian block
// [[app, apq], [conj(apq), aqq]]. Returns {c, s, e^{i phi}} for
// J = [[c e^{i phi}, -s e^{i phi}], [s, c]].
struct JacobiRotation {
    double c;
    double s;
    cx phase;
};

inline JacobiRotation make_rotation(double app, double aqq, cx apq) {
    const double absb = std::abs(apq);
    const cx phase = apq / absb;
    const double tau = (aqq - app) / (2.0 * absb);
    const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(tau * tau + 1.0))
                                  : 1.0 / (-tau + std::sqrt(tau * tau + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    return JacobiRotation{c, t * c, phase};
}

constexpr int kMaxJacobiSweeps = 100;

}  // namespace detail

struct EigResult {
    std::vector<double> eigenvalues;  // descending
    ComplexMatrix vectors;            // unitary, i-th column pairs with eigenvalues[i]
};

// Cyclic Jacobi for complex Hermitian matrices. Converges when the
// off-diagonal Frobenius mass drops below eig_tol * max(1, ||A||_F).
inline EigResult hermitian_eig(const ComplexMatrix& a, const Tolerances& tol = {}) {
    tol.check();
    if (!a.is_square())
        throw Error(errc::dimension_mismatch, "hermitian_eig needs a square matrix");
    if (!a.all_finite())
        throw Error(errc::bad_params, "hermitian_eig: non-finite entries");
    const std::size_t n = a.rows();
    const double anorm = a.frobenius_norm();
    if (hermiticity_defect(a) > tol.eq_tol * (1.0 + anorm))
        throw Error(errc::not_hermitian, "hermitian_eig: input is not Hermitian");

    // Work on the Hermitized copy so rotations stay exactly Hermitian.
    ComplexMatrix w(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            w(r, c) = 0.5 * ((a(r, c) + std::conj(a(c, r))));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double threshold = tol.eig_tol * std::max(1.0, anorm);
    int sweep = 0;
    for (; sweep < detail::kMaxJacobiSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * std::norm(w(p, q));
        if (std::sqrt(off) <= threshold) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(w(p, q)) == 0.0) continue;
                const auto rot =
                    detail::make_rotation(w(p, p).real(), w(q, q).real(), w(p, q));
                const cx cp = rot.c * rot.phase;   // J_pp
                const cx sp = -rot.s * rot.phase;  // J_pq
                // Columns: W <- W J, V <- V J.
                for (std::size_t r = 0; r < n; ++r) {
                    const cx wp = w(r, p), wq = w(r, q);
                    w(r, p) = cp * wp + rot.s * wq;
                    w(r, q) = sp * wp + rot.c * wq;
                    const cx vp = v(r, p), vq = v(r, q);
                    v(r, p) = cp * vp + rot.s * vq;
                    v(r, q) = sp * vp + rot.c * vq;
                }
                // Rows: W <- J^dagger W.
                for (std::size_t col = 0; col < n; ++col) {
                    const cx wp = w(p, col), wq = w(q, col);
                    w(p, col) = std::conj(cp) * wp + rot.s * wq;
                    w(q, col) = std::conj(sp) * wp + rot.c * wq;
                }
                w(p, q) = cx{0.0, 0.0};
                w(q, p) = cx{0.0, 0.0};
                w(p, p) = cx{w(p, p).real(), 0.0};
                w(q, q) = cx{w(q, q).real(), 0.0};
            }
        }
    }
    if (sweep == detail::kMaxJacobiSweeps)
        throw Error(errc::no_convergence, "hermitian_eig: sweep cap exceeded");

    std::vector<double> evals(n);
    for (std::size_t i = 0; i < n; ++i) evals[i] = w(i, i).real();
    for (std::size_t j = 0; j < n; ++j) detail::fix_column_gauge(v, j);

    // Sort descending; order degenerate clusters by lexicographic column
    // comparison of the gauged eigenvectors.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t x, std::size_t y) { return evals[x] > evals[y]; });
    const double tie = tol.eig_tol * std::max(1.0, anorm);
    std::size_t lo = 0;
    while (lo < n) {
        std::size_t hi = lo + 1;
        while (hi < n && evals[idx[lo]] - evals[idx[hi]] <= tie) ++hi;
        std::stable_sort(idx.begin() + lo, idx.begin() + hi, [&](std::size_t x, std::size_t y) {
            return detail::column_lex_greater(v, x, y);
        });
        lo = hi;
    }

    EigResult out;
    out.eigenvalues.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = evals[idx[j]];
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, j) = v(r, idx[j]);
    }
    return out;
}

// Deterministic completion of orthonormal columns to a full unitary:
// Gram-Schmidt over standard basis vectors in index order, rejecting
// candidates whose residual norm falls below rank_tol. The given columns are
// copied into the output verbatim.
inline ComplexMatrix complete_to_unitary(const ComplexMatrix& columns,
                                         const Tolerances& tol = {}) {
    tol.check();
    const std::size_t d = columns.rows();
    const std::size_t m = columns.cols();
    if (m > d)
        throw Error(errc::dimension_mismatch, "complete_to_unitary: more columns than rows");
    if (m > 0) {
        const double gram_defect =
            frobenius_distance(columns.adjoint() * columns, ComplexMatrix::identity(m));
        if (gram_defect > tol.eq_tol)
            throw Error(errc::not_orthonormal, "complete_to_unitary: columns not orthonormal");
    }

    std::vector<std::vector<cx>> basis;
    basis.reserve(d);
    for (std::size_t j = 0; j < m; ++j) basis.push_back(columns.column(j));

    for (std::size_t cand = 0; cand < d && basis.size() < d; ++cand) {
        std::vector<cx> v(d, cx{0.0, 0.0});
        v[cand] = cx{1.0, 0.0};
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : basis) {
                const cx coef = detail::dot(u, v);
                for (std::size_t r = 0; r < d; ++r) v[r] -= coef * u[r];
            }
        const double r = detail::norm2(v);
        if (r < tol.rank_tol) continue;
        for (cx& e : v) e /= r;
        basis.push_back(std::move(v));
    }
    if (basis.size() < d)
        throw Error(errc::completion_failure,
                    "complete_to_unitary: ran out of independent candidates");

    ComplexMatrix out(d, d);
    for (std::size_t j = 0; j < d; ++j) out.set_column(j, basis[j]);
    return out;
}

struct SvdResult {
    ComplexMatrix w;                      // left singular vectors (unitary)
    std::vector<double> singular_values;  // descending, >= 0
    ComplexMatrix v;                      // right singular vectors (unitary)
};

// One-sided Jacobi SVD of a square matrix: rotate column pairs until the
// column Gram matrix is diagonal, then read off M = W diag(s) V^dagger.
// Left-singular-vector gauge: first component of largest modulus real
// non-negative, with the matching phase applied to the paired V column.
inline SvdResult svd(const ComplexMatrix& m, const Tolerances& tol = {}) {
    tol.check();
    if (!m.is_square())
        throw Error(errc::dimension_mismatch, "svd: square matrices only");
    if (!m.all_finite())
        throw Error(errc::bad_params, "svd: non-finite entries");
    const std::size_t n = m.rows();

    ComplexMatrix work = m;
    ComplexMatrix v = ComplexMatrix::identity(n);
    // Columns ground down to rounding residue have meaningless directions;
    // freeze them and let the completion step supply their left vectors.
    const double col_floor_sq = std::pow(m.frobenius_norm() * 1e-15, 2);
    int sweep = 0;
    for (; sweep < detail::kMaxJacobiSweeps; ++sweep) {
        double worst = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double gpp = 0.0, gqq = 0.0;
                cx gpq{0.0, 0.0};
                for (std::size_t r = 0; r < n; ++r) {
                    gpp += std::norm(work(r, p));
                    gqq += std::norm(work(r, q));
                    gpq += std::conj(work(r, p)) * work(r, q);
                }
                if (gpp <= col_floor_sq || gqq <= col_floor_sq) continue;
                const double scale = std::sqrt(gpp * gqq);
                if (std::abs(gpq) <= tol.eig_tol * scale) continue;
                worst = std::max(worst, std::abs(gpq) / scale);
                const auto rot = detail::make_rotation(gpp, gqq, gpq);
                const cx cp = rot.c * rot.phase;
                const cx sp = -rot.s * rot.phase;
                for (std::size_t r = 0; r < n; ++r) {
                    const cx wp = work(r, p), wq = work(r, q);
                    work(r, p) = cp * wp + rot.s * wq;
                    work(r, q) = sp * wp + rot.c * wq;
                    const cx vp = v(r, p), vq = v(r, q);
                    v(r, p) = cp * vp + rot.s * vq;
                    v(r, q) = sp * vp + rot.c * vq;
                }
            }
        }
        if (worst == 0.0) break;
    }
    if (sweep == detail::kMaxJacobiSweeps)
        throw Error(errc::no_convergence, "svd: sweep cap exceeded");

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = detail::norm2(work.column(j));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdResult out;
    out.singular_values.resize(n);
    out.w = ComplexMatrix(n, n);
    out.v = ComplexMatrix(n, n);
    const double smax = n > 0 ? sigma[idx[0]] : 0.0;
    const double cutoff = smax * 1e-13 * static_cast<double>(n);
    std::size_t rank = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = idx[j];
        out.singular_values[j] = sigma[src];
        out.v.set_column(j, v.column(src));
        if (sigma[src] > cutoff && sigma[src] > 0.0) {
            auto col = work.column(src);
            for (cx& e : col) e /= sigma[src];
            out.w.set_column(j, col);
            rank = j + 1;
        }
    }
    if (rank < n) {
        // Null directions: complete the observed left vectors deterministically.
        ComplexMatrix prefix(n, rank);
        for (std::size_t j = 0; j < rank; ++j) prefix.set_column(j, out.w.column(j));
        const ComplexMatrix full = complete_to_unitary(prefix, tol);
        for (std::size_t j = rank; j < n; ++j) out.w.set_column(j, full.column(j));
    }
    for (std::size_t j = 0; j < n; ++j) {
        const cx phase = detail::fix_column_gauge(out.w, j);
        const cx inv = std::conj(phase);
        for (std::size_t r = 0; r < n; ++r) out.v(r, j) *= inv;
    }
    return out;
}

struct PolarResult {
    ComplexMatrix h;  // Hermitian PSD
    ComplexMatrix u;  // unitary, m = h * u
};

// Polar factors through the SVD: m = W S V^dagger = (W S W^dagger)(W V^dagger).
inline PolarResult polar_decompose(const ComplexMatrix& m, const Tolerances& tol = {}) {
    const SvdResult f = svd(m, tol);
    const std::size_t n = m.rows();
    ComplexMatrix ws(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < n; ++r) ws(r, j) = f.w(r, j) * f.singular_values[j];
    ComplexMatrix h = ws * f.w.adjoint();
    // Symmetrize away rounding skew.
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r; c < n; ++c) {
            const cx e = 0.5 * (h(r, c) + std::conj(h(c, r)));
            h(r, c) = e;
            h(c, r) = std::conj(e);
        }
    return PolarResult{std::move(h), f.w * f.v.adjoint()};
}

// Trace over the ancilla factor of an (N*K)x(N*K) operator with the
// system-major index convention (i,j) -> i*K + j:
// out_{ik} = sum_j X_{(i,j),(k,j)}.
inline ComplexMatrix partial_trace_ancilla(const ComplexMatrix& x, std::size_t n,
                                           std::size_t k) {
    if (!x.is_square() || x.rows() != n * k)
        throw Error(errc::dimension_mismatch, "partial_trace_ancilla: size is not N*K");
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
            cx s{0.0, 0.0};
            for (std::size_t j = 0; j < k; ++j) s += x(i * k + j, l * k + j);
            out(i, l) = s;
        }
    return out;
}

}  // namespace krauskit
