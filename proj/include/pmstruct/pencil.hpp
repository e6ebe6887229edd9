#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "pmstruct/types.hpp"

// Matrix pencils M - x*N and their Kronecker structure.  The central routine,
// klf_reduce, applies unitary row/column transformations to produce the
// block-upper-triangular Kronecker-like form
//
//     [ Mr - x Nr      *            *           *       ]
//     [    0       Minf - x Ninf    *           *       ]
//     [    0           0        Mf - x Nf       *       ]
//     [    0           0            0        Ml - x Nl  ]
//
// where the right block has full row rank for every x, the infinite block is
// regular with nilpotent N-part, Nf is invertible, and the left block has full
// column rank for every x.  Rank decisions are SVD-based throughout.

namespace pmstruct {

template <class S>
struct Pencil {
    Mat<S> M, N;
    Pencil() = default;
    Pencil(Mat<S> m, Mat<S> n) : M(std::move(m)), N(std::move(n)) {
        if (M.rows() != N.rows() || M.cols() != N.cols())
            throw InconsistentDims("pencil matrices differ in shape");
    }
    Eigen::Index rows() const { return M.rows(); }
    Eigen::Index cols() const { return M.cols(); }
};

namespace detail {

// Unitary Vl with X*Vl = [0 | Xhat], Xhat of full column rank; returns rank.
// thr is an absolute singular-value threshold: it must be tied to the scale of
// the pencil the staircase started from, not to this sub-block, or blocks that
// should vanish entirely would still be judged full-rank relative to their own
// roundoff-level largest singular value.
template <class S>
std::pair<Mat<S>, Eigen::Index> col_compress_zeros_first(const Mat<S>& X, double thr) {
    const Eigen::Index n = X.cols();
    if (X.rows() == 0 || n == 0)
        return {Mat<S>::Identity(n, n), 0};
    Eigen::JacobiSVD<Mat<S>> svd(X, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > thr) ++r;
    Mat<S> V(n, n);
    V.leftCols(n - r) = svd.matrixV().rightCols(n - r);
    V.rightCols(r) = svd.matrixV().leftCols(r);
    return {std::move(V), r};
}

// Unitary Ul with Ul^H * X = [Xhat; 0], Xhat of full row rank; returns rank.
template <class S>
std::pair<Mat<S>, Eigen::Index> row_compress_top(const Mat<S>& X, double thr) {
    const Eigen::Index m = X.rows();
    if (m == 0 || X.cols() == 0)
        return {Mat<S>::Identity(m, m), 0};
    Eigen::JacobiSVD<Mat<S>> svd(X, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > thr) ++r;
    return {svd.matrixU(), r};
}

// Absolute thresholds for one staircase run, anchored per matrix to the
// window norms at entry.  A zero window gives thr = atol, and the strict '>'
// comparison then still classifies everything as negligible.  Callers whose
// input carries correlated roundoff across the two matrices (e.g. shifted
// pencils, where the N-part is a near-cancellation) must raise atol to the
// noise level themselves; relative to its own norm a pure-noise block would
// pass as full rank.
template <class S>
std::pair<double, double> stair_thresholds(const Mat<S>& Mt, const Mat<S>& Nt, Eigen::Index r0,
                                           Eigen::Index c0, Eigen::Index h, Eigen::Index w,
                                           const Tol& tol) {
    const double rt = rank_rtol(tol, h, w);
    const double thrM = std::max(tol.atol, rt * Mt.block(r0, c0, h, w).norm());
    const double thrN = std::max(tol.atol, rt * Nt.block(r0, c0, h, w).norm());
    return {thrM, thrN};
}

}  // namespace detail

// Dimension sequence of a staircase: step i contributes nu[i] pivot columns
// (resp. rows) and rho[i] full-rank rows (resp. columns).
struct StairDims {
    std::vector<Eigen::Index> nu, rho;
};

// Right/infinite staircase ("phase A") applied in place to the window
// [r0, r0+h) x [c0, c0+w) of (Mt, Nt), with optional accumulation of the global
// transformations (Mt = U^H M V is maintained).  Per step: the columns of the
// N-block are compressed so that nu zero columns lead; those x-free columns of
// the M-block are row-compressed to a full-row-rank block of rho rows.  The
// window then shrinks to the untouched trailing part.  Counting rule:
//   #(right minimal indices == i-1)        = nu_i - rho_i
//   #(infinite elementary divisors == i)   = rho_i - nu_{i+1}.
template <class S>
StairDims stair_right(Mat<S>& Mt, Mat<S>& Nt, Mat<S>* U, Mat<S>* V, Eigen::Index r0,
                      Eigen::Index c0, Eigen::Index h, Eigen::Index w, const Tol& tol) {
    StairDims d;
    const auto [thrM, thrN] = detail::stair_thresholds<S>(Mt, Nt, r0, c0, h, w, tol);
    while (w > 0) {
        auto [Vl, rN] = detail::col_compress_zeros_first<S>(Nt.block(r0, c0, h, w), thrN);
        const Eigen::Index nu = w - rN;
        if (nu == 0) break;
        Mt.middleCols(c0, w) *= Vl;
        Nt.middleCols(c0, w) *= Vl;
        if (V) V->middleCols(c0, w) *= Vl;

        auto [Ul, rho] = detail::row_compress_top<S>(Mt.block(r0, c0, h, nu), thrM);
        Mt.middleRows(r0, h) = Ul.adjoint() * Mt.middleRows(r0, h);
        Nt.middleRows(r0, h) = Ul.adjoint() * Nt.middleRows(r0, h);
        if (U) U->middleCols(r0, h) *= Ul;

        d.nu.push_back(nu);
        d.rho.push_back(rho);
        r0 += rho;
        h -= rho;
        c0 += nu;
        w -= nu;
    }
    return d;
}

// Left/infinite staircase ("phase B"), the dual of stair_right: rows of the
// N-block with no x-dependence are isolated at the bottom (nu of them) and the
// corresponding M-rows are column-compressed to a full-column-rank block of
// rho columns at the right edge.  Counting rule:
//   #(left minimal indices == i-1)         = nu_i - rho_i
//   #(infinite elementary divisors == i)   = rho_i - nu_{i+1}.
template <class S>
StairDims stair_left(Mat<S>& Mt, Mat<S>& Nt, Mat<S>* U, Mat<S>* V, Eigen::Index r0,
                     Eigen::Index c0, Eigen::Index h, Eigen::Index w, const Tol& tol) {
    StairDims d;
    const auto [thrM, thrN] = detail::stair_thresholds<S>(Mt, Nt, r0, c0, h, w, tol);
    while (h > 0) {
        auto [Ul, rN] = detail::row_compress_top<S>(Nt.block(r0, c0, h, w), thrN);
        const Eigen::Index nu = h - rN;
        if (nu == 0) break;
        Mt.middleRows(r0, h) = Ul.adjoint() * Mt.middleRows(r0, h);
        Nt.middleRows(r0, h) = Ul.adjoint() * Nt.middleRows(r0, h);
        if (U) U->middleCols(r0, h) *= Ul;

        auto [Vl, rho] = detail::col_compress_zeros_first<S>(
            Mt.block(r0 + h - nu, c0, nu, w), thrM);
        Mt.middleCols(c0, w) *= Vl;
        Nt.middleCols(c0, w) *= Vl;
        if (V) V->middleCols(c0, w) *= Vl;

        d.nu.push_back(nu);
        d.rho.push_back(rho);
        h -= nu;
        w -= rho;
    }
    return d;
}

namespace detail {
// Translate staircase dimensions into minimal indices and divisor degrees.
inline void stair_counts(const StairDims& d, std::vector<int>* indices,
                         std::vector<int>* divisor_degrees) {
    const size_t t = d.nu.size();
    for (size_t i = 0; i < t; ++i) {
        const Eigen::Index idx_count = d.nu[i] - d.rho[i];
        for (Eigen::Index c = 0; c < idx_count; ++c)
            if (indices) indices->push_back(static_cast<int>(i));
        const Eigen::Index next_nu = (i + 1 < t) ? d.nu[i + 1] : 0;
        for (Eigen::Index c = 0; c < d.rho[i] - next_nu; ++c)
            if (divisor_degrees) divisor_degrees->push_back(static_cast<int>(i) + 1);
    }
    if (indices) std::sort(indices->begin(), indices->end());
    if (divisor_degrees) std::sort(divisor_degrees->begin(), divisor_degrees->end());
}
}  // namespace detail

template <class S>
struct KLFResult {
    Mat<S> Mt, Nt;  // Mt = U^H M V, Nt = U^H N V
    Mat<S> U, V;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> rightBlockDims;  // (nu_i, rho_i)
    std::vector<int> infDivisorDegrees;  // degrees s_i >= 1, ascending
    Eigen::Index nf = 0;
    Mat<S> Mf, Nf;  // regular finite block, Nf invertible
    std::vector<std::pair<Eigen::Index, Eigen::Index>> leftBlockDims;  // (nu_i, rho_i)

    std::vector<int> eps, eta;  // right/left minimal indices, ascending
    Eigen::Index rank = 0;      // normal rank
    Eigen::Index n_inf = 0;     // order of the infinite block (sum of s_i)

    // Offsets of the finite block inside (Mt, Nt).
    Eigen::Index f_row = 0, f_col = 0;
};

template <class S>
KLFResult<S> klf_reduce(const Mat<S>& M, const Mat<S>& N, const Tol& tol = {}) {
    if (M.rows() != N.rows() || M.cols() != N.cols())
        throw InconsistentDims("pencil matrices differ in shape");
    const Eigen::Index m = M.rows(), n = M.cols();

    KLFResult<S> R;
    R.Mt = M;
    R.Nt = N;
    R.U = Mat<S>::Identity(m, m);
    R.V = Mat<S>::Identity(n, n);

    // Stage 1: peel the combined right-singular + infinite part into the
    // leading block; the trailing block keeps full-column-rank N.
    const StairDims dA = stair_right<S>(R.Mt, R.Nt, &R.U, &R.V, 0, 0, m, n, tol);
    Eigen::Index mri = 0, nri = 0;
    for (size_t i = 0; i < dA.nu.size(); ++i) {
        mri += dA.rho[i];
        nri += dA.nu[i];
    }
    detail::stair_counts(dA, &R.eps, &R.infDivisorDegrees);
    for (size_t i = 0; i < dA.nu.size(); ++i)
        R.rightBlockDims.emplace_back(dA.nu[i], dA.rho[i]);

    // Stage 2: within the leading block, split off the infinite part to its
    // trailing corner, leaving the pure right-singular block in front.  The
    // block has no left structure, so every step here satisfies nu == rho.
    stair_left<S>(R.Mt, R.Nt, &R.U, &R.V, 0, 0, mri, nri, tol);

    // Stage 3: split the trailing (finite + left) block.
    const StairDims dL = stair_left<S>(R.Mt, R.Nt, &R.U, &R.V, mri, nri, m - mri, n - nri, tol);
    detail::stair_counts(dL, &R.eta, nullptr);
    for (size_t i = 0; i < dL.nu.size(); ++i)
        R.leftBlockDims.emplace_back(dL.nu[i], dL.rho[i]);

    Eigen::Index l_rows = 0, l_cols = 0;
    for (size_t i = 0; i < dL.nu.size(); ++i) {
        l_rows += dL.nu[i];
        l_cols += dL.rho[i];
    }

    for (int s : R.infDivisorDegrees) R.n_inf += s;
    R.nf = std::min((m - mri) - l_rows, (n - nri) - l_cols);
    R.f_row = mri;
    R.f_col = nri;
    R.Mf = R.Mt.block(mri, nri, R.nf, R.nf);
    R.Nf = R.Nt.block(mri, nri, R.nf, R.nf);

    R.rank = mri + R.nf + l_cols;
    return R;
}

// Infinite elementary divisor degrees alone (no transform accumulation).
template <class S>
std::vector<int> inf_divisor_degrees(Mat<S> M, Mat<S> N, const Tol& tol = {}) {
    const StairDims d = stair_right<S>(M, N, nullptr, nullptr, 0, 0, M.rows(), M.cols(), tol);
    std::vector<int> deg;
    detail::stair_counts(d, nullptr, &deg);
    return deg;
}

// Partial multiplicities of the finite point lam0 in the pencil M - x*N: the
// infinite elementary divisors of the shifted pencil Nf - y*(Mf - lam0*Nf)
// built from the finite block of the KLF.  Empty when lam0 is no eigenvalue.
// When lam0 is (close to) an eigenvalue the subtraction cancels, so the
// shifted N-part consists partly of roundoff; rank decisions below the
// cancellation noise are floored out via atol.
template <class S, class X>
std::vector<int> partial_mults_at(const Mat<S>& Mf, const Mat<S>& Nf, const X& lam0,
                                  const Tol& tol = {}) {
    using W = std::conditional_t<scalar_traits<S>::is_complex || std::is_same_v<X, cplx>, cplx, S>;
    Mat<W> Mw = Nf.template cast<W>();
    Mat<W> Nw = Mf.template cast<W>() - W(lam0) * Nf.template cast<W>();
    Tol t2 = tol;
    t2.atol = std::max(t2.atol, 100.0 * eps * std::max(Mf.norm(), Nf.norm()));
    return inf_divisor_degrees<W>(std::move(Mw), std::move(Nw), t2);
}

// Generalized eigenvalues of a regular block with invertible N (as guaranteed
// for the finite block of the KLF).  Real pencils go through the QZ-class
// solver; complex ones through the equivalent standard problem N^{-1} M.
template <class S>
std::vector<cplx> regular_block_eigenvalues(const Mat<S>& Mf, const Mat<S>& Nf) {
    std::vector<cplx> out;
    if (Mf.rows() == 0) return out;
    if constexpr (scalar_traits<S>::is_complex) {
        Eigen::ComplexEigenSolver<Mat<cplx>> es(Nf.partialPivLu().solve(Mf));
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            out.push_back(es.eigenvalues()(i));
    } else {
        Eigen::GeneralizedEigenSolver<Mat<double>> ges(Mf, Nf);
        for (Eigen::Index i = 0; i < ges.alphas().size(); ++i)
            out.push_back(ges.alphas()(i) / cplx(ges.betas()(i)));
    }
    std::sort(out.begin(), out.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

struct EigenvalueCluster {
    cplx value;
    std::vector<int> mults;  // nonzero partial multiplicities, ascending
};

struct KroneckerStructure {
    Eigen::Index r = 0;                      // normal rank
    std::vector<int> eps, eta;               // minimal indices, ascending
    std::vector<EigenvalueCluster> finiteEigs;
    std::vector<int> inf_mults;              // infinite partial multiplicities s_i >= 1

    Eigen::Index delta_fin() const {
        Eigen::Index s = 0;
        for (const auto& c : finiteEigs)
            for (int v : c.mults) s += v;
        return s;
    }
    Eigen::Index delta_inf() const {
        Eigen::Index s = 0;
        for (int v : inf_mults) s += v;
        return s;
    }
    Eigen::Index mu() const {
        Eigen::Index s = 0;
        for (int v : eps) s += v;
        for (int v : eta) s += v;
        return s;
    }
};

namespace detail {

// Greedy clustering of a sorted eigenvalue list.  Multiple eigenvalues computed
// in floating point scatter like eps^(1/s) around the true value, so the
// default radius is sqrt(eps)-scaled rather than eps-scaled; pkstruct widens it
// further if the per-cluster multiplicities fail to account for every
// eigenvalue of the finite block.
inline std::vector<std::vector<cplx>> cluster_eigenvalues(const std::vector<cplx>& eigs,
                                                          double radius_scale) {
    std::vector<std::vector<cplx>> clusters;
    for (const cplx& e : eigs) {
        bool placed = false;
        for (auto& c : clusters) {
            cplx mean(0, 0);
            for (const cplx& v : c) mean += v;
            mean /= static_cast<double>(c.size());
            if (std::abs(e - mean) <= radius_scale * (1.0 + std::abs(mean))) {
                c.push_back(e);
                placed = true;
                break;
            }
        }
        if (!placed) clusters.push_back({e});
    }
    return clusters;
}

}  // namespace detail

// Full Kronecker structure of a pencil.  clusterTol < 0 selects the default
// radius 100*sqrt(eps)*(1+|lam|).
template <class S>
KroneckerStructure pkstruct(const Mat<S>& M, const Mat<S>& N, const Tol& tol = {},
                            double clusterTol = -1.0) {
    const KLFResult<S> k = klf_reduce<S>(M, N, tol);
    KroneckerStructure out;
    out.r = k.rank;
    out.eps = k.eps;
    out.eta = k.eta;
    out.inf_mults = k.infDivisorDegrees;

    const std::vector<cplx> eigs = regular_block_eigenvalues<S>(k.Mf, k.Nf);
    double radius = clusterTol >= 0.0 ? clusterTol : 100.0 * std::sqrt(eps);
    for (int attempt = 0; attempt < 4; ++attempt) {
        auto clusters = detail::cluster_eigenvalues(eigs, radius);
        std::vector<EigenvalueCluster> result;
        Eigen::Index total = 0;
        for (const auto& c : clusters) {
            cplx mean(0, 0);
            for (const cplx& v : c) mean += v;
            mean /= static_cast<double>(c.size());
            EigenvalueCluster ec;
            ec.value = mean;
            if constexpr (scalar_traits<S>::is_complex) {
                ec.mults = partial_mults_at<S, cplx>(k.Mf, k.Nf, mean, tol);
            } else {
                // Keep real representatives real so the shifted pencil stays real.
                if (std::abs(mean.imag()) <= radius * (1.0 + std::abs(mean))) {
                    ec.value = cplx(mean.real(), 0.0);
                    ec.mults = partial_mults_at<S, double>(k.Mf, k.Nf, mean.real(), tol);
                } else {
                    ec.mults = partial_mults_at<S, cplx>(k.Mf, k.Nf, mean, tol);
                }
            }
            for (int v : ec.mults) total += v;
            result.push_back(std::move(ec));
        }
        if (total == k.nf || attempt == 3) {
            out.finiteEigs = std::move(result);
            break;
        }
        radius *= 100.0;  // clusters were split too finely; widen and retry
    }
    std::sort(out.finiteEigs.begin(), out.finiteEigs.end(),
              [](const EigenvalueCluster& a, const EigenvalueCluster& b) {
                  if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
                  return a.value.imag() < b.value.imag();
              });
    return out;
}

// Finite eigenvalues (with algebraic repetitions) plus the number of infinite
// eigenvalues.
template <class S>
std::pair<std::vector<cplx>, Eigen::Index> peigvals(const Mat<S>& M, const Mat<S>& N,
                                                    const Tol& tol = {}) {
    const KLFResult<S> k = klf_reduce<S>(M, N, tol);
    return {regular_block_eigenvalues<S>(k.Mf, k.Nf), k.n_inf};
}

// Zeros of a pencil in the system sense: finite eigenvalue structure plus one
// infinite zero of multiplicity s-1 for every infinite divisor of degree s >= 2.
struct PencilZeros {
    std::vector<EigenvalueCluster> finite;
    std::vector<int> inf_zero_mults;  // entries >= 1
    Eigen::Index delta_fin() const {
        Eigen::Index s = 0;
        for (const auto& c : finite)
            for (int v : c.mults) s += v;
        return s;
    }
    Eigen::Index delta_inf() const {
        Eigen::Index s = 0;
        for (int v : inf_zero_mults) s += v;
        return s;
    }
    Eigen::Index total() const { return delta_fin() + delta_inf(); }
};

template <class S>
PencilZeros pzeros(const Mat<S>& M, const Mat<S>& N, const Tol& tol = {},
                   double clusterTol = -1.0) {
    const KroneckerStructure ks = pkstruct<S>(M, N, tol, clusterTol);
    PencilZeros z;
    z.finite = ks.finiteEigs;
    for (int s : ks.inf_mults)
        if (s >= 2) z.inf_zero_mults.push_back(s - 1);
    return z;
}

template <class S>
Eigen::Index prank(const Mat<S>& M, const Mat<S>& N, const Tol& tol = {}) {
    return klf_reduce<S>(M, N, tol).rank;
}

// Structural indices of a pencil at infinity: rank(N) poles of order 1 and one
// index s_i - 1 for each infinite elementary divisor (rank(N) = r - h follows
// from the Kronecker canonical form, so no extra rank decision is needed).
template <class S>
std::vector<int> pencil_inf_indices(const Mat<S>& M, const Mat<S>& N, const Tol& tol = {}) {
    const KLFResult<S> k = klf_reduce<S>(M, N, tol);
    std::vector<int> sig;
    const Eigen::Index ell = k.rank - static_cast<Eigen::Index>(k.infDivisorDegrees.size());
    for (Eigen::Index i = 0; i < ell; ++i) sig.push_back(-1);
    for (int s : k.infDivisorDegrees) sig.push_back(s - 1);
    std::sort(sig.begin(), sig.end());
    return sig;
}

}  // namespace pmstruct
