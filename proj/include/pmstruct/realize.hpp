#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "pmstruct/polymat.hpp"
#include "pmstruct/realization.hpp"

// Order reduction of realizations:
//  * staircase_reduce strips uncontrollable / unobservable eigenstructure
//    (finite, infinite, or both) with unitary state transformations only,
//  * noseig residualizes non-dynamic modes (changing D),
//  * lsminreal combines them into a minimal descriptor realization,
//  * lpsminreal produces a strongly minimal pencil realization, additionally
//    absorbing polynomial feedthrough into D - xH,
//  * realization_to_polymat / realization_to_rm recover the transfer function
//    as an explicit polynomial or rational matrix.

namespace pmstruct {

enum class ReducePart { finite, infinite, both };
enum class ReduceSide { contr, obs, both };

namespace detail {

// Orthonormal basis of the column space (SVD-based, deterministic).
template <class S>
Mat<S> orth(const Mat<S>& X) {
    if (X.rows() == 0 || X.cols() == 0) return Mat<S>(X.rows(), 0);
    Eigen::JacobiSVD<Mat<S>> svd(X, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double thr = rank_rtol({}, X.rows(), X.cols()) * (sv.size() ? sv(0) : 0.0);
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > thr) ++r;
    return svd.matrixU().leftCols(r);
}

// Unitary completion: full n x n unitary whose leading cols(Q1) columns span
// range(Q1).  Q1 must have orthonormal columns.
template <class S>
Mat<S> complete_unitary(const Mat<S>& Q1, Eigen::Index n) {
    if (Q1.cols() == 0) return Mat<S>::Identity(n, n);
    Eigen::HouseholderQR<Mat<S>> qr(Q1);
    return qr.householderQ() * Mat<S>::Identity(n, n);
}

// A deterministic point sigma where A - sigma*E is comfortably invertible.
// A regular n x n pencil rejects at most n candidates; failure of all of them
// means the state pencil is (numerically) singular.
template <class S>
double regular_point(const Mat<S>& A, const Mat<S>& E) {
    const Eigen::Index n = A.rows();
    if (n == 0) return 0.0;
    double best_sigma = 0.0, best_ratio = -1.0;
    for (Eigen::Index j = 0; j <= n + 1; ++j) {
        const double sigma = (j == 0) ? 0.0 : (j % 2 ? double((j + 1) / 2) : -double(j / 2));
        Eigen::JacobiSVD<Mat<S>> svd(A - S(sigma) * E);
        const auto& sv = svd.singularValues();
        const double ratio = sv(0) > 0.0 ? sv(n - 1) / sv(0) : 0.0;
        if (ratio > 1e-6) return sigma;
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best_sigma = sigma;
        }
    }
    if (best_ratio <= 1e3 * static_cast<double>(n) * eps)
        throw SingularPencil("state pencil A - xE is singular");
    return best_sigma;
}

}  // namespace detail

// Uncontrollable-eigenstructure removal via the shifted reachability subspace:
// with Ahat = (A - sigma E)^{-1} E and the generators (A - sigma E)^{-1}[B, F],
// the smallest Ahat-invariant subspace containing the generators carries every
// controllable mode, finite and infinite alike (infinite eigenvalues of (A, E)
// are the eigenvalue 1/(lambda-sigma) -> 0 of Ahat).  The orthogonal change of
// basis exposes a trailing uncontrollable block, which is dropped; for
// part == finite the block is first split with the right staircase so that its
// infinite-divisor portion is retained.
template <class S>
Eigen::Index reduce_contr_subspace(PencilRealization<S>& sys, ReducePart part, const Tol& tol) {
    const Eigen::Index n = sys.order(), p = sys.outputs(), m = sys.inputs();
    if (n == 0) return 0;
    const double sigma = detail::regular_point<S>(sys.A, sys.E);
    Eigen::PartialPivLU<Mat<S>> lu(sys.A - S(sigma) * sys.E);
    const Mat<S> Ahat = lu.solve(sys.E);
    Mat<S> gen(n, 2 * m);
    gen << lu.solve(sys.B), lu.solve(sys.F);

    Mat<S> Q1 = detail::orth<S>(gen);
    while (Q1.cols() < n) {
        Mat<S> y(n, 2 * Q1.cols());
        y << Q1, Ahat * Q1;
        Mat<S> next = detail::orth<S>(y);
        if (next.cols() == Q1.cols()) break;
        Q1 = std::move(next);
    }
    const Eigen::Index q = Q1.cols();
    if (q == n) return 0;

    const Mat<S> Q = detail::complete_unitary<S>(Q1, n);
    const Mat<S> U = detail::complete_unitary<S>(
        detail::orth<S>((sys.A - S(sigma) * sys.E) * Q1), n);

    Mat<S> At = U.adjoint() * sys.A * Q;
    Mat<S> Et = U.adjoint() * sys.E * Q;
    Mat<S> Bt = U.adjoint() * sys.B;
    Mat<S> Ft = U.adjoint() * sys.F;
    Mat<S> Ct = sys.C * Q;
    Mat<S> Gt = sys.G * Q;

    Eigen::Index keep = q;
    if (part == ReducePart::finite) {
        // Keep the infinite portion of the uncontrollable block.
        Mat<S> Uacc = Mat<S>::Identity(n, n), Vacc = Mat<S>::Identity(n, n);
        const StairDims d = stair_right<S>(At, Et, &Uacc, &Vacc, q, q, n - q, n - q, tol);
        Bt = Uacc.adjoint() * Bt;
        Ft = Uacc.adjoint() * Ft;
        Ct = Ct * Vacc;
        Gt = Gt * Vacc;
        std::vector<int> deg;
        detail::stair_counts(d, nullptr, &deg);
        for (int s : deg) keep += s;
    }

    sys.A = At.topLeftCorner(keep, keep);
    sys.E = Et.topLeftCorner(keep, keep);
    sys.B = Bt.topRows(keep);
    sys.F = Ft.topRows(keep);
    sys.C = Ct.leftCols(keep);
    sys.G = Gt.leftCols(keep);
    (void)p;
    return n - keep;
}

// Uncontrollable-at-infinity removal without any feedthrough change: state
// equations whose [E F B] row vanishes are pure constraints A2 x = 0, forcing
// the corresponding states to zero.  Iterates until no such row remains.
template <class S>
Eigen::Index reduce_contr_infinite(PencilRealization<S>& sys, const Tol& tol) {
    Eigen::Index removed = 0;
    for (;;) {
        const Eigen::Index n = sys.order(), m = sys.inputs();
        if (n == 0) break;
        Mat<S> EFB(n, n + 2 * m);
        EFB << sys.E, sys.F, sys.B;
        const double thr =
            std::max(tol.atol, rank_rtol(tol, n, n + 2 * m) * EFB.norm());
        auto [Ul, rEFB] = detail::row_compress_top<S>(EFB, thr);
        const Eigen::Index nu = n - rEFB;
        if (nu == 0) break;
        Mat<S> A = Ul.adjoint() * sys.A;
        Mat<S> E = Ul.adjoint() * sys.E;
        Mat<S> B = Ul.adjoint() * sys.B;
        Mat<S> F = Ul.adjoint() * sys.F;

        const double thrA = std::max(tol.atol, rank_rtol(tol, nu, n) * sys.A.norm());
        auto [Vl, rA] = detail::col_compress_zeros_first<S>(A.bottomRows(nu).eval(), thrA);
        if (rA < nu) throw SingularPencil("system state pencil is singular");
        A = A * Vl;
        E = E * Vl;
        Mat<S> C = sys.C * Vl;
        Mat<S> G = sys.G * Vl;

        const Eigen::Index k = n - nu;
        sys.A = A.topLeftCorner(k, k);
        sys.E = E.topLeftCorner(k, k);
        sys.B = B.topRows(k);
        sys.F = F.topRows(k);
        sys.C = C.leftCols(k);
        sys.G = G.leftCols(k);
        removed += nu;
    }
    return removed;
}

template <class S>
struct StaircaseResult {
    DescriptorRealization<S> sys;
    Eigen::Index removed_contr = 0, removed_obs = 0;
};

template <class S>
StaircaseResult<S> staircase_reduce(const DescriptorRealization<S>& dsys, ReducePart part,
                                    ReduceSide side, const Tol& tol = {}) {
    dsys.validate();
    PencilRealization<S> sys = to_pencil_realization(dsys);
    StaircaseResult<S> out;
    if (side == ReduceSide::contr || side == ReduceSide::both) {
        out.removed_contr = (part == ReducePart::infinite)
                                ? reduce_contr_infinite(sys, tol)
                                : reduce_contr_subspace(sys, part, tol);
    }
    if (side == ReduceSide::obs || side == ReduceSide::both) {
        PencilRealization<S> dual = sys.transposed();
        out.removed_obs = (part == ReducePart::infinite)
                              ? reduce_contr_infinite(dual, tol)
                              : reduce_contr_subspace(dual, part, tol);
        sys = dual.transposed();
    }
    out.sys = {std::move(sys.A), std::move(sys.E), std::move(sys.B), std::move(sys.C),
               std::move(sys.D)};
    return out;
}

// Non-dynamic mode elimination: in coordinates where E = diag(S_E, 0), the
// invertible part of the trailing A-block couples no dynamics and can be
// residualized away, folding its contribution into the remaining blocks and D.
// Non-orthogonal (divides by the invertible part), transfer-preserving.
template <class S>
std::pair<DescriptorRealization<S>, Eigen::Index> noseig(DescriptorRealization<S> sys,
                                                         const Tol& tol = {}) {
    sys.validate();
    Eigen::Index removed = 0;
    for (Eigen::Index pass = 0; pass <= sys.order(); ++pass) {
        const Eigen::Index n = sys.order();
        if (n == 0) break;
        Eigen::JacobiSVD<Mat<S>> svdE(sys.E, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sev = svdE.singularValues();
        const double thrE = std::max(tol.atol, rank_rtol(tol, n, n) * (sev.size() ? sev(0) : 0.0));
        Eigen::Index rE = 0;
        while (rE < sev.size() && sev(rE) > thrE) ++rE;
        const Eigen::Index n2 = n - rE;
        if (n2 == 0) break;

        Mat<S> A = svdE.matrixU().adjoint() * sys.A * svdE.matrixV();
        Mat<S> E = svdE.matrixU().adjoint() * sys.E * svdE.matrixV();
        Mat<S> B = svdE.matrixU().adjoint() * sys.B;
        Mat<S> C = sys.C * svdE.matrixV();

        Eigen::JacobiSVD<Mat<S>> svdA(A.bottomRightCorner(n2, n2),
                                      Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sav = svdA.singularValues();
        const double thrA = std::max(tol.atol, rank_rtol(tol, n, n) * A.norm());
        Eigen::Index r2 = 0;
        while (r2 < sav.size() && sav(r2) > thrA) ++r2;
        if (r2 == 0) break;

        A.rightCols(n2) = A.rightCols(n2) * svdA.matrixV();
        A.bottomRows(n2) = svdA.matrixU().adjoint() * A.bottomRows(n2);
        B.bottomRows(n2) = svdA.matrixU().adjoint() * B.bottomRows(n2);
        C.rightCols(n2) = C.rightCols(n2) * svdA.matrixV();
        // E's trailing rows/cols are zero, so the rotation leaves it untouched.

        const Vec<S> inv_scale = sav.head(r2).cwiseInverse().template cast<S>();
        Mat<S> A2a1 = A.block(rE, 0, r2, rE);
        Mat<S> B2a = B.middleRows(rE, r2);
        Mat<S> A12a = A.block(0, rE, rE, r2);
        Mat<S> C2a = C.middleCols(rE, r2);
        Mat<S> X1 = inv_scale.asDiagonal() * A2a1;  // Sigma2^{-1} A2a1
        Mat<S> X2 = inv_scale.asDiagonal() * B2a;   // Sigma2^{-1} B2a

        const Eigen::Index nk = n - r2;
        DescriptorRealization<S> red;
        red.A = Mat<S>(nk, nk);
        red.A << A.topLeftCorner(rE, rE) - A12a * X1, A.topRightCorner(rE, n2 - r2),
            A.bottomLeftCorner(n2 - r2, rE), A.bottomRightCorner(n2 - r2, n2 - r2);
        red.E = Mat<S>::Zero(nk, nk);
        red.E.topLeftCorner(rE, rE) = E.topLeftCorner(rE, rE);
        red.B = Mat<S>(nk, sys.inputs());
        red.B << B.topRows(rE) - A12a * X2, B.bottomRows(n2 - r2);
        red.C = Mat<S>(sys.outputs(), nk);
        red.C << C.leftCols(rE) - C2a * X1, C.rightCols(n2 - r2);
        red.D = sys.D - C2a * X2;
        sys = std::move(red);
        removed += r2;
    }
    return {std::move(sys), removed};
}

template <class S>
struct MinrealResult {
    DescriptorRealization<S> sys;
    Eigen::Index removed_contr = 0, removed_obs = 0, removed_nondyn = 0;
};

// Minimal (irreducible, optionally non-dynamic-free) descriptor realization.
template <class S>
MinrealResult<S> lsminreal(const DescriptorRealization<S>& dsys, bool contr = true,
                           bool obs = true, bool nondyn = true, const Tol& tol = {}) {
    MinrealResult<S> out;
    out.sys = dsys;
    if (contr) {
        auto r = staircase_reduce<S>(out.sys, ReducePart::both, ReduceSide::contr, tol);
        out.sys = std::move(r.sys);
        out.removed_contr = r.removed_contr;
    }
    if (obs) {
        auto r = staircase_reduce<S>(out.sys, ReducePart::both, ReduceSide::obs, tol);
        out.sys = std::move(r.sys);
        out.removed_obs = r.removed_obs;
    }
    if (nondyn) {
        auto [s, k] = noseig<S>(out.sys, tol);
        out.sys = std::move(s);
        out.removed_nondyn = k;
    }
    return out;
}

namespace detail {

// Residualization of constraint rows: after row-compressing [E F], the rows
// with no x-dependence read A2 x + B2 u = 0; compressing A2 makes its trailing
// square block invertible, and x2 = -A22^{-1} B2 u folds into B, F, D and H.
// One application per call; returns the number of states removed.
template <class S>
Eigen::Index strong_reduce_inf_contr(PencilRealization<S>& sys, const Tol& tol) {
    const Eigen::Index n = sys.order(), m = sys.inputs();
    if (n == 0) return 0;
    Mat<S> EF(n, n + m);
    EF << sys.E, sys.F;
    const double thr = std::max(tol.atol, rank_rtol(tol, n, n + m) * EF.norm());
    auto [Ul, rEF] = row_compress_top<S>(EF, thr);
    const Eigen::Index nu = n - rEF;
    if (nu == 0) return 0;
    Mat<S> A = Ul.adjoint() * sys.A;
    Mat<S> E = Ul.adjoint() * sys.E;
    Mat<S> B = Ul.adjoint() * sys.B;
    Mat<S> F = Ul.adjoint() * sys.F;

    const double thrA = std::max(tol.atol, rank_rtol(tol, nu, n) * sys.A.norm());
    auto [Vl, rA] = col_compress_zeros_first<S>(A.bottomRows(nu).eval(), thrA);
    if (rA < nu) throw SingularPencil("system state pencil is singular");
    A = A * Vl;
    E = E * Vl;
    Mat<S> C = sys.C * Vl;
    Mat<S> G = sys.G * Vl;

    const Eigen::Index k = n - nu;
    Mat<S> X = A.bottomRightCorner(nu, nu).partialPivLu().solve(B.bottomRows(nu));
    sys.B = B.topRows(k) - A.topRightCorner(k, nu) * X;
    sys.F = F.topRows(k) - E.topRightCorner(k, nu) * X;
    sys.D = sys.D - C.rightCols(nu) * X;
    sys.H = sys.H - G.rightCols(nu) * X;
    sys.A = A.topLeftCorner(k, k);
    sys.E = E.topLeftCorner(k, k);
    sys.C = C.leftCols(k);
    sys.G = G.leftCols(k);
    return nu;
}

}  // namespace detail

template <class S>
struct StrongMinResult {
    PencilRealization<S> sys;
    Eigen::Index removed = 0;
};

// Strongly minimal pencil realization: the controllability pencil
// [A - xE, B - xF] and the observability pencil [A - xE; C - xG] end up with
// no eigenvalue structure whatsoever (full rank for every finite x and at
// infinity).  This combines subspace-based removal of uncontrollable and
// unobservable modes with the constraint residualization, iterated to a fixed
// point, and verifies the result.
template <class S>
StrongMinResult<S> lpsminreal(PencilRealization<S> sys, const Tol& tol = {}) {
    sys.validate();
    StrongMinResult<S> out;
    const Eigen::Index max_passes = sys.order() + 2;
    for (Eigen::Index pass = 0; pass <= max_passes; ++pass) {
        Eigen::Index step = 0;
        step += reduce_contr_subspace<S>(sys, ReducePart::both, tol);
        {
            PencilRealization<S> dual = sys.transposed();
            step += reduce_contr_subspace<S>(dual, ReducePart::both, tol);
            sys = dual.transposed();
        }
        step += detail::strong_reduce_inf_contr<S>(sys, tol);
        {
            PencilRealization<S> dual = sys.transposed();
            step += detail::strong_reduce_inf_contr<S>(dual, tol);
            sys = dual.transposed();
        }
        out.removed += step;
        if (step == 0) break;
    }

    const auto check = [&](const Pencil<S>& pc) {
        const KLFResult<S> k = klf_reduce<S>(pc.M, pc.N, tol);
        return k.rank == sys.order() && k.nf == 0 && k.infDivisorDegrees.empty();
    };
    if (!check(controllability_pencil(sys)) || !check(observability_pencil(sys)))
        throw Error("strong minimality was not reached");
    out.sys = std::move(sys);
    return out;
}

namespace detail {

// Deterministic real probe points, shifted off any eigenvalue of (A, E).
template <class S>
std::vector<double> probe_points(const PencilRealization<S>& sys, int count) {
    std::vector<double> pts;
    double x = -1.7;
    const double step = count > 1 ? 3.4 / (count - 1) : 1.0;
    for (int j = 0; j < count; ++j, x += step) {
        double xj = x;
        for (int shift = 0; shift < 12; ++shift) {
            try {
                (void)eval_transfer(sys, xj);
                break;
            } catch (const SingularPencil&) {
                xj += 0.0537 + 1e-3 * shift;
            }
        }
        pts.push_back(xj);
    }
    return pts;
}

}  // namespace detail

// Recover the transfer function as a polynomial matrix by sampling and
// least-squares Vandermonde fitting, then validating at fresh points.  Throws
// NotPolynomial when the transfer function is not polynomial to within the
// validation tolerance (relative 1e-8 by default).
template <class S>
PolyMatrix<S> realization_to_polymat(const PencilRealization<S>& sys, const Tol& tol = {},
                                     int degree_bound = -1) {
    sys.validate();
    const Eigen::Index n = sys.order(), p = sys.outputs(), m = sys.inputs();
    const int dmax = degree_bound >= 0 ? degree_bound : static_cast<int>(n) + 1;
    const int q = dmax + 4;

    const std::vector<double> pts = detail::probe_points(sys, q);
    Mat<S> vand(q, dmax + 1);
    Mat<S> samples(q, p * m);
    double scale = 0.0;
    for (int s = 0; s < q; ++s) {
        double pw = 1.0;
        for (int d = 0; d <= dmax; ++d, pw *= pts[s]) vand(s, d) = S(pw);
        const Mat<S> R = eval_transfer(sys, pts[s]);
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index j = 0; j < m; ++j) samples(s, i * m + j) = R(i, j);
        scale = std::max(scale, R.cwiseAbs().maxCoeff());
    }
    const Mat<S> coef = vand.colPivHouseholderQr().solve(samples);

    std::vector<Mat<S>> cm;
    for (int d = 0; d <= dmax; ++d) {
        Mat<S> Cd(p, m);
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index j = 0; j < m; ++j) Cd(i, j) = coef(d, i * m + j);
        cm.push_back(std::move(Cd));
    }
    PolyMatrix<S> P(cm);

    const double vtol =
        std::max(tol.atol, (tol.rtol >= 0.0 ? tol.rtol : 1e-8) * (1.0 + scale));
    for (double x : {-1.93, -0.41, 0.57, 1.81}) {
        double xv = x;
        Mat<S> R;
        for (int shift = 0; shift < 12; ++shift) {
            try {
                R = eval_transfer(sys, xv);
                break;
            } catch (const SingularPencil&) {
                xv += 0.0411;
            }
        }
        if (R.size() == 0) continue;
        if ((R - pm_eval(P, xv)).cwiseAbs().maxCoeff() > vtol)
            throw NotPolynomial("transfer function is not polynomial");
    }

    // Trim trailing coefficient matrices that are pure fitting noise.
    const double ctol = std::max(tol.atol, 1e-9 * (1.0 + P.max_coeff_abs()));
    int deg = dmax;
    while (deg > 0 && P.at(deg).cwiseAbs().maxCoeff() <= ctol) --deg;
    return P.with_grade(deg, Tol{ctol, 0.0});
}

// Recover the transfer function entrywise as a rational matrix: for each entry
// the smallest denominator degree whose sampled linear system admits a
// validated null vector wins.  Denominators are normalized monic.
template <class S>
RationalMatrix<S> realization_to_rm(const PencilRealization<S>& sys, const Tol& tol = {}) {
    sys.validate();
    const Eigen::Index n = sys.order(), p = sys.outputs(), m = sys.inputs();
    const int q = 3 * static_cast<int>(n) + 10;
    const std::vector<double> pts = detail::probe_points(sys, q);
    std::vector<Mat<S>> vals;
    double scale = 0.0;
    for (double x : pts) {
        vals.push_back(eval_transfer(sys, x));
        scale = std::max(scale, vals.back().cwiseAbs().maxCoeff());
    }
    const std::vector<double> fresh = {-1.89, -0.37, 0.61, 1.77};
    std::vector<Mat<S>> fvals;
    for (double x : fresh) {
        double xv = x;
        for (int shift = 0; shift < 12; ++shift) {
            try {
                fvals.push_back(eval_transfer(sys, xv));
                break;
            } catch (const SingularPencil&) {
                xv += 0.0389;
            }
        }
    }
    const double vtol =
        std::max(tol.atol, (tol.rtol >= 0.0 ? tol.rtol : 1e-8) * (1.0 + scale));

    std::vector<std::vector<Poly<S>>> num(p, std::vector<Poly<S>>(m)),
        den(p, std::vector<Poly<S>>(m, Poly<S>::constant(S(1))));
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            bool done = false;
            for (int delta = 0; delta <= n && !done; ++delta) {
                const int dn = delta + static_cast<int>(n) + 1;
                Mat<S> Mfit(q, dn + 1 + delta + 1);
                for (int s = 0; s < q; ++s) {
                    double pw = 1.0;
                    for (int d = 0; d <= dn; ++d, pw *= pts[s]) Mfit(s, d) = S(pw);
                    pw = 1.0;
                    for (int d = 0; d <= delta; ++d, pw *= pts[s])
                        Mfit(s, dn + 1 + d) = -vals[s](i, j) * S(pw);
                }
                Eigen::JacobiSVD<Mat<S>> svd(Mfit, Eigen::ComputeFullV);
                const Vec<S> v = svd.matrixV().col(Mfit.cols() - 1);
                Poly<S> nu(std::vector<S>(v.data(), v.data() + dn + 1));
                Poly<S> de(std::vector<S>(v.data() + dn + 1, v.data() + dn + 1 + delta + 1));
                de.truncate(1e-8 * de.max_abs());
                if (de.is_zero()) continue;

                int valid = 0;
                bool ok = true;
                for (size_t f = 0; f < fvals.size() && ok; ++f) {
                    const S dv = de.eval(S(fresh[f]));
                    if (std::abs(dv) < 1e-10 * de.max_abs()) continue;  // probe near a root
                    ok = std::abs(nu.eval(S(fresh[f])) / dv - fvals[f](i, j)) <= vtol;
                    ++valid;
                }
                if (ok && valid >= 2) {
                    const S lead = de.lead();
                    for (auto& cc : nu.c) cc /= lead;
                    for (auto& cc : de.c) cc /= lead;
                    nu.truncate(std::max(tol.atol, 1e-10 * (1.0 + scale)));
                    num[i][j] = std::move(nu);
                    den[i][j] = std::move(de);
                    done = true;
                }
            }
            if (!done) throw Error("rational fit failed for a transfer-function entry");
        }
    return RationalMatrix<S>(std::move(num), std::move(den));
}

}  // namespace pmstruct
