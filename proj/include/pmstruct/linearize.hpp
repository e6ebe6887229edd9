#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "pmstruct/pencil.hpp"
#include "pmstruct/polymat.hpp"
#include "pmstruct/realization.hpp"
#include "pmstruct/realize.hpp"

// Linearization: companion pencils of polynomial matrices together with the
// index bookkeeping that maps pencil structure back to the matrix, low-order
// realizations of polynomial and strictly proper rational matrices, and
// assembly of (strongly) minimal linearizations for rational matrices,
// polynomial system matrices and matrix fractions.

namespace pmstruct {

enum class CompanionKind { first, second };

template <class S>
struct CompanionPencil {
    Pencil<S> pencil;  // stored as (M, N); the linearization is x*N - M
    CompanionKind kind = CompanionKind::first;
    int k = 1;              // grade the companion was built at
    Eigen::Index p = 0, m = 0;  // shape of the original matrix
};

// First / second companion form of P at grade k.  The first form is
//   x*N1 - M1 = [ x P_k + P_{k-1}   P_{k-2}  ...  P_0 ]
//               [     -I              xI          0   ]
//               [                      ...            ]
// of size (p + (k-1)m) x km; the second form is its block transpose of size
// pk x (m + (k-1)p).  Grade 1 stores the pencil (P0, -P1) directly; grade 0
// has no companion form.
template <class S>
CompanionPencil<S> build_companion(const PolyMatrix<S>& P, CompanionKind kind,
                                   int grade = -1, const Tol& tol = {}) {
    const int k = grade >= 0 ? grade : P.grade();
    if (k <= 0) throw GradeZero("companion form requires grade >= 1");
    const PolyMatrix<S> Q = P.with_grade(k, tol);
    const Eigen::Index p = Q.rows(), m = Q.cols();

    CompanionPencil<S> out;
    out.kind = kind;
    out.k = k;
    out.p = p;
    out.m = m;

    if (k == 1) {
        out.pencil = Pencil<S>(Q.at(0), (-Q.at(1)).eval());
        return out;
    }

    if (kind == CompanionKind::first) {
        const Eigen::Index rows = p + (k - 1) * m, cols = k * m;
        Mat<S> M = Mat<S>::Zero(rows, cols), N = Mat<S>::Zero(rows, cols);
        for (int j = 0; j < k; ++j) M.block(0, j * m, p, m) = -Q.at(k - 1 - j);
        M.block(p, 0, (k - 1) * m, (k - 1) * m) =
            Mat<S>::Identity((k - 1) * m, (k - 1) * m);
        N.block(0, 0, p, m) = Q.at(k);
        N.block(p, m, (k - 1) * m, (k - 1) * m) =
            Mat<S>::Identity((k - 1) * m, (k - 1) * m);
        out.pencil = Pencil<S>(std::move(M), std::move(N));
    } else {
        const Eigen::Index rows = k * p, cols = m + (k - 1) * p;
        Mat<S> M = Mat<S>::Zero(rows, cols), N = Mat<S>::Zero(rows, cols);
        for (int i = 0; i < k; ++i) M.block(i * p, 0, p, m) = -Q.at(k - 1 - i);
        M.block(0, m, (k - 1) * p, (k - 1) * p) =
            Mat<S>::Identity((k - 1) * p, (k - 1) * p);
        N.block(0, 0, p, m) = Q.at(k);
        N.block(p, m, (k - 1) * p, (k - 1) * p) =
            Mat<S>::Identity((k - 1) * p, (k - 1) * p);
        out.pencil = Pencil<S>(std::move(M), std::move(N));
    }
    return out;
}

// Complete structural data of a polynomial matrix.  alpha_inf lists the
// infinite partial multiplicities at the stated grade (length r, ascending,
// entries >= 0); the structural indices at infinity are alpha_inf - grade.
struct PMStructure {
    Eigen::Index rows = 0, cols = 0, r = 0;
    int grade = 0;
    std::vector<EigenvalueCluster> finiteEigs;
    std::vector<int> alpha_inf;
    std::vector<int> eps, eta;

    Eigen::Index delta_fin() const {
        Eigen::Index s = 0;
        for (const auto& c : finiteEigs)
            for (int v : c.mults) s += v;
        return s;
    }
    Eigen::Index delta_inf() const {
        Eigen::Index s = 0;
        for (int v : alpha_inf) s += v;
        return s;
    }
    Eigen::Index mu() const {
        Eigen::Index s = 0;
        for (int v : eps) s += v;
        for (int v : eta) s += v;
        return s;
    }
    std::vector<int> sigma_inf() const {
        std::vector<int> s(alpha_inf);
        for (int& v : s) v -= grade;
        return s;
    }
    // The same data expressed at a different grade: every infinite partial
    // multiplicity shifts by the grade difference.
    PMStructure at_grade(int g) const {
        PMStructure s(*this);
        for (int& v : s.alpha_inf) v += g - grade;
        s.grade = g;
        return s;
    }
};

// Map the Kronecker structure of a companion pencil back to the matrix it
// linearizes.  The first form inflates every right minimal index by k-1 and
// pads the infinite structure with m(k-1) extra zero multiplicities (the
// second form does the same on the left / with p(k-1)); everything else
// transfers verbatim.
template <class S>
PMStructure recover_structure(const KroneckerStructure& ks, const CompanionPencil<S>& cp) {
    PMStructure s;
    s.rows = cp.p;
    s.cols = cp.m;
    s.grade = cp.k;
    const Eigen::Index pad =
        (cp.kind == CompanionKind::first ? cp.m : cp.p) * (cp.k - 1);
    s.r = ks.r - pad;
    if (s.r < 0) throw Error("companion pencil rank below the structural minimum");
    s.finiteEigs = ks.finiteEigs;

    s.eps = ks.eps;
    s.eta = ks.eta;
    const int shift = cp.k - 1;
    auto deflate = [&](std::vector<int>& idx) {
        for (int& e : idx) e = std::max(0, e - shift);
    };
    if (cp.kind == CompanionKind::first)
        deflate(s.eps);
    else
        deflate(s.eta);

    // Companion multiplicity list = (rank - #nonzero) zeros ++ nonzero; the
    // matrix keeps the r largest entries.
    std::vector<int> full(static_cast<size_t>(ks.r) - ks.inf_mults.size(), 0);
    full.insert(full.end(), ks.inf_mults.begin(), ks.inf_mults.end());
    s.alpha_inf.assign(full.end() - s.r, full.end());
    return s;
}

// ---------------------------------------------------------------------------
// Realizations of a polynomial matrix P.

enum class PolyPartForm { controllable, observable };

// Pencil realization of order m(k-1) (controllable variant) or p(k-1)
// (observable variant); grades 0 and 1 need no state at all, P(x) = D - xH.
template <class S>
PencilRealization<S> polypart_pencil_real(const PolyMatrix<S>& P,
                                          PolyPartForm form = PolyPartForm::controllable) {
    const Eigen::Index p = P.rows(), m = P.cols();
    const int k = P.grade();
    PencilRealization<S> sys;
    if (k <= 1) {
        sys.A = sys.E = Mat<S>(0, 0);
        sys.B = sys.F = Mat<S>(0, m);
        sys.C = sys.G = Mat<S>(p, 0);
        sys.D = P.at(0);
        sys.H = -P.at(1);
        return sys;
    }
    if (form == PolyPartForm::controllable) {
        const Eigen::Index nu = m * (k - 1);
        sys.A = Mat<S>::Identity(nu, nu);
        sys.E = Mat<S>::Zero(nu, nu);
        for (int i = 0; i + 2 < k; ++i)
            sys.E.block(i * m, (i + 1) * m, m, m) = Mat<S>::Identity(m, m);
        sys.B = Mat<S>::Zero(nu, m);
        sys.F = Mat<S>::Zero(nu, m);
        sys.F.bottomRows(m) = Mat<S>::Identity(m, m);
        sys.C = Mat<S>(p, nu);
        for (int j = 0; j + 1 < k; ++j) sys.C.middleCols(j * m, m) = P.at(k - 1 - j);
        sys.G = Mat<S>::Zero(p, nu);
        sys.G.leftCols(m) = -P.at(k);
        sys.D = P.at(0);
        sys.H = Mat<S>::Zero(p, m);
    } else {
        const Eigen::Index nu = p * (k - 1);
        sys.A = Mat<S>::Identity(nu, nu);
        sys.E = Mat<S>::Zero(nu, nu);
        for (int i = 0; i + 2 < k; ++i)
            sys.E.block(i * p, (i + 1) * p, p, p) = Mat<S>::Identity(p, p);
        sys.B = Mat<S>(nu, m);
        for (int i = 0; i + 1 < k; ++i) sys.B.middleRows(i * p, p) = P.at(i + 1);
        sys.F = Mat<S>::Zero(nu, m);
        sys.F.bottomRows(p) = -P.at(k);
        sys.C = Mat<S>::Zero(p, nu);
        sys.G = Mat<S>::Zero(p, nu);
        sys.G.leftCols(p) = Mat<S>::Identity(p, p);
        sys.D = P.at(0);
        sys.H = Mat<S>::Zero(p, m);
    }
    return sys;
}

// Descriptor realization of order m(k+1) / p(k+1) with a nilpotent shift in E;
// carries the complete infinite structure of P explicitly.
template <class S>
DescriptorRealization<S> polypart_descriptor_real(const PolyMatrix<S>& P,
                                                  PolyPartForm form = PolyPartForm::controllable) {
    const Eigen::Index p = P.rows(), m = P.cols();
    const int k = P.grade();
    DescriptorRealization<S> sys;
    if (k == 0) {
        sys.A = sys.E = Mat<S>(0, 0);
        sys.B = Mat<S>(0, m);
        sys.C = Mat<S>(p, 0);
        sys.D = P.at(0);
        return sys;
    }
    if (form == PolyPartForm::controllable) {
        const Eigen::Index nu = m * (k + 1);
        sys.A = Mat<S>::Identity(nu, nu);
        sys.E = Mat<S>::Zero(nu, nu);
        for (int i = 0; i < k; ++i)
            sys.E.block(i * m, (i + 1) * m, m, m) = Mat<S>::Identity(m, m);
        sys.B = Mat<S>::Zero(nu, m);
        sys.B.bottomRows(m) = -Mat<S>::Identity(m, m);
        sys.C = Mat<S>::Zero(p, nu);
        for (int j = 0; j < k; ++j) sys.C.middleCols(j * m, m) = P.at(k - j);
        sys.D = P.at(0);
    } else {
        const Eigen::Index nu = p * (k + 1);
        sys.A = Mat<S>::Identity(nu, nu);
        sys.E = Mat<S>::Zero(nu, nu);
        for (int i = 0; i < k; ++i)
            sys.E.block(i * p, (i + 1) * p, p, p) = Mat<S>::Identity(p, p);
        sys.B = Mat<S>::Zero(nu, m);
        for (int i = 1; i <= k; ++i) sys.B.middleRows(i * p, p) = P.at(i);
        sys.C = Mat<S>::Zero(p, nu);
        sys.C.leftCols(p) = -Mat<S>::Identity(p, p);
        sys.D = P.at(0);
    }
    return sys;
}

// ---------------------------------------------------------------------------
// Strictly proper rational matrices.

enum class SpMode { entrywise, columnwise, rowwise };

namespace detail {

// Controllable companion block of a monic denominator d (ascending a_0..a_{q-1},
// lead 1): A is the shift with last row -a, b = e_q, and c carries the
// numerator coefficients.
template <class S>
void companion_block(const Poly<S>& d, Mat<S>& A, Vec<S>& b) {
    const int q = d.degree();
    A = Mat<S>::Zero(q, q);
    for (int i = 0; i + 1 < q; ++i) A(i, i + 1) = S(1);
    for (int i = 0; i < q; ++i) A(q - 1, i) = -d.c[static_cast<size_t>(i)];
    b = Vec<S>::Zero(q);
    b(q - 1) = S(1);
}

template <class S>
void append_block_diag(Mat<S>& A, const Mat<S>& blk) {
    Mat<S> next = Mat<S>::Zero(A.rows() + blk.rows(), A.cols() + blk.cols());
    next.topLeftCorner(A.rows(), A.cols()) = A;
    next.bottomRightCorner(blk.rows(), blk.cols()) = blk;
    A = std::move(next);
}

}  // namespace detail

// State-space realization (E = I, D = 0) of a strictly proper rational matrix.
// entrywise: one companion block per nonzero entry.  columnwise: one block per
// column built on the least common denominator of that column (controllable by
// construction).  rowwise: the transposed dual.  None of these is minimal in
// general; pair with lsminreal for that.
template <class S>
DescriptorRealization<S> sp_realize(const RationalMatrix<S>& R, SpMode mode = SpMode::columnwise,
                                    const Tol& tol = {}) {
    if (!rm_is_strictly_proper(R))
        throw NotStrictlyProper("sp_realize needs a strictly proper input");
    const Eigen::Index p = R.rows(), m = R.cols();
    if (mode == SpMode::rowwise) {
        const DescriptorRealization<S> t = sp_realize(R.transpose(), SpMode::columnwise, tol);
        return t.transposed();
    }
    const double grtol = tol.rtol >= 0.0 ? tol.rtol : 1e-9;

    DescriptorRealization<S> sys;
    sys.A = Mat<S>(0, 0);
    sys.B = Mat<S>(0, m);
    sys.C = Mat<S>(p, 0);
    sys.D = Mat<S>::Zero(p, m);

    if (mode == SpMode::entrywise) {
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index j = 0; j < m; ++j) {
                const Poly<S>& nij = R.num[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (nij.is_zero()) continue;
                Poly<S> d = R.den[static_cast<size_t>(i)][static_cast<size_t>(j)];
                Poly<S> nn = nij;
                const S lead = d.lead();
                for (auto& c : d.c) c /= lead;
                for (auto& c : nn.c) c /= lead;
                Mat<S> Ab;
                Vec<S> bb;
                detail::companion_block(d, Ab, bb);
                const Eigen::Index q = Ab.rows(), off = sys.A.rows();
                detail::append_block_diag(sys.A, Ab);
                sys.B.conservativeResize(off + q, m);
                sys.B.bottomRows(q).setZero();
                sys.B.block(off, j, q, 1) = bb;
                sys.C.conservativeResize(p, off + q);
                sys.C.rightCols(q).setZero();
                for (int t2 = 0; t2 < q; ++t2)
                    sys.C(i, off + t2) = t2 <= nn.degree() ? nn.c[static_cast<size_t>(t2)] : S(0);
            }
    } else {
        for (Eigen::Index j = 0; j < m; ++j) {
            // Least common denominator of the column (zero entries don't count).
            Poly<S> dj = Poly<S>::constant(S(1));
            bool any = false;
            for (Eigen::Index i = 0; i < p; ++i) {
                const auto& nij = R.num[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (nij.is_zero()) continue;
                any = true;
                dj = poly_lcm(dj, R.den[static_cast<size_t>(i)][static_cast<size_t>(j)], grtol);
            }
            if (!any || dj.degree() == 0) continue;
            const S lead = dj.lead();
            for (auto& c : dj.c) c /= lead;

            Mat<S> Ab;
            Vec<S> bb;
            detail::companion_block(dj, Ab, bb);
            const Eigen::Index q = Ab.rows(), off = sys.A.rows();
            detail::append_block_diag(sys.A, Ab);
            sys.B.conservativeResize(off + q, m);
            sys.B.bottomRows(q).setZero();
            sys.B.block(off, j, q, 1) = bb;
            sys.C.conservativeResize(p, off + q);
            sys.C.rightCols(q).setZero();
            for (Eigen::Index i = 0; i < p; ++i) {
                const auto& nij = R.num[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (nij.is_zero()) continue;
                const auto& dij = R.den[static_cast<size_t>(i)][static_cast<size_t>(j)];
                auto [quot, rem] = poly_divrem(dj, dij);
                (void)rem;  // divides by construction of the lcm
                const Poly<S> h = nij * quot;
                for (int t2 = 0; t2 <= h.degree() && t2 < q; ++t2)
                    sys.C(i, off + t2) = h.c[static_cast<size_t>(t2)];
            }
        }
    }
    sys.E = Mat<S>::Identity(sys.A.rows(), sys.A.rows());
    return sys;
}

// ---------------------------------------------------------------------------
// Rational-matrix linearization.

enum class LinKind { pencil, descriptor };

// Assemble a pencil (or descriptor, with F = G = H = 0) realization of R from
// a minimal realization of its strictly proper part and a companion-style
// realization of its polynomial part.  No overall minimization.
template <class S>
PencilRealization<S> rm2lspm(const RationalMatrix<S>& R, LinKind kind = LinKind::pencil,
                             SpMode mode = SpMode::columnwise, const Tol& tol = {}) {
    const auto [Q, sp] = pm_divrem(R);
    DescriptorRealization<S> s = sp_realize<S>(sp, mode, tol);
    s = lsminreal<S>(s, true, true, false, tol).sys;

    PencilRealization<S> q = kind == LinKind::pencil
                                 ? polypart_pencil_real<S>(Q)
                                 : to_pencil_realization(polypart_descriptor_real<S>(Q));

    const Eigen::Index ns = s.order(), nq = q.order(), p = R.rows(), m = R.cols();
    PencilRealization<S> sys;
    sys.A = Mat<S>::Zero(ns + nq, ns + nq);
    sys.A.topLeftCorner(ns, ns) = s.A;
    sys.A.bottomRightCorner(nq, nq) = q.A;
    sys.E = Mat<S>::Zero(ns + nq, ns + nq);
    sys.E.topLeftCorner(ns, ns) = s.E;
    sys.E.bottomRightCorner(nq, nq) = q.E;
    sys.B = Mat<S>::Zero(ns + nq, m);
    sys.B.topRows(ns) = s.B;
    sys.B.bottomRows(nq) = q.B;
    sys.F = Mat<S>::Zero(ns + nq, m);
    sys.F.bottomRows(nq) = q.F;
    sys.C = Mat<S>::Zero(p, ns + nq);
    sys.C.leftCols(ns) = s.C;
    sys.C.rightCols(nq) = q.C;
    sys.G = Mat<S>::Zero(p, ns + nq);
    sys.G.rightCols(nq) = q.G;
    sys.D = q.D;
    sys.H = q.H;
    return sys;
}

// Linearization with the promised minimality: a strongly minimal pencil
// realization, or an irreducible descriptor realization (F = G = H = 0).
//
// The descriptor route reduces the polynomial-part realization on its own and
// only then appends the minimal strictly proper part.  The two blocks cannot
// share modes -- the strictly proper part has an invertible E and only finite
// poles, the polynomial part a unimodular A - xE and only infinite ones -- so
// the assembly is already irreducible.  Reducing the assembled system instead
// would mix the blocks through one large staircase and has been observed to
// leave barely-observable directions that blur the zero structure downstream.
template <class S>
PencilRealization<S> rm_linearize(const RationalMatrix<S>& R, LinKind kind = LinKind::pencil,
                                  SpMode mode = SpMode::columnwise, const Tol& tol = {}) {
    if (kind == LinKind::pencil)
        return lpsminreal<S>(rm2lspm<S>(R, kind, mode, tol), tol).sys;

    const auto [Q, sp] = pm_divrem(R);
    DescriptorRealization<S> s = sp_realize<S>(sp, mode, tol);
    s = lsminreal<S>(s, true, true, false, tol).sys;
    DescriptorRealization<S> q = polypart_descriptor_real<S>(Q);
    q = staircase_reduce<S>(q, ReducePart::both, ReduceSide::both, tol).sys;

    const Eigen::Index ns = s.order(), nq = q.order(), p = R.rows(), m = R.cols();
    DescriptorRealization<S> d;
    d.A = Mat<S>::Zero(ns + nq, ns + nq);
    d.A.topLeftCorner(ns, ns) = s.A;
    d.A.bottomRightCorner(nq, nq) = q.A;
    d.E = Mat<S>::Zero(ns + nq, ns + nq);
    d.E.topLeftCorner(ns, ns) = s.E;
    d.E.bottomRightCorner(nq, nq) = q.E;
    d.B = Mat<S>::Zero(ns + nq, m);
    d.B.topRows(ns) = s.B;
    d.B.bottomRows(nq) = q.B;
    d.C = Mat<S>::Zero(p, ns + nq);
    d.C.leftCols(ns) = s.C;
    d.C.rightCols(nq) = q.C;
    d.D = s.D + q.D;
    return to_pencil_realization(d);
}

// ---------------------------------------------------------------------------
// Polynomial system matrices and fractions.

// R = V T^{-1} U + W with polynomial blocks.
template <class S>
struct PolySystemMatrix {
    PolyMatrix<S> T, U, V, W;

    void validate() const {
        if (T.rows() != T.cols() || U.rows() != T.rows() || V.cols() != T.cols() ||
            W.rows() != V.rows() || W.cols() != U.cols())
            throw InconsistentDims("system matrix blocks have inconsistent shapes");
    }
    int grade() const {
        return std::max(std::max(T.grade(), U.grade()), std::max(V.grade(), W.grade()));
    }
};

// Linearize a polynomial system matrix without forming the transfer function:
// stack S(x) = [[T, U], [-V, W]], take its first companion form, and move the
// output rows of the leading block row to the bottom.  The repartitioned
// pencil is again a system matrix, now linear, with the same transfer
// function; its state order is n + (k-1)(n+m).
template <class S>
PencilRealization<S> spm_linearize(const PolySystemMatrix<S>& sm) {
    sm.validate();
    const Eigen::Index n = sm.T.rows(), m = sm.U.cols(), p = sm.V.rows();
    const int k = sm.grade();

    PencilRealization<S> sys;
    if (k <= 1) {
        // Already linear: embed directly so that xE - A = T(x).
        sys.A = -sm.T.at(0);
        sys.E = sm.T.at(1);
        sys.B = sm.U.at(0);
        sys.F = -sm.U.at(1);
        sys.C = sm.V.at(0);
        sys.G = -sm.V.at(1);
        sys.D = sm.W.at(0);
        sys.H = -sm.W.at(1);
        return sys;
    }

    PolyMatrix<S> Q = PolyMatrix<S>::zero(n + p, n + m, k);
    for (int d = 0; d <= k; ++d) {
        Mat<S> Qd(n + p, n + m);
        Qd << sm.T.at(d), sm.U.at(d), -sm.V.at(d), sm.W.at(d);
        Q.coeff[static_cast<size_t>(d)] = std::move(Qd);
    }
    const CompanionPencil<S> cp = build_companion<S>(Q, CompanionKind::first, k);
    const Mat<S>&Mc = cp.pencil.M, &Nc = cp.pencil.N;
    const Eigen::Index rows = Mc.rows();

    // Row permutation: [0, n) stays, identity rows move up, the p output rows
    // of the leading block row go last.  Columns are already ordered with the
    // m input columns of the trailing block at the right edge.
    Eigen::VectorXi perm(rows);
    Eigen::Index pos = 0;
    for (Eigen::Index i = 0; i < n; ++i) perm(pos++) = static_cast<int>(i);
    for (Eigen::Index i = n + p; i < rows; ++i) perm(pos++) = static_cast<int>(i);
    for (Eigen::Index i = n; i < n + p; ++i) perm(pos++) = static_cast<int>(i);
    Mat<S> Mp(rows, Mc.cols()), Np(rows, Nc.cols());
    for (Eigen::Index i = 0; i < rows; ++i) {
        Mp.row(i) = Mc.row(perm(i));
        Np.row(i) = Nc.row(perm(i));
    }

    const Eigen::Index ns = n + (k - 1) * (n + m);
    sys.A = Mp.topLeftCorner(ns, ns);
    sys.E = Np.topLeftCorner(ns, ns);
    sys.B = -Mp.topRightCorner(ns, m);
    sys.F = -Np.topRightCorner(ns, m);
    sys.C = Mp.bottomLeftCorner(p, ns);
    sys.G = Np.bottomLeftCorner(p, ns);
    sys.D = -Mp.bottomRightCorner(p, m);
    sys.H = -Np.bottomRightCorner(p, m);
    return sys;
}

// Left fraction R = DL^{-1} NL.
template <class S>
PencilRealization<S> lpmfd_linearize(const PolyMatrix<S>& DL, const PolyMatrix<S>& NL,
                                     bool minimal = true, const Tol& tol = {}) {
    const Eigen::Index p = DL.rows(), m = NL.cols();
    if (DL.rows() != DL.cols() || NL.rows() != p)
        throw InconsistentDims("left fraction blocks have inconsistent shapes");
    PolySystemMatrix<S> sm{DL, NL,
                           PolyMatrix<S>({Mat<S>::Identity(p, p)}),
                           PolyMatrix<S>::zero(p, m)};
    PencilRealization<S> sys = spm_linearize<S>(sm);
    return minimal ? lpsminreal<S>(std::move(sys), tol).sys : sys;
}

// Right fraction R = NR DR^{-1}.
template <class S>
PencilRealization<S> rpmfd_linearize(const PolyMatrix<S>& NR, const PolyMatrix<S>& DR,
                                     bool minimal = true, const Tol& tol = {}) {
    const Eigen::Index p = NR.rows(), m = DR.cols();
    if (DR.rows() != DR.cols() || NR.cols() != m)
        throw InconsistentDims("right fraction blocks have inconsistent shapes");
    PolySystemMatrix<S> sm{DR, PolyMatrix<S>({Mat<S>::Identity(m, m)}), NR,
                           PolyMatrix<S>::zero(p, m)};
    PencilRealization<S> sys = spm_linearize<S>(sm);
    return minimal ? lpsminreal<S>(std::move(sys), tol).sys : sys;
}

// Polynomial inverse R = P^{-1} (P square and regular).
template <class S>
PencilRealization<S> pminv_linearize(const PolyMatrix<S>& P, bool minimal = true,
                                     const Tol& tol = {}) {
    if (P.rows() != P.cols()) throw InconsistentDims("inverse needs a square matrix");
    const Eigen::Index n = P.rows();
    PolySystemMatrix<S> sm{P, PolyMatrix<S>({Mat<S>::Identity(n, n)}),
                           PolyMatrix<S>({Mat<S>::Identity(n, n)}),
                           PolyMatrix<S>::zero(n, n)};
    PencilRealization<S> sys = spm_linearize<S>(sm);
    return minimal ? lpsminreal<S>(std::move(sys), tol).sys : sys;
}

}  // namespace pmstruct
