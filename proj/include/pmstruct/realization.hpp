#pragma once

#include <utility>

#include "pmstruct/pencil.hpp"
#include "pmstruct/types.hpp"

// Realization containers shared by the linearization builders and the
// minimality reductions.
//
// A descriptor realization holds constant (A, E, B, C, D) and realizes
//     R(x) = C (xE - A)^{-1} B + D.
// A pencil realization additionally carries first-order polynomial input,
// output and feedthrough maps:
//     R(x) = (C - xG)(xE - A)^{-1}(B - xF) + D - xH,
// i.e. the Schur complement of the (1,1) block of the linear system matrix
//     S(x) = [ A - xE   B - xF ]
//            [ C - xG   D - xH ].

namespace pmstruct {

template <class S>
struct DescriptorRealization {
    Mat<S> A, E, B, C, D;

    Eigen::Index order() const { return A.rows(); }
    Eigen::Index outputs() const { return D.rows(); }
    Eigen::Index inputs() const { return D.cols(); }

    void validate() const {
        const Eigen::Index n = A.rows(), p = D.rows(), m = D.cols();
        if (A.cols() != n || E.rows() != n || E.cols() != n || B.rows() != n || B.cols() != m ||
            C.rows() != p || C.cols() != n)
            throw InconsistentDims("descriptor realization blocks have inconsistent shapes");
    }

    DescriptorRealization transposed() const { return {A.transpose(), E.transpose(), C.transpose(), B.transpose(), D.transpose()}; }
};

template <class S>
struct PencilRealization {
    Mat<S> A, E, B, F, C, G, D, H;

    Eigen::Index order() const { return A.rows(); }
    Eigen::Index outputs() const { return D.rows(); }
    Eigen::Index inputs() const { return D.cols(); }

    void validate() const {
        const Eigen::Index n = A.rows(), p = D.rows(), m = D.cols();
        if (A.cols() != n || E.rows() != n || E.cols() != n || B.rows() != n || B.cols() != m ||
            F.rows() != n || F.cols() != m || C.rows() != p || C.cols() != n || G.rows() != p ||
            G.cols() != n || H.rows() != p || H.cols() != m)
            throw InconsistentDims("pencil realization blocks have inconsistent shapes");
    }

    PencilRealization transposed() const {
        return {A.transpose(), E.transpose(), C.transpose(), G.transpose(),
                B.transpose(), F.transpose(), D.transpose(), H.transpose()};
    }
};

template <class S>
PencilRealization<S> to_pencil_realization(const DescriptorRealization<S>& d) {
    const Eigen::Index n = d.order(), p = d.outputs(), m = d.inputs();
    return {d.A, d.E, d.B, Mat<S>::Zero(n, m), d.C, Mat<S>::Zero(p, n), d.D, Mat<S>::Zero(p, m)};
}

// Transfer-function evaluation.  Throws SingularPencil when x hits an
// eigenvalue of (A, E); callers probing at arbitrary points catch and move on.
template <class S, class X>
auto eval_transfer(const PencilRealization<S>& sys, const X& x) {
    using W = std::conditional_t<scalar_traits<S>::is_complex || std::is_same_v<X, cplx>, cplx, S>;
    const W xv(x);
    Mat<W> DH = sys.D.template cast<W>() - xv * sys.H.template cast<W>();
    if (sys.order() == 0) return DH;
    Mat<W> T = xv * sys.E.template cast<W>() - sys.A.template cast<W>();
    Eigen::PartialPivLU<Mat<W>> lu(T);
    // PartialPivLU has no rank query; detect singularity from the U factor.
    const double dmax = lu.matrixLU().diagonal().cwiseAbs().maxCoeff();
    const double dmin = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (dmin <= 1e4 * eps * std::max(dmax, 1.0))
        throw SingularPencil("transfer evaluation at an eigenvalue of (A, E)");
    Mat<W> X1 = lu.solve(sys.B.template cast<W>() - xv * sys.F.template cast<W>());
    return ((sys.C.template cast<W>() - xv * sys.G.template cast<W>()) * X1 + DH).eval();
}

template <class S, class X>
auto eval_transfer(const DescriptorRealization<S>& sys, const X& x) {
    return eval_transfer(to_pencil_realization(sys), x);
}

// System matrix as a pencil M - xN: zeros of R (for a strongly minimal
// realization) are the eigenvalue structure of this pencil.
template <class S>
Pencil<S> zero_pencil(const PencilRealization<S>& sys) {
    const Eigen::Index n = sys.order(), p = sys.outputs(), m = sys.inputs();
    Mat<S> M(n + p, n + m), N(n + p, n + m);
    M << sys.A, sys.B, sys.C, sys.D;
    N << sys.E, sys.F, sys.G, sys.H;
    return Pencil<S>(std::move(M), std::move(N));
}

// Bordered system matrix whose zero structure is the pole structure of R:
// appending identity input/output borders turns poles into zeros.
template <class S>
Pencil<S> pole_pencil(const PencilRealization<S>& sys) {
    const Eigen::Index n = sys.order(), p = sys.outputs(), m = sys.inputs();
    Mat<S> M = Mat<S>::Zero(n + p + m, n + m + p);
    Mat<S> N = Mat<S>::Zero(n + p + m, n + m + p);
    M.topLeftCorner(n, n) = sys.A;
    M.block(0, n, n, m) = sys.B;
    M.block(n, 0, p, n) = sys.C;
    M.block(n, n, p, m) = sys.D;
    M.block(n, n + m, p, p) = Mat<S>::Identity(p, p);
    M.block(n + p, n, m, m) = Mat<S>::Identity(m, m);
    N.topLeftCorner(n, n) = sys.E;
    N.block(0, n, n, m) = sys.F;
    N.block(n, 0, p, n) = sys.G;
    N.block(n, n, p, m) = sys.H;
    return Pencil<S>(std::move(M), std::move(N));
}

// Controllability and observability pencils; strong minimality demands that
// they have no finite or infinite eigenvalue structure at all.
template <class S>
Pencil<S> controllability_pencil(const PencilRealization<S>& sys) {
    const Eigen::Index n = sys.order(), m = sys.inputs();
    Mat<S> M(n, n + m), N(n, n + m);
    M << sys.A, sys.B;
    N << sys.E, sys.F;
    return Pencil<S>(std::move(M), std::move(N));
}

template <class S>
Pencil<S> observability_pencil(const PencilRealization<S>& sys) {
    const Eigen::Index n = sys.order(), p = sys.outputs();
    Mat<S> M(n + p, n), N(n + p, n);
    M << sys.A, sys.C;
    N << sys.E, sys.G;
    return Pencil<S>(std::move(M), std::move(N));
}

}  // namespace pmstruct
