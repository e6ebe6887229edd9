#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pmstruct/poly.hpp"
#include "pmstruct/types.hpp"

// Polynomial matrices P(x) = sum_i x^i * coeff[i] stored as a list of dense
// coefficient matrices (ascending powers), and rational matrices stored as
// entrywise numerator/denominator polynomial grids.  The stored grade
// (coeff.size()-1) may exceed the actual degree; several structural results
// depend on the chosen grade, so it is preserved rather than normalised away.

namespace pmstruct {

template <class S>
struct PolyMatrix {
    std::vector<Mat<S>> coeff;  // coeff[i] is rows() x cols(), i = 0..grade()

    PolyMatrix() = default;
    explicit PolyMatrix(std::vector<Mat<S>> cs) : coeff(std::move(cs)) {
        for (const auto& c : coeff)
            if (c.rows() != coeff[0].rows() || c.cols() != coeff[0].cols())
                throw InconsistentDims("coefficient matrices differ in shape");
    }
    static PolyMatrix zero(Eigen::Index m, Eigen::Index n, int grade = 0) {
        PolyMatrix p;
        p.coeff.assign(static_cast<size_t>(grade) + 1, Mat<S>::Zero(m, n));
        return p;
    }

    Eigen::Index rows() const { return coeff.empty() ? 0 : coeff[0].rows(); }
    Eigen::Index cols() const { return coeff.empty() ? 0 : coeff[0].cols(); }
    int grade() const { return static_cast<int>(coeff.size()) - 1; }

    // Coefficient of x^i, zero-padded beyond the stored grade.
    Mat<S> at(int i) const {
        if (i < 0 || i > grade()) return Mat<S>::Zero(rows(), cols());
        return coeff[static_cast<size_t>(i)];
    }

    double max_coeff_abs() const {
        double m = 0.0;
        for (const auto& c : coeff)
            if (c.size() > 0) m = std::max(m, c.cwiseAbs().maxCoeff());
        return m;
    }

    // Copy with the grade raised to g (zero padding).  Lowering the grade is
    // only allowed across numerically-zero leading coefficients.
    PolyMatrix with_grade(int g, const Tol& tol = {}) const {
        if (g >= grade()) {
            PolyMatrix p = *this;
            p.coeff.resize(static_cast<size_t>(g) + 1, Mat<S>::Zero(rows(), cols()));
            return p;
        }
        const double thr = tol.atol + degree_rtol(tol, rows(), cols()) * max_coeff_abs();
        for (int i = g + 1; i <= grade(); ++i)
            if (coeff[static_cast<size_t>(i)].size() > 0 &&
                coeff[static_cast<size_t>(i)].cwiseAbs().maxCoeff() > thr)
                throw GradeTooSmall("requested grade is below the actual degree");
        PolyMatrix p = *this;
        p.coeff.resize(static_cast<size_t>(g) + 1);
        return p;
    }

    Poly<S> entry(Eigen::Index i, Eigen::Index j) const {
        std::vector<S> c(coeff.size());
        for (size_t d = 0; d < coeff.size(); ++d) c[d] = coeff[d](i, j);
        return Poly<S>(std::move(c));
    }

    PolyMatrix transpose() const {
        PolyMatrix p;
        p.coeff.reserve(coeff.size());
        for (const auto& c : coeff) p.coeff.push_back(c.transpose());
        return p;
    }
};

// Numerical degree: index of the largest coefficient above the detection
// threshold; std::nullopt for the (numerically) zero matrix.
template <class S>
std::optional<int> pm_degree(const PolyMatrix<S>& P, const Tol& tol = {}) {
    const double thr = tol.atol + degree_rtol(tol, P.rows(), P.cols()) * P.max_coeff_abs();
    for (int i = P.grade(); i >= 0; --i) {
        const auto& c = P.coeff[static_cast<size_t>(i)];
        if (c.size() > 0 && c.cwiseAbs().maxCoeff() > thr) return i;
    }
    return std::nullopt;
}

template <class S>
Mat<S> pm_eval(const PolyMatrix<S>& P, const S& x) {
    Mat<S> acc = Mat<S>::Zero(P.rows(), P.cols());
    for (auto it = P.coeff.rbegin(); it != P.coeff.rend(); ++it) acc = x * acc + *it;
    return acc;
}

// Real-coefficient matrices evaluated at complex points (needed for probe-point
// transfer checks whose sample set includes complex abscissae).
template <class S>
Mat<cplx> pm_eval_c(const PolyMatrix<S>& P, const cplx& x) {
    Mat<cplx> acc = Mat<cplx>::Zero(P.rows(), P.cols());
    for (auto it = P.coeff.rbegin(); it != P.coeff.rend(); ++it)
        acc = x * acc + it->template cast<cplx>();
    return acc;
}

// rev_j P(x) := x^j * P(1/x): coefficient i moves to slot j-i.
template <class S>
PolyMatrix<S> pm_reverse(const PolyMatrix<S>& P, int j) {
    const auto d = pm_degree(P);
    if (d && j < *d) throw GradeTooSmall("reversal grade below actual degree");
    if (j < 0) throw GradeTooSmall("reversal grade must be nonnegative");
    PolyMatrix<S> R = PolyMatrix<S>::zero(P.rows(), P.cols(), j);
    for (int i = 0; i <= std::min(j, P.grade()); ++i)
        R.coeff[static_cast<size_t>(j - i)] = P.coeff[static_cast<size_t>(i)];
    return R;
}

// Conversions between the entrywise polynomial grid and the coefficient-stack
// representation.
template <class S>
PolyMatrix<S> pm_convert(const std::vector<std::vector<Poly<S>>>& grid) {
    const size_t m = grid.size();
    if (m == 0) return PolyMatrix<S>();
    const size_t n = grid[0].size();
    int deg = 0;
    for (const auto& row : grid) {
        if (row.size() != n) throw RaggedGrid("rows of the polynomial grid differ in length");
        for (const auto& p : row) deg = std::max(deg, p.degree());
    }
    PolyMatrix<S> P = PolyMatrix<S>::zero(static_cast<Eigen::Index>(m),
                                          static_cast<Eigen::Index>(n), std::max(deg, 0));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t d = 0; d < grid[i][j].c.size(); ++d)
                P.coeff[d](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    grid[i][j].c[d];
    return P;
}

template <class S>
std::vector<std::vector<Poly<S>>> pm_convert(const PolyMatrix<S>& P) {
    std::vector<std::vector<Poly<S>>> grid(static_cast<size_t>(P.rows()),
                                           std::vector<Poly<S>>(static_cast<size_t>(P.cols())));
    for (Eigen::Index i = 0; i < P.rows(); ++i)
        for (Eigen::Index j = 0; j < P.cols(); ++j)
            grid[static_cast<size_t>(i)][static_cast<size_t>(j)] = P.entry(i, j);
    return grid;
}

template <class S>
struct RationalMatrix {
    std::vector<std::vector<Poly<S>>> num;
    std::vector<std::vector<Poly<S>>> den;  // entrywise, never the zero polynomial

    RationalMatrix() = default;
    RationalMatrix(std::vector<std::vector<Poly<S>>> n, std::vector<std::vector<Poly<S>>> d)
        : num(std::move(n)), den(std::move(d)) {
        if (num.size() != den.size()) throw RaggedGrid("numerator/denominator grid mismatch");
        for (size_t i = 0; i < num.size(); ++i) {
            if (num[i].size() != den[i].size() || (i > 0 && num[i].size() != num[0].size()))
                throw RaggedGrid("numerator/denominator grid mismatch");
            for (const auto& p : den[i])
                if (p.is_zero()) throw Error("zero denominator entry");
        }
    }
    static RationalMatrix from_poly(const PolyMatrix<S>& P) {
        RationalMatrix R;
        R.num = pm_convert(P);
        R.den.assign(static_cast<size_t>(P.rows()),
                     std::vector<Poly<S>>(static_cast<size_t>(P.cols()),
                                          Poly<S>::constant(S(1))));
        return R;
    }

    Eigen::Index rows() const { return static_cast<Eigen::Index>(num.size()); }
    Eigen::Index cols() const {
        return num.empty() ? 0 : static_cast<Eigen::Index>(num[0].size());
    }

    RationalMatrix transpose() const {
        RationalMatrix R;
        R.num.assign(static_cast<size_t>(cols()),
                     std::vector<Poly<S>>(static_cast<size_t>(rows())));
        R.den = R.num;
        for (size_t i = 0; i < num.size(); ++i)
            for (size_t j = 0; j < num[i].size(); ++j) {
                R.num[j][i] = num[i][j];
                R.den[j][i] = den[i][j];
            }
        return R;
    }
};

namespace detail {
// Magnitude scale of evaluating p at x: sum_i |c_i| |x|^i.  Used to decide
// whether an evaluated denominator is "zero at x" rather than merely small.
template <class S, class X>
double eval_scale(const Poly<S>& p, const X& x) {
    double acc = 0.0, pw = 1.0;
    const double ax = std::abs(x);
    for (const S& c : p.c) {
        acc += std::abs(c) * pw;
        pw *= ax;
    }
    return std::max(acc, 1.0);
}
}  // namespace detail

template <class S>
Mat<S> rm_eval(const RationalMatrix<S>& R, const S& x) {
    Mat<S> V(R.rows(), R.cols());
    for (Eigen::Index i = 0; i < R.rows(); ++i)
        for (Eigen::Index j = 0; j < R.cols(); ++j) {
            const auto& d = R.den[static_cast<size_t>(i)][static_cast<size_t>(j)];
            const S dv = d.eval(x);
            if (std::abs(dv) <= 100.0 * eps * detail::eval_scale(d, x))
                throw PoleAtEvaluationPoint("denominator vanishes at the evaluation point");
            V(i, j) = R.num[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(x) / dv;
        }
    return V;
}

template <class S>
Mat<cplx> rm_eval_c(const RationalMatrix<S>& R, const cplx& x) {
    Mat<cplx> V(R.rows(), R.cols());
    for (Eigen::Index i = 0; i < R.rows(); ++i)
        for (Eigen::Index j = 0; j < R.cols(); ++j) {
            const auto& d = R.den[static_cast<size_t>(i)][static_cast<size_t>(j)];
            const cplx dv = d.eval(x);
            if (std::abs(dv) <= 100.0 * eps * detail::eval_scale(d, x))
                throw PoleAtEvaluationPoint("denominator vanishes at the evaluation point");
            V(i, j) = R.num[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(x) / dv;
        }
    return V;
}

// Split R = Q + Rem with Q polynomial and Rem strictly proper, by entrywise
// Euclidean division of numerators by denominators.
template <class S>
std::pair<PolyMatrix<S>, RationalMatrix<S>> pm_divrem(const RationalMatrix<S>& R) {
    std::vector<std::vector<Poly<S>>> qgrid(static_cast<size_t>(R.rows()),
                                            std::vector<Poly<S>>(static_cast<size_t>(R.cols())));
    RationalMatrix<S> rem;
    rem.num = qgrid;
    rem.den = R.den;
    for (size_t i = 0; i < qgrid.size(); ++i)
        for (size_t j = 0; j < qgrid[i].size(); ++j) {
            auto [q, r] = poly_divrem(R.num[i][j], R.den[i][j]);
            qgrid[i][j] = std::move(q);
            rem.num[i][j] = std::move(r);
        }
    return {pm_convert(qgrid), rem};
}

template <class S>
bool rm_is_strictly_proper(const RationalMatrix<S>& R) {
    for (size_t i = 0; i < R.num.size(); ++i)
        for (size_t j = 0; j < R.num[i].size(); ++j)
            if (!R.num[i][j].is_zero() && R.num[i][j].degree() >= R.den[i][j].degree())
                return false;
    return true;
}

}  // namespace pmstruct
