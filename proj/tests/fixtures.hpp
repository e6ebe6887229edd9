#pragma once

#include <initializer_list>

#include "pmstruct/polymat.hpp"

// Shared worked-example data used across the test suite.
//
// Example A: the 3x3 degree-2 singular polynomial matrix with normal rank 2,
// finite eigenvalue 1, one infinite pole of multiplicity 2, right index 0 and
// left index 1.  Example B: the same matrix divided entrywise by (x+1).

namespace fx {

using pmstruct::Mat;
using pmstruct::PolyMatrix;
using pmstruct::RationalMatrix;

inline Eigen::MatrixXd mk(std::initializer_list<std::initializer_list<double>> rows) {
    const auto m = static_cast<Eigen::Index>(rows.size());
    const auto n = static_cast<Eigen::Index>(rows.begin()->size());
    Eigen::MatrixXd M(m, n);
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (double v : r) M(i, j++) = v;
        ++i;
    }
    return M;
}

// --- Example A ------------------------------------------------------------

inline Eigen::MatrixXd exA_P0() { return mk({{1, 2, -2}, {0, -1, -2}, {0, 0, 0}}); }
inline Eigen::MatrixXd exA_P1() { return mk({{1, 3, 0}, {1, 4, 2}, {0, -1, -2}}); }
inline Eigen::MatrixXd exA_P2() { return mk({{1, 4, 2}, {0, 0, 0}, {1, 4, 2}}); }

inline PolyMatrix<double> exA() {
    return PolyMatrix<double>({exA_P0(), exA_P1(), exA_P2()});
}

// Unimodular transformations bringing Example A to Smith form.
inline PolyMatrix<double> exA_U() {
    return PolyMatrix<double>({mk({{1, -1, -1}, {0, 1, 0}, {0, 0, 1}}),
                               mk({{0, 0, 0}, {-1, 1, 1}, {0, -1, 0}})});
}
inline PolyMatrix<double> exA_V() {
    return PolyMatrix<double>({mk({{1, -3, 6}, {0, 1, -2}, {0, 0, 1}})});
}

// First companion form of Example A as displayed.
inline Eigen::MatrixXd exA_M1() {
    return mk({{-1, -3, 0, -1, -2, 2},
               {-1, -4, -2, 0, 1, 2},
               {0, 1, 2, 0, 0, 0},
               {1, 0, 0, 0, 0, 0},
               {0, 1, 0, 0, 0, 0},
               {0, 0, 1, 0, 0, 0}});
}
inline Eigen::MatrixXd exA_N1() {
    return mk({{1, 4, 2, 0, 0, 0},
               {0, 0, 0, 0, 0, 0},
               {1, 4, 2, 0, 0, 0},
               {0, 0, 0, 1, 0, 0},
               {0, 0, 0, 0, 1, 0},
               {0, 0, 0, 0, 0, 1}});
}

// Order-1 strongly minimal pencil realization of Example A (rank-1 factorization
// of the leading coefficient: P2 = [1;0;1] * [1 4 2]).
struct Order1Real {
    Eigen::MatrixXd A = mk({{-1}});
    Eigen::MatrixXd E = mk({{0}});
    Eigen::MatrixXd B = mk({{0, 0, 0}});
    Eigen::MatrixXd F = mk({{1, 4, 2}});
    Eigen::MatrixXd C = mk({{0}, {0}, {0}});
    Eigen::MatrixXd G = mk({{1}, {0}, {1}});
    Eigen::MatrixXd D = exA_P0();
    Eigen::MatrixXd H = -exA_P1();
};

// Order-4 irreducible descriptor realization of Example A.
struct Order4Descriptor {
    Eigen::MatrixXd A = mk({{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, -1, 0}});
    Eigen::MatrixXd E = mk({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
    Eigen::MatrixXd B = mk({{0, 0, 0}, {0, 0, 0}, {1, 4, 2}, {0, -1, -2}});
    Eigen::MatrixXd C = mk({{0, 0, -1, -1}, {0, 0, -1, 0}, {0, 0, 0, -1}});
    Eigen::MatrixXd D = mk({{1, 2, -2}, {0, -1, -2}, {0, 0, 0}});
};

// --- Example B ------------------------------------------------------------

inline RationalMatrix<double> exB() {
    auto num = pmstruct::pm_convert(exA());
    std::vector<std::vector<pmstruct::Poly<double>>> den(
        3, std::vector<pmstruct::Poly<double>>(3, pmstruct::Poly<double>({1.0, 1.0})));
    return RationalMatrix<double>(std::move(num), std::move(den));
}

// Minimal realization of the strictly proper part of Example B.  The residue
// matrix of the lone pole -1 is [[1,3,0],[-1,-5,-4],[1,5,4]] (row 3 = -row 2),
// so the rank-2 factorization C * B with A = -I gives a minimal realization.
struct ExBMinSp {
    Eigen::MatrixXd A = mk({{-1, 0}, {0, -1}});
    Eigen::MatrixXd B = mk({{1, 3, 0}, {-1, -5, -4}});
    Eigen::MatrixXd C = mk({{1, 0}, {0, 1}, {0, -1}});
};

// Polynomial part of Example B written as D - x*H: entrywise quotients of the
// division by (x+1), e.g. (2x-2)/(x+1) = 2 - 4/(x+1) puts 2 in position (2,3)
// of D with residue -4 feeding the strictly proper part.
inline Eigen::MatrixXd exB_Dpol() { return mk({{0, -1, -2}, {1, 4, 2}, {-1, -5, -4}}); }
inline Eigen::MatrixXd exB_Hpol() { return mk({{-1, -4, -2}, {0, 0, 0}, {-1, -4, -2}}); }

inline PolyMatrix<double> exB_pol() {
    return PolyMatrix<double>({exB_Dpol(), -exB_Hpol()});
}

}  // namespace fx
