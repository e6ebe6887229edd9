#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "pmstruct/polymat.hpp"

// Exact-arithmetic reference implementations ("the oracle").  Everything here
// works over arbitrary-precision rationals so that Smith forms, multiplicities
// and minimal indices are computed without any tolerance decisions.  The
// numerical modules are validated against these results in the test suite.

namespace pmstruct::exact {

using Rat = mpq_class;

struct ExactPoly {
    std::vector<Rat> c;  // ascending powers, trailing zeros trimmed

    ExactPoly() = default;
    explicit ExactPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }
    static ExactPoly constant(const Rat& v);
    static ExactPoly from_double_coeffs(const std::vector<double>& coeffs);

    void trim();
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    bool is_one() const { return c.size() == 1 && c[0] == 1; }
    Rat lead() const { return c.empty() ? Rat(0) : c.back(); }
    Rat eval(const Rat& x) const;
    ExactPoly monic() const;
    ExactPoly reversed(int grade) const;  // x^grade * p(1/x), grade >= degree

    friend ExactPoly operator+(const ExactPoly& a, const ExactPoly& b);
    friend ExactPoly operator-(const ExactPoly& a, const ExactPoly& b);
    friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b);
    friend bool operator==(const ExactPoly& a, const ExactPoly& b) { return a.c == b.c; }
    std::string str(const std::string& var = "x") const;
};

std::pair<ExactPoly, ExactPoly> divrem(const ExactPoly& a, const ExactPoly& b);
ExactPoly gcd(ExactPoly a, ExactPoly b);  // monic
ExactPoly lcm(const ExactPoly& a, const ExactPoly& b);
// Largest e with (x - a)^e dividing p (p must be nonzero).
int root_multiplicity(const ExactPoly& p, const Rat& a);

struct ExactPolyMatrix {
    Eigen::Index m = 0, n = 0;
    std::vector<ExactPoly> e;  // row-major, size m*n

    ExactPolyMatrix() = default;
    ExactPolyMatrix(Eigen::Index rows, Eigen::Index cols)
        : m(rows), n(cols), e(static_cast<size_t>(rows * cols)) {}
    static ExactPolyMatrix from(const PolyMatrix<double>& P);  // dyadic-exact

    ExactPoly& at(Eigen::Index i, Eigen::Index j) { return e[static_cast<size_t>(i * n + j)]; }
    const ExactPoly& at(Eigen::Index i, Eigen::Index j) const {
        return e[static_cast<size_t>(i * n + j)];
    }
    ExactPolyMatrix transpose() const;
    ExactPolyMatrix reversed(int grade) const;  // entrywise rev_grade
    int degree() const;                         // max entry degree, -1 if zero
    PolyMatrix<double> to_double() const;
};

ExactPolyMatrix operator*(const ExactPolyMatrix& a, const ExactPolyMatrix& b);

// Smith normal form over Q[x]: monic invariant polynomials d_1 | d_2 | ... | d_r.
struct ExactSmithData {
    Eigen::Index rank = 0;
    std::vector<ExactPoly> invariants;  // size rank, divisibility chain, monic
};

ExactSmithData exact_smith(const ExactPolyMatrix& P);

// Partial multiplicities of lam0 (resp. infinity at the given grade): the full
// nondecreasing list of exponents across all invariant polynomials, including
// leading zeros, of length rank(P).
std::vector<int> exact_mults_at(const ExactPolyMatrix& P, const Rat& lam0);
std::vector<int> exact_mults_at_infinity(const ExactPolyMatrix& P, int grade);

// All distinct rational roots among the invariant polynomials are not computed
// here (root finding is the numerical side's job); tests probe known lam0.

// Right/left minimal indices by brute force: nullities of the block-Toeplitz
// convolution matrices S_d for d = 0,1,...,dmax, converted to index counts via
// the increment formula.  Throws BoundTooSmall if dmax does not reach the full
// nullspace dimension.
std::pair<std::vector<int>, std::vector<int>> minimal_indices_bruteforce(
    const ExactPolyMatrix& P, int dmax);

// Exact nullity of the stacked coefficient (convolution) matrix of degree d.
Eigen::Index convolution_nullity(const ExactPolyMatrix& P, int d);

// Integer identity checks over already-computed structural data.  Returns the
// list of violated identities with diagnostics; empty means consistent.
struct StructuralData {
    Eigen::Index m = 0, n = 0;
    Eigen::Index r = 0;           // normal rank
    int grade = 0;                // grade the infinite structure refers to
    long long delta_fin = 0;      // sum of finite partial multiplicities
    std::vector<int> alpha_inf;   // infinite partial multiplicities, length r
    std::vector<int> eps;         // right minimal indices
    std::vector<int> eta;         // left minimal indices
};

std::vector<std::string> structure_consistency(const StructuralData& d);

}  // namespace pmstruct::exact
