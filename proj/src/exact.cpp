#include "pmstruct/exact.hpp"

#include <algorithm>
#include <sstream>

namespace pmstruct::exact {

// ---------------------------------------------------------------------------
// ExactPoly

ExactPoly ExactPoly::constant(const Rat& v) {
    ExactPoly p;
    if (v != 0) p.c = {v};
    return p;
}

ExactPoly ExactPoly::from_double_coeffs(const std::vector<double>& coeffs) {
    std::vector<Rat> c;
    c.reserve(coeffs.size());
    for (double v : coeffs) c.emplace_back(v);  // doubles are dyadic: conversion is exact
    return ExactPoly(std::move(c));
}

void ExactPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

Rat ExactPoly::eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

ExactPoly ExactPoly::monic() const {
    if (is_zero()) return {};
    ExactPoly p = *this;
    const Rat l = p.c.back();
    for (auto& v : p.c) v /= l;
    return p;
}

ExactPoly ExactPoly::reversed(int grade) const {
    if (grade < degree()) throw GradeTooSmall("reversal grade below actual degree");
    ExactPoly r;
    r.c.assign(static_cast<size_t>(grade) + 1, Rat(0));
    for (size_t i = 0; i < c.size(); ++i) r.c[static_cast<size_t>(grade) - i] = c[i];
    r.trim();
    return r;
}

ExactPoly operator+(const ExactPoly& a, const ExactPoly& b) {
    ExactPoly r;
    r.c.assign(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    r.trim();
    return r;
}

ExactPoly operator-(const ExactPoly& a, const ExactPoly& b) {
    ExactPoly r;
    r.c.assign(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    r.trim();
    return r;
}

ExactPoly operator*(const ExactPoly& a, const ExactPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    ExactPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    r.trim();
    return r;
}

std::string ExactPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rat& v = c[static_cast<size_t>(i)];
        if (v == 0) continue;
        if (!first) os << (v > 0 ? " + " : " - ");
        else if (v < 0) os << "-";
        first = false;
        const Rat a = abs(v);
        if (a != 1 || i == 0) os << a.get_str();
        if (i > 0) {
            if (a != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::pair<ExactPoly, ExactPoly> divrem(const ExactPoly& a, const ExactPoly& b) {
    if (b.is_zero()) throw Error("exact polynomial division by zero");
    ExactPoly q, r = a;
    const int db = b.degree();
    if (a.degree() >= db) q.c.assign(static_cast<size_t>(a.degree() - db) + 1, Rat(0));
    while (r.degree() >= db) {
        const int shift = r.degree() - db;
        const Rat f = r.lead() / b.lead();
        q.c[static_cast<size_t>(shift)] += f;
        for (int i = 0; i <= db; ++i)
            r.c[static_cast<size_t>(i + shift)] -= f * b.c[static_cast<size_t>(i)];
        r.trim();
    }
    q.trim();
    return {q, r};
}

static bool divides(const ExactPoly& d, const ExactPoly& a) {
    if (a.is_zero()) return true;
    if (d.is_zero()) return false;
    return divrem(a, d).second.is_zero();
}

ExactPoly gcd(ExactPoly a, ExactPoly b) {
    while (!b.is_zero()) {
        ExactPoly r = divrem(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

ExactPoly lcm(const ExactPoly& a, const ExactPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const ExactPoly g = gcd(a, b);
    return (a * divrem(b, g).first).monic();
}

int root_multiplicity(const ExactPoly& p, const Rat& a) {
    if (p.is_zero()) throw Error("root multiplicity of the zero polynomial");
    ExactPoly q = p;
    const ExactPoly lin({-a, Rat(1)});  // x - a
    int mult = 0;
    while (!q.is_zero() && q.eval(a) == 0) {
        q = divrem(q, lin).first;
        ++mult;
    }
    return mult;
}

// ---------------------------------------------------------------------------
// ExactPolyMatrix

ExactPolyMatrix ExactPolyMatrix::from(const PolyMatrix<double>& P) {
    ExactPolyMatrix E(P.rows(), P.cols());
    for (Eigen::Index i = 0; i < P.rows(); ++i)
        for (Eigen::Index j = 0; j < P.cols(); ++j) {
            std::vector<double> cs;
            cs.reserve(P.coeff.size());
            for (const auto& ck : P.coeff) cs.push_back(ck(i, j));
            E.at(i, j) = ExactPoly::from_double_coeffs(cs);
        }
    return E;
}

ExactPolyMatrix ExactPolyMatrix::transpose() const {
    ExactPolyMatrix T(n, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) T.at(j, i) = at(i, j);
    return T;
}

ExactPolyMatrix ExactPolyMatrix::reversed(int grade) const {
    ExactPolyMatrix R(m, n);
    for (size_t i = 0; i < e.size(); ++i) R.e[i] = e[i].reversed(grade);
    return R;
}

int ExactPolyMatrix::degree() const {
    int d = -1;
    for (const auto& p : e) d = std::max(d, p.degree());
    return d;
}

PolyMatrix<double> ExactPolyMatrix::to_double() const {
    const int d = std::max(degree(), 0);
    auto P = PolyMatrix<double>::zero(m, n, d);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (size_t k = 0; k < at(i, j).c.size(); ++k)
                P.coeff[k](i, j) = at(i, j).c[k].get_d();
    return P;
}

ExactPolyMatrix operator*(const ExactPolyMatrix& a, const ExactPolyMatrix& b) {
    if (a.n != b.m) throw InconsistentDims("exact matrix product shape mismatch");
    ExactPolyMatrix r(a.m, b.n);
    for (Eigen::Index i = 0; i < a.m; ++i)
        for (Eigen::Index j = 0; j < b.n; ++j) {
            ExactPoly acc;
            for (Eigen::Index k = 0; k < a.n; ++k) acc = acc + a.at(i, k) * b.at(k, j);
            r.at(i, j) = acc;
        }
    return r;
}

// ---------------------------------------------------------------------------
// Smith normal form

ExactSmithData exact_smith(const ExactPolyMatrix& P) {
    const Eigen::Index m = P.m, n = P.n;
    std::vector<std::vector<ExactPoly>> A(static_cast<size_t>(m),
                                          std::vector<ExactPoly>(static_cast<size_t>(n)));
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) A[static_cast<size_t>(i)][static_cast<size_t>(j)] = P.at(i, j);

    const size_t mm = static_cast<size_t>(m), nn = static_cast<size_t>(n);
    size_t t = 0;
    while (t < mm && t < nn) {
        // Pivot: minimal-degree nonzero entry of the trailing submatrix,
        // first in row-major order among ties.
        size_t pi = mm, pj = nn;
        int pdeg = -1;
        for (size_t i = t; i < mm; ++i)
            for (size_t j = t; j < nn; ++j)
                if (!A[i][j].is_zero() && (pdeg < 0 || A[i][j].degree() < pdeg)) {
                    pdeg = A[i][j].degree();
                    pi = i;
                    pj = j;
                }
        if (pdeg < 0) break;  // trailing submatrix is zero
        std::swap(A[t], A[pi]);
        if (pj != t)
            for (size_t i = 0; i < mm; ++i) std::swap(A[i][t], A[i][pj]);

        // Euclidean elimination: reduce the pivot column and row by remainders;
        // whenever a nonzero remainder (degree < pivot) appears, it becomes the
        // new pivot and the sweep restarts.  The pivot degree strictly
        // decreases across restarts, so this terminates.
        for (bool dirty = true; dirty;) {
            dirty = false;
            for (size_t i = t + 1; i < mm && !dirty; ++i) {
                if (A[i][t].is_zero()) continue;
                auto [q, r] = divrem(A[i][t], A[t][t]);
                for (size_t j = t; j < nn; ++j) A[i][j] = A[i][j] - q * A[t][j];
                if (!A[i][t].is_zero()) {
                    std::swap(A[t], A[i]);
                    dirty = true;
                }
            }
            if (dirty) continue;
            for (size_t j = t + 1; j < nn && !dirty; ++j) {
                if (A[t][j].is_zero()) continue;
                auto [q, r] = divrem(A[t][j], A[t][t]);
                for (size_t i = t; i < mm; ++i) A[i][j] = A[i][j] - q * A[i][t];
                if (!A[t][j].is_zero()) {
                    for (size_t i = 0; i < mm; ++i) std::swap(A[i][t], A[i][j]);
                    dirty = true;
                }
            }
        }
        ++t;
    }

    std::vector<ExactPoly> diag;
    for (size_t i = 0; i < t; ++i) diag.push_back(A[i][i]);

    // Enforce the divisibility chain: diag(a,b) is unimodularly equivalent to
    // diag(gcd(a,b), lcm(a,b)), so pairwise fix-ups converge to the Smith form.
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t i = 0; i + 1 < diag.size(); ++i)
            for (size_t j = i + 1; j < diag.size(); ++j)
                if (!divides(diag[i], diag[j])) {
                    const ExactPoly g = gcd(diag[i], diag[j]);
                    diag[j] = lcm(diag[i], diag[j]);
                    diag[i] = g;
                    changed = true;
                }
    }
    for (auto& d : diag) d = d.monic();
    std::sort(diag.begin(), diag.end(),
              [](const ExactPoly& a, const ExactPoly& b) { return a.degree() < b.degree(); });

    ExactSmithData out;
    out.rank = static_cast<Eigen::Index>(diag.size());
    out.invariants = std::move(diag);
    return out;
}

// ---------------------------------------------------------------------------
// Multiplicities

std::vector<int> exact_mults_at(const ExactPolyMatrix& P, const Rat& lam0) {
    const ExactSmithData s = exact_smith(P);
    std::vector<int> mults;
    mults.reserve(s.invariants.size());
    for (const auto& d : s.invariants) mults.push_back(root_multiplicity(d, lam0));
    return mults;  // nondecreasing by the divisibility chain
}

std::vector<int> exact_mults_at_infinity(const ExactPolyMatrix& P, int grade) {
    if (grade < P.degree()) throw GradeTooSmall("grade below actual degree");
    return exact_mults_at(P.reversed(grade), Rat(0));
}

// ---------------------------------------------------------------------------
// Minimal indices

Eigen::Index convolution_nullity(const ExactPolyMatrix& P, int d) {
    const int k = std::max(P.degree(), 0);
    const Eigen::Index m = P.m, n = P.n;
    const Eigen::Index rows = m * (k + d + 1), cols = n * (d + 1);
    // Dense block-Toeplitz matrix: block (bi, bj) holds coefficient bi-bj of P.
    std::vector<std::vector<Rat>> M(static_cast<size_t>(rows),
                                    std::vector<Rat>(static_cast<size_t>(cols), Rat(0)));
    for (int bi = 0; bi <= k + d; ++bi)
        for (int bj = 0; bj <= d; ++bj) {
            const int ci = bi - bj;
            if (ci < 0 || ci > k) continue;
            for (Eigen::Index i = 0; i < m; ++i)
                for (Eigen::Index j = 0; j < n; ++j) {
                    const ExactPoly& p = P.at(i, j);
                    if (ci <= p.degree())
                        M[static_cast<size_t>(bi * m + i)][static_cast<size_t>(bj * n + j)] =
                            p.c[static_cast<size_t>(ci)];
                }
        }
    // Exact Gaussian elimination.
    size_t rank = 0;
    for (size_t col = 0; col < static_cast<size_t>(cols) && rank < static_cast<size_t>(rows);
         ++col) {
        size_t piv = rank;
        while (piv < static_cast<size_t>(rows) && M[piv][col] == 0) ++piv;
        if (piv == static_cast<size_t>(rows)) continue;
        std::swap(M[rank], M[piv]);
        for (size_t i = rank + 1; i < static_cast<size_t>(rows); ++i) {
            if (M[i][col] == 0) continue;
            const Rat f = M[i][col] / M[rank][col];
            for (size_t j = col; j < static_cast<size_t>(cols); ++j) M[i][j] -= f * M[rank][j];
        }
        ++rank;
    }
    return cols - static_cast<Eigen::Index>(rank);
}

static std::vector<int> right_indices_bruteforce(const ExactPolyMatrix& P, Eigen::Index count,
                                                 int dmax) {
    std::vector<int> idx;
    if (count == 0) return idx;
    Eigen::Index nu_prev = 0;    // nullity of S_{d-1}
    Eigen::Index delta_prev = 0; // number of indices <= d-1
    for (int d = 0; d <= dmax; ++d) {
        const Eigen::Index nu = convolution_nullity(P, d);
        const Eigen::Index delta = nu - nu_prev;  // number of indices <= d
        for (Eigen::Index c = 0; c < delta - delta_prev; ++c) idx.push_back(d);
        if (delta == count) return idx;
        nu_prev = nu;
        delta_prev = delta;
    }
    throw BoundTooSmall("degree bound too small to capture all minimal indices");
}

std::pair<std::vector<int>, std::vector<int>> minimal_indices_bruteforce(
    const ExactPolyMatrix& P, int dmax) {
    const Eigen::Index r = exact_smith(P).rank;
    auto right = right_indices_bruteforce(P, P.n - r, dmax);
    auto left = right_indices_bruteforce(P.transpose(), P.m - r, dmax);
    return {std::move(right), std::move(left)};
}

// ---------------------------------------------------------------------------
// Identity checks

std::vector<std::string> structure_consistency(const StructuralData& d) {
    std::vector<std::string> bad;
    auto fail = [&bad](const std::string& s) { bad.push_back(s); };

    if (static_cast<Eigen::Index>(d.eps.size()) != d.n - d.r)
        fail("right index count: expected n - r = " + std::to_string(d.n - d.r) + ", got " +
             std::to_string(d.eps.size()));
    if (static_cast<Eigen::Index>(d.eta.size()) != d.m - d.r)
        fail("left index count: expected m - r = " + std::to_string(d.m - d.r) + ", got " +
             std::to_string(d.eta.size()));
    if (static_cast<Eigen::Index>(d.alpha_inf.size()) != d.r)
        fail("infinite multiplicity list length: expected r = " + std::to_string(d.r) +
             ", got " + std::to_string(d.alpha_inf.size()));

    long long delta_inf = 0;
    for (int a : d.alpha_inf) {
        if (a < 0) fail("negative infinite partial multiplicity");
        delta_inf += a;
    }
    long long mu = 0;
    for (int v : d.eps) mu += v;
    for (int v : d.eta) mu += v;

    // Index sum: delta_fin + delta_inf + mu = grade * r.
    const long long lhs = d.delta_fin + delta_inf + mu;
    const long long rhs = static_cast<long long>(d.grade) * d.r;
    if (lhs != rhs)
        fail("index sum: delta_fin + delta_inf + mu = " + std::to_string(lhs) +
             " != grade * rank = " + std::to_string(rhs));

    // Pole/zero balance: for a polynomial matrix all finite structure is zeros,
    // so with sigma_i = alpha_i - grade,
    //   delta_poles = sum of |negative sigma|, delta_zeros = delta_fin + sum of positive sigma,
    // and delta_poles = delta_zeros + mu must hold.
    long long dp = 0, dz = d.delta_fin;
    for (int a : d.alpha_inf) {
        const long long sig = static_cast<long long>(a) - d.grade;
        if (sig < 0) dp -= sig;
        else dz += sig;
    }
    if (dp != dz + mu)
        fail("pole/zero balance: delta_poles = " + std::to_string(dp) +
             " != delta_zeros + mu = " + std::to_string(dz + mu));

    for (size_t i = 0; i + 1 < d.alpha_inf.size(); ++i)
        if (d.alpha_inf[i] > d.alpha_inf[i + 1])
            fail("infinite partial multiplicities not nondecreasing");

    return bad;
}

}  // namespace pmstruct::exact
