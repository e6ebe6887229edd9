#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmstruct/linearize.hpp"
#include "pmstruct/pencil.hpp"
#include "pmstruct/polymat.hpp"
#include "pmstruct/realization.hpp"
#include "pmstruct/realize.hpp"

// Structural analysis of polynomial and rational matrices: normal rank,
// finite/infinite eigenvalues with partial multiplicities, zeros and poles,
// Kronecker minimal indices, regularity and unimodularity.  Every route
// reduces some linearization to Kronecker-like form; the routes differ in
// which pencil they build.

namespace pmstruct {

// Linearization route selector.  cf1/cf2: companion forms of the matrix
// itself.  lps: strongly minimal pencil realization.  ls: irreducible
// descriptor realization.
enum class Via { cf1, cf2, lps, ls };

enum class PZMethod { companion, pencil_lin, descriptor_lin };
enum class RankMethod { linearization, evaluation };
enum class RmMethod { descriptor_lin, pencil_lin };

// Complete structural data of one matrix.  Eigenvalue data (finiteEigs,
// alpha_inf) is grade-dependent and only populated for polynomial inputs;
// the zero/pole view is grade-independent.  Lists hold one entry per nonzero
// partial multiplicity; infinite multiplicity lists are ascending.
struct StructureReport {
    Eigen::Index rows = 0, cols = 0, r = 0;
    int grade = 0;
    std::string method;

    std::vector<EigenvalueCluster> finiteEigs;  // nonzero partial multiplicities
    std::vector<int> alpha_inf;                 // full length-r list at `grade`
    std::vector<int> eps, eta;

    std::vector<std::pair<cplx, int>> finiteZeros;
    std::vector<int> infZeros;
    std::vector<std::pair<cplx, int>> finitePoles;
    std::vector<int> infPoles;

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
    Eigen::Index delta_z() const {
        Eigen::Index s = 0;
        for (const auto& [v, q] : finiteZeros) s += q;
        for (int q : infZeros) s += q;
        return s;
    }
    Eigen::Index delta_p() const {
        Eigen::Index s = 0;
        for (const auto& [v, q] : finitePoles) s += q;
        for (int q : infPoles) s += q;
        return s;
    }
    std::vector<int> sigma_inf() const {
        std::vector<int> s(alpha_inf);
        for (int& v : s) v -= grade;
        return s;
    }
    // Index sum relations; structural data computed correctly satisfies both.
    bool index_sum_ok() const { return delta_fin() + delta_inf() + mu() == grade * r; }
    bool pole_zero_balance_ok() const { return delta_p() == delta_z() + mu(); }
};

namespace detail {

inline std::vector<std::pair<cplx, int>> flatten_clusters(
    const std::vector<EigenvalueCluster>& cs) {
    std::vector<std::pair<cplx, int>> out;
    for (const auto& c : cs)
        for (int q : c.mults)
            if (q > 0) out.emplace_back(c.value, q);
    return out;
}

// Infinite zero multiplicities of a pencil: a divisor of degree s carries an
// infinite zero of multiplicity s - 1.
inline std::vector<int> pencil_inf_zeros(const std::vector<int>& divisors) {
    std::vector<int> out;
    for (int s : divisors)
        if (s >= 2) out.push_back(s - 1);
    std::sort(out.begin(), out.end());
    return out;
}

// Rebuild the grade-k infinite partial multiplicities of a polynomial matrix
// from its infinite pole and zero orders: poles contribute k - order, zeros
// k + order, and the remaining r - l - u entries are exactly k.
inline std::vector<int> alpha_from_pole_zero(const std::vector<int>& infPoles,
                                             const std::vector<int>& infZeros, int k,
                                             Eigen::Index r) {
    if (static_cast<Eigen::Index>(infPoles.size() + infZeros.size()) > r)
        throw Error("more infinite poles and zeros than the normal rank admits");
    std::vector<int> a;
    for (int q : infPoles) {
        if (q > k) throw Error("infinite pole order exceeds the grade");
        a.push_back(k - q);
    }
    a.insert(a.end(), static_cast<size_t>(r) - infPoles.size() - infZeros.size(), k);
    for (int q : infZeros) a.push_back(k + q);
    std::sort(a.begin(), a.end());
    return a;
}

// Zero/pole view of a polynomial matrix from its grade-k eigenvalue data:
// sigma = alpha - k is grade-independent; negative entries are pole orders,
// positive ones zero multiplicities; finite zeros are the finite eigenvalues.
inline void fill_poly_pole_zero(StructureReport& rep) {
    rep.finiteZeros = flatten_clusters(rep.finiteEigs);
    rep.infZeros.clear();
    rep.infPoles.clear();
    for (int a : rep.alpha_inf) {
        const int s = a - rep.grade;
        if (s > 0) rep.infZeros.push_back(s);
        if (s < 0) rep.infPoles.push_back(-s);
    }
    std::sort(rep.infZeros.begin(), rep.infZeros.end());
    std::sort(rep.infPoles.begin(), rep.infPoles.end());
    rep.finitePoles.clear();  // a polynomial matrix has no finite poles
}

template <class S>
Eigen::Index constant_rank(const Mat<S>& A, const Tol& tol) {
    if (A.rows() == 0 || A.cols() == 0) return 0;
    Eigen::JacobiSVD<Mat<S>> svd(A);
    const auto& sv = svd.singularValues();
    const double thr = std::max(tol.atol, rank_rtol(tol, A.rows(), A.cols()) * sv(0));
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > thr) ++r;
    return r;
}

inline const char* via_name(Via v) {
    switch (v) {
        case Via::cf1: return "cf1";
        case Via::cf2: return "cf2";
        case Via::lps: return "lps";
        default: return "ls";
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Polynomial matrices.

// Complete Kronecker and pole/zero structure of P at the requested grade
// (default: degree).  Constant matrices (grade 0) have no eigenvalues and all
// minimal indices zero.
template <class S>
StructureReport pm_kstruct(const PolyMatrix<S>& P, Via via = Via::cf1, int grade = -1,
                           const Tol& tol = {}) {
    const int d = pm_degree(P).value_or(0);
    if (grade >= 0 && grade < d) throw GradeTooSmall("requested grade is below the degree");
    const int k = grade >= 0 ? grade : d;
    const Eigen::Index p = P.rows(), m = P.cols();

    StructureReport rep;
    rep.rows = p;
    rep.cols = m;
    rep.grade = k;
    rep.method = detail::via_name(via);

    if (k == 0) {
        rep.r = detail::constant_rank(P.at(0), tol);
        rep.eps.assign(static_cast<size_t>(m - rep.r), 0);
        rep.eta.assign(static_cast<size_t>(p - rep.r), 0);
        rep.alpha_inf.assign(static_cast<size_t>(rep.r), 0);
        detail::fill_poly_pole_zero(rep);
        return rep;
    }

    if (via == Via::cf1 || via == Via::cf2) {
        const auto cp = build_companion(
            P, via == Via::cf1 ? CompanionKind::first : CompanionKind::second, k, tol);
        const KroneckerStructure ks = pkstruct(cp.pencil.M, cp.pencil.N, tol);
        const PMStructure s = recover_structure(ks, cp);
        rep.r = s.r;
        rep.eps = s.eps;
        rep.eta = s.eta;
        rep.finiteEigs = s.finiteEigs;
        rep.alpha_inf = s.alpha_inf;
        detail::fill_poly_pole_zero(rep);
        return rep;
    }

    // Linearization routes: zeros and indices from the system matrix of a
    // strongly irreducible realization, poles from the pole pencil, and the
    // eigenvalue data reconstructed from both.
    const LinKind kind = via == Via::lps ? LinKind::pencil : LinKind::descriptor;
    const auto sys = rm_linearize(RationalMatrix<S>::from_poly(P), kind, SpMode::columnwise, tol);
    const Pencil<S> Z = zero_pencil(sys);
    const KroneckerStructure ks = pkstruct(Z.M, Z.N, tol);
    rep.r = ks.r - sys.order();
    if (rep.r < 0) throw Error("system matrix rank below the realization order");
    rep.eps = ks.eps;
    rep.eta = ks.eta;
    rep.finiteEigs = ks.finiteEigs;
    rep.finiteZeros = detail::flatten_clusters(ks.finiteEigs);
    rep.infZeros = detail::pencil_inf_zeros(ks.inf_mults);

    if (sys.order() == 0 && via == Via::ls) {
        rep.infPoles.clear();
    } else if (via == Via::lps) {
        const Pencil<S> pp = pole_pencil(sys);
        const KroneckerStructure ps = pkstruct(pp.M, pp.N, tol);
        rep.finitePoles = detail::flatten_clusters(ps.finiteEigs);
        rep.infPoles = detail::pencil_inf_zeros(ps.inf_mults);
    } else {
        const KroneckerStructure ps = pkstruct(sys.A, sys.E, tol);
        rep.finitePoles = detail::flatten_clusters(ps.finiteEigs);
        rep.infPoles = detail::pencil_inf_zeros(ps.inf_mults);
    }
    rep.alpha_inf = detail::alpha_from_pole_zero(rep.infPoles, rep.infZeros, k, rep.r);
    return rep;
}

// Finite eigenvalues (expanded by total multiplicity) plus the number of
// infinite eigenvalues at the working grade.
struct EigvalsResult {
    std::vector<cplx> finite;
    Eigen::Index delta_inf = 0;
    StructureReport report;
};

template <class S>
EigvalsResult pm_eigvals(const PolyMatrix<S>& P, Via via = Via::cf1, int grade = -1,
                         const Tol& tol = {}) {
    EigvalsResult out;
    out.report = pm_kstruct(P, via, grade, tol);
    for (const auto& c : out.report.finiteEigs) {
        int total = 0;
        for (int q : c.mults) total += q;
        for (int i = 0; i < total; ++i) out.finite.push_back(c.value);
    }
    out.delta_inf = out.report.delta_inf();
    return out;
}

// Finite and infinite zeros / poles.  The companion pole method analyzes the
// embedding [[P, I],[I, 0]], whose zero structure is the pole structure of P.
struct ZeroPoleList {
    std::vector<std::pair<cplx, int>> finite;
    std::vector<int> infinite;

    Eigen::Index total() const {
        Eigen::Index s = 0;
        for (const auto& [v, q] : finite) s += q;
        for (int q : infinite) s += q;
        return s;
    }
};

namespace detail {

inline Via via_of(PZMethod m) {
    return m == PZMethod::companion ? Via::cf1
                                    : (m == PZMethod::pencil_lin ? Via::lps : Via::ls);
}

}  // namespace detail

template <class S>
ZeroPoleList pm_zeros(const PolyMatrix<S>& P, PZMethod method = PZMethod::companion,
                      const Tol& tol = {}) {
    const StructureReport rep = pm_kstruct(P, detail::via_of(method), -1, tol);
    return {rep.finiteZeros, rep.infZeros};
}

template <class S>
ZeroPoleList pm_poles(const PolyMatrix<S>& P, PZMethod method = PZMethod::companion,
                      const Tol& tol = {}) {
    if (method == PZMethod::companion) {
        const Eigen::Index p = P.rows(), m = P.cols();
        const int d = std::max(pm_degree(P).value_or(0), 0);
        PolyMatrix<S> emb = PolyMatrix<S>::zero(p + m, m + p, d);
        for (int j = 0; j <= d; ++j) emb.coeff[static_cast<size_t>(j)].topLeftCorner(p, m) = P.at(j);
        emb.coeff[0].topRightCorner(p, p) = Mat<S>::Identity(p, p);
        emb.coeff[0].bottomLeftCorner(m, m) = Mat<S>::Identity(m, m);
        const StructureReport rep = pm_kstruct(emb, Via::cf1, -1, tol);
        return {rep.finiteZeros, rep.infZeros};
    }
    const StructureReport rep = pm_kstruct(P, detail::via_of(method), -1, tol);
    return {rep.finitePoles, rep.infPoles};
}

// Normal rank.  The linearization method reads it off the companion KLF; the
// evaluation method takes the maximal rank over fixed probe points (a third
// probe arbitrates if the first two disagree).
template <class S>
Eigen::Index pm_rank(const PolyMatrix<S>& P, RankMethod method = RankMethod::linearization,
                     const Tol& tol = {}) {
    const int d = pm_degree(P).value_or(0);
    if (method == RankMethod::linearization) {
        if (d == 0) return detail::constant_rank(P.at(0), tol);
        const auto cp = build_companion(P, CompanionKind::first);
        const auto klf = klf_reduce(cp.pencil.M, cp.pencil.N, tol);
        return klf.rank - cp.m * (cp.k - 1);
    }
    const double probes[3] = {0.32951739, -1.43722871, 2.59614583};
    const Eigen::Index r0 = detail::constant_rank<S>(pm_eval(P, S(probes[0])), tol);
    const Eigen::Index r1 = detail::constant_rank<S>(pm_eval(P, S(probes[1])), tol);
    if (r0 == r1) return r0;
    const Eigen::Index r2 = detail::constant_rank<S>(pm_eval(P, S(probes[2])), tol);
    return std::max(r2, std::max(r0, r1));
}

template <class S>
bool is_pm_regular(const PolyMatrix<S>& P, const Tol& tol = {}) {
    return P.rows() == P.cols() && pm_rank(P, RankMethod::linearization, tol) == P.rows();
}

// Unimodular = regular with a constant nonzero determinant, i.e. no finite
// eigenvalues at all.
template <class S>
bool is_pm_unimodular(const PolyMatrix<S>& P, const Tol& tol = {}) {
    if (!is_pm_regular(P, tol)) return false;
    return pm_kstruct(P, Via::cf1, -1, tol).delta_fin() == 0;
}

// Roots of det P for regular P: the finite eigenvalues with multiplicity.
template <class S>
std::vector<cplx> pm_roots(const PolyMatrix<S>& P, const Tol& tol = {}) {
    if (!is_pm_regular(P, tol)) throw NotRegular("determinant roots need a regular matrix");
    return pm_eigvals(P, Via::cf1, -1, tol).finite;
}

// ---------------------------------------------------------------------------
// Rational matrices.

// Zeros, poles, minimal indices and normal rank of a rational matrix through
// a minimal linearization.  Eigenvalue fields stay empty: the grade-based
// eigenvalue notion is specific to polynomial matrices.
template <class S>
StructureReport rm_analyze(const RationalMatrix<S>& R, RmMethod method = RmMethod::descriptor_lin,
                           const Tol& tol = {}) {
    const LinKind kind =
        method == RmMethod::descriptor_lin ? LinKind::descriptor : LinKind::pencil;
    const auto sys = rm_linearize(R, kind, SpMode::columnwise, tol);

    StructureReport rep;
    rep.rows = R.rows();
    rep.cols = R.cols();
    rep.method = method == RmMethod::descriptor_lin ? "ls" : "lps";

    const Pencil<S> Z = zero_pencil(sys);
    const KroneckerStructure ks = pkstruct(Z.M, Z.N, tol);
    rep.r = ks.r - sys.order();
    if (rep.r < 0) throw Error("system matrix rank below the realization order");
    rep.eps = ks.eps;
    rep.eta = ks.eta;
    rep.finiteZeros = detail::flatten_clusters(ks.finiteEigs);
    rep.infZeros = detail::pencil_inf_zeros(ks.inf_mults);

    if (sys.order() == 0 && kind == LinKind::descriptor) {
        rep.finitePoles.clear();
        rep.infPoles.clear();
    } else if (kind == LinKind::pencil) {
        const Pencil<S> pp = pole_pencil(sys);
        const KroneckerStructure ps = pkstruct(pp.M, pp.N, tol);
        rep.finitePoles = detail::flatten_clusters(ps.finiteEigs);
        rep.infPoles = detail::pencil_inf_zeros(ps.inf_mults);
    } else {
        const KroneckerStructure ps = pkstruct(sys.A, sys.E, tol);
        rep.finitePoles = detail::flatten_clusters(ps.finiteEigs);
        rep.infPoles = detail::pencil_inf_zeros(ps.inf_mults);
    }
    return rep;
}

template <class S>
ZeroPoleList rm_zeros(const RationalMatrix<S>& R, RmMethod method = RmMethod::descriptor_lin,
                      const Tol& tol = {}) {
    const StructureReport rep = rm_analyze(R, method, tol);
    return {rep.finiteZeros, rep.infZeros};
}

template <class S>
ZeroPoleList rm_poles(const RationalMatrix<S>& R, RmMethod method = RmMethod::descriptor_lin,
                      const Tol& tol = {}) {
    const StructureReport rep = rm_analyze(R, method, tol);
    return {rep.finitePoles, rep.infPoles};
}

template <class S>
Eigen::Index rm_rank(const RationalMatrix<S>& R, RmMethod method = RmMethod::descriptor_lin,
                     const Tol& tol = {}) {
    return rm_analyze(R, method, tol).r;
}

}  // namespace pmstruct
