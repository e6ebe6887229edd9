#include <doctest.h>

#include <random>
#include <vector>

#include "fixtures.hpp"
#include "pmstruct/linearize.hpp"

using namespace pmstruct;

namespace {

const std::vector<double> kProbes = {-2.0, -1.3, -0.5, 0.3, 0.7, 1.1, 1.9, 2.6};

bool mat_close(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double tol = 1e-10) {
    return A.rows() == B.rows() && A.cols() == B.cols() &&
           (A - B).norm() <= tol * std::max(1.0, B.norm());
}

PolyMatrix<double> random_pm(Eigen::Index p, Eigen::Index m, int k, std::mt19937& rng) {
    std::uniform_int_distribution<int> coin(-2, 2);
    PolyMatrix<double> P = PolyMatrix<double>::zero(p, m, k);
    for (int d = 0; d <= k; ++d)
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index j = 0; j < m; ++j) P.coeff[static_cast<size_t>(d)](i, j) = coin(rng);
    return P;
}

}  // namespace

TEST_CASE("companion forms have the documented layout") {
    const auto P = fx::exA();

    const auto c1 = build_companion(P, CompanionKind::first);
    CHECK(c1.k == 2);
    CHECK(c1.pencil.M == fx::exA_M1());
    CHECK(c1.pencil.N == fx::exA_N1());

    const auto c2 = build_companion(P, CompanionKind::second);
    CHECK(c2.pencil.M.rows() == 6);
    CHECK(c2.pencil.M.cols() == 6);
    // Second form: x N2 - M2 carries [x P2 + P1; P0] in the leading block
    // column and shifted identities elsewhere.
    CHECK(c2.pencil.M.block(0, 0, 3, 3) == -fx::exA_P1());
    CHECK(c2.pencil.M.block(3, 0, 3, 3) == -fx::exA_P0());
    CHECK(c2.pencil.M.block(0, 3, 3, 3) == Eigen::MatrixXd::Identity(3, 3));
    CHECK(c2.pencil.N.block(0, 0, 3, 3) == fx::exA_P2());
    CHECK(c2.pencil.N.block(3, 3, 3, 3) == Eigen::MatrixXd::Identity(3, 3));

    // Grade 1 stores the pencil directly; grade 0 has no companion form.
    const PolyMatrix<double> L({fx::exA_P0(), fx::exA_P1()});
    const auto cl = build_companion(L, CompanionKind::first);
    CHECK(cl.pencil.M == fx::exA_P0());
    CHECK(cl.pencil.N == -fx::exA_P1());
    const PolyMatrix<double> K({fx::exA_P0()});
    CHECK_THROWS_AS(build_companion(K, CompanionKind::first), GradeZero);
}

TEST_CASE("companion pencil structure maps back to the polynomial matrix") {
    const auto P = fx::exA();

    for (const auto kind : {CompanionKind::first, CompanionKind::second}) {
        CAPTURE(static_cast<int>(kind));
        const auto cp = build_companion(P, kind);
        const auto ks = pkstruct(cp.pencil.M, cp.pencil.N);
        const auto s = recover_structure(ks, cp);

        CHECK(s.rows == 3);
        CHECK(s.cols == 3);
        CHECK(s.r == 2);
        CHECK(s.grade == 2);
        CHECK(s.eps == std::vector<int>{0});
        CHECK(s.eta == std::vector<int>{1});
        CHECK(s.alpha_inf == std::vector<int>{0, 2});
        CHECK(s.sigma_inf() == std::vector<int>{-2, 0});
        REQUIRE(s.finiteEigs.size() == 1);
        CHECK(std::abs(s.finiteEigs[0].value - cplx(1.0)) < 1e-8);
        CHECK(s.finiteEigs[0].mults == std::vector<int>{1});
        CHECK(s.delta_fin() == 1);
        CHECK(s.delta_inf() == 2);
        CHECK(s.mu() == 1);
        // Index sum at grade 2: 1 + 2 + 1 = 2 * 2.
        CHECK(s.delta_fin() + s.delta_inf() + s.mu() == s.grade * s.r);
    }

    // Raising the grade shifts every infinite partial multiplicity.
    const auto cp3 = build_companion(P, CompanionKind::first, 3);
    CHECK(cp3.pencil.M.rows() == 9);
    const auto s3 = recover_structure(pkstruct(cp3.pencil.M, cp3.pencil.N), cp3);
    CHECK(s3.r == 2);
    CHECK(s3.alpha_inf == std::vector<int>{1, 3});
    CHECK(s3.eps == std::vector<int>{0});
    CHECK(s3.eta == std::vector<int>{1});
    CHECK(s3.delta_fin() + s3.delta_inf() + s3.mu() == 3 * 2);

    const auto s2 = recover_structure(pkstruct(build_companion(P, CompanionKind::first).pencil.M,
                                               build_companion(P, CompanionKind::first).pencil.N),
                                      build_companion(P, CompanionKind::first));
    CHECK(s2.at_grade(3).alpha_inf == s3.alpha_inf);
    CHECK(s2.at_grade(3).grade == 3);
}

TEST_CASE("polynomial-part realizations evaluate to the matrix") {
    std::mt19937 rng(20240819u);
    std::vector<PolyMatrix<double>> cases = {fx::exA(), fx::exB_pol(), random_pm(2, 4, 3, rng),
                                             random_pm(4, 2, 4, rng),
                                             PolyMatrix<double>({fx::exA_P0()})};
    for (const auto& P : cases) {
        CAPTURE(P.rows());
        CAPTURE(P.grade());
        const int k = P.grade();
        const Eigen::Index p = P.rows(), m = P.cols();

        const auto con = polypart_pencil_real(P, PolyPartForm::controllable);
        const auto obs = polypart_pencil_real(P, PolyPartForm::observable);
        CHECK(con.order() == (k <= 1 ? 0 : m * (k - 1)));
        CHECK(obs.order() == (k <= 1 ? 0 : p * (k - 1)));
        con.validate();
        obs.validate();

        const auto dcon = polypart_descriptor_real(P, PolyPartForm::controllable);
        const auto dobs = polypart_descriptor_real(P, PolyPartForm::observable);
        CHECK(dcon.order() == (k == 0 ? 0 : m * (k + 1)));
        CHECK(dobs.order() == (k == 0 ? 0 : p * (k + 1)));
        dcon.validate();
        dobs.validate();

        for (double x : kProbes) {
            const Eigen::MatrixXd want = pm_eval(P, x);
            CHECK(mat_close(eval_transfer(con, x), want));
            CHECK(mat_close(eval_transfer(obs, x), want));
            CHECK(mat_close(eval_transfer(dcon, x), want));
            CHECK(mat_close(eval_transfer(dobs, x), want));
        }
    }
}

TEST_CASE("strictly proper realizations: orders by mode and transfer values") {
    const auto sp = pm_divrem(fx::exB()).second;

    const auto ent = sp_realize(sp, SpMode::entrywise);
    const auto col = sp_realize(sp, SpMode::columnwise);
    const auto row = sp_realize(sp, SpMode::rowwise);
    CHECK(ent.order() == 8);  // one first-order block per nonzero entry
    CHECK(col.order() == 3);  // columnwise common denominators are all x + 1
    CHECK(row.order() == 3);

    const fx::ExBMinSp gold;
    for (double x : kProbes) {
        const Eigen::MatrixXd want =
            gold.C * (x * Eigen::MatrixXd::Identity(2, 2) - gold.A).inverse() * gold.B;
        CHECK(mat_close(eval_transfer(ent, x), want));
        CHECK(mat_close(eval_transfer(col, x), want));
        CHECK(mat_close(eval_transfer(row, x), want));
        CHECK(mat_close(rm_eval(sp, x), want));
    }

    CHECK_THROWS_AS(sp_realize(fx::exB()), NotStrictlyProper);
}

TEST_CASE("rational linearization reaches the known minimal orders") {
    const auto R = fx::exB();

    const auto pen = rm_linearize(R, LinKind::pencil);
    CHECK(pen.order() == 2);
    CHECK(zero_pencil(pen).M.rows() == 5);
    CHECK(zero_pencil(pen).M.cols() == 5);

    const auto des = rm_linearize(R, LinKind::descriptor);
    CHECK(des.order() == 4);
    CHECK(des.F.norm() == 0.0);
    CHECK(des.G.norm() == 0.0);
    CHECK(des.H.norm() == 0.0);

    const auto raw = rm2lspm(R, LinKind::pencil);
    CHECK(raw.order() == 2);  // minimal strictly proper part + order-0 poly part

    for (double x : kProbes) {
        const Eigen::MatrixXd want = rm_eval(R, x);
        CHECK(mat_close(eval_transfer(pen, x), want, 1e-9));
        CHECK(mat_close(eval_transfer(des, x), want, 1e-9));
        CHECK(mat_close(eval_transfer(raw, x), want, 1e-9));
    }

    // Purely polynomial input degenerates to the polynomial-part realization.
    const auto ppen = rm_linearize(RationalMatrix<double>::from_poly(fx::exA()), LinKind::pencil);
    for (double x : kProbes) CHECK(mat_close(eval_transfer(ppen, x), pm_eval(fx::exA(), x), 1e-9));
}

TEST_CASE("system-matrix linearization preserves the transfer function") {
    std::mt19937 rng(20240820u);

    // T = x^2 I + diag shifts keeps T(x) invertible at every probe point.
    const Eigen::Index n = 2, m = 3, p = 2;
    PolyMatrix<double> T = PolyMatrix<double>::zero(n, n, 2);
    T.coeff[0] = fx::mk({{5, 1}, {0, 7}});
    T.coeff[1] = fx::mk({{1, 0}, {1, 1}});
    T.coeff[2] = Eigen::MatrixXd::Identity(n, n);
    const PolyMatrix<double> U = random_pm(n, m, 2, rng);
    const PolyMatrix<double> V = random_pm(p, n, 1, rng);
    const PolyMatrix<double> W = random_pm(p, m, 2, rng);
    const PolySystemMatrix<double> sm{T, U, V, W};

    const auto sys = spm_linearize(sm);
    CHECK(sys.order() == n + (sm.grade() - 1) * (n + m));
    for (double x : kProbes) {
        const Eigen::MatrixXd want =
            pm_eval(V, x) * pm_eval(T, x).partialPivLu().solve(pm_eval(U, x)) + pm_eval(W, x);
        CHECK(mat_close(eval_transfer(sys, x), want, 1e-9));
    }

    // Constant system matrices take the order-n shortcut.
    const PolySystemMatrix<double> smc{PolyMatrix<double>({fx::mk({{2, 1}, {0, 3}})}),
                                       PolyMatrix<double>({fx::mk({{1, 0}, {0, 1}})}),
                                       PolyMatrix<double>({fx::mk({{1, 2}, {3, 4}})}),
                                       PolyMatrix<double>({fx::mk({{0, 0}, {0, 0}})})};
    const auto csys = spm_linearize(smc);
    CHECK(csys.order() == 2);
    const Eigen::MatrixXd cw = fx::mk({{1, 2}, {3, 4}}) *
                               fx::mk({{2, 1}, {0, 3}}).inverse() * Eigen::MatrixXd::Identity(2, 2);
    CHECK(mat_close(eval_transfer(csys, 0.37), cw));

    PolySystemMatrix<double> bad{T, U, random_pm(p, n + 1, 1, rng), W};
    CHECK_THROWS_AS(spm_linearize(bad), InconsistentDims);
}

TEST_CASE("matrix fraction linearizations") {
    // Left fraction: DL = diag(x+1, x-2), NL of degree 1, left coprime.
    const PolyMatrix<double> DL({fx::mk({{1, 0}, {0, -2}}), Eigen::MatrixXd::Identity(2, 2)});
    const PolyMatrix<double> NL({fx::mk({{1, 0}, {2, 1}}), fx::mk({{0, 1}, {0, -1}})});
    const auto lsys = lpmfd_linearize(DL, NL);
    CHECK(lsys.order() == 2);
    for (double x : kProbes) {
        if (std::abs(x + 1) < 0.2 || std::abs(x - 2) < 0.2) continue;
        const Eigen::MatrixXd want = pm_eval(DL, x).partialPivLu().solve(pm_eval(NL, x));
        CHECK(mat_close(eval_transfer(lsys, x), want, 1e-9));
    }

    // Right fraction with the transposed data.
    const auto rsys = rpmfd_linearize(NL.transpose(), DL.transpose());
    CHECK(rsys.order() == 2);
    for (double x : kProbes) {
        if (std::abs(x + 1) < 0.2 || std::abs(x - 2) < 0.2) continue;
        const Eigen::MatrixXd want =
            pm_eval(DL, x).partialPivLu().solve(pm_eval(NL, x)).transpose();
        CHECK(mat_close(eval_transfer(rsys, x), want, 1e-9));
    }

    // Polynomial inverse: P regular with det (x^2+1)(x-1).
    const PolyMatrix<double> P({fx::mk({{1, 0}, {0, -1}}), fx::mk({{0, 1}, {0, 1}}),
                                fx::mk({{1, 0}, {0, 0}})});
    const auto isys = pminv_linearize(P);
    CHECK(isys.order() == 3);
    for (double x : kProbes) {
        const Eigen::MatrixXd want =
            pm_eval(P, x).partialPivLu().solve(Eigen::MatrixXd::Identity(2, 2));
        CHECK(mat_close(eval_transfer(isys, x), want, 1e-9));
    }

    CHECK_THROWS_AS(pminv_linearize(PolyMatrix<double>::zero(2, 3, 1)), InconsistentDims);
}
