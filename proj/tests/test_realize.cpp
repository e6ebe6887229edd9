#include <doctest.h>

#include <vector>

#include "fixtures.hpp"
#include "pmstruct/linearize.hpp"
#include "pmstruct/realize.hpp"

using namespace pmstruct;

namespace {

const std::vector<double> kProbes = {-2.0, -1.3, -0.5, 0.3, 0.7, 1.1, 1.9, 2.6};

bool mat_close(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double tol = 1e-9) {
    return A.rows() == B.rows() && A.cols() == B.cols() &&
           (A - B).norm() <= tol * std::max(1.0, B.norm());
}

PencilRealization<double> order1_fixture() {
    const fx::Order1Real o;
    return {o.A, o.E, o.B, o.F, o.C, o.G, o.D, o.H};
}

DescriptorRealization<double> order4_fixture() {
    const fx::Order4Descriptor o;
    return {o.A, o.E, o.B, o.C, o.D};
}

// Scalar blocks wired so the transfer function is 1/(x+1) plus whatever the
// uncontrollable decorations contribute (nothing).
DescriptorRealization<double> decorated_scalar() {
    DescriptorRealization<double> sys;
    sys.A = fx::mk({{-1, 0, 0}, {0, 2, 0}, {0, 0, 1}});
    sys.E = fx::mk({{1, 0, 0}, {0, 1, 0}, {0, 0, 0}});
    sys.B = fx::mk({{1}, {0}, {0}});
    sys.C = fx::mk({{1, 1, 1}});
    sys.D = fx::mk({{0}});
    return sys;
}

}  // namespace

TEST_CASE("fixture realizations evaluate to the worked example") {
    const auto P = fx::exA();
    const auto pen = order1_fixture();
    const auto des = order4_fixture();
    pen.validate();
    des.validate();
    for (double x : kProbes) {
        CHECK(mat_close(eval_transfer(pen, x), pm_eval(P, x), 1e-12));
        CHECK(mat_close(eval_transfer(des, x), pm_eval(P, x), 1e-12));
    }
    CHECK(zero_pencil(pen).M.rows() == 4);
    CHECK(zero_pencil(pen).M.cols() == 4);
    CHECK(pole_pencil(pen).M.rows() == 1 + 3 + 3);
    CHECK(controllability_pencil(pen).M.rows() == 1);
    CHECK(controllability_pencil(pen).M.cols() == 4);
    CHECK(observability_pencil(pen).M.rows() == 4);
    CHECK(observability_pencil(pen).M.cols() == 1);
}

TEST_CASE("staircase reduction removes uncontrollable and unobservable parts") {
    // Uncontrollable finite mode (eigenvalue 2) and uncontrollable infinite
    // mode decorate a controllable, observable 1/(x+1) block.
    const auto sys = decorated_scalar();
    for (double x : kProbes) {
        if (std::abs(x + 1) < 0.2) continue;
        CHECK(mat_close(eval_transfer(sys, x), fx::mk({{1.0 / (x + 1)}}), 1e-12));
    }

    const auto fin = staircase_reduce(sys, ReducePart::finite, ReduceSide::contr);
    CHECK(fin.removed_contr == 1);
    CHECK(fin.sys.order() == 2);

    const auto inf = staircase_reduce(sys, ReducePart::infinite, ReduceSide::contr);
    CHECK(inf.removed_contr == 1);
    CHECK(inf.sys.order() == 2);

    const auto both = staircase_reduce(sys, ReducePart::both, ReduceSide::contr);
    CHECK(both.removed_contr == 2);
    CHECK(both.sys.order() == 1);
    for (double x : kProbes) {
        if (std::abs(x + 1) < 0.2) continue;
        CHECK(mat_close(eval_transfer(both.sys, x), fx::mk({{1.0 / (x + 1)}}), 1e-10));
    }

    // The transposed system has the same junk on the unobservable side.
    DescriptorRealization<double> dual = decorated_scalar().transposed();
    const auto red = staircase_reduce(dual, ReducePart::both, ReduceSide::obs);
    CHECK(red.removed_obs == 2);
    CHECK(red.sys.order() == 1);

    // Already-irreducible systems come back untouched.
    const auto keep = staircase_reduce(both.sys, ReducePart::both, ReduceSide::both);
    CHECK(keep.removed_contr == 0);
    CHECK(keep.removed_obs == 0);
}

TEST_CASE("descriptor polynomial-part realization reduces to the known order") {
    // The grade-1 polynomial part of the rational example: the order-6
    // controllable descriptor form reduces to an irreducible order 2.
    const auto Q = fx::exB_pol();
    const auto full = polypart_descriptor_real(Q, PolyPartForm::controllable);
    CHECK(full.order() == 6);
    const auto red = staircase_reduce(full, ReducePart::both, ReduceSide::both);
    CHECK(red.sys.order() == 2);
    for (double x : kProbes) CHECK(mat_close(eval_transfer(red.sys, x), pm_eval(Q, x), 1e-10));

    const auto fobs = polypart_descriptor_real(Q, PolyPartForm::observable);
    CHECK(fobs.order() == 6);
    const auto robs = staircase_reduce(fobs, ReducePart::both, ReduceSide::both);
    CHECK(robs.sys.order() == 2);
    for (double x : kProbes) CHECK(mat_close(eval_transfer(robs.sys, x), pm_eval(Q, x), 1e-10));
}

TEST_CASE("noseig removes exactly the non-dynamic modes") {
    auto jblock = [](int s) {
        Eigen::MatrixXd N = Eigen::MatrixXd::Zero(s, s);
        for (int i = 0; i + 1 < s; ++i) N(i, i + 1) = 1.0;
        return N;
    };

    // A single non-dynamic mode: transfer is the constant -1.
    DescriptorRealization<double> j1{fx::mk({{1}}), fx::mk({{0}}), fx::mk({{1}}),
                                     fx::mk({{1}}), fx::mk({{0}})};
    auto [r1, n1] = noseig(j1);
    CHECK(n1 == 1);
    CHECK(r1.order() == 0);
    CHECK(mat_close(r1.D, fx::mk({{-1}}), 1e-12));

    // Nilpotent chains of length >= 2 carry infinite poles and must survive.
    for (int s : {2, 3}) {
        DescriptorRealization<double> js{Eigen::MatrixXd::Identity(s, s), jblock(s),
                                         Eigen::MatrixXd::Identity(s, s).rightCols(1),
                                         Eigen::MatrixXd::Identity(s, s).topRows(1),
                                         fx::mk({{0}})};
        auto [rs, ns] = noseig(js);
        CHECK(ns == 0);
        CHECK(rs.order() == s);
        for (double x : kProbes)
            CHECK(mat_close(eval_transfer(rs, x), eval_transfer(js, x), 1e-12));
    }

    // Mixed system: J1 + J3 drops exactly one state; transfer -1 - x^2.
    DescriptorRealization<double> mix;
    mix.A = Eigen::MatrixXd::Identity(4, 4);
    mix.E = Eigen::MatrixXd::Zero(4, 4);
    mix.E.bottomRightCorner(3, 3) = jblock(3);
    mix.B = fx::mk({{1}, {0}, {0}, {1}});
    mix.C = fx::mk({{1, 1, 0, 0}});
    mix.D = fx::mk({{0}});
    auto [rm, nm] = noseig(mix);
    CHECK(nm == 1);
    CHECK(rm.order() == 3);
    for (double x : kProbes)
        CHECK(mat_close(eval_transfer(rm, x), fx::mk({{-1.0 - x * x}}), 1e-12));

    // Invertible E: nothing to do.
    DescriptorRealization<double> ok{fx::mk({{-1}}), fx::mk({{1}}), fx::mk({{1}}),
                                     fx::mk({{1}}), fx::mk({{0}})};
    auto [ro, no] = noseig(ok);
    CHECK(no == 0);
    CHECK(ro.order() == 1);
}

TEST_CASE("state-space minimal realization of the strictly proper part") {
    const auto sp = pm_divrem(fx::exB()).second;
    const fx::ExBMinSp gold;

    for (const auto mode : {SpMode::entrywise, SpMode::columnwise, SpMode::rowwise}) {
        CAPTURE(static_cast<int>(mode));
        const auto sys = sp_realize(sp, mode);
        const auto min = lsminreal(sys);
        CHECK(min.sys.order() == 2);
        CHECK(min.removed_contr + min.removed_obs == sys.order() - 2);
        CHECK(min.removed_nondyn == 0);
        for (double x : kProbes) {
            const Eigen::MatrixXd want =
                gold.C * (x * Eigen::MatrixXd::Identity(2, 2) - gold.A).inverse() * gold.B;
            CHECK(mat_close(eval_transfer(min.sys, x), want, 1e-10));
        }
    }

    // Columnwise is controllable by construction, rowwise observable.
    CHECK(lsminreal(sp_realize(sp, SpMode::columnwise)).removed_contr == 0);
    CHECK(lsminreal(sp_realize(sp, SpMode::rowwise)).removed_obs == 0);
}

TEST_CASE("strongly minimal pencil realizations of the polynomial example") {
    const auto P = fx::exA();

    for (const auto form : {PolyPartForm::controllable, PolyPartForm::observable}) {
        CAPTURE(static_cast<int>(form));
        const auto full = polypart_pencil_real(P, form);
        CHECK(full.order() == 3);
        const auto min = lpsminreal(full);
        CHECK(min.sys.order() == 1);
        CHECK(min.removed == 2);
        for (double x : kProbes)
            CHECK(mat_close(eval_transfer(min.sys, x), pm_eval(P, x), 1e-9));

        // Strong minimality is visible through the public pencil API: the
        // controllability and observability pencils have full rank everywhere.
        const auto cp = klf_reduce(controllability_pencil(min.sys).M,
                                   controllability_pencil(min.sys).N);
        CHECK(cp.rank == min.sys.order());
        CHECK(cp.nf == 0);
        CHECK(cp.infDivisorDegrees.empty());
        const auto op = klf_reduce(observability_pencil(min.sys).M,
                                   observability_pencil(min.sys).N);
        CHECK(op.rank == min.sys.order());
        CHECK(op.nf == 0);
        CHECK(op.infDivisorDegrees.empty());
    }

    // The fixture order-1 realization is already strongly minimal.
    const auto keep = lpsminreal(order1_fixture());
    CHECK(keep.sys.order() == 1);
    CHECK(keep.removed == 0);
}

TEST_CASE("pencil realizations convert back to polynomial and rational form") {
    const auto P = fx::exA();
    const auto back = realization_to_polymat(order1_fixture());
    REQUIRE(back.grade() == 2);
    for (int d = 0; d <= 2; ++d) CHECK(mat_close(back.at(d), P.at(d), 1e-8));

    // Round trip through a fresh strongly minimal realization.
    const auto min = lpsminreal(polypart_pencil_real(P, PolyPartForm::controllable));
    const auto back2 = realization_to_polymat(min.sys);
    REQUIRE(back2.grade() == 2);
    for (int d = 0; d <= 2; ++d) CHECK(mat_close(back2.at(d), P.at(d), 1e-8));

    // A genuinely rational transfer function is rejected...
    const auto rsys = rm_linearize(fx::exB(), LinKind::pencil);
    CHECK_THROWS_AS(realization_to_polymat(rsys), NotPolynomial);

    // ...and recovered entrywise by the rational fit.
    const auto R = realization_to_rm(rsys);
    for (double x : kProbes) CHECK(mat_close(rm_eval(R, x), rm_eval(fx::exB(), x), 1e-7));
    // Spot-check one denominator: entry (1,1) keeps the monic pole at -1.
    REQUIRE(R.den[0][0].degree() == 1);
    CHECK(std::abs(R.den[0][0].c[0] - 1.0) < 1e-7);
    CHECK(std::abs(R.den[0][0].c[1] - 1.0) < 1e-7);
}
