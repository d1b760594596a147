#include <gtest/gtest.h>

#include <cmath>

#include "levy_restock/errors.hpp"
#include "levy_restock/solver.hpp"

using namespace levy_restock;

namespace {

LevyModel ubv() { return LevyModel(1.0, 1.0, {{0.2, 1.0}}); }
LevyModel bv() { return LevyModel(1.0, 0.0, {{0.2, 1.0}}); }

CostSpec quadratic(double lambda, double Kc = 10.0, double Kp = 2.0)
{
    return CostSpec(0.05, lambda, Kc, Kp, {{0.0, {0.0, 0.0, 1.0}}});
}

// 80-digit references for the worked model
struct Ref {
    double lambda, a, b;
};
constexpr Ref kRefs[] = {
    {2.0, -17.303792087804325, -16.5356114489445},
    {0.2, -17.086877797813993, -16.4919581369135},
};
constexpr double kA2Lambda12 = -48.4974089489665;
constexpr double kB12 = -16.6880241843072;

}  // namespace

// f = x^2: every threshold is affine in the tilt with a 1/Phi offset.
TEST(Thresholds, QuadraticClosedForms)
{
    for (double lam : {0.2, 2.0, 12.0}) {
        const KernelSet ks(ubv(), 0.05, lam);
        const CostSpec spec = quadratic(lam);
        const Thresholds t = thresholds(spec, ks);
        const double phi = ks.phi_q(), phir = ks.phi_r(), tilt = spec.tilt();
        EXPECT_NEAR(t.a_bar, -tilt / 2, 1e-12);
        EXPECT_NEAR(t.a_bar_bar, -0.05 * 2.0 / 2, 1e-12);
        EXPECT_NEAR(t.a_underline_1, -0.05 * 10.0 / 2 - 1 / phi, 1e-11);
        EXPECT_NEAR(t.a_underline_2, -tilt / 2 - 1 / phir, 1e-11);
        EXPECT_NEAR(t.a_dagger, -tilt / 2 - 1 / phi, 1e-11);
        EXPECT_EQ(t.case_tag, lam < 10 ? CaseTag::A1_LE_A2 : CaseTag::A2_LT_A1) << lam;
    }
}

TEST(Thresholds, GammaOneAndTwoVanishAtTheirRoots)
{
    const KernelSet ks(bv(), 0.05, 2.0);
    const CostSpec spec = quadratic(2.0);
    const Thresholds t = thresholds(spec, ks);
    EXPECT_NEAR(gamma_one(spec, ks, t.a_underline_1), 0.0, 1e-9);
    EXPECT_NEAR(gamma_two(spec, ks, t.a_underline_2), 0.0, 1e-9);
    EXPECT_LT(gamma_one(spec, ks, t.a_underline_1 - 0.1), 0.0);
    EXPECT_GT(gamma_two(spec, ks, t.a_underline_2 + 0.1), 0.0);
}

TEST(Thresholds, NoSignChangeThrows)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    // f~' > 0 everywhere
    EXPECT_THROW(thresholds(CostSpec(0.05, 2.0, 10, 2, {{0.0, {0.0, -1.0}}, {0.0, {0.0, 1.0}}}), ks),
                 NoFiniteThreshold);
    // f' + q K_p > 0 everywhere
    EXPECT_THROW(thresholds(CostSpec(0.05, 2.0, 10, 2, {{0.0, {0.0, 1.0}}}), ks), NoFiniteThreshold);
}

TEST(BOfA, SmallGammaVanishes)
{
    for (bool bounded : {false, true}) {
        const KernelSet ks(bounded ? bv() : ubv(), 0.05, 2.0);
        const CostSpec spec = quadratic(2.0);
        const Thresholds t = thresholds(spec, ks);
        for (double a : {t.a_dagger + 0.5, -18.0, -17.3, t.a_underline_1 - 0.01}) {
            const double b = b_of_a(spec, ks, a);
            EXPECT_GT(b, a);
            EXPECT_NEAR(gamma_small(spec, ks, a, b), 0.0, 1e-9) << a;
            // rho_a - (K_p - K_c) is positive left of b
            EXPECT_LT(gamma_small(spec, ks, a, 0.5 * (a + b)), 0.0);
        }
    }
}

// with f~' >= 0 on [a, inf) rho_a never falls below zero
TEST(BOfA, NoCrossingWhenFTildeNonnegative)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    const CostSpec spec = quadratic(2.0);
    const Thresholds t = thresholds(spec, ks);
    EXPECT_THROW(b_of_a(spec, ks, t.a_bar + 0.5), NoCrossing);
}

// d/db Gamma(a, b) = -lambda e^{-Phi (b - a)} gamma(a, b)
TEST(GammaBig, DerivativeInB)
{
    const double lam = 2.0;
    const KernelSet ks(ubv(), 0.05, lam);
    const CostSpec spec = quadratic(lam);
    const double phi = ks.phi_q(), h = 1e-5;
    for (double a : {-20.0, -17.5})
        for (double b : {-17.0, -16.0, -14.0}) {
            const double fd = (gamma_big(spec, ks, a, b + h) - gamma_big(spec, ks, a, b - h)) / (2 * h);
            const double want = -lam * std::exp(-phi * (b - a)) * gamma_small(spec, ks, a, b);
            EXPECT_NEAR(fd, want, 1e-6 * (1 + std::abs(want))) << a << " " << b;
        }
}

TEST(GammaBar, IncreasingBelowRightEnd)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    const CostSpec spec = quadratic(2.0);
    const Thresholds t = thresholds(spec, ks);
    const double right = std::min(t.a_underline_1, t.a_underline_2);
    EXPECT_LT(gamma_bar(spec, ks, t.a_dagger), 0.0);
    double prev = -INFINITY;
    for (int i = 0; i <= 40; ++i) {
        const double a = t.a_dagger + (right - t.a_dagger) * i / 41.0;
        const double g = gamma_bar(spec, ks, a);
        EXPECT_GT(g, prev) << a;
        prev = g;
    }
}

TEST(SolveBarriers, MatchesReferences)
{
    for (const Ref& r : kRefs) {
        const KernelSet ks(ubv(), 0.05, r.lambda);
        const PolicySolution s = solve_barriers(quadratic(r.lambda), ks);
        EXPECT_TRUE(s.hybrid());
        EXPECT_FALSE(s.extended);
        EXPECT_NEAR(s.a_star, r.a, 1e-9);
        EXPECT_NEAR(s.b_star, r.b, 1e-9);
        EXPECT_EQ(s.diag.case_tag, CaseTag::A1_LE_A2);
        EXPECT_LE(std::abs(s.diag.gamma_big_residual), 1e-8 * s.diag.residual_scale);
        EXPECT_LE(std::abs(s.diag.gamma_small_residual), 1e-8 * s.diag.residual_scale);
    }
}

// a* sits about 4e-55 below a_underline_2, so only the hp search resolves it.
TEST(SolveBarriers, CaseTwoNeedsExtendedPrecision)
{
    const KernelSet ks(ubv(), 0.05, 12.0);
    const CostSpec spec = quadratic(12.0);
    const PolicySolution s = solve_barriers(spec, ks);
    EXPECT_TRUE(s.extended);
    EXPECT_EQ(s.diag.case_tag, CaseTag::A2_LT_A1);
    EXPECT_NEAR(s.b_star, kB12, 1e-9);
    EXPECT_NEAR(s.a_star, kA2Lambda12, 1e-9);
    const hp gap = hp(s.diag.a_underline_2) - s.a_exact;
    EXPECT_GT(gap, hp(0));
    EXPECT_LE(std::abs(s.diag.gamma_big_residual), 1e-8 * s.diag.residual_scale);
    // b* is the pure discounted barrier to all printed digits
    EXPECT_NEAR(s.b_star, pure_discounted_barrier(spec, ks), 1e-9);
}

TEST(SolveBarriers, SmoothFitAtBothBarriers)
{
    for (double lam : {0.2, 2.0, 12.0}) {
        const KernelSet ks(ubv(), 0.05, lam);
        const CostSpec spec = quadratic(lam);
        const PolicySolution s = solve_barriers(spec, ks);
        const PolicyCost c = solution_cost(spec, ks, s);
        EXPECT_NEAR(c.derivative(s.a_star), -10.0, 1e-6) << lam;
        EXPECT_NEAR(c.derivative(s.b_star), -2.0, 1e-6) << lam;
    }
}

TEST(SolveBarriers, BoundedVariationModel)
{
    const KernelSet ks(bv(), 0.05, 2.0);
    const CostSpec spec = quadratic(2.0);
    const PolicySolution s = solve_barriers(spec, ks);
    EXPECT_LT(s.a_star, s.b_star);
    EXPECT_NEAR(gamma_small(spec, ks, s.a_star, s.b_star), 0.0, 1e-8 * s.diag.residual_scale);
    const PolicyCost c = solution_cost(spec, ks, s);
    EXPECT_NEAR(c.derivative(s.a_star), -10.0, 1e-6);
    EXPECT_NEAR(c.derivative(s.b_star), -2.0, 1e-6);
}

// Moving either barrier off the optimum never lowers the cost.
TEST(SolveBarriers, PerturbedBarriersCostMore)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    const CostSpec spec = quadratic(2.0);
    const PolicySolution s = solve_barriers(spec, ks);
    const PolicyCost opt = solution_cost(spec, ks, s);
    for (double da : {-0.5, 0.0, 0.2})
        for (double db : {-0.2, 0.0, 0.1, 0.3}) {
            if (da == 0.0 && db == 0.0) continue;
            const PolicyCost p(spec, ks, HybridPolicy{s.a_star + da, s.b_star + db});
            for (double x = s.a_star - 2; x <= s.b_star + 3; x += 0.25)
                EXPECT_LE(opt(x), p(x) + 1e-9 * (1 + std::abs(p(x)))) << da << " " << db << " " << x;
        }
}

TEST(SolveBarriers, PureDiscountedBranch)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    const CostSpec spec(0.05, 2.0, 10, 2, {{0.0, {0.0, -1.0}}, {0.0, {0.0, 1.0}}});
    const PolicySolution s = solve_barriers(spec, ks);
    EXPECT_EQ(s.kind, PolicySolution::Kind::PureDiscounted);
    EXPECT_TRUE(std::isinf(s.a_star));
    EXPECT_NEAR(pure_discounted_foc(spec, ks, s.b_star), 0.0, 1e-10);
    EXPECT_THROW(solution_cost(spec, ks, s), std::invalid_argument);
}

TEST(SolveBarriers, RejectsFWithoutInteriorMinimum)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    EXPECT_THROW(solve_barriers(CostSpec(0.05, 2.0, 10, 2, {{0.0, {0.0, 1.0}}}), ks), ConfigError);
}

// for f = x^2 the root of T_Phi[f'](a) + qC/Phi is -1/Phi - qC/2
TEST(PureRegular, BarrierClosedForm)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    const CostSpec spec = quadratic(2.0);
    for (double C : {2.0, 10.0})
        EXPECT_NEAR(pure_regular_barrier(spec, ks, C), -1 / ks.phi_q() - 0.05 * C / 2, 1e-10);
}

TEST(PureRegular, RichardsonSettles)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    const CostSpec spec = quadratic(2.0);
    const double a = pure_regular_barrier(spec, ks, 10.0);
    const PureRegularEvaluator e(spec, ks, a, 10.0);
    const PureRegularEvaluator fine(spec, ks, a, 10.0, 2.5e-5);
    for (double x : {a, a + 1, a + 5}) {
        EXPECT_LT(e.richardson_gap(x), 1e-2);
        EXPECT_NEAR(e(x), fine(x), 1e-6 * std::abs(e(x))) << x;
    }
    // smooth fit at the optimal reflecting barrier; v'' vanishes there too, so
    // the slope just outside the eps band is -C up to O(d^2)
    const double d = 1e-3, h = 1e-4;
    auto slope = [&](double x) { return (e(x + h) - e(x - h)) / (2 * h); };
    EXPECT_NEAR(slope(a + d), -10.0, 1e-4);
    EXPECT_NEAR(slope(a + 3 * d) - slope(a + d), 0.0, 1e-3);
}

TEST(PureRegular, HybridBeatsBothPureCosts)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    const CostSpec spec = quadratic(2.0);
    const PolicySolution s = solve_barriers(spec, ks);
    const PolicyCost hyb = solution_cost(spec, ks, s);
    const double a_reg = pure_regular_barrier(spec, ks, 10.0);
    const PureRegularEvaluator reg(spec, ks, a_reg, 10.0);
    const PureDiscountedEvaluator dis(spec, ks, pure_discounted_barrier(spec, ks));
    for (double x = s.a_star - 2; x <= s.b_star + 3; x += 0.1) {
        EXPECT_LE(hyb(x), reg(x) + 1e-8 * std::abs(reg(x))) << x;
        EXPECT_LE(hyb(x), dis(x) + 1e-8 * std::abs(dis(x))) << x;
    }
}
