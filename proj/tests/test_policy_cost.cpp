#include <gtest/gtest.h>

#include "levy_restock/errors.hpp"
#include "levy_restock/policy_cost.hpp"
#include "oracle.hpp"

using namespace levy_restock;
using oracle::quad;

namespace {

LevyModel ubv() { return LevyModel(1.0, 1.0, {{0.2, 1.0}}); }
LevyModel bv() { return LevyModel(1.0, 0.0, {{0.2, 1.0}}); }

CostSpec quadratic(double lambda, double Kc = 10.0, double Kp = 2.0)
{
    return CostSpec(0.05, lambda, Kc, Kp, {{0.0, {0.0, 0.0, 1.0}}});
}

// kinked convex f: 3|x| below zero mixed with a quadratic above
CostSpec kinked(double lambda)
{
    return CostSpec(0.05, lambda, 10.0, 2.0, {{0.0, {0.0, -3.0}}, {0.0, {0.0, 1.0, 0.5}}});
}

struct Case {
    bool bounded;
    bool kink;
    double lambda;
    double a, b;
};

// Double-valued view of an evaluator in either precision.
struct EvalView {
    virtual ~EvalView() = default;
    virtual double value(double x) const = 0;
    virtual double holding(double x) const = 0;
    virtual double replenish(double x) const = 0;
    virtual double units_discounted(double x) const = 0;
    virtual double units_regular(double x) const = 0;
    virtual double derivative(double x) const = 0;
    virtual double second_derivative(double x) const = 0;
    virtual double value_prime_direct(double x) const = 0;
    virtual double value_fprime(double x) const = 0;
    virtual double g_f() const = 0;
    virtual double g_f_direct() const = 0;
    virtual double value_fprime_at_a() const = 0;
    virtual double value_fprime_at_b() const = 0;
};

template <class R>
struct EvalViewOf : EvalView {
    BasicPolicyEvaluator<R> e;
    EvalViewOf(const CostSpec& s, const BasicKernelSet<R>& k, double a, double b) : e(s, k, R(a), R(b)) {}
    static double d(const R& v) { return static_cast<double>(v); }
    double value(double x) const override { return d(e.value()(R(x))); }
    double holding(double x) const override { return d(e.holding()(R(x))); }
    double replenish(double x) const override { return d(e.replenish()(R(x))); }
    double units_discounted(double x) const override { return d(e.units_discounted()(R(x))); }
    double units_regular(double x) const override { return d(e.units_regular()(R(x))); }
    double derivative(double x) const override { return d(e.derivative(R(x))); }
    double second_derivative(double x) const override { return d(e.second_derivative(R(x))); }
    double value_prime_direct(double x) const override { return d(e.value_prime_direct()(R(x))); }
    double value_fprime(double x) const override { return d(e.value_fprime()(R(x))); }
    double g_f() const override { return d(e.g_f()); }
    double g_f_direct() const override { return d(e.g_f_direct()); }
    double value_fprime_at_a() const override { return d(e.value_fprime_at_a()); }
    double value_fprime_at_b() const override { return d(e.value_fprime_at_b()); }
};

// Wide barrier spreads run in hp, as PolicyCost does.
class PolicyCase : public ::testing::TestWithParam<Case> {
protected:
    void SetUp() override
    {
        const Case& c = GetParam();
        ks = std::make_unique<KernelSet>(c.bounded ? bv() : ubv(), 0.05, c.lambda);
        spec = std::make_unique<CostSpec>(c.kink ? kinked(c.lambda) : quadratic(c.lambda));
        if (ks->phi_r() * (c.b - c.a) > kExtendedSpread)
            ev = std::make_unique<EvalViewOf<hp>>(*spec, ks->extended(), c.a, c.b);
        else
            ev = std::make_unique<EvalViewOf<double>>(*spec, *ks, c.a, c.b);
    }
    std::unique_ptr<KernelSet> ks;
    std::unique_ptr<CostSpec> spec;
    std::unique_ptr<EvalView> ev;
};

}  // namespace

TEST(CostSpec, TiltedSlope)
{
    const CostSpec s = quadratic(2.0);
    EXPECT_DOUBLE_EQ(s.f_tilde_prime(0.0), 16.5);
    EXPECT_DOUBLE_EQ(f_tilde_prime(s, -8.25), 0.0);
    EXPECT_TRUE(s.slope_assumption_1());
    EXPECT_TRUE(s.slope_assumption_2());
}

TEST(CostSpec, RejectsInvalid)
{
    EXPECT_THROW(quadratic(2.0, 2.0, 2.0), ConfigError);
    EXPECT_THROW(quadratic(2.0, 1.0, 2.0), ConfigError);
    EXPECT_THROW(CostSpec(0.05, 2.0, 10, 2, {{0.0, {0.0, 0.0, -1.0}}}), ConfigError);
    EXPECT_THROW(CostSpec(0.05, 2.0, 10, 2, {{0.0, {0.0, 1.0}}, {1.0, {0.0, 0.5}}}), ConfigError);
    EXPECT_THROW(CostSpec(0.05, 2.0, 10, 2, {{0.0, {0.0, -1.0}}, {0.0, {1.0, 1.0}}}), ConfigError);
    EXPECT_THROW(CostSpec(0.0, 2.0, 10, 2, {{0.0, {1.0}}}), ConfigError);
}

TEST(CostSpec, KcAtMostKpMessageExplainsPrices)
{
    try {
        quadratic(2.0, 2.0, 3.0);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("discounted"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("lower than the regular"), std::string::npos);
    }
}

TEST(CostSpec, SlopeAssumptionFailsWhenTiltedSlopeIsPositive)
{
    const CostSpec s(0.05, 2.0, 10.0, 2.0, {{0.0, {0.0, -1.0}}, {0.0, {0.0, 1.0}}});
    EXPECT_FALSE(s.slope_assumption_1());
    EXPECT_TRUE(s.slope_assumption_2());
}

TEST(Gamma, LimitAtCoincidingBarriersIsGammaOne)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    const CostSpec s = quadratic(2.0);
    const double phi = ks.phi_q();
    for (double a : {-20.0, -17.0, -10.0}) {
        const double g1 = (2 * a + 0.5) / phi + 2 / (phi * phi);
        EXPECT_NEAR(gamma_big(s, ks, a, a + 1e-9), g1, 1e-6);
        EXPECT_NEAR(gamma_small(s, ks, a, a + 1e-12), -8.0, 1e-9);
    }
}

TEST(Gamma, AlternativeFormWithSecondScaleFunction)
{
    for (const LevyModel& m : {ubv(), bv()}) {
        const KernelSet ks(m, 0.05, 2.0);
        const CostSpec s = kinked(2.0);
        const double phi = ks.phi_q(), lam = ks.lambda();
        for (auto [a, b] : {std::pair{-20.0, -10.0}, std::pair{-3.0, 1.5}, std::pair{-1.0, 0.3}}) {
            const double c = b - a;
            auto integrand = [&](double z) { return s.f_tilde_prime(z + a) * ks.z_second()(c - z); };
            const double I = quad(integrand, 0.0, c, {-a}) + quad(integrand, c, INFINITY, {-a}, 1e-12);
            const double alt = std::exp(-phi * c) * (I + lam / phi * (s.K_p() - s.K_c()));
            const double g = gamma_big(s, ks, a, b);
            EXPECT_NEAR(g, alt, 1e-8 * std::max(1.0, std::abs(g))) << a << " " << b;
        }
    }
}

TEST(Gamma, SmallGammaIsScaledDerivativeOfGamma)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    const CostSpec s = quadratic(2.0);
    const double phi = ks.phi_q(), lam = ks.lambda();
    for (auto [a, b] : {std::pair{-20.0, -12.0}, std::pair{-18.0, -5.0}, std::pair{-9.0, -8.0}}) {
        const GammaSlice gs(s, ks, a);
        const double h = 1e-5;
        const double fd = (gs.gamma_big(b + h) - gs.gamma_big(b - h)) / (2 * h);
        const double want = -lam * std::exp(-phi * (b - a)) * gs.gamma_small(b);
        EXPECT_NEAR(fd, want, 1e-6 * std::max(1.0, std::abs(want)));
    }
}

TEST_P(PolicyCase, TotalIsHoldingPlusReplenishment)
{
    const Case& c = GetParam();
    for (double x = c.a - 3.0; x <= c.b + 5.0; x += 0.37) {
        const double v = ev->value(x);
        EXPECT_NEAR(v, ev->holding(x) + ev->replenish(x), 1e-9 * std::max(1.0, std::abs(v))) << x;
    }
}

TEST_P(PolicyCase, HoldingConstantFormsAgree)
{
    EXPECT_NEAR(ev->g_f(), ev->g_f_direct(), 1e-9 * std::max(1.0, std::abs(ev->g_f())));
}

TEST_P(PolicyCase, BelowLowerBarrierOnlyRegularReplenishmentMoves)
{
    const Case& c = GetParam();
    for (double x : {c.a - 2.5, c.a - 0.3}) {
        EXPECT_NEAR(ev->derivative(x), -spec->K_c(), 1e-8);
        EXPECT_NEAR(ev->holding(x), ev->holding(c.a), 1e-8 * (1 + std::abs(ev->holding(c.a))));
        EXPECT_NEAR(ev->units_discounted(x), ev->units_discounted(c.a), 1e-9);
        EXPECT_NEAR(ev->units_regular(x), ev->units_regular(c.a) + (c.a - x), 1e-9);
    }
}

TEST_P(PolicyCase, DerivativeMatchesDisplayedFormula)
{
    const Case& c = GetParam();
    for (double x = c.a - 2.0; x <= c.b + 4.0; x += 0.29) {
        if (std::abs(x - c.a) < 1e-6) continue;
        const double want = ev->value_prime_direct(x);
        EXPECT_NEAR(ev->derivative(x), want, 1e-8 * std::max(1.0, std::abs(want))) << x;
        const double h = 1e-5;
        const double fd = (ev->value(x + h) - ev->value(x - h)) / (2 * h);
        EXPECT_NEAR(ev->derivative(x), fd, 1e-6 * std::max(1.0, std::abs(fd))) << x;
    }
}

TEST_P(PolicyCase, FPrimeSpecialisedFormsAgree)
{
    const Case& c = GetParam();
    const double fa = ev->value_fprime(c.a), fb = ev->value_fprime(c.b);
    EXPECT_NEAR(ev->value_fprime_at_a(), fa, 1e-10 * std::max(1.0, std::abs(fa)));
    EXPECT_NEAR(ev->value_fprime_at_b(), fb, 1e-10 * std::max(1.0, std::abs(fb)));
}

TEST_P(PolicyCase, SecondDerivativeOnlyForUnboundedVariation)
{
    const Case& c = GetParam();
    const double x = 0.5 * (c.a + c.b);
    if (c.bounded) {
        EXPECT_THROW(ev->second_derivative(x), UnsupportedOrder);
    } else {
        const double h = 1e-5;
        const double fd = (ev->derivative(x + h) - ev->derivative(x - h)) / (2 * h);
        EXPECT_NEAR(ev->second_derivative(x), fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
}

INSTANTIATE_TEST_SUITE_P(
    Grid, PolicyCase,
    ::testing::Values(Case{false, false, 2.0, -20.0, -10.0}, Case{false, false, 2.0, -17.5, -4.0},
                      Case{false, false, 12.0, -50.0, -48.0}, Case{false, true, 2.0, -3.0, 1.5},
                      Case{true, false, 2.0, -20.0, -10.0}, Case{true, true, 0.2, -4.0, 2.0}));

TEST(PolicyCost, ExtendedAgreesWithDoubleWhenWellConditioned)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    const CostSpec s = kinked(2.0);
    const PolicyEvaluator d(s, ks, {-1.0, 1.5});
    const BasicPolicyEvaluator<hp> x(s, ks.extended(), hp(-1.0), hp(1.5));
    for (double z = -3.0; z < 5.0; z += 0.31) {
        const double v = d.value()(z);
        EXPECT_NEAR(v, static_cast<double>(x.value()(hp(z))), 1e-11 * std::max(1.0, std::abs(v))) << z;
        EXPECT_NEAR(d.derivative(z), static_cast<double>(x.derivative(hp(z))), 1e-10) << z;
    }
    EXPECT_NEAR(d.gamma_big(), static_cast<double>(x.gamma_big()), 1e-10 * std::abs(d.gamma_big()));
}

TEST(PolicyCost, PrecisionFollowsBarrierSpread)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    const CostSpec s = quadratic(2.0);
    EXPECT_FALSE(PolicyCost(s, ks, {-17.3, -16.5}).extended());
    const PolicyCost wide(s, ks, {-20.0, -10.0});
    EXPECT_TRUE(wide.extended());
    const BasicPolicyEvaluator<hp> x(s, ks.extended(), hp(-20), hp(-10));
    EXPECT_EQ(wide.value(-15.0), static_cast<double>(x.value()(hp(-15))));
}

TEST(PolicyCost, ZeroHoldingCostGivesZeroHoldingValue)
{
    const KernelSet ks(ubv(), 0.05, 2.0);
    const CostSpec s(0.05, 2.0, 10.0, 2.0, {{0.0, {0.0}}});
    const PolicyEvaluator ev(s, ks, {-1.0, 1.0});
    for (double x : {-3.0, 0.0, 2.0, 6.0}) EXPECT_NEAR(ev.holding()(x), 0.0, 1e-10);
}
