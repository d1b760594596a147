#include <gtest/gtest.h>

#include <random>

#include "levy_restock/scale.hpp"
#include "oracle.hpp"

using namespace levy_restock;
using oracle::quad;

namespace {

LevyModel ubv() { return LevyModel(1.0, 1.0, {{0.2, 1.0}}); }
LevyModel bv() { return LevyModel(1.0, 0.0, {{0.2, 1.0}}); }

PiecewisePolyExp affine(double c0, double c1)
{
    PolyExp p(0.0);
    p.add_term(Poly({c0, c1}), 0.0);
    return PiecewisePolyExp(p);
}

class ScaleBoth : public ::testing::TestWithParam<bool> {
protected:
    LevyModel model() const { return GetParam() ? bv() : ubv(); }
};

}  // namespace

TEST(Scale, WAtZeroUnboundedVariation)
{
    const ScaleSet s = build_scale_set(ubv(), 0.05);
    EXPECT_NEAR(s.w(0.0), 0.0, 1e-12);
    EXPECT_EQ(s.w(-1e-9), 0.0);
    EXPECT_NEAR(s.w_prime(0.0), 2.0, 1e-9);
    EXPECT_NEAR(s.w_prime(0.0), (s.w(1e-6) - s.w(0.0)) / 1e-6, 1e-5);
    EXPECT_EQ(s.z(-3.0), 1.0);
}

TEST(Scale, WAtZeroBoundedVariation)
{
    const ScaleSet s = build_scale_set(bv(), 0.05);
    EXPECT_NEAR(s.w(0.0), 1.0, 1e-12);
    double sum = 0.0;
    for (double c : s.coeffs) sum += c;
    EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST_P(ScaleBoth, LaplaceTransformOfW)
{
    const LevyModel m = model();
    for (double q : {0.05, 2.05}) {
        const ScaleSet s = build_scale_set(m, q);
        for (double k : {1.5, 2.0, 3.0}) {
            const double sv = k * s.phi_q;
            const double T = 60.0 / (sv - s.phi_q);
            const double lt = (exp_fn(-sv) * s.w).integrate(0.0, T);
            EXPECT_NEAR(lt, 1.0 / (m.psi(sv) - q), 1e-8) << "q=" << q << " s=" << sv;
            const double oq = quad([&](double x) { return std::exp(-sv * x) * s.w(x); }, 0.0, T);
            EXPECT_NEAR(lt, oq, 1e-8 * std::max(1.0, std::abs(oq)));
        }
    }
}

TEST_P(ScaleBoth, DerivedFunctionsMatchQuadrature)
{
    const ScaleSet s = build_scale_set(model(), 0.05);
    for (double x : {0.3, 2.0, 7.5}) {
        EXPECT_NEAR(s.w_bar(x), quad([&](double y) { return s.w(y); }, 0.0, x), 1e-10);
        EXPECT_NEAR(s.w_bar_bar(x), quad([&](double y) { return s.w_bar(y); }, 0.0, x), 1e-10);
        EXPECT_NEAR(s.z(x), 1.0 + 0.05 * s.w_bar(x), 1e-12);
        EXPECT_NEAR(s.z_bar(x), quad([&](double y) { return s.z(y); }, 0.0, x), 1e-10);
    }
    EXPECT_NEAR(s.z_bar(-2.5), -2.5, 1e-14);
}

TEST_P(ScaleBoth, LRZIdentities)
{
    const KernelSet ks(model(), 0.05, 2.0);
    const ScaleSet& B = ks.base();
    const ScaleSet& R = ks.boosted();
    const double lam = ks.lambda();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    std::vector<std::pair<double, double>> pts = {{0.0, 3.0}};
    for (int i = 0; i < 6; ++i) {
        const double b = U(rng);
        pts.push_back({b, b + 0.1 + std::abs(U(rng))});
    }
    for (auto [b, c] : pts) {
        auto lhs = [&](const PiecewisePolyExp& g) {
            // lambda * int_b^c W_r(c - u) g(u - b) du through the algebra
            return lam * convolve(g.shifted(-b).restricted(b, INFINITY), R.w_core, b)(c);
        };
        EXPECT_TRUE(oracle::close(lhs(B.w), R.w(c - b) - B.w(c - b), 1e-9));
        EXPECT_TRUE(oracle::close(lhs(B.z), R.z(c - b) - B.z(c - b), 1e-9));
        EXPECT_TRUE(oracle::close(lhs(B.z_bar), R.z_bar(c - b) - B.z_bar(c - b), 1e-9));
        const double oq = lam * quad([&](double u) { return R.w(c - u) * B.w(u - b); }, b, c);
        EXPECT_TRUE(oracle::close(oq, R.w(c - b) - B.w(c - b), 1e-9));
    }
}

TEST_P(ScaleBoth, SecondScaleFunctionDerivative)
{
    const KernelSet ks(model(), 0.05, 2.0);
    const auto d = ks.z_second().derivative();
    for (double x : {0.1, 0.7, 2.0, 5.0}) {
        const double want = ks.phi_q() * ks.z_second()(x) + ks.lambda() * ks.boosted().w(x);
        EXPECT_NEAR(d(x), want, 1e-9 * std::max(1.0, std::abs(want)));
    }
    EXPECT_NEAR(ks.theta()(0.0), 1.0, 1e-14);
    for (double x : {0.5, 3.0})
        EXPECT_NEAR(ks.z_second()(x), std::exp(ks.phi_q() * x) * ks.theta()(x), 1e-10 * ks.z_second()(x));
    EXPECT_NEAR(ks.z_second()(-1.0), std::exp(-ks.phi_q()), 1e-14);
}

TEST_P(ScaleBoth, WZLimits)
{
    const ScaleSet s = build_scale_set(model(), 0.05);
    const double y = 300.0 / s.phi_q;
    for (double x : {0.5, 2.0}) {
        const double ratio = s.w(y + x) / s.w(y);
        EXPECT_NEAR(ratio / std::exp(s.phi_q * x), 1.0, 1e-6);
    }
    EXPECT_NEAR((s.w(y) / s.z(y)) / (s.phi_q / s.q), 1.0, 1e-6);
}

TEST_P(ScaleBoth, RhoMatchesQuadrature)
{
    const KernelSet ks(model(), 0.05, 2.0);
    const auto h = affine(16.5, 2.0);
    const double a = -10.0;
    for (Rate rate : {Rate::base, Rate::boosted}) {
        const ScaleSet& S = rate == Rate::base ? ks.base() : ks.boosted();
        const auto r = rho(ks, a, h, rate);
        EXPECT_NEAR(r(a), 0.0, 1e-12);
        for (double x : {-9.0, -8.0, -5.0}) {
            const double want = quad([&](double y) { return h(y) * S.w(x - y); }, a, x);
            EXPECT_NEAR(r(x), want, 1e-9 * std::max(1.0, std::abs(want)));
        }
        const auto r1 = rho(ks, a, const_fn(1.0), rate);
        for (double x : {-9.0, -3.0}) EXPECT_NEAR(r1(x), S.w_bar(x - a), 1e-10 * (1 + S.w_bar(x - a)));
    }
}

TEST_P(ScaleBoth, ScriptKernelsAgreeWithSubtractiveForm)
{
    const KernelSet ks(model(), 0.05, 2.0);
    const ScaleSet& B = ks.base();
    const ScaleSet& R = ks.boosted();
    const double lam = ks.lambda();
    for (auto [b, y] : {std::pair{1.0, -1.5}, std::pair{0.0, 0.0}, std::pair{2.0, -4.0}}) {
        const ScriptKernels sk = script_kernels(ks, b, y);
        auto subtractive = [&](const PiecewisePolyExp& g, double x) {
            double v = g(x - y);
            if (x > b) v -= lam * quad([&](double z) { return B.w(x - z) * g(z - y); }, b, x, {y});
            return v;
        };
        for (double x : {y - 1.0, y + 0.2, b - 0.1, b, b + 0.05, b + 1.0, b + 4.0}) {
            EXPECT_TRUE(oracle::close(sk.W(x), subtractive(R.w, x), 1e-9)) << "W x=" << x;
            EXPECT_TRUE(oracle::close(sk.Z(x), subtractive(R.z, x), 1e-9)) << "Z x=" << x;
            EXPECT_TRUE(oracle::close(sk.W_bar(x), subtractive(R.w_bar, x), 1e-9)) << "Wb x=" << x;
            EXPECT_TRUE(oracle::close(sk.Z_bar(x), subtractive(R.z_bar, x), 1e-9)) << "Zb x=" << x;
        }
        for (double x : {y - 2.0, 0.5 * (y + b), b})
            EXPECT_TRUE(oracle::close(sk.Z(x), R.z(x - y), 1e-10));
    }
}

TEST_P(ScaleBoth, HKernelMatchesDefinition)
{
    const KernelSet ks(model(), 0.05, 2.0);
    const auto h = affine(16.5, 2.0);
    const double a = -3.0, b = 1.0;
    const auto H = h_kernel(ks, b, a, h);
    const double rb = rho(ks, a, h, Rate::boosted)(b);
    for (double x : {a - 2.0, a - 0.1})
        EXPECT_NEAR(H(x), ks.lambda() / ks.q() * rb, 1e-9 * std::abs(rb) * ks.lambda() / ks.q());
    for (double x : {-1.0, b, 2.5}) {
        const double rhob = rho(ks, b, h, Rate::base)(x);
        const double mid = quad(
            [&](double y) { return h(y) * script_kernels(ks, b, y).W(x); }, a, b, {}, 1e-11);
        const double want = rhob + mid + ks.lambda() / ks.q() * rb * ks.base().z(x - b);
        EXPECT_TRUE(oracle::close(H(x), want, 1e-8)) << x << " " << H(x) << " " << want;
    }
}

TEST_P(ScaleBoth, KKernelBelowAAndLargeX)
{
    const KernelSet ks(model(), 0.05, 2.0);
    const double a = -3.0, b = 1.0;
    const auto K = k_kernel(ks, b, a);
    const double zr = ks.boosted().z(b - a);
    const double want = (ks.q() / zr + ks.lambda()) / ks.r();
    EXPECT_NEAR(K(a - 1.0), want, 1e-12);
    EXPECT_NEAR(K(a), want, 1e-12);
    const double c = b + 200.0 / ks.phi_q();
    const double lim = ks.theta()(b - a) / zr;
    EXPECT_NEAR((K(c) / ks.base().z(c - a)) / lim, 1.0, 1e-4);
}

INSTANTIATE_TEST_SUITE_P(Models, ScaleBoth, ::testing::Values(false, true),
                         [](const auto& info) { return info.param ? "BoundedVariation" : "UnboundedVariation"; });
