#include "levy_restock/verify.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "levy_restock/errors.hpp"
#include "levy_restock/parallel.hpp"

namespace levy_restock {

const char* to_string(Region r)
{
    switch (r) {
    case Region::below_a: return "below_a";
    case Region::between: return "between";
    default: return "above_b";
    }
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Cost function of a solved policy, with whatever precision it lives in.
struct Candidate {
    virtual ~Candidate() = default;
    double a = -INFINITY, b = 0;
    virtual double v(double x) const = 0;
    virtual double d1(double x, Side s = Side::right) const = 0;
    virtual double d2(double x, Side s = Side::right) const = 0;  // NaN for bounded variation
    virtual bool wide() const { return false; }
    // (L - q)v(x) with the jump integral as an exact convolution
    virtual double generator_exact(double x) const = 0;
};

template <class R>
BasicPiecewisePolyExp<R> jump_convolution(const LevyModel& m, const BasicPiecewisePolyExp<R>& v)
{
    BasicPiecewisePolyExp<R> J = const_fn<R>(R(0));
    for (const auto& j : m.jumps()) {
        BasicPolyExp<R> w(R(0));
        w.add_term(BasicPoly<R>::constant(R(R(j.eta) * R(j.beta))), R(-j.beta));
        J = J + convolve(v, w, -std::numeric_limits<R>::infinity());
    }
    return J;
}

// delta v' + sigma^2/2 v'' + J - (Lambda + q) v, assembled in R
template <class R>
R exact_generator(const LevyModel& m, const R& q, const BasicPiecewisePolyExp<R>& v,
                  const BasicPiecewisePolyExp<R>& vp, const BasicPiecewisePolyExp<R>* vpp,
                  const BasicPiecewisePolyExp<R>& J, const R& x)
{
    R g = R(m.delta()) * vp(x) + J(x) - (R(m.total_jump_rate()) + q) * v(x);
    if (vpp) g += R(m.sigma()) * R(m.sigma()) / 2 * (*vpp)(x);
    return g;
}

template <class R>
struct HybridCandidate : Candidate {
    PolicyCost cost;
    const BasicPolicyEvaluator<R>& e;
    const LevyModel& model;
    R q;
    BasicPiecewisePolyExp<R> J, vpp;

    HybridCandidate(PolicyCost c, const BasicPolicyEvaluator<R>& ev, const LevyModel& m, const R& q_)
        : cost(std::move(c)), e(ev), model(m), q(q_)
    {
        a = num::to_double(e.a());
        b = num::to_double(e.b());
        J = jump_convolution(model, e.value());
        if (!model.bounded_variation()) vpp = e.value_prime().derivative();
    }
    double v(double x) const override { return num::to_double(e.value()(R(x))); }
    double d1(double x, Side s) const override { return num::to_double(e.value_prime()(R(x), s)); }
    double d2(double x, Side s) const override
    {
        return model.bounded_variation() ? kNaN : num::to_double(vpp(R(x), s));
    }
    bool wide() const override { return !std::is_same_v<R, double>; }
    double generator_exact(double x) const override
    {
        return num::to_double(exact_generator<R>(model, q, e.value(), e.value_prime(),
                                                 model.bounded_variation() ? nullptr : &vpp, J, R(x)));
    }
};

struct DiscountedCandidate : Candidate {
    PureDiscountedEvaluator e;
    const LevyModel& model;
    double q;
    PiecewisePolyExp J, vpp;

    DiscountedCandidate(const CostSpec& spec, const KernelSet& ks, double b_)
        : e(spec, ks, b_), model(ks.model()), q(ks.q())
    {
        b = b_;
        J = jump_convolution(model, e.value());
        vpp = e.value_prime().derivative();
    }
    double v(double x) const override { return e.value()(x); }
    double d1(double x, Side s) const override { return e.value_prime()(x, s); }
    double d2(double x, Side s) const override { return model.bounded_variation() ? kNaN : vpp(x, s); }
    double generator_exact(double x) const override
    {
        return exact_generator<double>(model, q, e.value(), e.value_prime(),
                                       model.bounded_variation() ? nullptr : &vpp, J, x);
    }
};

std::unique_ptr<Candidate> make_candidate(const CostSpec& spec, const KernelSet& ks, const PolicySolution& sol)
{
    if (!sol.hybrid()) return std::make_unique<DiscountedCandidate>(spec, ks, sol.b_star);
    PolicyCost c = solution_cost(spec, ks, sol);
    if (c.wide()) {
        const auto* e = c.wide();
        return std::make_unique<HybridCandidate<hp>>(std::move(c), *e, ks.model(), hp(ks.q()));
    }
    const auto* e = c.plain();
    return std::make_unique<HybridCandidate<double>>(std::move(c), *e, ks.model(), ks.q());
}

double quadrature_generator(const Candidate& c, const LevyModel& m, double q, double x, bool compensated)
{
    const double vx = c.v(x), v1 = c.d1(x);
    const double zmin = -40.0 / m.min_beta();
    auto density = [&](double z) {
        double d = 0.0;
        for (const auto& j : m.jumps()) d += j.eta * j.beta * std::exp(j.beta * z);
        return d;
    };
    auto integrand = [&](double z) {
        double jump = c.v(x + z) - vx;
        if (compensated && z > -1.0) jump -= v1 * z;
        return jump * density(z);
    };
    double integral = 0.0;
    if (!m.jumps().empty()) {
        std::vector<double> cuts{zmin};
        for (double k : {c.a - x, c.b - x, -1.0})
            if (k > zmin && k < 0.0) cuts.push_back(k);
        cuts.push_back(0.0);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double err = 0.0;
            const double part = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                integrand, cuts[i], cuts[i + 1], 15, 1e-11, &err);
            if (err > 1e-8 * (1.0 + std::abs(part)))
                throw ToleranceNotMet("generator_apply: jump quadrature error " + std::to_string(err));
            integral += part;
        }
    }
    const double drift = compensated ? m.triplet_drift() : m.delta();
    double g = drift * v1 + integral - q * vx;
    if (!m.bounded_variation()) g += 0.5 * m.sigma() * m.sigma() * c.d2(x);
    return g;
}

double generator(const Candidate& c, const KernelSet& ks, double x, GeneratorMethod method)
{
    if (method == GeneratorMethod::automatic)
        method = c.wide() ? GeneratorMethod::exact : GeneratorMethod::quadrature;
    if (method == GeneratorMethod::exact) return c.generator_exact(x);
    return quadrature_generator(c, ks.model(), ks.q(), x, !ks.model().bounded_variation());
}

double m_gap(const Candidate& c, const CostSpec& spec, double x)
{
    if (x >= c.b) return 0.0;
    return spec.K_p() * (c.b - x) + c.v(c.b) - c.v(x);
}

}  // namespace

double m_operator_gap(const CostSpec& spec, const KernelSet& ks, const PolicySolution& sol, double x)
{
    return m_gap(*make_candidate(spec, ks, sol), spec, x);
}

double generator_apply(const CostSpec& spec, const KernelSet& ks, const PolicySolution& sol, double x,
                       GeneratorMethod method)
{
    return generator(*make_candidate(spec, ks, sol), ks, x, method);
}

double generator_quadrature(const CostSpec& spec, const KernelSet& ks, const PolicySolution& sol, double x,
                            bool compensated)
{
    return quadrature_generator(*make_candidate(spec, ks, sol), ks.model(), ks.q(), x, compensated);
}

VerificationReport full_report(const CostSpec& spec, const KernelSet& ks, const PolicySolution& sol,
                               const std::vector<double>& grid, const VerifyOptions& opt)
{
    VerificationReport r;
    const auto c = make_candidate(spec, ks, sol);
    const bool ubv = !ks.model().bounded_variation();

    r.smooth_fit_gap_a = sol.hybrid() ? std::abs(c->d1(c->a) + spec.K_c()) : 0.0;
    r.smooth_fit_gap_b = std::abs(c->d1(c->b) + spec.K_p());
    r.smooth_fit_gap = std::max(r.smooth_fit_gap_a, r.smooth_fit_gap_b);
    if (ubv) {
        const double at_b = std::abs(c->d2(c->b) - c->d2(c->b, Side::left));
        r.second_order_gap = sol.hybrid() ? std::max(std::abs(c->d2(c->a)), at_b) : at_b;
    } else {
        r.second_order_gap = kNaN;
    }

    std::vector<double> slope(grid.size());
    r.vi_residuals.resize(grid.size());
    const double fa = sol.hybrid() ? spec.f_tilde()(c->a) : 0.0;
    parallel_for(grid.size(), [&](std::size_t i) {
        const double x = grid[i];
        slope[i] = c->d1(x);
        ViPoint& p = r.vi_residuals[i];
        p.x = x;
        p.region = x < c->a ? Region::below_a : (x < c->b ? Region::between : Region::above_b);
        const double f = spec.f()(x);
        p.lhs = generator(*c, ks, x, opt.method) + spec.lambda() * m_gap(*c, spec, x) + f;
        p.expected = p.region == Region::below_a ? spec.f_tilde()(x) - fa : 0.0;
        p.residual = (p.lhs - p.expected) / (1.0 + std::abs(f));
    });

    r.min_slope_plus_Kc = INFINITY;
    r.min_slope_increment = INFINITY;
    r.max_abs_residual = 0.0;
    r.min_vi_lhs = INFINITY;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r.min_slope_plus_Kc = std::min(r.min_slope_plus_Kc, slope[i] + spec.K_c());
        if (i > 0) r.min_slope_increment = std::min(r.min_slope_increment, slope[i] - slope[i - 1]);
        const ViPoint& p = r.vi_residuals[i];
        r.max_abs_residual = std::max(r.max_abs_residual, std::abs(p.residual));
        r.min_vi_lhs = std::min(r.min_vi_lhs, p.lhs / (1.0 + std::abs(spec.f()(p.x))));
    }
    if (grid.size() < 2) r.min_slope_increment = 0.0;

    r.passed.smooth_fit = r.smooth_fit_gap <= opt.smooth_fit_tol;
    r.passed.slope = r.min_slope_plus_Kc >= -opt.slope_tol;
    r.passed.convexity = r.min_slope_increment >= -opt.convexity_tol;
    r.passed.vi = r.max_abs_residual <= opt.vi_tol && r.min_vi_lhs >= -opt.vi_tol;
    r.passed.all = r.passed.smooth_fit && r.passed.slope && r.passed.convexity && r.passed.vi;
    return r;
}

std::vector<double> step_grid(double lo, double hi, double step)
{
    std::vector<double> g;
    if (!(step > 0.0) || hi < lo) return g;
    const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) g.push_back(lo + step * static_cast<double>(i));
    return g;
}

}  // namespace levy_restock
