#include "levy_restock/solver.hpp"

#include <cmath>
#include <string>

#include "levy_restock/bisect.hpp"
#include "levy_restock/errors.hpp"

namespace levy_restock {

const char* to_string(CaseTag t) { return t == CaseTag::A1_LE_A2 ? "A1_LE_A2" : "A2_LT_A1"; }

namespace {

// Root of an increasing function, bracket grown geometrically from `start`.
// Returns inf{a : pos(a)}.
template <class R, class P>
R increasing_root(P&& pos, const R& start, const char* what)
{
    R lo = start, hi = start, step = 1;
    if (pos(start)) {
        lo = start - step;
        while (pos(lo)) {
            hi = lo;
            step *= 2;
            lo = start - step;
            if (step > 1e12) throw NoFiniteThreshold(std::string(what) + ": no sign change below");
        }
    } else {
        hi = start + step;
        while (!pos(hi)) {
            lo = hi;
            step *= 2;
            hi = start + step;
            if (step > 1e12) throw NoFiniteThreshold(std::string(what) + ": no sign change above");
        }
    }
    auto s = [&](const R& x) { return pos(x) ? 1 : -1; };
    return bisect(s, lo, hi, false).hi;
}

template <class R>
struct Solver {
    const CostSpec& spec;
    const BasicKernelSet<R>& ks;
    SolverOptions opt;

    R tail(const R& rate, const R& a) const { return weighted_tail_integral(spec.f_tilde_prime_as<R>(), rate, a); }
    R gamma_one(const R& a) const
    {
        return tail(ks.phi_q(), a) + ks.lambda() / ks.phi_q() * (spec.K_p() - spec.K_c());
    }
    R gamma_two(const R& a) const { return tail(ks.phi_r(), a); }

    struct Marks {
        R a_bar, a_bar_bar, a1, a2, adag;
    };

    Marks marks() const
    {
        const auto& ftp = spec.f_tilde_prime_as<R>();
        const auto& fp = spec.f_prime_as<R>();
        const R qkp = spec.q() * spec.K_p();
        Marks m;
        m.a_bar = increasing_root([&](const R& x) { return ftp(x) >= 0; }, R(0), "a_bar");
        m.a_bar_bar = increasing_root([&](const R& x) { return fp(x) + qkp > 0; }, m.a_bar, "a_bar_bar");
        m.a1 = increasing_root([&](const R& a) { return gamma_one(a) >= 0; }, m.a_bar_bar, "a_underline_1");
        m.a2 = increasing_root([&](const R& a) { return gamma_two(a) >= 0; }, m.a_bar, "a_underline_2");
        m.adag = increasing_root([&](const R& a) { return tail(ks.phi_q(), a) >= 0; }, m.a1, "a_dagger");
        return m;
    }

    R b_of_a(const BasicGammaSlice<R>& gs) const
    {
        const R a = gs.a();
        const R dk = spec.K_p() - spec.K_c();
        // rho_a(b) - (K_p - K_c) is positive at a+; NaN from inf - inf counts as past the root
        auto positive = [&](const R& b) { return gs.rho(b) - dk > 0; };
        const R cap = a + opt.bracket_cap / ks.phi_r();
        R lo = a, hi = a + 1, step = 1;
        while (positive(hi)) {
            lo = hi;
            step *= 2;
            hi = a + step;
            if (hi > cap)
                throw NoCrossing("b_of_a: rho_a stays above K_p - K_c up to the bracket cap (a >= a_underline_2?)");
        }
        auto g = [&](const R& b) {
            const R v = gs.rho(b) - dk;
            return num::is_finite(v) ? v : R(v > 0 ? 1 : -1);
        };
        return bisect(g, lo, hi, true).root;
    }

    R gamma_bar(const R& a) const
    {
        const BasicGammaSlice<R> gs(spec, ks, a);
        return gs.gamma_big(b_of_a(gs));
    }

    // Bisection for Gamma-bar = 0 on (a_dagger, right) in t = log(right - a),
    // which resolves roots that crowd against the right end.
    void solve(PolicySolution& sol, const Marks& m) const
    {
        const R right = m.a1 < m.a2 ? m.a1 : m.a2;
        const R floor = std::numeric_limits<R>::epsilon() * 64 * (1 + num::abs(right));
        auto a_of = [&](double t) { return R(right - num::exp(R(t))); };
        int evals = 0;
        // sign of Gamma-bar, with "no crossing" read as not yet positive
        auto gbar_positive = [&](double t) {
            ++evals;
            try {
                return gamma_bar(a_of(t)) > 0;
            } catch (const NoCrossing&) {
                return false;
            }
        };
        const double t_hi = num::to_double(num::log(R(right - m.adag)));
        const double t_floor = num::to_double(num::log(floor));
        if (gamma_bar(m.adag) >= 0)
            throw BracketFailure("solve_barriers: Gamma-bar(a_dagger) is not negative");
        double step = 1.0, t_lo = t_hi - step;
        while (!gbar_positive(t_lo)) {
            step = std::min(2.0 * step, step + 16.0);
            t_lo = t_hi - step;
            if (t_lo < t_floor)
                throw BracketFailure(
                    "solve_barriers: Gamma-bar not positive anywhere left of min(a_underline_1, a_underline_2) "
                    "down to a distance of " + std::to_string(num::to_double(floor)) +
                    "; the root sits closer to that end than the arithmetic resolves");
        }
        // root in t between t_lo (positive) and t_hi (negative)
        double lo = t_lo, hi = t_hi;
        while (hi - lo > opt.tol_root * std::max(1.0, std::abs(lo))) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (gbar_positive(mid))
                lo = mid;
            else
                hi = mid;
        }
        // take the end with the smaller residual
        const R scale = ks.lambda() * (spec.K_c() - spec.K_p()) / ks.phi_q();
        R best_a = 0, best_b = 0, best_G = 0, best_g = 0;
        bool have = false;
        for (double t : {lo, hi}) {
            try {
                const R a = a_of(t);
                const BasicGammaSlice<R> gs(spec, ks, a);
                const R b = b_of_a(gs);
                const R G = gs.gamma_big(b);
                if (!have || num::abs(G) < num::abs(best_G)) {
                    best_a = a;
                    best_b = b;
                    best_G = G;
                    best_g = gs.gamma_small(b);
                    have = true;
                }
            } catch (const NoCrossing&) {
            }
        }
        if (!have) throw BracketFailure("solve_barriers: no b(a) at the final bracket");
        sol.a_exact = hp(best_a);
        sol.b_exact = hp(best_b);
        sol.a_star = num::to_double(best_a);
        sol.b_star = num::to_double(best_b);
        sol.diag.gamma_big_residual = num::to_double(best_G);
        sol.diag.gamma_small_residual = num::to_double(best_g);
        sol.diag.residual_scale = num::to_double(scale);
        sol.diag.iterations = evals;
    }
};

template <class R>
void fill_marks(PolicySolution& sol, const typename Solver<R>::Marks& m)
{
    sol.diag.a_underline_1 = num::to_double(m.a1);
    sol.diag.a_underline_2 = num::to_double(m.a2);
    sol.diag.a_dagger = num::to_double(m.adag);
    sol.diag.case_tag = m.a1 <= m.a2 ? CaseTag::A1_LE_A2 : CaseTag::A2_LT_A1;
}

}  // namespace

double gamma_one(const CostSpec& spec, const KernelSet& ks, double a)
{
    return Solver<double>{spec, ks, {}}.gamma_one(a);
}

double gamma_two(const CostSpec& spec, const KernelSet& ks, double a)
{
    return Solver<double>{spec, ks, {}}.gamma_two(a);
}

Thresholds thresholds(const CostSpec& spec, const KernelSet& ks)
{
    if (!spec.slope_assumption_2())
        throw NoFiniteThreshold("f' + q K_p never changes sign, so a_bar_bar is not finite");
    if (!spec.slope_assumption_1())
        throw NoFiniteThreshold("f~' never changes sign, so a_bar is not finite (pure discounted case)");
    const auto m = Solver<double>{spec, ks, {}}.marks();
    Thresholds t{};
    t.a_bar = m.a_bar;
    t.a_bar_bar = m.a_bar_bar;
    t.a_underline_1 = m.a1;
    t.a_underline_2 = m.a2;
    t.a_dagger = m.adag;
    t.case_tag = m.a1 <= m.a2 ? CaseTag::A1_LE_A2 : CaseTag::A2_LT_A1;
    return t;
}

double b_of_a(const CostSpec& spec, const KernelSet& ks, double a, const SolverOptions& opt)
{
    return Solver<double>{spec, ks, opt}.b_of_a(GammaSlice(spec, ks, a));
}

double gamma_bar(const CostSpec& spec, const KernelSet& ks, double a, const SolverOptions& opt)
{
    return Solver<double>{spec, ks, opt}.gamma_bar(a);
}

PolicySolution solve_barriers(const CostSpec& spec, const KernelSet& ks, const SolverOptions& opt)
{
    PolicySolution sol;
    if (!spec.slope_assumption_2())
        throw ConfigError("f: f'(x) + q K_p must be <= 0 far left and > 0 far right");
    if (!spec.slope_assumption_1()) {
        sol.kind = PolicySolution::Kind::PureDiscounted;
        sol.b_star = pure_discounted_barrier(spec, ks, opt);
        sol.b_exact = sol.b_star;
        sol.diag.residual_scale = ks.lambda() * (spec.K_c() - spec.K_p()) / ks.phi_q();
        return sol;
    }
    bool done = false;
    {
        const Solver<double> s{spec, ks, opt};
        const auto m = s.marks();
        fill_marks<double>(sol, m);
        try {
            s.solve(sol, m);
            done = ks.phi_r() * (sol.b_star - sol.a_star) <= kExtendedSpread;
        } catch (const NumericError&) {
        }
    }
    if (!done) {
        const Solver<hp> s{spec, ks.extended(), opt};
        const auto m = s.marks();
        fill_marks<hp>(sol, m);
        s.solve(sol, m);
        sol.extended = true;
    }
    const double scale = sol.diag.residual_scale;
    if (std::abs(sol.diag.gamma_big_residual) > opt.tol_residual * scale ||
        std::abs(sol.diag.gamma_small_residual) > opt.tol_residual * scale)
        throw ToleranceNotMet("solve_barriers: residuals Gamma=" + std::to_string(sol.diag.gamma_big_residual) +
                              " gamma=" + std::to_string(sol.diag.gamma_small_residual) + " exceed tolerance");
    return sol;
}

PolicyCost solution_cost(const CostSpec& spec, const KernelSet& ks, const PolicySolution& sol)
{
    if (!sol.hybrid()) throw std::invalid_argument("solution_cost: pure discounted solution has no lower barrier");
    return PolicyCost(spec, ks, sol.a_exact, sol.b_exact);
}

double pure_discounted_barrier(const CostSpec& spec, const KernelSet& ks, const SolverOptions& opt)
{
    // f' + qK_p changes sign at a_bar_bar; the condition is monotone in b
    const PiecewisePolyExp& fp = spec.f_prime();
    const double qkp = spec.q() * spec.K_p();
    double start = 0.0;
    try {
        start = increasing_root([&](double x) { return fp(x) + qkp > 0.0; }, 0.0, "a_bar_bar");
    } catch (const NoFiniteThreshold&) {
        throw ConfigError("f: f'(x) + q K_p must be <= 0 far left and > 0 far right");
    }
    double lo = start - 1.0, hi = start + 1.0, step = 1.0;
    while (pure_discounted_foc(spec, ks, lo) >= 0.0) {
        step *= 2.0;
        lo = start - step;
        if (step > 1e6) throw BracketFailure("pure_discounted_barrier: no lower bracket");
    }
    step = 1.0;
    while (pure_discounted_foc(spec, ks, hi) <= 0.0) {
        step *= 2.0;
        hi = start + step;
        if (step > 1e6) throw BracketFailure("pure_discounted_barrier: no upper bracket");
    }
    return bisect([&](double b) { return pure_discounted_foc(spec, ks, b); }, lo, hi, false, 0.0, opt.tol_root)
        .root;
}

double pure_regular_barrier(const CostSpec& spec, const KernelSet& ks, double C)
{
    const double phi = ks.phi_q();
    return increasing_root(
        [&](double a) { return weighted_tail_integral(spec.f_prime(), phi, a) + spec.q() * C / phi >= 0.0; }, 0.0,
        "a_double_dagger");
}

namespace {
CostSpec regular_spec(const CostSpec& spec, double C)
{
    const double kp = spec.K_p() < C ? spec.K_p() : C - 1.0;
    return spec.with_costs(C, kp);
}
}  // namespace

PureRegularEvaluator::PureRegularEvaluator(const CostSpec& spec, const KernelSet& ks, double a, double C,
                                           double eps)
    : spec_(regular_spec(spec, C)), e1_(spec_, ks, {a, a + eps}), e2_(spec_, ks, {a, a + 0.5 * eps})
{
}

double PureRegularEvaluator::operator()(double x) const { return 2.0 * e2_(x) - e1_(x); }
double PureRegularEvaluator::richardson_gap(double x) const { return std::abs(e2_(x) - e1_(x)); }
double PureRegularEvaluator::holding(double x) const { return 2.0 * e2_.holding()(x) - e1_.holding()(x); }
double PureRegularEvaluator::units_regular(double x) const
{
    return 2.0 * e2_.units_regular()(x) - e1_.units_regular()(x);
}

double pure_regular_value(const CostSpec& spec, const KernelSet& ks, double a, double x, double C)
{
    return PureRegularEvaluator(spec, ks, a, C)(x);
}

}  // namespace levy_restock
