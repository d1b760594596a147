#pragma once

#include <cmath>
#include <string>

#include "levy_restock/policy_cost.hpp"
#include "levy_restock/pure_policies.hpp"

namespace levy_restock {

enum class CaseTag { A1_LE_A2, A2_LT_A1 };
const char* to_string(CaseTag t);

struct Thresholds {
    double a_bar;          // inf{a : f~'(a) >= 0}
    double a_bar_bar;      // inf{a : f'(a) + q K_p > 0}
    double a_underline_1;  // root of Gamma_1
    double a_underline_2;  // root of Gamma_2
    double a_dagger;       // root of int_0^inf e^{-Phi y} f~'(y + a) dy
    CaseTag case_tag;
};

struct SolverOptions {
    double tol_root = 1e-13;      // relative bracket width for bisection
    double tol_residual = 1e-8;   // residual bound in units of lambda(K_c-K_p)/Phi(q)
    double bracket_cap = 1e4;     // b search stops at a + bracket_cap/Phi(q+lambda)
};

struct Diagnostics {
    double gamma_big_residual = 0.0;
    double gamma_small_residual = 0.0;
    double residual_scale = 0.0;
    CaseTag case_tag = CaseTag::A1_LE_A2;
    double a_underline_1 = 0.0;
    double a_underline_2 = 0.0;
    double a_dagger = 0.0;
    int iterations = 0;
};

struct PolicySolution {
    enum class Kind { Hybrid, PureDiscounted } kind = Kind::Hybrid;
    double a_star = -INFINITY;  // -inf for the pure discounted policy
    double b_star = 0.0;
    // Barriers in hp. When a* sits within double resolution of a_underline_2
    // only these reproduce Gamma = gamma = 0.
    hp a_exact = -std::numeric_limits<hp>::infinity();
    hp b_exact = 0;
    bool extended = false;  // solved in hp
    Diagnostics diag;

    bool hybrid() const { return kind == Kind::Hybrid; }
    HybridPolicy policy() const { return {a_star, b_star}; }
};

// Cost of the solved hybrid policy at the precision it was solved in.
PolicyCost solution_cost(const CostSpec& spec, const KernelSet& ks, const PolicySolution& sol);

double gamma_one(const CostSpec& spec, const KernelSet& ks, double a);
double gamma_two(const CostSpec& spec, const KernelSet& ks, double a);

// Throws NoFiniteThreshold when the slope assumptions fail.
Thresholds thresholds(const CostSpec& spec, const KernelSet& ks);

// Unique b > a with rho_a^{(q+lambda)}(b; f~') = K_p - K_c.
double b_of_a(const CostSpec& spec, const KernelSet& ks, double a, const SolverOptions& opt = {});

// Gamma-bar(a) = Gamma(a, b_of_a(a))
double gamma_bar(const CostSpec& spec, const KernelSet& ks, double a, const SolverOptions& opt = {});

PolicySolution solve_barriers(const CostSpec& spec, const KernelSet& ks, const SolverOptions& opt = {});

// Optimal barrier of the pure discounted policy (a = -inf).
double pure_discounted_barrier(const CostSpec& spec, const KernelSet& ks, const SolverOptions& opt = {});

// a-double-dagger: root of int_0^inf e^{-Phi y}(f'(y + a) + q C) dy,
// the lambda -> 0 limit of Gamma_1 with K_c = C
double pure_regular_barrier(const CostSpec& spec, const KernelSet& ks, double C);

// Cost of reflecting at a with unit price C, as the limit b -> a+ of the
// hybrid cost (Richardson on b = a + eps, a + eps/2).
class PureRegularEvaluator {
public:
    PureRegularEvaluator(const CostSpec& spec, const KernelSet& ks, double a, double C, double eps = 1e-4);
    double operator()(double x) const;
    // |v(eps/2) - v(eps)| at x, the Richardson agreement measure
    double richardson_gap(double x) const;
    double holding(double x) const;
    double units_regular(double x) const;

private:
    CostSpec spec_;
    PolicyEvaluator e1_, e2_;
};
double pure_regular_value(const CostSpec& spec, const KernelSet& ks, double a, double x, double C);

}  // namespace levy_restock
