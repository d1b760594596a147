#pragma once

#include <vector>

#include "levy_restock/solver.hpp"

namespace levy_restock {

enum class Region { below_a, between, above_b };
const char* to_string(Region r);

enum class GeneratorMethod {
    quadrature,  // jump integral by adaptive Gauss-Kronrod on the point values of v
    exact,       // jump integral as a convolution of v with the jump density
    automatic,   // quadrature for double evaluators, exact for hp ones
};

struct VerifyOptions {
    double vi_tol = 1e-6;         // relative to 1 + |f(x)|
    double smooth_fit_tol = 1e-7;
    double slope_tol = 1e-8;      // v' + K_c >= -slope_tol
    double convexity_tol = 1e-8;  // v' increments >= -convexity_tol
    GeneratorMethod method = GeneratorMethod::automatic;
};

struct ViPoint {
    double x;
    Region region;
    double lhs;       // (L - q)v + lambda(Mv - v) + f
    double expected;  // f~(x) - f~(a) below a, 0 elsewhere
    double residual;  // (lhs - expected) / (1 + |f(x)|)
};

struct VerificationReport {
    double smooth_fit_gap = 0;  // max(|v'(a+) + K_c|, |v'(b) + K_p|)
    double smooth_fit_gap_a = 0, smooth_fit_gap_b = 0;
    // |v''(a+)| and |v''(b+) - v''(b-)|; NaN for bounded variation
    double second_order_gap = 0;
    double min_slope_plus_Kc = 0;
    double min_slope_increment = 0;
    std::vector<ViPoint> vi_residuals;
    double max_abs_residual = 0;
    double min_vi_lhs = 0;  // min of lhs / (1 + |f|); the inequality wants >= 0

    struct Passed {
        bool smooth_fit = false, slope = false, convexity = false, vi = false, all = false;
    } passed;
};

// Mv(x) - v(x) with M w(x) = inf_{l >= 0} {K_p l + w(x + l)}. Closed form
// K_p(b - x) + v(b) - v(x) below b, 0 above; it assumes v convex with v'(b) = -K_p.
double m_operator_gap(const CostSpec& spec, const KernelSet& ks, const PolicySolution& sol, double x);

// (L - q)v(x) for the cost of sol. Kinks use right derivatives. Quadrature
// truncates the jumps at -40/min beta and throws ToleranceNotMet when its
// error estimate exceeds 1e-8 (relative).
double generator_apply(const CostSpec& spec, const KernelSet& ks, const PolicySolution& sol, double x,
                       GeneratorMethod method = GeneratorMethod::automatic);

// The same in the uncompensated form delta v' + int (v(x+z) - v(x)) mu(dz);
// with compensated = true the drift is the triplet drift and the jump
// integrand carries - v'(x) z 1{-1 < z < 0}. Quadrature only.
double generator_quadrature(const CostSpec& spec, const KernelSet& ks, const PolicySolution& sol, double x,
                            bool compensated);

// Evaluates every check on the grid. Failures are reported, never thrown.
VerificationReport full_report(const CostSpec& spec, const KernelSet& ks, const PolicySolution& sol,
                               const std::vector<double>& grid, const VerifyOptions& opt = {});

// grid from lo to hi inclusive in steps of `step`
std::vector<double> step_grid(double lo, double hi, double step);

}  // namespace levy_restock
