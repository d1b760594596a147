#pragma once

#include "levy_restock/policy_cost.hpp"

namespace levy_restock {

// Pure discounted policy: no lower barrier, lift to b at each Poisson time
// spent below b. Closed form through the resolvent of X killed at rate
// q + lambda*1{x < b}; no truncation of the lower barrier.
class PureDiscountedEvaluator {
public:
    PureDiscountedEvaluator(const CostSpec& spec, const KernelSet& ks, double b);

    double b() const { return b_; }

    // E_x int_0^inf e^{-qt} h(Y_t) dt under the policy
    PiecewisePolyExp discounted_occupation(const PiecewisePolyExp& h) const;
    // value of the same at x = b, via the killed resolvent only
    double occupation_at_b(const PiecewisePolyExp& h) const;

    const PiecewisePolyExp& value() const { return v_; }
    const PiecewisePolyExp& holding() const { return vf_; }
    const PiecewisePolyExp& units_discounted() const { return rp_; }
    const PiecewisePolyExp& value_prime() const { return vp_; }
    const PiecewisePolyExp& value_fprime() const { return vfp_; }
    double operator()(double x) const { return v_(x); }

    // killed-resolvent mass of the lift rate at b; closed form 1 - q Phi(r)/(r Phi(q))
    double lift_mass() const { return mP_; }

private:
    PiecewisePolyExp killed_resolvent(const PiecewisePolyExp& h_shifted, double* m_out) const;

    const KernelSet* ks_;
    double b_;
    PiecewisePolyExp P_;  // killed resolvent of lambda*1{<0}, shifted coordinates
    double mP_;
    PiecewisePolyExp v_, vf_, rp_, vp_, vfp_;
};

// First-order condition of the pure discounted barrier: killed-resolvent mass
// of f' + q K_p at b. Increasing in b; its root is the optimal b.
double pure_discounted_foc(const CostSpec& spec, const KernelSet& ks, double b);

}  // namespace levy_restock
