#pragma once

#include <memory>
#include <vector>

#include "levy_restock/polyexp.hpp"
#include "levy_restock/scale.hpp"

namespace levy_restock {

// One piece of the holding cost: f(x) = sum_k coeffs[k] x^k for x >= from
// (up to the next piece). The first piece extends to -inf whatever its `from`.
struct FPiece {
    double from;
    std::vector<double> coeffs;
};

class CostSpec {
public:
    CostSpec(double q, double lambda, double K_c, double K_p, std::vector<FPiece> f);

    double q() const { return q_; }
    double lambda() const { return lambda_; }
    double K_c() const { return K_c_; }
    double K_p() const { return K_p_; }
    const std::vector<FPiece>& f_pieces() const { return pieces_; }

    // slope added to f by the affine perturbation: q K_c + lambda (K_c - K_p)
    double tilt() const { return q_ * K_c_ + lambda_ * (K_c_ - K_p_); }

    const PiecewisePolyExp& f() const { return f_; }
    const PiecewisePolyExp& f_prime() const { return fp_; }  // right derivative
    const PiecewisePolyExp& f_tilde() const { return ft_; }
    const PiecewisePolyExp& f_tilde_prime() const { return ftp_; }
    double f_tilde_prime(double x) const { return ftp_(x); }

    // limits of f' at -inf / +inf (may be +-inf)
    double f_prime_limit(int dir) const;
    // f~' takes both signs, i.e. a_bar is finite
    bool slope_assumption_1() const;
    // f' + q K_p takes both signs, i.e. a_bar_bar is finite
    bool slope_assumption_2() const;

    // the same functions in R (double or hp)
    template <class R>
    const BasicPiecewisePolyExp<R>& f_as() const;
    template <class R>
    const BasicPiecewisePolyExp<R>& f_prime_as() const;
    template <class R>
    const BasicPiecewisePolyExp<R>& f_tilde_prime_as() const;

    CostSpec with_costs(double K_c, double K_p) const;
    CostSpec with_lambda(double lambda) const;

private:
    double q_, lambda_, K_c_, K_p_;
    std::vector<FPiece> pieces_;
    PiecewisePolyExp f_, fp_, ft_, ftp_;
    BasicPiecewisePolyExp<hp> fx_, fpx_, ftpx_;
};

template <>
inline const PiecewisePolyExp& CostSpec::f_as<double>() const { return f_; }
template <>
inline const PiecewisePolyExp& CostSpec::f_prime_as<double>() const { return fp_; }
template <>
inline const PiecewisePolyExp& CostSpec::f_tilde_prime_as<double>() const { return ftp_; }
template <>
inline const BasicPiecewisePolyExp<hp>& CostSpec::f_as<hp>() const { return fx_; }
template <>
inline const BasicPiecewisePolyExp<hp>& CostSpec::f_prime_as<hp>() const { return fpx_; }
template <>
inline const BasicPiecewisePolyExp<hp>& CostSpec::f_tilde_prime_as<hp>() const { return ftpx_; }

struct HybridPolicy {
    double a;
    double b;
};

// Everything about Gamma(a, .) and gamma(a, .) for one lower barrier a.
template <class R>
class BasicGammaSlice {
public:
    BasicGammaSlice(const CostSpec& spec, const BasicKernelSet<R>& ks, const R& a);

    const R& a() const { return a_; }
    R gamma_big(const R& b) const;
    R gamma_small(const R& b) const;
    R rho(const R& b) const { return rho_(b); }
    const R& tail() const { return tail_; }  // int_0^inf e^{-Phi y} f~'(y + a) dy

private:
    R a_, phi_, lambda_, dk_;
    R tail_;
    BasicPiecewisePolyExp<R> rho_;  // rho_a^{(q+lambda)}(.; f~')
    BasicPiecewisePolyExp<R> acc_;  // int_a^x e^{-Phi (y-a)} rho(y) dy
};
using GammaSlice = BasicGammaSlice<double>;

double f_tilde_prime(const CostSpec& spec, double x);
double gamma_big(const CostSpec& spec, const KernelSet& ks, double a, double b);
double gamma_small(const CostSpec& spec, const KernelSet& ks, double a, double b);

// Closed-form cost functionals of the hybrid barrier policy (a, b) as
// functions of the starting level x. Keeps pointers to spec and ks, which
// must outlive it.
template <class R>
class BasicPolicyEvaluator {
public:
    using Fn = BasicPiecewisePolyExp<R>;

    BasicPolicyEvaluator(const CostSpec& spec, const BasicKernelSet<R>& ks, const R& a, const R& b);
    BasicPolicyEvaluator(const CostSpec& spec, const BasicKernelSet<R>& ks, HybridPolicy pol)
        : BasicPolicyEvaluator(spec, ks, R(pol.a), R(pol.b))
    {
    }

    HybridPolicy policy() const { return {num::to_double(a_), num::to_double(b_)}; }
    const R& a() const { return a_; }
    const R& b() const { return b_; }
    const R& gamma_big() const { return Gamma_; }
    const R& gamma_small() const { return gamma_; }
    const R& theta() const { return theta_; }
    const R& z_boosted() const { return zr_; }
    const R& k1() const { return k1_; }
    const R& k2() const { return k2_; }
    const R& g_f() const { return gf_; }  // G^f(b), f'-form
    R g_f_direct() const;                 // G^f(b) from f itself

    const Fn& value() const { return v_; }
    const Fn& holding() const { return vf_; }
    const Fn& replenish() const { return vr_; }
    // expected discounted units bought at Poisson times / by continuous reflection
    const Fn& units_discounted() const { return rp_; }
    const Fn& units_regular() const { return rc_; }
    const Fn& value_prime() const { return vp_; }
    const Fn& value_fprime() const { return vfp_; }
    // v' from the displayed derivative formula (independent of value())
    const Fn& value_prime_direct() const { return vpd_; }

    R operator()(const R& x) const { return v_(x); }
    R derivative(const R& x, Side side = Side::right) const { return vp_(x, side); }
    R second_derivative(const R& x, Side side = Side::right) const;
    // specialised forms of v^{f'} at a and at b
    R value_fprime_at_a() const;
    R value_fprime_at_b() const;

private:
    const CostSpec* spec_;
    const BasicKernelSet<R>* ks_;
    R a_, b_;
    R Gamma_, gamma_, theta_, zr_, k1_, k2_, gf_;
    Fn v_, vf_, vr_, rp_, rc_, vp_, vpp_, vfp_, vpd_;
};
using PolicyEvaluator = BasicPolicyEvaluator<double>;

// Above this value of Phi(q+lambda)(b-a) the closed forms lose more than
// about e^6 ulps to cancellation, and PolicyCost switches to hp.
inline constexpr double kExtendedSpread = 6.0;
// e^{180} leaves about 20 of the 100 digits
inline constexpr double kExtendedLimit = 180.0;

// Point evaluation of the hybrid policy cost with the working precision
// picked from the barrier spread. Barriers may be given in hp when they are
// only meaningful to more than 16 digits.
class PolicyCost {
public:
    PolicyCost(const CostSpec& spec, const KernelSet& ks, HybridPolicy pol);
    PolicyCost(const CostSpec& spec, const KernelSet& ks, const hp& a, const hp& b);

    bool extended() const { return static_cast<bool>(x_); }
    // the evaluator in use; exactly one is non-null
    const BasicPolicyEvaluator<double>* plain() const { return d_.get(); }
    const BasicPolicyEvaluator<hp>* wide() const { return x_.get(); }
    HybridPolicy policy() const { return pol_; }

    double operator()(double x) const { return value(x); }
    double value(double x) const;
    double derivative(double x, Side side = Side::right) const;
    double second_derivative(double x, Side side = Side::right) const;
    double holding(double x) const;
    double replenish(double x) const;
    double units_discounted(double x) const;
    double units_regular(double x) const;
    double value_fprime(double x) const;
    double gamma_big() const;
    double gamma_small() const;
    double value_fprime_at_a() const;
    double value_fprime_at_b() const;

private:
    HybridPolicy pol_;
    std::shared_ptr<const BasicPolicyEvaluator<double>> d_;
    std::shared_ptr<const BasicPolicyEvaluator<hp>> x_;
};

}  // namespace levy_restock
