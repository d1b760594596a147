#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "levy_restock/model.hpp"
#include "levy_restock/polyexp.hpp"

namespace levy_restock {

// q-scale function W and its relatives for a rational psi.
// W(x) = sum over roots r of e^{r x}/psi'(r) on x >= 0, zero below.
template <class R>
struct BasicScaleSet {
    R q = 0;
    R phi_q = 0;
    BasicRootSet<R> roots;
    std::vector<R> coeffs;   // 1/psi'(r), same order as roots.all()
    BasicPolyExp<R> w_core;  // formula of W on [0, inf), origin 0
    BasicPiecewisePolyExp<R> w, w_prime, w_bar, w_bar_bar, z, z_bar;
};
using ScaleSet = BasicScaleSet<double>;

template <class R>
BasicScaleSet<R> build_scale_set_as(const LevyModel& m, const R& q);
inline ScaleSet build_scale_set(const LevyModel& m, double q) { return build_scale_set_as(m, q); }

// Scale sets at q and q + lambda plus the tilted second scale function.
template <class R>
class BasicKernelSet {
public:
    using Fn = BasicPiecewisePolyExp<R>;

    BasicKernelSet(const LevyModel& m, const R& q, const R& lambda);

    const LevyModel& model() const { return model_; }
    const R& q() const { return q_; }
    const R& lambda() const { return lambda_; }
    R r() const { return q_ + lambda_; }
    const R& phi_q() const { return base_.phi_q; }
    const R& phi_r() const { return boosted_.phi_q; }
    R psi_prime0() const { return model_.psi_prime_as(R(0)); }

    const BasicScaleSet<R>& base() const { return base_; }
    const BasicScaleSet<R>& boosted() const { return boosted_; }
    // Theta(x) = 1 + lambda * int_0^x e^{-Phi(q) y} W_{q+lambda}(y) dy
    const Fn& theta() const { return theta_; }
    // Z_{q+lambda}(x, Phi(q)) = e^{Phi(q) x} Theta(x)
    const Fn& z_second() const { return z_second_; }

private:
    LevyModel model_;
    R q_, lambda_;
    BasicScaleSet<R> base_, boosted_;
    Fn theta_, z_second_;
};

// Double-precision kernels with a 100-digit twin built on first use.
class KernelSet : public BasicKernelSet<double> {
public:
    KernelSet(const LevyModel& m, double q, double lambda);
    const BasicKernelSet<hp>& extended() const;

private:
    struct Twin {
        std::once_flag once;
        std::unique_ptr<BasicKernelSet<hp>> ks;
    };
    std::shared_ptr<Twin> twin_;
};

enum class Rate { base, boosted };

// rho_a(x; h) = int_a^x h(y) W(x - y) dy at rate q or q + lambda
template <class R>
BasicPiecewisePolyExp<R> rho(const BasicKernelSet<R>& ks, const std::type_identity_t<R>& a,
                             const BasicPiecewisePolyExp<R>& h, Rate rate);

// Script kernels of x for fixed (b, y), via
//   base(x - y) + lambda * int_y^b W_q(x - u) boosted(u - y) du
template <class R>
struct BasicScriptKernels {
    BasicPiecewisePolyExp<R> W, Z, W_bar, Z_bar;
};
using ScriptKernels = BasicScriptKernels<double>;
template <class R>
BasicScriptKernels<R> script_kernels(const BasicKernelSet<R>& ks, const std::type_identity_t<R>& b,
                                     const std::type_identity_t<R>& y);

// H_b(x, a; h) = rho_a^{(q)}(x; h) + lambda * int_a^b W_q(x - u) rho_a^{(q+lambda)}(u; h) du
//               + (lambda/q) rho_a^{(q+lambda)}(b; h) Z_q(x - b)
template <class R>
BasicPiecewisePolyExp<R> h_kernel(const BasicKernelSet<R>& ks, const std::type_identity_t<R>& b,
                                  const std::type_identity_t<R>& a, const BasicPiecewisePolyExp<R>& h);

// K_b(x, a) = (q Zscr_b(x, a) / Z_{q+lambda}(b - a) + lambda Z_q(x - b)) / (q + lambda)
template <class R>
BasicPiecewisePolyExp<R> k_kernel(const BasicKernelSet<R>& ks, const std::type_identity_t<R>& b,
                                  const std::type_identity_t<R>& a);
template <class R>
BasicPiecewisePolyExp<R> k_kernel(const BasicKernelSet<R>& ks, const std::type_identity_t<R>& b,
                                  const std::type_identity_t<R>& a, const BasicScriptKernels<R>& sk);

// e^{rate (x - origin)} as a one-piece function
template <class R = double>
BasicPiecewisePolyExp<R> exp_fn(const std::type_identity_t<R>& rate, const std::type_identity_t<R>& origin = 0)
{
    BasicPolyExp<R> e(origin);
    e.add_term(BasicPoly<R>::constant(R(1)), rate);
    return BasicPiecewisePolyExp<R>(e);
}
template <class R = double>
BasicPiecewisePolyExp<R> const_fn(const std::type_identity_t<R>& c)
{
    BasicPolyExp<R> e(R(0));
    e.add_term(BasicPoly<R>::constant(c), R(0));
    return BasicPiecewisePolyExp<R>(e);
}

}  // namespace levy_restock
