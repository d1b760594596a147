#include "levy_restock/scale.hpp"

#include "levy_restock/errors.hpp"

namespace levy_restock {

template <class R>
BasicScaleSet<R> build_scale_set_as(const LevyModel& m, const R& q)
{
    BasicScaleSet<R> s;
    s.q = q;
    s.roots = all_roots_as(m, q);
    s.phi_q = s.roots.phi_q;
    s.w_core = BasicPolyExp<R>(R(0));
    for (const R& r : s.roots.all()) {
        const R c = 1 / m.psi_prime_as(r);
        s.coeffs.push_back(c);
        s.w_core.add_term(BasicPoly<R>::constant(c), r);
    }
    s.w = BasicPiecewisePolyExp<R>({R(0)}, {BasicPolyExp<R>(R(0)), s.w_core});
    s.w_prime = s.w.derivative();
    s.w_bar = s.w.antiderivative(R(0));
    s.w_bar_bar = s.w_bar.antiderivative(R(0));
    s.z = const_fn<R>(1) + s.w_bar.scaled(q);
    s.z_bar = s.z.antiderivative(R(0));
    return s;
}

template <class R>
BasicKernelSet<R>::BasicKernelSet(const LevyModel& m, const R& q, const R& lambda)
    : model_(m), q_(q), lambda_(lambda)
{
    if (!(q > 0) || !num::is_finite(q)) throw ConfigError("q must be finite and > 0");
    if (!(lambda > 0) || !num::is_finite(lambda)) throw ConfigError("lambda must be finite and > 0");
    base_ = build_scale_set_as(m, q);
    boosted_ = build_scale_set_as(m, R(q + lambda));
    const R phi = base_.phi_q;
    theta_ = const_fn<R>(1) + (exp_fn<R>(-phi) * boosted_.w).antiderivative(R(0)).scaled(lambda);
    z_second_ = exp_fn<R>(phi) * theta_;
}

KernelSet::KernelSet(const LevyModel& m, double q, double lambda)
    : BasicKernelSet<double>(m, q, lambda), twin_(std::make_shared<Twin>())
{
}

const BasicKernelSet<hp>& KernelSet::extended() const
{
    std::call_once(twin_->once, [&] { twin_->ks = std::make_unique<BasicKernelSet<hp>>(model(), hp(q()), hp(lambda())); });
    return *twin_->ks;
}

template <class R>
BasicPiecewisePolyExp<R> rho(const BasicKernelSet<R>& ks, const std::type_identity_t<R>& a,
                             const BasicPiecewisePolyExp<R>& h, Rate rate)
{
    const BasicScaleSet<R>& s = rate == Rate::base ? ks.base() : ks.boosted();
    return convolve(h, s.w_core, a);
}

template <class R>
BasicScriptKernels<R> script_kernels(const BasicKernelSet<R>& ks, const std::type_identity_t<R>& b,
                                     const std::type_identity_t<R>& y)
{
    const BasicScaleSet<R>& B = ks.base();
    const BasicScaleSet<R>& Rs = ks.boosted();
    const R lam = ks.lambda();
    auto build = [&](const BasicPiecewisePolyExp<R>& base_fn, const BasicPiecewisePolyExp<R>& boosted_fn) {
        const BasicPiecewisePolyExp<R> inner = boosted_fn.shifted(-y).restricted(y, b);
        return base_fn.shifted(-y) + convolve(inner, B.w_core, y).scaled(lam);
    };
    return {build(B.w, Rs.w), build(B.z, Rs.z), build(B.w_bar, Rs.w_bar), build(B.z_bar, Rs.z_bar)};
}

template <class R>
BasicPiecewisePolyExp<R> h_kernel(const BasicKernelSet<R>& ks, const std::type_identity_t<R>& b,
                                  const std::type_identity_t<R>& a, const BasicPiecewisePolyExp<R>& h)
{
    const R lam = ks.lambda();
    const BasicPiecewisePolyExp<R> rr = rho(ks, a, h, Rate::boosted);
    const BasicPiecewisePolyExp<R> rq = rho(ks, a, h, Rate::base);
    const BasicPiecewisePolyExp<R> mid = convolve(rr.restricted(a, b), ks.base().w_core, a);
    return rq + mid.scaled(lam) + ks.base().z.shifted(-b).scaled(R(lam / ks.q() * rr(b)));
}

template <class R>
BasicPiecewisePolyExp<R> k_kernel(const BasicKernelSet<R>& ks, const std::type_identity_t<R>& b,
                                  const std::type_identity_t<R>& a, const BasicScriptKernels<R>& sk)
{
    const R zr = ks.boosted().z(R(b - a));
    const R r = ks.r();
    return sk.Z.scaled(R(ks.q() / (zr * r))) + ks.base().z.shifted(-b).scaled(R(ks.lambda() / r));
}

template <class R>
BasicPiecewisePolyExp<R> k_kernel(const BasicKernelSet<R>& ks, const std::type_identity_t<R>& b,
                                  const std::type_identity_t<R>& a)
{
    return k_kernel(ks, b, a, script_kernels(ks, b, a));
}

#define LEVY_RESTOCK_INSTANTIATE(R)                                                                          \
    template BasicScaleSet<R> build_scale_set_as(const LevyModel&, const R&);                               \
    template class BasicKernelSet<R>;                                                                        \
    template BasicPiecewisePolyExp<R> rho(const BasicKernelSet<R>&, const std::type_identity_t<R>&,          \
                                          const BasicPiecewisePolyExp<R>&, Rate);                            \
    template BasicScriptKernels<R> script_kernels(const BasicKernelSet<R>&, const std::type_identity_t<R>&, \
                                                  const std::type_identity_t<R>&);                           \
    template BasicPiecewisePolyExp<R> h_kernel(const BasicKernelSet<R>&, const std::type_identity_t<R>&,     \
                                               const std::type_identity_t<R>&,                               \
                                               const BasicPiecewisePolyExp<R>&);                             \
    template BasicPiecewisePolyExp<R> k_kernel(const BasicKernelSet<R>&, const std::type_identity_t<R>&,     \
                                               const std::type_identity_t<R>&);                              \
    template BasicPiecewisePolyExp<R> k_kernel(const BasicKernelSet<R>&, const std::type_identity_t<R>&,     \
                                               const std::type_identity_t<R>&, const BasicScriptKernels<R>&);

LEVY_RESTOCK_INSTANTIATE(double)
LEVY_RESTOCK_INSTANTIATE(hp)
#undef LEVY_RESTOCK_INSTANTIATE

}  // namespace levy_restock
