#include "levy_restock/policy_cost.hpp"

#include <cmath>
#include <string>

#include "levy_restock/errors.hpp"

namespace levy_restock {

namespace {

PiecewisePolyExp linear_fn(double c0, double c1)
{
    PolyExp p(0.0);
    p.add_term(Poly({c0, c1}), 0.0);
    return PiecewisePolyExp(p);
}

// limit of a polynomial-only piece as x -> dir * inf
double poly_limit(const PolyExp& piece, int dir)
{
    if (piece.is_zero()) return 0.0;
    if (piece.terms().size() != 1 || piece.terms()[0].rate != 0.0)
        throw std::logic_error("poly_limit: piece is not a polynomial");
    const Poly& p = piece.terms()[0].p;
    if (p.degree() == 0) return p.coeff(0);
    const double lead = p.coeff(p.degree());
    const double sign = (p.degree() % 2 == 0 || dir > 0) ? 1.0 : -1.0;
    return lead * sign > 0 ? INFINITY : -INFINITY;
}

}  // namespace

CostSpec::CostSpec(double q, double lambda, double K_c, double K_p, std::vector<FPiece> f)
    : q_(q), lambda_(lambda), K_c_(K_c), K_p_(K_p), pieces_(std::move(f))
{
    if (!std::isfinite(q) || q <= 0.0) throw ConfigError("costs.q must be finite and > 0");
    if (!std::isfinite(lambda) || lambda <= 0.0) throw ConfigError("costs.lambda must be finite and > 0");
    if (!std::isfinite(K_c) || !std::isfinite(K_p)) throw ConfigError("costs.K_c and costs.K_p must be finite");
    if (!(K_c > K_p))
        throw ConfigError("costs: K_c must be strictly greater than K_p. K_p is the discounted unit price "
                          "offered at Poisson times and must be lower than the regular price K_c; with "
                          "K_c <= K_p discounted replenishment is never worth using and the model "
                          "reduces to pure regular replenishment");
    if (pieces_.empty()) throw ConfigError("f: at least one piece is required");
    std::vector<double> bps;
    std::vector<PolyExp> pcs;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& pc = pieces_[i];
        if (pc.coeffs.size() > static_cast<std::size_t>(kMaxDegree + 1))
            throw ConfigError("f: polynomial degree above " + std::to_string(kMaxDegree));
        for (double c : pc.coeffs)
            if (!std::isfinite(c)) throw ConfigError("f: coefficients must be finite");
        if (i > 0) {
            if (!std::isfinite(pc.from)) throw ConfigError("f: piece start must be finite");
            if (!bps.empty() && !(pc.from > bps.back()))
                throw ConfigError("f: piece starts must be strictly increasing");
            bps.push_back(pc.from);
        }
        PolyExp p(0.0);
        p.add_term(Poly(pc.coeffs), 0.0);
        pcs.push_back(p);
    }
    f_ = PiecewisePolyExp(bps, pcs);
    fp_ = f_.derivative();
    const PiecewisePolyExp fpp = fp_.derivative();
    for (double x : bps) {
        const double l = f_(x, Side::left), r = f_(x);
        if (std::abs(l - r) > 1e-9 * (1.0 + std::abs(r)))
            throw ConfigError("f: must be continuous at x=" + std::to_string(x) + " (a convex f cannot jump)");
        if (fp_(x) < fp_(x, Side::left) - 1e-9 * (1.0 + std::abs(fp_(x))))
            throw ConfigError("f: slope decreases at x=" + std::to_string(x) + "; f must be convex");
    }
    // f'' >= 0 on a sample of each piece, plus the sign at the infinite ends
    for (std::size_t i = 0; i < fpp.size(); ++i) {
        const double lo = fpp.piece_lo(i), hi = fpp.piece_hi(i);
        const double L = std::isinf(lo) ? (std::isinf(hi) ? -100.0 : hi - 100.0) : lo;
        const double H = std::isinf(hi) ? L + 200.0 : hi;
        for (int k = 0; k <= 64; ++k) {
            const double x = L + (H - L) * k / 64.0;
            if (x >= hi) break;
            if (fpp.pieces()[i](x) < -1e-9 * (1.0 + std::abs(fp_(x))))
                throw ConfigError("f: negative curvature at x=" + std::to_string(x) + "; f must be convex");
        }
        if (std::isinf(lo) && poly_limit(fpp.pieces()[i], -1) < 0)
            throw ConfigError("f: not convex towards -inf");
        if (std::isinf(hi) && poly_limit(fpp.pieces()[i], +1) < 0)
            throw ConfigError("f: not convex towards +inf");
    }
    ft_ = f_ + linear_fn(0.0, tilt());
    ftp_ = fp_ + const_fn(tilt());
    fx_ = convert<hp>(f_);
    fpx_ = convert<hp>(fp_);
    // tilt recomputed in hp: the double product q K_c is rounded
    const hp tilt_x = hp(q_) * hp(K_c_) + hp(lambda_) * (hp(K_c_) - hp(K_p_));
    ftpx_ = fpx_ + const_fn<hp>(tilt_x);
}

double CostSpec::f_prime_limit(int dir) const
{
    return poly_limit(dir < 0 ? fp_.pieces().front() : fp_.pieces().back(), dir);
}

bool CostSpec::slope_assumption_1() const
{
    return f_prime_limit(-1) + tilt() < 0.0 && f_prime_limit(+1) + tilt() > 0.0;
}

bool CostSpec::slope_assumption_2() const
{
    return f_prime_limit(-1) + q_ * K_p_ <= 0.0 && f_prime_limit(+1) + q_ * K_p_ > 0.0;
}

CostSpec CostSpec::with_costs(double K_c, double K_p) const
{
    return CostSpec(q_, lambda_, K_c, K_p, pieces_);
}

CostSpec CostSpec::with_lambda(double lambda) const
{
    return CostSpec(q_, lambda, K_c_, K_p_, pieces_);
}

// ---- Gamma / gamma ----

template <class R>
BasicGammaSlice<R>::BasicGammaSlice(const CostSpec& spec, const BasicKernelSet<R>& ks, const R& a)
    : a_(a), phi_(ks.phi_q()), lambda_(ks.lambda()), dk_(spec.K_p() - spec.K_c())
{
    const auto& ftp = spec.f_tilde_prime_as<R>();
    tail_ = weighted_tail_integral(ftp, phi_, a);
    rho_ = convolve(ftp, ks.boosted().w_core, a);
    acc_ = (exp_fn<R>(-phi_, a) * rho_).antiderivative(a);
}

template <class R>
R BasicGammaSlice<R>::gamma_big(const R& b) const
{
    return tail_ + lambda_ * acc_(b) + lambda_ / phi_ * num::exp(R(-phi_ * (b - a_))) * dk_;
}

template <class R>
R BasicGammaSlice<R>::gamma_small(const R& b) const
{
    return -rho_(b) + dk_;
}

double f_tilde_prime(const CostSpec& spec, double x) { return spec.f_tilde_prime(x); }

double gamma_big(const CostSpec& spec, const KernelSet& ks, double a, double b)
{
    if (!(a < b)) throw std::invalid_argument("gamma_big: need a < b");
    return GammaSlice(spec, ks, a).gamma_big(b);
}

double gamma_small(const CostSpec& spec, const KernelSet& ks, double a, double b)
{
    if (!(a < b)) throw std::invalid_argument("gamma_small: need a < b");
    return GammaSlice(spec, ks, a).gamma_small(b);
}

// ---- PolicyEvaluator ----

template <class R>
BasicPolicyEvaluator<R>::BasicPolicyEvaluator(const CostSpec& spec, const BasicKernelSet<R>& ks, const R& a,
                                              const R& b)
    : spec_(&spec), ks_(&ks), a_(a), b_(b)
{
    using Fn = BasicPiecewisePolyExp<R>;
    if (!(a < b) || !num::is_finite(a) || !num::is_finite(b))
        throw std::invalid_argument("PolicyEvaluator: need finite a < b");
    const R q = ks.q(), lam = ks.lambda(), r = ks.r(), phi = ks.phi_q();
    const R dpsi = ks.psi_prime0();
    const R Kc = spec.K_c(), Kp = spec.K_p();
    const R c = b - a;
    const BasicScaleSet<R>& B = ks.base();
    const BasicScaleSet<R>& Rs = ks.boosted();
    const Fn& f = spec.f_as<R>();
    const Fn& fp = spec.f_prime_as<R>();
    const Fn& ftp = spec.f_tilde_prime_as<R>();

    const BasicGammaSlice<R> gs(spec, ks, a);
    Gamma_ = gs.gamma_big(b);
    gamma_ = gs.gamma_small(b);
    theta_ = ks.theta()(c);
    zr_ = Rs.z(c);
    const R e = num::exp(R(-phi * c));

    const BasicScriptKernels<R> sk = script_kernels(ks, b, a);
    const Fn K = k_kernel(ks, b, a, sk);
    const Fn zq_b = B.z.shifted(-b);
    const Fn zbarq_b = B.z_bar.shifted(-b);
    const Fn Hf = h_kernel(ks, b, a, f);
    const Fn Hft = h_kernel(ks, b, a, ftp);

    // holding cost
    const R tf = weighted_tail_integral(fp, phi, a);
    const Fn rf = rho(ks, a, fp, Rate::boosted);
    const R inf_ = (exp_fn<R>(-phi, a) * rf).integrate(a, b);
    gf_ = ((tf + lam * inf_) / theta_ + f(a)) * zr_ / q;
    vf_ = K.scaled(gf_) - Hf;

    // replenishment
    k1_ = ((1 / r) * (1 + lam / q * zr_) * e / theta_ - 1 / q) * lam * zr_ / phi;
    k2_ = (-lam * zr_ * e / theta_ + r - phi * dpsi) * zr_ / (q * phi);
    const Fn Aw = sk.W_bar + zq_b.scaled(R(lam / q * Rs.w_bar(c)));
    const Fn Az = sk.Z_bar + zq_b.scaled(R(lam / q * Rs.z_bar(c)));
    rp_ = K.scaled(k1_) - zbarq_b.scaled(R(lam / r)) + Az.scaled(R(lam / r));
    rc_ = K.scaled(k2_) + Aw.scaled(dpsi) - Az;
    vr_ = rp_.scaled(Kp) + rc_.scaled(Kc);

    // total, assembled directly from Gamma
    const R c1 = (Gamma_ / theta_ + f(a) - Kc * dpsi) * zr_ / q;
    v_ = K.scaled(c1) - Hf - zbarq_b.scaled(R(lam / r * Kp)) + Aw.scaled(R(Kc * dpsi)) +
         Az.scaled(R(lam / r * Kp - Kc));
    vp_ = v_.derivative();
    if (!ks.model().bounded_variation()) vpp_ = vp_.derivative();

    const R k0 = (lam * Kp - r * Kc) / q;
    const R D = (phi / q * Gamma_ - lam / q * e * gamma_) / theta_;
    vfp_ = K.scaled(R(D * zr_)) - Hft + const_fn<R>(k0);
    vpd_ = sk.W.scaled(R(Gamma_ / theta_)) - Hft + const_fn<R>(k0) - zq_b.scaled(R(lam / q * gamma_));
}

template <class R>
R BasicPolicyEvaluator<R>::second_derivative(const R& x, Side side) const
{
    if (ks_->model().bounded_variation())
        throw UnsupportedOrder("second derivative of the value is not available for bounded-variation models");
    return vpp_(x, side);
}

template <class R>
R BasicPolicyEvaluator<R>::g_f_direct() const
{
    const R q = ks_->q(), lam = ks_->lambda(), phi = ks_->phi_q();
    const auto& f = spec_->f_as<R>();
    const R tf = weighted_tail_integral(f, phi, a_);
    const BasicPiecewisePolyExp<R> rf = rho(*ks_, a_, f, Rate::boosted);
    const R in = (exp_fn<R>(-phi, a_) * rf).integrate(a_, b_);
    return (phi / q * (tf + lam * in) + lam / q * num::exp(R(-phi * (b_ - a_))) * rf(b_)) * zr_ / theta_;
}

template <class R>
R BasicPolicyEvaluator<R>::value_fprime_at_a() const
{
    const R q = ks_->q(), lam = ks_->lambda(), r = ks_->r(), phi = ks_->phi_q();
    const R e = num::exp(R(-phi * (b_ - a_)));
    const R D = (phi * Gamma_ - lam * e * gamma_) / theta_;
    return lam / (q * r) * D * zr_ + lam / q * gamma_ - spec_->K_c() + D / r;
}

template <class R>
R BasicPolicyEvaluator<R>::value_fprime_at_b() const
{
    const R q = ks_->q(), lam = ks_->lambda(), r = ks_->r(), phi = ks_->phi_q();
    const R e = num::exp(R(-phi * (b_ - a_)));
    const R D = (phi * Gamma_ - lam * e * gamma_) / theta_;
    return D * zr_ / q + r / q * gamma_ - spec_->K_p();
}

template class BasicGammaSlice<double>;
template class BasicGammaSlice<hp>;
template class BasicPolicyEvaluator<double>;
template class BasicPolicyEvaluator<hp>;

// ---- PolicyCost ----

PolicyCost::PolicyCost(const CostSpec& spec, const KernelSet& ks, HybridPolicy pol)
    : PolicyCost(spec, ks, hp(pol.a), hp(pol.b))
{
}

PolicyCost::PolicyCost(const CostSpec& spec, const KernelSet& ks, const hp& a, const hp& b)
    : pol_{num::to_double(a), num::to_double(b)}
{
    const double spread = ks.phi_r() * (pol_.b - pol_.a);
    if (spread > kExtendedLimit)
        throw NumericError("PolicyCost: Phi(q+lambda)(b-a) = " + std::to_string(spread) +
                           " is beyond what 100 digits resolve");
    if (spread > kExtendedSpread)
        x_ = std::make_shared<BasicPolicyEvaluator<hp>>(spec, ks.extended(), a, b);
    else
        d_ = std::make_shared<BasicPolicyEvaluator<double>>(spec, ks, pol_.a, pol_.b);
}

#define LEVY_RESTOCK_DISPATCH(expr_d, expr_x) \
    (x_ ? num::to_double(expr_x) : (expr_d))

double PolicyCost::value(double x) const { return LEVY_RESTOCK_DISPATCH(d_->value()(x), x_->value()(hp(x))); }
double PolicyCost::derivative(double x, Side side) const
{
    return LEVY_RESTOCK_DISPATCH(d_->derivative(x, side), x_->derivative(hp(x), side));
}
double PolicyCost::second_derivative(double x, Side side) const
{
    return LEVY_RESTOCK_DISPATCH(d_->second_derivative(x, side), x_->second_derivative(hp(x), side));
}
double PolicyCost::holding(double x) const
{
    return LEVY_RESTOCK_DISPATCH(d_->holding()(x), x_->holding()(hp(x)));
}
double PolicyCost::replenish(double x) const
{
    return LEVY_RESTOCK_DISPATCH(d_->replenish()(x), x_->replenish()(hp(x)));
}
double PolicyCost::units_discounted(double x) const
{
    return LEVY_RESTOCK_DISPATCH(d_->units_discounted()(x), x_->units_discounted()(hp(x)));
}
double PolicyCost::units_regular(double x) const
{
    return LEVY_RESTOCK_DISPATCH(d_->units_regular()(x), x_->units_regular()(hp(x)));
}
double PolicyCost::value_fprime(double x) const
{
    return LEVY_RESTOCK_DISPATCH(d_->value_fprime()(x), x_->value_fprime()(hp(x)));
}
double PolicyCost::gamma_big() const { return LEVY_RESTOCK_DISPATCH(d_->gamma_big(), x_->gamma_big()); }
double PolicyCost::gamma_small() const { return LEVY_RESTOCK_DISPATCH(d_->gamma_small(), x_->gamma_small()); }
double PolicyCost::value_fprime_at_a() const
{
    return LEVY_RESTOCK_DISPATCH(d_->value_fprime_at_a(), x_->value_fprime_at_a());
}
double PolicyCost::value_fprime_at_b() const
{
    return LEVY_RESTOCK_DISPATCH(d_->value_fprime_at_b(), x_->value_fprime_at_b());
}
#undef LEVY_RESTOCK_DISPATCH

}  // namespace levy_restock
