#include "levy_restock/pure_policies.hpp"

#include <cmath>

#include "levy_restock/errors.hpp"

namespace levy_restock {

namespace {

// sum over j != 0 of coef_j e^{phi_j x}, x >= 0 piece only
PolyExp exp_sum(const std::vector<double>& rates, const std::vector<double>& coefs)
{
    PolyExp p(0.0);
    for (std::size_t j = 0; j < rates.size(); ++j) p.add_term(Poly::constant(coefs[j]), rates[j]);
    return p;
}

// mass at the barrier: ((Phi_r - Phi)/lambda) T_Phi[h] + sum_nu (Phi_r - nu)/(nu - Phi) D_nu
double killed_mass(const KernelSet& ks, const PiecewisePolyExp& h, std::vector<double>* D_out)
{
    const ScaleSet& R = ks.boosted();
    const double phi = ks.phi_q(), phir = ks.phi_r();
    const std::vector<double> rr = R.roots.all();
    const PiecewisePolyExp hl = h.restricted(-INFINITY, 0.0);
    std::vector<double> D(rr.size(), 0.0);
    double m = (phir - phi) / ks.lambda() * weighted_tail_integral(h, phi, 0.0);
    for (std::size_t k = 1; k < rr.size(); ++k) {
        const double nu = rr[k];
        D[k] = R.coeffs[k] * (hl * exp_fn(-nu)).integrate(-INFINITY, 0.0);
        m += (phir - nu) / (nu - phi) * D[k];
    }
    if (D_out) *D_out = std::move(D);
    return m;
}

PiecewisePolyExp on_right(const PolyExp& p) { return PiecewisePolyExp({0.0}, {PolyExp(0.0), p}); }
PiecewisePolyExp on_left(const PolyExp& p) { return PiecewisePolyExp({0.0}, {p, PolyExp(0.0)}); }

}  // namespace

// Killed resolvent U[h](x) = E_x int e^{-int_0^t omega(X_s) ds} h(X_t) dt,
// omega = q + lambda*1{x<0}, for h given in coordinates where the barrier is 0.
PiecewisePolyExp PureDiscountedEvaluator::killed_resolvent(const PiecewisePolyExp& h, double* m_out) const
{
    const ScaleSet& B = ks_->base();
    const ScaleSet& R = ks_->boosted();
    const double lam = ks_->lambda();
    const double phi = B.phi_q, phir = R.phi_q;
    const std::vector<double> qr = B.roots.all();   // [phi, negatives...]
    const std::vector<double> rr = R.roots.all();   // [phi_r, negatives...]

    const double tphi = weighted_tail_integral(h, phi, 0.0);
    const PiecewisePolyExp hl = h.restricted(-INFINITY, 0.0);
    std::vector<double> D;
    const double m = killed_mass(*ks_, h, &D);

    // x >= 0
    std::vector<double> rates, e1;
    for (std::size_t j = 1; j < qr.size(); ++j) {
        rates.push_back(qr[j]);
        e1.push_back(lam * B.coeffs[j] * (qr[j] - phi) / ((phir - qr[j]) * (phir - phi)));
    }
    std::vector<double> right_coef = e1;
    for (auto& c : right_coef) c *= m;
    for (std::size_t k = 1; k < rr.size(); ++k) {
        const double nu = rr[k];
        for (std::size_t j = 1; j < qr.size(); ++j) {
            const double g = e1[j - 1] - lam * B.coeffs[j] * (qr[j] - phi) / ((nu - qr[j]) * (nu - phi));
            right_coef[j - 1] += D[k] * g;
        }
    }
    PiecewisePolyExp right = on_right(exp_sum(rates, right_coef)) + B.w.scaled(tphi) -
                             convolve(h, B.w_core, 0.0).restricted(0.0, INFINITY);

    // x < 0
    double dsum = 0.0;
    for (std::size_t k = 1; k < rr.size(); ++k) dsum += D[k];
    PolyExp wnu(0.0);
    for (std::size_t k = 1; k < rr.size(); ++k) wnu.add_term(Poly::constant(R.coeffs[k]), rr[k]);
    const PiecewisePolyExp tail_part = convolve(hl, wnu, -INFINITY);
    const PiecewisePolyExp up = (hl * exp_fn(-phir)).antiderivative(0.0);
    PolyExp lead(0.0);
    lead.add_term(Poly::constant(m + dsum), phir);
    PiecewisePolyExp left = on_left(lead) - tail_part - (exp_fn(phir) * up).scaled(R.coeffs[0]);
    left = left.restricted(-INFINITY, 0.0);

    if (m_out) *m_out = m;
    return right + left;
}

PureDiscountedEvaluator::PureDiscountedEvaluator(const CostSpec& spec, const KernelSet& ks, double b)
    : ks_(&ks), b_(b)
{
    if (!std::isfinite(b)) throw std::invalid_argument("PureDiscountedEvaluator: b must be finite");
    const double lam = ks.lambda();
    PolyExp one(0.0);
    one.add_term(Poly::constant(lam), 0.0);
    P_ = killed_resolvent(PiecewisePolyExp({0.0}, {one, PolyExp(0.0)}), &mP_);
    if (!(mP_ < 1.0)) throw NumericError("pure discounted: lift mass not below one");

    PolyExp lin(0.0);  // lambda * (b - y) below b, in shifted coordinates: -lambda*y
    lin.add_term(Poly({0.0, -lam}), 0.0);
    const PiecewisePolyExp lift({0.0}, {lin, PolyExp(0.0)});
    vf_ = discounted_occupation(spec.f());
    rp_ = discounted_occupation(lift.shifted(-b));
    v_ = vf_ + rp_.scaled(spec.K_p());
    vp_ = v_.derivative();
    vfp_ = discounted_occupation(spec.f_prime());
}

PiecewisePolyExp PureDiscountedEvaluator::discounted_occupation(const PiecewisePolyExp& h) const
{
    double m = 0.0;
    const PiecewisePolyExp U = killed_resolvent(h.shifted(b_), &m);
    return (U + P_.scaled(m / (1.0 - mP_))).shifted(-b_);
}

double PureDiscountedEvaluator::occupation_at_b(const PiecewisePolyExp& h) const
{
    return killed_mass(*ks_, h.shifted(b_), nullptr) / (1.0 - mP_);
}

double pure_discounted_foc(const CostSpec& spec, const KernelSet& ks, double b)
{
    return killed_mass(ks, (spec.f_prime() + const_fn(spec.q() * spec.K_p())).shifted(b), nullptr);
}

}  // namespace levy_restock
