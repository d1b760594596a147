#include "levy_restock/polyexp.hpp"

#include <algorithm>
#include <string>

#include "levy_restock/errors.hpp"

namespace levy_restock {

namespace {

template <class R>
bool same_rate(const R& a, const R& b)
{
    return num::abs(R(a - b)) <= R(1e-12) * num::max(R(1), num::max(num::abs(a), num::abs(b)));
}

void check_degree(int d)
{
    if (d > kMaxDegree)
        throw DegreeOverflowError("polynomial degree " + std::to_string(d) + " exceeds cap " +
                                  std::to_string(kMaxDegree));
}

}  // namespace

// ---- Poly ----

template <class R>
BasicPoly<R>::BasicPoly(std::vector<R> coeffs) : c_(std::move(coeffs))
{
    trim();
    check_degree(degree());
}

template <class R>
void BasicPoly<R>::trim()
{
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

template <class R>
R BasicPoly<R>::operator()(const R& u) const
{
    R v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * u + *it;
    return v;
}

template <class R>
BasicPoly<R> BasicPoly<R>::derivative() const
{
    if (c_.size() <= 1) return {};
    std::vector<R> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<int>(k);
    return BasicPoly(std::move(d));
}

template <class R>
BasicPoly<R> BasicPoly<R>::antiderivative() const
{
    if (c_.empty()) return {};
    std::vector<R> d(c_.size() + 1, R(0));
    for (std::size_t k = 0; k < c_.size(); ++k) d[k + 1] = c_[k] / static_cast<int>(k + 1);
    return BasicPoly(std::move(d));
}

template <class R>
BasicPoly<R> BasicPoly<R>::shifted(const R& d) const
{
    if (d == 0 || c_.size() <= 1) return *this;
    std::vector<R> a = c_;
    const std::size_t n = a.size() - 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = n - 1;; --j) {
            a[j] += d * a[j + 1];
            if (j == i) break;
        }
    return BasicPoly(std::move(a));
}

template <class R>
BasicPoly<R>& BasicPoly<R>::operator+=(const BasicPoly& o)
{
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
}

template <class R>
BasicPoly<R> BasicPoly<R>::operator+(const BasicPoly& o) const
{
    BasicPoly r = *this;
    r += o;
    return r;
}

template <class R>
BasicPoly<R> BasicPoly<R>::operator*(const R& s) const
{
    if (s == 0) return {};
    std::vector<R> d = c_;
    for (auto& v : d) v *= s;
    return BasicPoly(std::move(d));
}

template <class R>
BasicPoly<R> BasicPoly<R>::operator*(const BasicPoly& o) const
{
    if (c_.empty() || o.c_.empty()) return {};
    check_degree(degree() + o.degree());
    std::vector<R> d(c_.size() + o.c_.size() - 1, R(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) d[i + j] += c_[i] * o.c_[j];
    return BasicPoly(std::move(d));
}

// ---- PolyExp ----

template <class R>
BasicPolyExp<R>::BasicPolyExp(const R& origin, std::vector<Term> terms) : origin_(origin)
{
    for (auto& t : terms) add_term(t.p, t.rate);
}

template <class R>
int BasicPolyExp<R>::max_degree() const
{
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.p.degree());
    return d;
}

template <class R>
void BasicPolyExp<R>::add_term(const Poly& p, const R& rate)
{
    if (p.is_zero()) return;
    for (auto it = terms_.begin(); it != terms_.end(); ++it)
        if (same_rate(it->rate, rate)) {
            it->p += p;
            if (it->p.is_zero()) terms_.erase(it);
            return;
        }
    terms_.push_back({p, rate});
}

template <class R>
R BasicPolyExp<R>::operator()(const R& x) const
{
    const R u = x - origin_;
    R v = 0;
    for (const auto& t : terms_) {
        if (t.rate == 0)
            v += t.p(u);
        else
            v += t.p(u) * num::exp(R(t.rate * u));
    }
    return v;
}

template <class R>
BasicPolyExp<R> BasicPolyExp<R>::derivative() const
{
    BasicPolyExp r(origin_);
    for (const auto& t : terms_) r.add_term(t.p.derivative() + t.p * t.rate, t.rate);
    return r;
}

template <class R>
BasicPolyExp<R> BasicPolyExp<R>::antiderivative() const
{
    BasicPolyExp r(origin_);
    for (const auto& t : terms_) {
        if (t.rate == 0) {
            r.add_term(t.p.antiderivative(), R(0));
            continue;
        }
        // sum_k (-1)^k p^(k) / rate^(k+1)
        Poly q;
        Poly dk = t.p;
        R f = 1 / t.rate;
        while (!dk.is_zero()) {
            q += dk * f;
            dk = dk.derivative();
            f *= -1 / t.rate;
        }
        r.add_term(q, t.rate);
    }
    return r;
}

template <class R>
BasicPolyExp<R> BasicPolyExp<R>::rebased(const R& new_origin) const
{
    if (new_origin == origin_) return *this;
    const R d = new_origin - origin_;
    BasicPolyExp r(new_origin);
    for (const auto& t : terms_) {
        if (t.rate == 0)
            r.add_term(t.p.shifted(d), t.rate);
        else
            r.add_term(t.p.shifted(d) * num::exp(R(t.rate * d)), t.rate);
    }
    return r;
}

template <class R>
BasicPolyExp<R> BasicPolyExp<R>::shifted(const R& d) const
{
    BasicPolyExp r = *this;
    r.origin_ = origin_ - d;
    return r;
}

template <class R>
BasicPolyExp<R> BasicPolyExp<R>::scaled(const R& s) const
{
    BasicPolyExp r(origin_);
    for (const auto& t : terms_) r.add_term(t.p * s, t.rate);
    return r;
}

template <class R>
R BasicPolyExp<R>::limit(int dir) const
{
    for (const auto& t : terms_) {
        if (t.rate * dir < 0) continue;
        throw DivergenceError("polyexp: term with rate " + std::to_string(num::to_double(t.rate)) +
                              " does not vanish at " + (dir > 0 ? "+inf" : "-inf"));
    }
    return R(0);
}

template <class R>
BasicPolyExp<R>& BasicPolyExp<R>::operator+=(const BasicPolyExp& o)
{
    if (terms_.empty()) origin_ = o.origin_;
    const BasicPolyExp other = o.rebased(origin_);
    for (const auto& t : other.terms_) add_term(t.p, t.rate);
    return *this;
}

template <class R>
BasicPolyExp<R> BasicPolyExp<R>::operator+(const BasicPolyExp& o) const
{
    BasicPolyExp r = *this;
    r += o;
    return r;
}

template <class R>
BasicPolyExp<R> BasicPolyExp<R>::operator*(const BasicPolyExp& o) const
{
    const BasicPolyExp other = o.rebased(origin_);
    BasicPolyExp r(origin_);
    for (const auto& a : terms_)
        for (const auto& b : other.terms_) r.add_term(a.p * b.p, R(a.rate + b.rate));
    return r;
}

// ---- PiecewisePolyExp ----

template <class R>
BasicPiecewisePolyExp<R>::BasicPiecewisePolyExp() : pieces_(1)
{
}

template <class R>
BasicPiecewisePolyExp<R>::BasicPiecewisePolyExp(Piece single) : pieces_{std::move(single)}
{
}

template <class R>
BasicPiecewisePolyExp<R>::BasicPiecewisePolyExp(std::vector<R> breakpoints, std::vector<Piece> pieces)
    : bps_(std::move(breakpoints)), pieces_(std::move(pieces))
{
    if (pieces_.size() != bps_.size() + 1)
        throw std::invalid_argument("piecewise: need one more piece than breakpoints");
    for (std::size_t i = 1; i < bps_.size(); ++i)
        if (!(bps_[i] > bps_[i - 1]))
            throw std::invalid_argument("piecewise: breakpoints must be strictly increasing");
    for (const R& b : bps_)
        if (!num::is_finite(b)) throw std::invalid_argument("piecewise: breakpoints must be finite");
    anchor();
}

template <class R>
void BasicPiecewisePolyExp<R>::anchor()
{
    if (bps_.empty()) return;
    for (std::size_t i = 0; i < pieces_.size(); ++i)
        pieces_[i] = pieces_[i].rebased(i == 0 ? bps_[0] : bps_[i - 1]);
}

template <class R>
R BasicPiecewisePolyExp<R>::piece_lo(std::size_t i) const
{
    return i == 0 ? -num::inf<R>() : bps_[i - 1];
}

template <class R>
R BasicPiecewisePolyExp<R>::piece_hi(std::size_t i) const
{
    return i == bps_.size() ? num::inf<R>() : bps_[i];
}

template <class R>
std::size_t BasicPiecewisePolyExp<R>::piece_index(const R& x, Side side) const
{
    auto it = side == Side::right ? std::upper_bound(bps_.begin(), bps_.end(), x)
                                  : std::lower_bound(bps_.begin(), bps_.end(), x);
    return static_cast<std::size_t>(it - bps_.begin());
}

template <class R>
R BasicPiecewisePolyExp<R>::operator()(const R& x, Side side) const
{
    return pieces_[piece_index(x, side)](x);
}

template <class R>
BasicPiecewisePolyExp<R> BasicPiecewisePolyExp<R>::derivative() const
{
    BasicPiecewisePolyExp r = *this;
    for (auto& p : r.pieces_) p = p.derivative();
    return r;
}

template <class R>
BasicPiecewisePolyExp<R> BasicPiecewisePolyExp<R>::antiderivative(const R& lower) const
{
    using P = BasicPoly<R>;
    BasicPiecewisePolyExp r = *this;
    for (auto& p : r.pieces_) p = p.antiderivative();
    // piece 0: vanish at -inf, or any constant if lower is finite (fixed below)
    if (num::is_inf(lower)) {
        if (lower > 0) throw std::invalid_argument("antiderivative: lower must not be +inf");
        r.pieces_[0].limit(-1);
    }
    for (std::size_t i = 1; i < r.pieces_.size(); ++i) {
        const R& x = bps_[i - 1];
        const R jump = r.pieces_[i - 1](x) - r.pieces_[i](x);
        r.pieces_[i].add_term(P::constant(jump), R(0));
    }
    if (num::is_finite(lower)) {
        const R c = -r(lower);
        for (auto& p : r.pieces_) p.add_term(P::constant(c), R(0));
    }
    return r;
}

template <class R>
BasicPiecewisePolyExp<R> BasicPiecewisePolyExp<R>::shifted(const R& d) const
{
    BasicPiecewisePolyExp r = *this;
    for (auto& b : r.bps_) b -= d;
    for (auto& p : r.pieces_) p = p.shifted(d);
    return r;
}

template <class R>
BasicPiecewisePolyExp<R> BasicPiecewisePolyExp<R>::scaled(const R& s) const
{
    BasicPiecewisePolyExp r = *this;
    for (auto& p : r.pieces_) p = p.scaled(s);
    return r;
}

template <class R>
BasicPiecewisePolyExp<R> BasicPiecewisePolyExp<R>::refined(const std::vector<R>& extra) const
{
    std::vector<R> all = bps_;
    for (const R& e : extra)
        if (num::is_finite(e)) all.push_back(e);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    if (all.size() == bps_.size()) return *this;
    std::vector<Piece> pieces;
    pieces.reserve(all.size() + 1);
    for (std::size_t i = 0; i <= all.size(); ++i) {
        const std::size_t k = i == 0 ? 0 : piece_index(all[i - 1]);
        pieces.push_back(pieces_[k]);
    }
    return BasicPiecewisePolyExp(std::move(all), std::move(pieces));
}

template <class R>
BasicPiecewisePolyExp<R> BasicPiecewisePolyExp<R>::restricted(const R& lo, const R& hi) const
{
    BasicPiecewisePolyExp r = refined({lo, hi});
    for (std::size_t i = 0; i < r.pieces_.size(); ++i) {
        const R plo = r.piece_lo(i), phi = r.piece_hi(i);
        if (plo < lo || phi > hi) r.pieces_[i] = Piece(r.pieces_[i].origin());
    }
    return r;
}

template <class R>
R BasicPiecewisePolyExp<R>::integrate(const R& lo, const R& hi) const
{
    if (!(lo <= hi)) throw std::invalid_argument("integrate: need lo <= hi");
    if (lo == hi) return R(0);
    R total = 0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const R l = num::max(lo, piece_lo(i));
        const R u = num::min(hi, piece_hi(i));
        if (!(l < u) || pieces_[i].is_zero()) continue;
        const Piece F = pieces_[i].antiderivative();
        const R fu = num::is_inf(u) ? F.limit(+1) : F(u);
        const R fl = num::is_inf(l) ? F.limit(-1) : F(l);
        total += fu - fl;
    }
    return total;
}

template <class R>
BasicPiecewisePolyExp<R> BasicPiecewisePolyExp<R>::operator+(const BasicPiecewisePolyExp& o) const
{
    BasicPiecewisePolyExp a = refined(o.bps_);
    const BasicPiecewisePolyExp b = o.refined(a.bps_);
    for (std::size_t i = 0; i < a.pieces_.size(); ++i) a.pieces_[i] += b.pieces_[i];
    return a;
}

template <class R>
BasicPiecewisePolyExp<R> BasicPiecewisePolyExp<R>::operator-(const BasicPiecewisePolyExp& o) const
{
    return *this + o.scaled(R(-1));
}

template <class R>
BasicPiecewisePolyExp<R> BasicPiecewisePolyExp<R>::operator*(const BasicPiecewisePolyExp& o) const
{
    BasicPiecewisePolyExp a = refined(o.bps_);
    const BasicPiecewisePolyExp b = o.refined(a.bps_);
    for (std::size_t i = 0; i < a.pieces_.size(); ++i) a.pieces_[i] = a.pieces_[i] * b.pieces_[i];
    return a;
}

// ---- convolution ----

namespace {

// Contributions of one h term p(v) e^{s v} (v = y - A) against one w term
// c(z) e^{r z}. With tau = x - A:
//   integral_{v0}^{v1} p(v) c(tau - v) e^{r (tau - v)} e^{s v} dv
//     = e^{r tau} sum_i tau^i [Q_i(v) e^{(s-r) v}]_{v0}^{v1}
template <class R>
struct PairAntiderivs {
    std::vector<BasicPolyExp<R>> Q;  // Q_i(v) e^{alpha v}, origin 0 in v
    R alpha;
};

template <class R>
PairAntiderivs<R> pair_antiderivs(const BasicPoly<R>& p, const R& s, const BasicPoly<R>& c, const R& r)
{
    PairAntiderivs<R> out;
    out.alpha = s - r;
    if (same_rate(s, r)) out.alpha = 0;
    const int m = c.degree();
    out.Q.resize(static_cast<std::size_t>(m + 1));
    for (int i = 0; i <= m; ++i) {
        // d_i(v) = sum_{k>=i} c_k C(k,i) (-v)^{k-i}
        std::vector<R> d(static_cast<std::size_t>(m - i + 1), R(0));
        for (int k = i; k <= m; ++k) {
            double binom = 1.0;
            for (int t = 0; t < i; ++t) binom = binom * (k - t) / (t + 1);
            const int e = k - i;
            d[static_cast<std::size_t>(e)] += c.coeff(k) * R(binom) * ((e % 2) ? -1 : 1);
        }
        BasicPolyExp<R> integrand(R(0));
        integrand.add_term(p * BasicPoly<R>(std::move(d)), out.alpha);
        out.Q[static_cast<std::size_t>(i)] = integrand.antiderivative();
    }
    return out;
}

}  // namespace

template <class R>
BasicPiecewisePolyExp<R> convolve(const BasicPiecewisePolyExp<R>& h_in, const BasicPolyExp<R>& w_in,
                                  const std::type_identity_t<R>& a)
{
    using P = BasicPoly<R>;
    using PE = BasicPolyExp<R>;
    const PE w = w_in.rebased(R(0));
    const bool from_minus_inf = num::is_inf(a) && a < 0;
    if (num::is_inf(a) && a > 0) throw std::invalid_argument("convolve: a must not be +inf");
    const BasicPiecewisePolyExp<R> h = from_minus_inf ? h_in : h_in.refined({a});
    const auto& bps = h.breakpoints();
    const std::size_t n = h.size();
    std::size_t first = 0;  // first piece of h inside [a, inf)
    if (!from_minus_inf) first = h.piece_index(a);

    auto anchor_of = [&](std::size_t i) { return i == 0 ? (bps.empty() ? R(0) : bps[0]) : bps[i - 1]; };
    std::vector<PE> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = PE(anchor_of(i));

    for (std::size_t j = first; j < n; ++j) {
        const PE& hp_ = h.pieces()[j];
        if (hp_.is_zero()) continue;
        const R A = hp_.origin();
        const R y0 = from_minus_inf && j == 0 ? -num::inf<R>() : h.piece_lo(j);
        const R y1 = h.piece_hi(j);
        const R v0 = y0 - A;
        const R v1 = y1 - A;
        for (const auto& ht : hp_.terms()) {
            for (const auto& wt : w.terms()) {
                const PairAntiderivs<R> pa = pair_antiderivs(ht.p, ht.rate, wt.p, wt.rate);
                const std::size_t m = pa.Q.size();
                std::vector<R> low(m, R(0)), high(m, R(0));
                for (std::size_t i = 0; i < m; ++i) {
                    if (num::is_inf(v0)) {
                        if (!(pa.alpha > 0)) throw DivergenceError("convolve: integral from -inf diverges");
                        low[i] = 0;
                    } else {
                        low[i] = pa.Q[i](v0);
                    }
                    if (!num::is_inf(v1)) high[i] = pa.Q[i](v1);
                }
                // partial piece j: sum_i tau^i Q_i(tau) e^{alpha tau} e^{r tau} - e^{r tau} sum_i tau^i low_i
                {
                    PE part(A);
                    for (std::size_t i = 0; i < m; ++i) {
                        std::vector<R> ti(i + 1, R(0));
                        ti[i] = 1;
                        const P taui(std::move(ti));
                        for (const auto& qt : pa.Q[i].terms()) part.add_term(taui * qt.p, R(qt.rate + wt.rate));
                    }
                    part.add_term(P(low) * R(-1), wt.rate);
                    out[j] += part;
                }
                // full piece j for every later output piece
                if (!num::is_inf(v1)) {
                    PE full(A);
                    std::vector<R> diff(m);
                    for (std::size_t i = 0; i < m; ++i) diff[i] = high[i] - low[i];
                    full.add_term(P(std::move(diff)), wt.rate);
                    for (std::size_t k = j + 1; k < n; ++k) out[k] += full.rebased(out[k].origin());
                }
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = out[i].rebased(bps.empty() ? out[i].origin() : anchor_of(i));
    return BasicPiecewisePolyExp<R>(std::vector<R>(bps), std::move(out));
}

template <class R>
R weighted_tail_integral(const BasicPiecewisePolyExp<R>& h, const std::type_identity_t<R>& rate,
                         const std::type_identity_t<R>& from)
{
    BasicPolyExp<R> e(from);
    e.add_term(BasicPoly<R>::constant(R(1)), R(-rate));
    return (h * BasicPiecewisePolyExp<R>(e)).integrate(from, num::inf<R>());
}

template <class To, class From>
BasicPiecewisePolyExp<To> convert(const BasicPiecewisePolyExp<From>& f)
{
    std::vector<To> bps(f.breakpoints().begin(), f.breakpoints().end());
    std::vector<BasicPolyExp<To>> pieces;
    for (const auto& pc : f.pieces()) {
        BasicPolyExp<To> p{To(pc.origin())};
        for (const auto& t : pc.terms()) {
            std::vector<To> c(t.p.coeffs().begin(), t.p.coeffs().end());
            p.add_term(BasicPoly<To>(std::move(c)), To(t.rate));
        }
        pieces.push_back(std::move(p));
    }
    if (bps.empty()) return BasicPiecewisePolyExp<To>(std::move(pieces.front()));
    return BasicPiecewisePolyExp<To>(std::move(bps), std::move(pieces));
}

#define LEVY_RESTOCK_INSTANTIATE(R)                                                                         \
    template class BasicPoly<R>;                                                                            \
    template class BasicPolyExp<R>;                                                                         \
    template class BasicPiecewisePolyExp<R>;                                                                \
    template BasicPiecewisePolyExp<R> convolve(const BasicPiecewisePolyExp<R>&, const BasicPolyExp<R>&,   \
                                               const std::type_identity_t<R>&);                             \
    template R weighted_tail_integral(const BasicPiecewisePolyExp<R>&, const std::type_identity_t<R>&,      \
                                      const std::type_identity_t<R>&);

LEVY_RESTOCK_INSTANTIATE(double)
LEVY_RESTOCK_INSTANTIATE(hp)
#undef LEVY_RESTOCK_INSTANTIATE

template BasicPiecewisePolyExp<hp> convert(const BasicPiecewisePolyExp<double>&);
template BasicPiecewisePolyExp<double> convert(const BasicPiecewisePolyExp<hp>&);
template BasicPiecewisePolyExp<double> convert(const BasicPiecewisePolyExp<double>&);
template BasicPiecewisePolyExp<hp> convert(const BasicPiecewisePolyExp<hp>&);

}  // namespace levy_restock
