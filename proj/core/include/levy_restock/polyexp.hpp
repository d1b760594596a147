#pragma once

#include <type_traits>
#include <vector>

#include "levy_restock/real.hpp"

namespace levy_restock {

inline constexpr int kMaxDegree = 16;

// Dense polynomial, c[k] multiplies u^k.
template <class R>
class BasicPoly {
public:
    BasicPoly() = default;
    explicit BasicPoly(std::vector<R> coeffs);
    static BasicPoly constant(const R& v) { return BasicPoly(std::vector<R>{v}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<R>& coeffs() const { return c_; }
    R coeff(int k) const { return k < static_cast<int>(c_.size()) ? c_[k] : R(0); }

    R operator()(const R& u) const;
    BasicPoly derivative() const;
    BasicPoly antiderivative() const;  // zero constant term
    BasicPoly shifted(const R& d) const;  // u -> p(u + d)

    BasicPoly& operator+=(const BasicPoly& o);
    BasicPoly operator+(const BasicPoly& o) const;
    BasicPoly operator*(const R& s) const;
    BasicPoly operator*(const BasicPoly& o) const;

private:
    void trim();
    std::vector<R> c_;
};

// p(u) e^{rate u}
template <class R>
struct BasicExpTerm {
    BasicPoly<R> p;
    R rate = 0;
};

// Sum of ExpTerms in the local coordinate u = x - origin.
template <class R>
class BasicPolyExp {
public:
    using Poly = BasicPoly<R>;
    using Term = BasicExpTerm<R>;

    BasicPolyExp() = default;
    explicit BasicPolyExp(const R& origin, std::vector<Term> terms = {});

    const R& origin() const { return origin_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int max_degree() const;

    void add_term(const Poly& p, const R& rate);
    R operator()(const R& x) const;

    BasicPolyExp derivative() const;
    BasicPolyExp antiderivative() const;  // some antiderivative, no constant chosen
    BasicPolyExp rebased(const R& new_origin) const;
    BasicPolyExp shifted(const R& d) const;  // x -> f(x + d)
    BasicPolyExp scaled(const R& s) const;

    // Limit as x -> +inf (dir > 0) or -inf (dir < 0). Throws DivergenceError
    // unless every term vanishes there.
    R limit(int dir) const;

    BasicPolyExp& operator+=(const BasicPolyExp& o);
    BasicPolyExp operator+(const BasicPolyExp& o) const;
    BasicPolyExp operator*(const BasicPolyExp& o) const;

private:
    R origin_ = 0;
    std::vector<Term> terms_;
};

enum class Side { right, left };

// Pieces live on (-inf,bp0), [bp0,bp1), ..., [bp_last, inf).
// Each piece is stored anchored at its left breakpoint (piece 0 at bp0).
template <class R>
class BasicPiecewisePolyExp {
public:
    using Piece = BasicPolyExp<R>;

    BasicPiecewisePolyExp();
    explicit BasicPiecewisePolyExp(Piece single);
    BasicPiecewisePolyExp(std::vector<R> breakpoints, std::vector<Piece> pieces);

    const std::vector<R>& breakpoints() const { return bps_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    std::size_t size() const { return pieces_.size(); }
    R piece_lo(std::size_t i) const;
    R piece_hi(std::size_t i) const;
    std::size_t piece_index(const R& x, Side side = Side::right) const;

    R operator()(const R& x, Side side = Side::right) const;

    BasicPiecewisePolyExp derivative() const;
    // F(x) = integral from lower to x; lower may be -inf.
    BasicPiecewisePolyExp antiderivative(const R& lower) const;
    BasicPiecewisePolyExp shifted(const R& d) const;
    BasicPiecewisePolyExp scaled(const R& s) const;
    BasicPiecewisePolyExp refined(const std::vector<R>& extra) const;
    // f * 1_[lo,hi); either end may be infinite.
    BasicPiecewisePolyExp restricted(const R& lo, const R& hi) const;
    R integrate(const R& lo, const R& hi) const;

    BasicPiecewisePolyExp operator+(const BasicPiecewisePolyExp& o) const;
    BasicPiecewisePolyExp operator-(const BasicPiecewisePolyExp& o) const;
    BasicPiecewisePolyExp operator*(const BasicPiecewisePolyExp& o) const;

private:
    void anchor();
    std::vector<R> bps_;
    std::vector<Piece> pieces_;
};

using Poly = BasicPoly<double>;
using ExpTerm = BasicExpTerm<double>;
using PolyExp = BasicPolyExp<double>;
using PiecewisePolyExp = BasicPiecewisePolyExp<double>;

// (h * w)(x) = integral over [a, x) of h(y) w(x - y) dy, with w the formula of
// a kernel supported on [0, inf) given in coordinate z (origin 0).
// a = -inf is allowed when every rate in h's first piece exceeds every rate of w.
template <class R>
BasicPiecewisePolyExp<R> convolve(const BasicPiecewisePolyExp<R>& h, const BasicPolyExp<R>& w,
                                  const std::type_identity_t<R>& a);
// the same operation under its longer name
template <class R>
BasicPiecewisePolyExp<R> convolve_with_shift(const BasicPiecewisePolyExp<R>& h, const BasicPolyExp<R>& w,
                                             const std::type_identity_t<R>& a)
{
    return convolve(h, w, a);
}

// integral from `from` to inf of e^{-rate (y - from)} h(y) dy
template <class R>
R weighted_tail_integral(const BasicPiecewisePolyExp<R>& h, const std::type_identity_t<R>& rate,
                         const std::type_identity_t<R>& from);

// Exact copy with converted coefficients (double -> hp, or back).
template <class To, class From>
BasicPiecewisePolyExp<To> convert(const BasicPiecewisePolyExp<From>& f);

}  // namespace levy_restock
