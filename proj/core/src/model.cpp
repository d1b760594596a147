#include "levy_restock/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levy_restock/bisect.hpp"
#include "levy_restock/errors.hpp"

namespace levy_restock {

LevyModel::LevyModel(double delta, double sigma, std::vector<JumpTerm> jumps)
    : delta_(delta), sigma_(sigma)
{
    if (!std::isfinite(delta) || !std::isfinite(sigma) || sigma < 0.0)
        throw ConfigError("model: delta must be finite and sigma must be finite and >= 0");
    for (const auto& j : jumps) {
        if (!std::isfinite(j.eta) || j.eta < 0.0)
            throw ConfigError("model: jump rate eta must be finite and >= 0");
        if (!std::isfinite(j.beta) || j.beta <= 0.0)
            throw ConfigError("model: jump parameter beta must be finite and > 0");
        if (j.eta == 0.0) continue;
        auto it = std::find_if(jumps_.begin(), jumps_.end(),
                               [&](const JumpTerm& t) { return t.beta == j.beta; });
        if (it != jumps_.end())
            it->eta += j.eta;
        else
            jumps_.push_back(j);
    }
    std::sort(jumps_.begin(), jumps_.end(),
              [](const JumpTerm& x, const JumpTerm& y) { return x.beta < y.beta; });
    if (sigma_ == 0.0 && delta_ <= 0.0)
        throw ConfigError("model: with sigma = 0 the drift delta must be > 0");
}

double LevyModel::total_jump_rate() const
{
    double t = 0.0;
    for (const auto& j : jumps_) t += j.eta;
    return t;
}

double LevyModel::min_beta() const
{
    return jumps_.empty() ? INFINITY : jumps_.front().beta;
}

double LevyModel::triplet_drift() const
{
    double g = delta_;
    for (const auto& j : jumps_)
        g += j.eta * (std::exp(-j.beta) - (1.0 - std::exp(-j.beta)) / j.beta);
    return g;
}

double LevyModel::levy_density(double z) const
{
    if (z >= 0.0) return 0.0;
    double d = 0.0;
    for (const auto& j : jumps_) d += j.eta * j.beta * std::exp(j.beta * z);
    return d;
}

double laplace_exponent(const LevyModel& m, double s) { return m.psi(s); }
double psi_derivative(const LevyModel& m, double s) { return m.psi_prime(s); }

template <class R>
R phi_as(const LevyModel& m, const R& q)
{
    if (!(q >= 0) || !num::is_finite(q)) throw ConfigError("phi: q must be finite and >= 0");
    auto g = [&](const R& s) { return m.psi_as(s) - q; };
    if (q == 0 && m.mean() >= 0.0) return R(0);
    R hi = 1;
    int n = 0;
    while (g(hi) <= 0) {
        hi *= 2;
        if (++n > 1100) throw DivergenceError("phi: no upper bracket for the positive root");
    }
    return bisect(g, R(0), hi, false).root;
}

template <class R>
BasicRootSet<R> all_roots_as(const LevyModel& m, const R& q)
{
    if (!(q > 0) || !num::is_finite(q)) throw ConfigError("all_roots: q must be finite and > 0");
    BasicRootSet<R> rs;
    rs.q = q;
    rs.phi_q = phi_as(m, q);
    auto g = [&](const R& s) { return m.psi_as(s) - q; };
    // Poles at -beta; psi - q goes from +inf just right of a pole to -inf just
    // left of the next one (or -q at zero), so every interval holds one root.
    R right = 0;
    for (const auto& j : m.jumps()) {
        const R left = -j.beta;
        rs.neg_roots.push_back(bisect(g, left, right, true).root);
        right = left;
    }
    if (!m.bounded_variation()) {
        R step = 1;
        R left = right - step;
        int n = 0;
        while (g(left) <= 0) {
            step *= 2;
            left = right - step;
            if (++n > 1100) throw DivergenceError("all_roots: no bracket below the last pole");
        }
        rs.neg_roots.push_back(bisect(g, left, right, true).root);
    }
    auto all = rs.all();
    std::sort(all.begin(), all.end());
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i] - all[i - 1] < 1e-9)
            throw DegenerateRootError("all_roots: roots " + std::to_string(num::to_double(all[i - 1])) +
                                      " and " + std::to_string(num::to_double(all[i])) + " coincide");
    return rs;
}

template double phi_as(const LevyModel&, const double&);
template hp phi_as(const LevyModel&, const hp&);
template BasicRootSet<double> all_roots_as(const LevyModel&, const double&);
template BasicRootSet<hp> all_roots_as(const LevyModel&, const hp&);

double phi(const LevyModel& m, double q) { return phi_as(m, q); }
RootSet all_roots(const LevyModel& m, double q) { return all_roots_as(m, q); }

}  // namespace levy_restock
