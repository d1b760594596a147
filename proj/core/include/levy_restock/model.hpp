#pragma once

#include <vector>

#include "levy_restock/real.hpp"

namespace levy_restock {

// Downward jump component: rate eta, sizes Exp(beta).
struct JumpTerm {
    double eta;
    double beta;
};

// Spectrally negative Levy process: drift + Brownian part + hyperexponential
// downward jumps, psi(s) = delta*s + sigma^2 s^2/2 + sum eta_j (beta_j/(beta_j+s) - 1).
class LevyModel {
public:
    LevyModel(double delta, double sigma, std::vector<JumpTerm> jumps = {});

    double delta() const { return delta_; }
    double sigma() const { return sigma_; }
    // Jump terms after dropping eta=0 entries and merging equal betas, sorted by beta.
    const std::vector<JumpTerm>& jumps() const { return jumps_; }
    bool bounded_variation() const { return sigma_ == 0.0; }

    double psi(double s) const { return psi_as(s); }
    double psi_prime(double s) const { return psi_prime_as(s); }
    template <class R>
    R psi_as(const R& s) const
    {
        R v = delta_ * s + R(0.5) * sigma_ * sigma_ * s * s;
        for (const auto& j : jumps_) v += j.eta * (j.beta / (j.beta + s) - 1);
        return v;
    }
    template <class R>
    R psi_prime_as(const R& s) const
    {
        R v = delta_ + sigma_ * sigma_ * s;
        for (const auto& j : jumps_) v -= j.eta * j.beta / ((j.beta + s) * (j.beta + s));
        return v;
    }
    double mean() const { return psi_prime(0.0); }

    double total_jump_rate() const;
    double min_beta() const;
    // Drift gamma of the triplet form with compensator z*1{-1<z<0}.
    double triplet_drift() const;
    // Levy density at z<0.
    double levy_density(double z) const;

private:
    double delta_;
    double sigma_;
    std::vector<JumpTerm> jumps_;
};

template <class R>
struct BasicRootSet {
    R q = 0;
    R phi_q = 0;
    std::vector<R> neg_roots;  // descending: closest to zero first

    std::vector<R> all() const
    {
        std::vector<R> r;
        r.reserve(neg_roots.size() + 1);
        r.push_back(phi_q);
        r.insert(r.end(), neg_roots.begin(), neg_roots.end());
        return r;
    }
};
using RootSet = BasicRootSet<double>;

double laplace_exponent(const LevyModel& m, double s);
double psi_derivative(const LevyModel& m, double s);
double phi(const LevyModel& m, double q);
RootSet all_roots(const LevyModel& m, double q);
template <class R>
R phi_as(const LevyModel& m, const R& q);
template <class R>
BasicRootSet<R> all_roots_as(const LevyModel& m, const R& q);

}  // namespace levy_restock
