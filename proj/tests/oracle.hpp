#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

// Adaptive Gauss-Kronrod, optionally split at interior kinks.
template <class F>
double quad(F f, double a, double b, const std::vector<double>& kinks = {}, double tol = 1e-13)
{
    using boost::math::quadrature::gauss_kronrod;
    double total = 0.0, lo = a;
    std::vector<double> k = kinks;
    std::sort(k.begin(), k.end());
    for (double p : k)
        if (p > lo && p < b) {
            total += gauss_kronrod<double, 61>::integrate(f, lo, p, 20, tol);
            lo = p;
        }
    return total + gauss_kronrod<double, 61>::integrate(f, lo, b, 20, tol);
}

inline bool close(double got, double want, double rel, double abs = 0.0)
{
    return std::abs(got - want) <= abs + rel * std::max(1.0, std::abs(want));
}

}  // namespace oracle
