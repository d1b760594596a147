#pragma once

#include <limits>

#include "levy_restock/real.hpp"

namespace levy_restock {

template <class R>
struct BasicBisectResult {
    R root;
    R lo;
    R hi;
    int iterations;
};
using BisectResult = BasicBisectResult<double>;

// Bisection for a sign change of g on (lo, hi). `lo_positive` gives the sign
// of g near lo, so endpoints that sit on poles never need evaluating.
// Stops when the bracket width is below abs_tol + rel_tol*|mid| or when the
// midpoint no longer moves. rel_tol < 0 means a few ulps of R.
template <class G, class R>
BasicBisectResult<R> bisect(G&& g, R lo, R hi, bool lo_positive, R abs_tol = R(0), R rel_tol = R(-1),
                            int max_iter = 2000)
{
    if (rel_tol < 0) rel_tol = std::numeric_limits<R>::epsilon() * 4;
    int it = 0;
    for (; it < max_iter; ++it) {
        const R mid = (lo + hi) / 2;
        if (mid <= lo || mid >= hi) break;
        if (hi - lo <= abs_tol + rel_tol * num::abs(mid)) break;
        const auto gm = g(mid);
        if (gm == 0) return {mid, mid, mid, it + 1};
        if ((gm > 0) == lo_positive)
            lo = mid;
        else
            hi = mid;
    }
    return {(lo + hi) / 2, lo, hi, it};
}

}  // namespace levy_restock
