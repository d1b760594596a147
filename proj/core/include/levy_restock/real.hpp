#pragma once

#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace levy_restock {

// 100 significant digits. Used when e^{Phi(q+lambda)(b-a)} makes double
// cancellation visible.
using hp = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>,
                                         boost::multiprecision::et_off>;

namespace num {

template <class R>
R inf()
{
    return std::numeric_limits<R>::infinity();
}
template <class R>
bool is_inf(const R& x)
{
    using std::isinf;
    return isinf(x);
}
template <class R>
bool is_finite(const R& x)
{
    using std::isfinite;
    return isfinite(x);
}
template <class R>
R exp(const R& x)
{
    using std::exp;
    return exp(x);
}
template <class R>
R abs(const R& x)
{
    using std::abs;
    return abs(x);
}
template <class R>
R log(const R& x)
{
    using std::log;
    return log(x);
}
template <class R>
R max(const R& a, const R& b)
{
    return a < b ? b : a;
}
template <class R>
R min(const R& a, const R& b)
{
    return b < a ? b : a;
}
template <class R>
double to_double(const R& x)
{
    return static_cast<double>(x);
}

}  // namespace num
}  // namespace levy_restock
