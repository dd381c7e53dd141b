#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "gdpcast/errors.hpp"

namespace gdpcast::math {

inline double mean(std::span<const double> x) {
    if (x.empty()) throw InputError("math::mean: empty input");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Sample variance with divisor n-1.
inline double variance(std::span<const double> x) {
    if (x.size() < 2) throw InputError("math::variance: need at least 2 values");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

inline bool all_finite(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

/// Standard normal quantile, p in (0, 1).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("math::normal_quantile: p must be in (0,1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

inline double normal_cdf(double x) {
    return boost::math::cdf(boost::math::normal_distribution<double>(), x);
}

/// Upper tail P(X > q) of a chi-squared distribution with `dof` degrees of freedom.
inline double chi_squared_sf(double q, double dof) {
    if (dof <= 0.0) throw DomainError("math::chi_squared_sf: dof must be positive");
    if (q <= 0.0) return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(dof), q));
}

/// Linear interpolation of y(xq) on a strictly increasing grid; clamps outside the grid.
inline double interp_clamped(std::span<const double> xs, std::span<const double> ys, double xq) {
    if (xs.size() != ys.size() || xs.empty()) throw InputError("math::interp_clamped: bad grid");
    if (xq <= xs.front()) return ys.front();
    if (xq >= xs.back()) return ys.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), xq);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double w = (xq - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + w * (ys[hi] - ys[lo]);
}

/// Order-statistic quantile with linear interpolation (R type 7). `p` in [0,1].
inline double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw InputError("math::quantile_sorted: empty input");
    if (p <= 0.0) return sorted.front();
    if (p >= 1.0) return sorted.back();
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const double w = h - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + w * (sorted[lo + 1] - sorted[lo]);
}

} // namespace gdpcast::math
