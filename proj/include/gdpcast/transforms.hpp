#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gdpcast/errors.hpp"
#include "gdpcast/time_series.hpp"

namespace gdpcast {

/// Elementwise natural log; every value must be strictly positive.
inline TimeSeries log_transform(const TimeSeries& s) {
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] <= 0.0)
            throw DomainError("log_transform: non-positive value at index " + std::to_string(i));
        v[i] = std::log(s[i]);
    }
    return s.with_values(std::move(v));
}

/// Elementwise exp, the inverse of log_transform.
inline TimeSeries exp_transform(const TimeSeries& s) {
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = std::exp(s[i]);
    return s.with_values(std::move(v));
}

/**
 * Differenced series plus the per-stage prefixes needed to invert exactly.
 *
 * Stages are recorded in application order: d ordinary differences first, then
 * D seasonal differences at `lag`. Each stage stores the leading values of its
 * input (1 for ordinary, `lag` for seasonal), which integrate() consumes in
 * reverse order.
 */
struct DifferenceResult {
    TimeSeries series;
    int d = 0;
    int D = 0;
    int lag = 1;
    std::vector<std::vector<double>> stage_initials;
    CalendarPoint original_origin{};
};

namespace detail {
inline std::vector<double> diff_once(const std::vector<double>& x, int lag) {
    std::vector<double> out(x.size() - static_cast<std::size_t>(lag));
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = x[i + static_cast<std::size_t>(lag)] - x[i];
    return out;
}
} // namespace detail

/// Apply the (1-B)^d (1-B^lag)^D operator; origin advances by d + D*lag.
inline DifferenceResult difference(const TimeSeries& s, int d, int D, int lag) {
    if (d < 0 || D < 0) throw InputError("difference: d and D must be >= 0");
    if (lag < 1) throw InputError("difference: lag must be >= 1");
    const std::size_t consumed = static_cast<std::size_t>(d) + static_cast<std::size_t>(D) * lag;
    if (s.size() <= consumed)
        throw InputError("difference: series of length " + std::to_string(s.size()) +
                         " too short for d=" + std::to_string(d) + ", D=" + std::to_string(D) +
                         ", lag=" + std::to_string(lag));
    std::vector<double> x = s.values();
    std::vector<std::vector<double>> initials;
    for (int i = 0; i < d; ++i) {
        initials.push_back({x[0]});
        x = detail::diff_once(x, 1);
    }
    for (int i = 0; i < D; ++i) {
        initials.emplace_back(x.begin(), x.begin() + lag);
        x = detail::diff_once(x, lag);
    }
    return {s.advanced(consumed, std::move(x)), d, D, lag, std::move(initials), s.origin()};
}

/// Exact inverse of difference(): replay each stage's cumulative sums from the
/// stored prefixes, undoing stages in reverse application order.
inline TimeSeries integrate(const DifferenceResult& r) {
    std::vector<double> x = r.series.values();
    for (std::size_t stage = r.stage_initials.size(); stage-- > 0;) {
        const int lag = stage < static_cast<std::size_t>(r.d) ? 1 : r.lag;
        const std::vector<double>& init = r.stage_initials[stage];
        std::vector<double> full(init.size() + x.size());
        std::copy(init.begin(), init.end(), full.begin());
        for (std::size_t i = 0; i < x.size(); ++i)
            full[init.size() + i] = x[i] + full[i];
        x = std::move(full);
    }
    return TimeSeries(std::move(x), r.original_origin, r.series.period_length());
}

/**
 * Extend an inversion beyond the sample: given the original series and values
 * on the differenced scale for the next `future.size()` periods, reconstruct
 * the implied original-scale continuation. Used by SARIMA forecasting.
 */
inline std::vector<double> integrate_forward(const TimeSeries& original, int d, int D, int lag,
                                             const std::vector<double>& future) {
    // Rebuild the per-stage tails: stage_values[k] holds the full in-sample
    // sequence entering stage k, so its tail seeds the forward recursion.
    std::vector<double> x = original.values();
    std::vector<std::vector<double>> stage_inputs;
    for (int i = 0; i < d; ++i) {
        stage_inputs.push_back(x);
        x = detail::diff_once(x, 1);
    }
    for (int i = 0; i < D; ++i) {
        stage_inputs.push_back(x);
        x = detail::diff_once(x, lag);
    }
    std::vector<double> cur = future;
    for (std::size_t stage = stage_inputs.size(); stage-- > 0;) {
        const int l = stage < static_cast<std::size_t>(d) ? 1 : lag;
        std::vector<double> hist = stage_inputs[stage];
        std::vector<double> out(cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const std::size_t pos = hist.size();
            const double prev = pos >= static_cast<std::size_t>(l)
                                    ? hist[pos - static_cast<std::size_t>(l)]
                                    : 0.0;
            out[i] = cur[i] + prev;
            hist.push_back(out[i]);
        }
        cur = std::move(out);
    }
    return cur;
}

} // namespace gdpcast
