#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gdpcast/errors.hpp"
#include "gdpcast/time_series.hpp"

namespace gdpcast {

/// Point forecasts with a central interval at `level`; the three series share
/// one calendar so consumers can index them in lockstep.
struct ForecastResult {
    TimeSeries points;
    TimeSeries lower;
    TimeSeries upper;
    double level = 0.95;
    std::string model_label;

    ForecastResult(TimeSeries p, TimeSeries lo, TimeSeries hi, double lvl, std::string label)
        : points(std::move(p)), lower(std::move(lo)), upper(std::move(hi)), level(lvl),
          model_label(std::move(label)) {
        if (!points.same_calendar(lower) || !points.same_calendar(upper))
            throw InputError("ForecastResult: points/lower/upper calendars differ");
        if (!(level > 0.0 && level < 1.0))
            throw InputError("ForecastResult: level must be in (0,1)");
        for (std::size_t i = 0; i < points.size(); ++i)
            if (!(lower[i] <= points[i] && points[i] <= upper[i]))
                throw InputError("ForecastResult: interval does not bracket point at index " +
                                 std::to_string(i));
    }
};

namespace metrics {

namespace detail {
inline void check_pair(std::span<const double> a, std::span<const double> p, const char* op) {
    if (a.size() != p.size()) throw InputError(std::string(op) + ": length mismatch");
    if (a.empty()) throw InputError(std::string(op) + ": empty input");
}
} // namespace detail

inline double rmse(std::span<const double> actual, std::span<const double> predicted) {
    detail::check_pair(actual, predicted, "rmse");
    double s = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = actual[i] - predicted[i];
        s += e * e;
    }
    return std::sqrt(s / static_cast<double>(actual.size()));
}

inline double mae(std::span<const double> actual, std::span<const double> predicted) {
    detail::check_pair(actual, predicted, "mae");
    double s = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) s += std::fabs(actual[i] - predicted[i]);
    return s / static_cast<double>(actual.size());
}

/// Mean absolute percentage error on the percent scale (10% error -> 10).
inline double mape(std::span<const double> actual, std::span<const double> predicted) {
    detail::check_pair(actual, predicted, "mape");
    double s = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0)
            throw DomainError("mape: actual value is zero at index " + std::to_string(i));
        s += std::fabs((actual[i] - predicted[i]) / actual[i]);
    }
    return 100.0 * s / static_cast<double>(actual.size());
}

enum class UTheil { U1, U2 };

/**
 * Theil inequality coefficients.
 * U1 = rmse / (sqrt(mean a^2) + sqrt(mean p^2)), bounded in [0,1].
 * U2 compares one-step relative errors to the naive last-value forecast;
 * U2 = 1 means no better than naive.
 */
inline double u_theil(std::span<const double> actual, std::span<const double> predicted,
                      UTheil variant) {
    detail::check_pair(actual, predicted, "u_theil");
    if (variant == UTheil::U1) {
        double sa = 0.0, sp = 0.0;
        for (std::size_t i = 0; i < actual.size(); ++i) {
            sa += actual[i] * actual[i];
            sp += predicted[i] * predicted[i];
        }
        const double n = static_cast<double>(actual.size());
        const double denom = std::sqrt(sa / n) + std::sqrt(sp / n);
        if (denom == 0.0) throw DomainError("u_theil: U1 denominator is zero");
        return rmse(actual, predicted) / denom;
    }
    if (actual.size() < 2) throw InputError("u_theil: U2 needs length >= 2");
    double num = 0.0, den = 0.0;
    for (std::size_t t = 1; t < actual.size(); ++t) {
        if (actual[t - 1] == 0.0)
            throw DomainError("u_theil: U2 actual value is zero at index " + std::to_string(t - 1));
        const double fe = (predicted[t] - actual[t]) / actual[t - 1];
        const double ne = (actual[t] - actual[t - 1]) / actual[t - 1];
        num += fe * fe;
        den += ne * ne;
    }
    if (den == 0.0) throw DomainError("u_theil: U2 naive-error denominator is zero");
    return std::sqrt(num) / std::sqrt(den);
}

} // namespace metrics

/// Period-over-period relative change; one element shorter, origin advanced.
inline TimeSeries growth_rate(const TimeSeries& s) {
    if (s.size() < 2) throw InputError("growth_rate: need at least 2 observations");
    std::vector<double> g(s.size() - 1);
    for (std::size_t t = 1; t < s.size(); ++t) {
        if (s[t - 1] == 0.0)
            throw DomainError("growth_rate: zero value at index " + std::to_string(t - 1));
        g[t - 1] = (s[t] - s[t - 1]) / s[t - 1];
    }
    return s.advanced(1, std::move(g));
}

/// One comparison-table row: all five metrics for one model against one target.
struct ScoreRow {
    std::string model;
    double rmse = 0.0;
    double mae = 0.0;
    double mape = 0.0;
    double u1 = 0.0;
    double u2 = 0.0;
    std::size_t n_used = 0;
    bool trimmed = false; // calendars intersected to a strict sub-window
    // per-metric minimum flags, filled by compare()
    bool best_rmse = false, best_mae = false, best_mape = false, best_u1 = false, best_u2 = false;
};

struct ScoreCard {
    std::vector<ScoreRow> rows;
};

/// Metrics of `predicted` against `actual` over their common calendar window.
inline ScoreRow score(const TimeSeries& actual, const TimeSeries& predicted,
                      const std::string& label) {
    const auto [ia, ip, len] = common_window(actual, predicted);
    if (len == 0) throw InputError("score: calendars of actual and '" + label +
                                   "' do not intersect");
    std::span<const double> a(actual.values().data() + ia, len);
    std::span<const double> p(predicted.values().data() + ip, len);
    ScoreRow r;
    r.model = label;
    r.rmse = metrics::rmse(a, p);
    r.mae = metrics::mae(a, p);
    r.mape = metrics::mape(a, p);
    r.u1 = metrics::u_theil(a, p, metrics::UTheil::U1);
    r.u2 = len >= 2 ? metrics::u_theil(a, p, metrics::UTheil::U2)
                    : std::numeric_limits<double>::quiet_NaN();
    r.n_used = len;
    r.trimmed = len != actual.size() || len != predicted.size();
    return r;
}

/// Assemble rows into a card and flag each metric's minimum.
inline ScoreCard compare(std::vector<ScoreRow> rows) {
    if (rows.empty()) throw InputError("compare: no rows");
    const auto flag_min = [&rows](double ScoreRow::*metric, bool ScoreRow::*flag) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].*metric < rows[best].*metric) best = i;
        for (auto& r : rows) r.*flag = false;
        rows[best].*flag = true;
    };
    flag_min(&ScoreRow::rmse, &ScoreRow::best_rmse);
    flag_min(&ScoreRow::mae, &ScoreRow::best_mae);
    flag_min(&ScoreRow::mape, &ScoreRow::best_mape);
    flag_min(&ScoreRow::u1, &ScoreRow::best_u1);
    flag_min(&ScoreRow::u2, &ScoreRow::best_u2);
    return ScoreCard{std::move(rows)};
}

} // namespace gdpcast
