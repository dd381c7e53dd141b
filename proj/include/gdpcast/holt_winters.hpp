#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "gdpcast/errors.hpp"
#include "gdpcast/math.hpp"
#include "gdpcast/metrics.hpp"
#include "gdpcast/nelder_mead.hpp"
#include "gdpcast/time_series.hpp"

namespace gdpcast::hw {

enum class Method { additive, multiplicative };

struct HWParams {
    double alpha = 0.5;
    double beta = 0.5;
    double gamma = 0.5;
    Method method = Method::additive;

    void validate() const {
        const auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
        if (!in01(alpha) || !in01(beta) || !in01(gamma))
            throw InputError("HWParams: alpha, beta, gamma must lie in [0,1]");
    }
};

/// Level, trend, and one seasonal cycle with the most recent index last.
struct HWState {
    double level = 0.0;
    double trend = 0.0;
    std::vector<double> seasonal;
};

struct HWFit {
    HWParams params;
    HWState initial_state;
    HWState final_state;
    TimeSeries fitted; // one-step-ahead predictions, aligned with the data
    double sse = 0.0;
    std::vector<double> residuals;
};

/**
 * First-two-cycles initialization: level is the first cycle mean, trend the
 * per-period change between the first two cycle means, seasonals the
 * first-cycle deviations (additive, normalized to sum 0) or ratios
 * (multiplicative, normalized to sum m).
 */
inline HWState hw_initial_state(const TimeSeries& s, Method method = Method::additive) {
    const std::size_t m = static_cast<std::size_t>(s.period_length());
    if (s.size() < 2 * m)
        throw InputError("hw_initial_state: need at least two full cycles");
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        m1 += s[i];
        m2 += s[m + i];
    }
    m1 /= static_cast<double>(m);
    m2 /= static_cast<double>(m);
    HWState st;
    st.level = m1;
    st.trend = (m2 - m1) / static_cast<double>(m);
    st.seasonal.resize(m);
    if (method == Method::additive) {
        for (std::size_t i = 0; i < m; ++i) st.seasonal[i] = s[i] - m1;
        double mu = math::mean(st.seasonal);
        for (auto& v : st.seasonal) v -= mu;
        double resid = 0.0;
        for (double v : st.seasonal) resid += v;
        st.seasonal[0] -= resid; // pin the sum to exactly zero
    } else {
        if (m1 <= 0.0) throw DomainError("hw_initial_state: nonpositive first-cycle mean");
        for (std::size_t i = 0; i < m; ++i) {
            if (s[i] <= 0.0)
                throw DomainError("hw_initial_state: nonpositive observation at index " +
                                  std::to_string(i));
            st.seasonal[i] = s[i] / m1;
        }
        double sum = 0.0;
        for (double v : st.seasonal) sum += v;
        const double scale = static_cast<double>(m) / sum;
        for (auto& v : st.seasonal) v *= scale;
        double resid = 0.0;
        for (double v : st.seasonal) resid += v;
        st.seasonal[0] -= resid - static_cast<double>(m); // pin the sum to exactly m
    }
    return st;
}

/**
 * One pass of the level/trend/seasonal recursions:
 *   additive        l_t = a(y_t - s_{t-m}) + (1-a)(l_{t-1} + b_{t-1})
 *                   b_t = B(l_t - l_{t-1}) + (1-B) b_{t-1}
 *                   s_t = g(y_t - l_{t-1} - b_{t-1}) + (1-g) s_{t-m}
 *   multiplicative  same with y_t/s_{t-m} in the level and
 *                   y_t/(l_{t-1}+b_{t-1}) in the seasonal update.
 * fitted[t] is the forecast of y_t made at t-1; no re-normalization is
 * applied after initialization.
 */
inline HWFit hw_filter(const TimeSeries& s, const HWParams& params, const HWState& init) {
    params.validate();
    const std::size_t m = static_cast<std::size_t>(s.period_length());
    if (init.seasonal.size() != m)
        throw InputError("hw_filter: initial seasonal length must equal the period");
    const bool mult = params.method == Method::multiplicative;
    if (mult)
        for (std::size_t t = 0; t < s.size(); ++t)
            if (s[t] <= 0.0)
                throw DomainError("hw_filter: multiplicative method needs positive data, got " +
                                  std::to_string(s[t]) + " at index " + std::to_string(t));

    std::vector<double> seas = init.seasonal; // circular, slot (t-1) mod m
    double level = init.level;
    double trend = init.trend;
    std::vector<double> fitted(s.size()), resid(s.size());
    double sse = 0.0;
    for (std::size_t t = 0; t < s.size(); ++t) {
        const std::size_t slot = t % m;
        const double s_old = seas[slot]; // s_{t-m}
        const double base = level + trend;
        double yhat;
        if (mult) {
            if (s_old == 0.0 || base == 0.0)
                throw NumericalError("hw_filter: zero divisor in multiplicative update at index " +
                                     std::to_string(t));
            yhat = base * s_old;
        } else {
            yhat = base + s_old;
        }
        const double y = s[t];
        const double lprev = level;
        if (mult) {
            level = params.alpha * (y / s_old) + (1.0 - params.alpha) * base;
            seas[slot] = params.gamma * (y / base) + (1.0 - params.gamma) * s_old;
        } else {
            level = params.alpha * (y - s_old) + (1.0 - params.alpha) * base;
            seas[slot] = params.gamma * (y - lprev - trend) + (1.0 - params.gamma) * s_old;
        }
        trend = params.beta * (level - lprev) + (1.0 - params.beta) * trend;
        fitted[t] = yhat;
        resid[t] = y - yhat;
        sse += resid[t] * resid[t];
        if (!std::isfinite(level) || !std::isfinite(trend) || !std::isfinite(seas[slot]))
            throw NumericalError("hw_filter: recursion diverged at index " + std::to_string(t));
    }

    HWFit fit{params, init, HWState{}, s.with_values(std::move(fitted)), sse, std::move(resid)};
    fit.final_state.level = level;
    fit.final_state.trend = trend;
    fit.final_state.seasonal.resize(m);
    // rotate so the most recent seasonal (time n) sits last
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < m; ++i)
        fit.final_state.seasonal[i] = seas[(n + i - m + m) % m];
    return fit;
}

/**
 * SSE-minimizing smoothing parameters: best point of a 3x3x3 coarse grid
 * (ties to the lexicographically smallest triple), refined by bounded
 * Nelder-Mead on [0,1]^3. Deterministic given the series.
 */
inline HWFit hw_optimize(const TimeSeries& s, Method method) {
    const std::size_t m = static_cast<std::size_t>(s.period_length());
    if (s.size() < 3 * m) throw InputError("hw_optimize: need at least three full cycles");
    const HWState init = hw_initial_state(s, method);
    const auto sse_at = [&](double a, double b, double g) {
        HWParams p{a, b, g, method};
        return hw_filter(s, p, init).sse;
    };

    const double grid[3] = {0.2, 0.5, 0.8};
    double best_sse = std::numeric_limits<double>::infinity();
    std::array<double, 3> best{grid[0], grid[0], grid[0]};
    for (double a : grid)
        for (double b : grid)
            for (double g : grid) {
                const double v = sse_at(a, b, g);
                if (v < best_sse) {
                    best_sse = v;
                    best = {a, b, g};
                }
            }

    opt::NMOptions o;
    o.lower = {0.0, 0.0, 0.0};
    o.upper = {1.0, 1.0, 1.0};
    o.max_iter = 600;
    o.tol_f = 1e-14;
    o.tol_x = 1e-8;
    const auto res = opt::nelder_mead(
        [&](std::span<const double> x) { return sse_at(x[0], x[1], x[2]); },
        {best[0], best[1], best[2]}, o);

    std::array<double, 3> arg = best_sse <= res.f ? best : std::array<double, 3>{res.x[0], res.x[1], res.x[2]};
    return hw_filter(s, HWParams{arg[0], arg[1], arg[2], method}, init);
}

/// Horizon-dependent variance multiplier of the one-step error variance.
inline double hw_variance_factor(const HWParams& p, int h, int m) {
    double c = 1.0;
    for (int j = 1; j <= h - 1; ++j) {
        const double d = (j % m == 0) ? 1.0 : 0.0;
        const double term = p.alpha * (1.0 + j * p.beta) + d * p.gamma * (1.0 - p.alpha);
        c += term * term;
    }
    return c;
}

/**
 * h-step forecasts from the final state with central intervals at `level`:
 * half-width = z * sigma_e * sqrt(c_h), sigma_e^2 = sse/(n-3), c_h the
 * standard variance accumulation for the additive recursions (also applied to
 * the multiplicative fit, on the observation scale).
 */
inline ForecastResult hw_forecast(const HWFit& fit, int h, double level) {
    if (h < 1) throw InputError("hw_forecast: h must be >= 1");
    if (!(level > 0.0 && level < 1.0)) throw InputError("hw_forecast: level must be in (0,1)");
    const int m = fit.fitted.period_length();
    const std::size_t n = fit.fitted.size();
    if (n <= 3) throw InputError("hw_forecast: too few observations for an error variance");
    const double sigma_e = std::sqrt(fit.sse / static_cast<double>(n - 3));
    const double z = math::normal_quantile(0.5 * (1.0 + level));
    const bool mult = fit.params.method == Method::multiplicative;
    std::vector<double> pts(static_cast<std::size_t>(h)), lo(pts.size()), hi(pts.size());
    for (int j = 1; j <= h; ++j) {
        const double seas = fit.final_state.seasonal[static_cast<std::size_t>((j - 1) % m)];
        const double base = fit.final_state.level + j * fit.final_state.trend;
        const double point = mult ? base * seas : base + seas;
        const double half = z * sigma_e * std::sqrt(hw_variance_factor(fit.params, j, m));
        pts[static_cast<std::size_t>(j - 1)] = point;
        lo[static_cast<std::size_t>(j - 1)] = point - half;
        hi[static_cast<std::size_t>(j - 1)] = point + half;
    }
    TimeSeries points = fit.fitted.continuation(std::move(pts));
    TimeSeries lower = fit.fitted.continuation(std::move(lo));
    TimeSeries upper = fit.fitted.continuation(std::move(hi));
    return ForecastResult(std::move(points), std::move(lower), std::move(upper), level,
                          mult ? "hw_multiplicative" : "hw_additive");
}

} // namespace gdpcast::hw
