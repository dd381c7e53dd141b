#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gdpcast/errors.hpp"
#include "gdpcast/math.hpp"
#include "gdpcast/pp_critical_values.hpp"
#include "gdpcast/time_series.hpp"

namespace gdpcast::stats {

/// Outcome of a hypothesis test: the statistic, its (possibly clamped)
/// p-value, the bandwidth/lag count actually used, and hard reject decisions
/// at the three conventional levels.
struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int lags_used = 0;
    std::map<double, bool> reject_at; // keys 0.01, 0.05, 0.10
};

/// Biased (divisor-n) sample autocovariances for lags 0..max_lag.
inline std::vector<double> autocovariance(std::span<const double> y, int max_lag) {
    const std::size_t n = y.size();
    if (n == 0) throw InputError("autocovariance: empty input");
    if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= n)
        throw InputError("autocovariance: max_lag must be in 0..n-1");
    const double mu = math::mean(y);
    std::vector<double> g(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (int k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t)
            s += (y[t] - mu) * (y[t - static_cast<std::size_t>(k)] - mu);
        g[static_cast<std::size_t>(k)] = s / static_cast<double>(n);
    }
    return g;
}

/// Sample autocorrelations for lags 0..max_lag; acf[0] = 1 by construction.
inline std::vector<double> acf(std::span<const double> y, int max_lag) {
    auto g = autocovariance(y, max_lag);
    if (g[0] <= 0.0) throw DomainError("acf: degenerate variance (constant series)");
    const double g0 = g[0];
    for (auto& v : g) v /= g0;
    g[0] = 1.0;
    return g;
}

inline std::vector<double> acf(const TimeSeries& s, int max_lag) { return acf(s.span(), max_lag); }

/**
 * Partial autocorrelations via Durbin-Levinson on the sample acf.
 * pacf[0] is defined as 1; pacf[k] is the last coefficient of the order-k
 * Yule-Walker solution.
 */
inline std::vector<double> pacf(std::span<const double> y, int max_lag) {
    const auto rho = acf(y, max_lag);
    std::vector<double> out(static_cast<std::size_t>(max_lag) + 1, 0.0);
    out[0] = 1.0;
    if (max_lag == 0) return out;
    std::vector<double> phi(static_cast<std::size_t>(max_lag) + 1, 0.0);
    std::vector<double> prev(static_cast<std::size_t>(max_lag) + 1, 0.0);
    phi[1] = rho[1];
    out[1] = rho[1];
    double sigma = 1.0 - rho[1] * rho[1];
    for (int k = 2; k <= max_lag; ++k) {
        prev = phi;
        double num = rho[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j)
            num -= prev[static_cast<std::size_t>(j)] * rho[static_cast<std::size_t>(k - j)];
        if (sigma <= 1e-14)
            throw NumericalError("pacf: Durbin-Levinson innovation variance vanished at lag " +
                                 std::to_string(k));
        const double pk = num / sigma;
        phi[static_cast<std::size_t>(k)] = pk;
        for (int j = 1; j < k; ++j)
            phi[static_cast<std::size_t>(j)] =
                prev[static_cast<std::size_t>(j)] - pk * prev[static_cast<std::size_t>(k - j)];
        sigma *= (1.0 - pk * pk);
        out[static_cast<std::size_t>(k)] = pk;
    }
    return out;
}

inline std::vector<double> pacf(const TimeSeries& s, int max_lag) { return pacf(s.span(), max_lag); }

/**
 * Phillips-Perron Z_alpha unit-root test on the constant-only regression
 * y_t = c + rho*y_{t-1} + u_t, with Newey-West (Bartlett) long-run variance at
 * bandwidth floor(4*(n/100)^(1/4)). The p-value interpolates the shipped
 * critical-value table and is clamped to [0.01, 0.10] at the grid edges.
 */
inline TestResult phillips_perron(const TimeSeries& s) {
    const std::size_t n = s.size();
    if (n < 20) throw InputError("phillips_perron: need at least 20 observations");
    const auto& y = s.values();
    const std::size_t T = n - 1; // usable regression observations
    // OLS of y_t on (1, y_{t-1})
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        xbar += y[t - 1];
        ybar += y[t];
    }
    xbar /= static_cast<double>(T);
    ybar /= static_cast<double>(T);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        sxx += (y[t - 1] - xbar) * (y[t - 1] - xbar);
        sxy += (y[t - 1] - xbar) * (y[t] - ybar);
    }
    if (sxx <= 0.0) throw DomainError("phillips_perron: degenerate regressor variance");
    const double rho = sxy / sxx;
    const double c = ybar - rho * xbar;
    std::vector<double> u(T);
    for (std::size_t t = 1; t < n; ++t) u[t - 1] = y[t] - c - rho * y[t - 1];
    // Newey-West long-run variance of u
    const int q = static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    double gamma0 = 0.0;
    for (double e : u) gamma0 += e * e;
    gamma0 /= static_cast<double>(T);
    double lambda2 = gamma0;
    for (int j = 1; j <= q && static_cast<std::size_t>(j) < T; ++j) {
        double gj = 0.0;
        for (std::size_t t = static_cast<std::size_t>(j); t < T; ++t) gj += u[t] * u[t - static_cast<std::size_t>(j)];
        gj /= static_cast<double>(T);
        lambda2 += 2.0 * (1.0 - static_cast<double>(j) / (q + 1.0)) * gj;
    }
    if (lambda2 <= 0.0)
        throw NumericalError("phillips_perron: non-positive long-run variance estimate");
    const double m_xx = sxx / (static_cast<double>(T) * static_cast<double>(T));
    const double z_alpha =
        static_cast<double>(T) * (rho - 1.0) - 0.5 * (lambda2 - gamma0) / m_xx;

    TestResult r;
    r.statistic = z_alpha;
    r.lags_used = q;
    // p-value from the critical-value grid at this sample size
    const double nn = static_cast<double>(T);
    std::array<double, 4> cv{};
    for (int j = 0; j < 4; ++j) cv[j] = pp_critical_value(nn, j);
    const auto& lv = PPCriticalTable::levels;
    if (z_alpha <= cv[0]) {
        r.p_value = lv[0];
    } else if (z_alpha >= cv[3]) {
        r.p_value = lv[3];
    } else {
        for (int j = 0; j + 1 < 4; ++j) {
            if (z_alpha >= cv[j] && z_alpha <= cv[j + 1]) {
                const double w = (z_alpha - cv[j]) / (cv[j + 1] - cv[j]);
                r.p_value = lv[j] + w * (lv[j + 1] - lv[j]);
                break;
            }
        }
    }
    r.reject_at[0.01] = z_alpha < cv[0];
    r.reject_at[0.05] = z_alpha < cv[2];
    r.reject_at[0.10] = z_alpha < cv[3];
    return r;
}

/**
 * Ljung-Box portmanteau test on residual autocorrelations:
 * Q = n(n+2) * sum_{k=1..lags} rho_k^2/(n-k), chi-square with
 * (lags - fitted_params) degrees of freedom.
 */
inline TestResult ljung_box(std::span<const double> residuals, int lags, int fitted_params) {
    if (fitted_params < 0) throw InputError("ljung_box: fitted_params must be >= 0");
    if (lags <= fitted_params)
        throw InputError("ljung_box: lags must exceed fitted_params");
    const std::size_t n = residuals.size();
    if (n <= static_cast<std::size_t>(lags))
        throw InputError("ljung_box: series length must exceed lags");
    const auto rho = acf(residuals, lags);
    double Q = 0.0;
    for (int k = 1; k <= lags; ++k)
        Q += rho[static_cast<std::size_t>(k)] * rho[static_cast<std::size_t>(k)] /
             static_cast<double>(n - static_cast<std::size_t>(k));
    Q *= static_cast<double>(n) * (static_cast<double>(n) + 2.0);
    TestResult r;
    r.statistic = Q;
    r.lags_used = lags;
    r.p_value = math::chi_squared_sf(Q, static_cast<double>(lags - fitted_params));
    r.reject_at[0.01] = r.p_value < 0.01;
    r.reject_at[0.05] = r.p_value < 0.05;
    r.reject_at[0.10] = r.p_value < 0.10;
    return r;
}

} // namespace gdpcast::stats
