#pragma once

#include <array>

namespace gdpcast::stats {

/**
 * Critical values of the n(rho-1) unit-root coefficient statistic for the
 * constant-only regression (Fuller 1976, Table 8.5.1, mu case). Rows are
 * sample sizes, columns the lower-tail probabilities 0.01, 0.025, 0.05, 0.10.
 * The last row is the asymptotic limit; lookups interpolate linearly in 1/n so
 * the limit row is reachable.
 */
struct PPCriticalTable {
    static constexpr std::array<double, 6> sample_sizes = {25, 50, 100, 250, 500,
                                                           1e18}; // last row: asymptotic
    static constexpr std::array<double, 4> levels = {0.01, 0.025, 0.05, 0.10};
    static constexpr std::array<std::array<double, 4>, 6> values = {{
        {-17.2, -14.6, -12.5, -10.2},
        {-18.9, -15.7, -13.3, -10.7},
        {-19.8, -16.3, -13.7, -11.0},
        {-20.3, -16.6, -14.0, -11.2},
        {-20.5, -16.8, -14.0, -11.2},
        {-20.7, -16.9, -14.1, -11.3},
    }};
};

/// Critical value at (n, level column), interpolated in 1/n between table rows.
inline double pp_critical_value(double n, int level_idx) {
    const auto& tab = PPCriticalTable::values;
    const auto& ns = PPCriticalTable::sample_sizes;
    if (n <= ns.front()) return tab.front()[level_idx];
    if (n >= ns.back()) return tab.back()[level_idx];
    const double x = 1.0 / n;
    for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
        const double hi = 1.0 / ns[i];     // larger 1/n, smaller n
        const double lo = 1.0 / ns[i + 1]; // smaller 1/n, larger n
        if (x <= hi && x >= lo) {
            const double w = hi == lo ? 0.0 : (x - lo) / (hi - lo);
            return tab[i + 1][level_idx] + w * (tab[i][level_idx] - tab[i + 1][level_idx]);
        }
    }
    return tab.back()[level_idx];
}

} // namespace gdpcast::stats
