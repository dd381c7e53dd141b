#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "gdpcast/errors.hpp"

namespace gdpcast {

/// National-accounts ingredients; absent fields are simply not supplied, so a
/// caller can fill only the approach it intends to evaluate.
struct GdpComponents {
    // expenditure approach
    std::optional<double> C, I, G, NE;
    // production approach
    std::optional<double> GVA, IC, T, Sub;
    // income approach
    std::optional<double> W, GOS;
};

enum class GdpApproach { production, income, expenditure };

namespace detail {
inline double require(const std::optional<double>& f, const char* name) {
    if (!f) throw InputError(std::string("gdp_identity: missing field ") + name);
    if (!std::isfinite(*f)) throw InputError(std::string("gdp_identity: non-finite field ") + name);
    return *f;
}
} // namespace detail

/**
 * GDP by one of the three accounting identities:
 *   production:  GVA - IC + (T - Sub)
 *   income:      W + GOS + (T - Sub)
 *   expenditure: C + G + I + NE
 */
inline double gdp_identity(const GdpComponents& c, GdpApproach approach) {
    using detail::require;
    switch (approach) {
    case GdpApproach::production: {
        const double t = require(c.T, "T");
        const double sub = require(c.Sub, "Sub");
        if (t < 0) throw InputError("gdp_identity: T must be >= 0");
        if (sub < 0) throw InputError("gdp_identity: Sub must be >= 0");
        return require(c.GVA, "GVA") - require(c.IC, "IC") + (t - sub);
    }
    case GdpApproach::income: {
        const double t = require(c.T, "T");
        const double sub = require(c.Sub, "Sub");
        if (t < 0) throw InputError("gdp_identity: T must be >= 0");
        if (sub < 0) throw InputError("gdp_identity: Sub must be >= 0");
        return require(c.W, "W") + require(c.GOS, "GOS") + (t - sub);
    }
    case GdpApproach::expenditure:
        return require(c.C, "C") + require(c.G, "G") + require(c.I, "I") + require(c.NE, "NE");
    }
    throw InputError("gdp_identity: unknown approach");
}

} // namespace gdpcast
