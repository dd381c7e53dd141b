#pragma once

#include <cstdint>
#include <random>

#include "gdpcast/errors.hpp"
#include "gdpcast/math.hpp"

namespace gdpcast {

/**
 * Deterministic random number source.
 *
 * Normal variates are produced by inverse-CDF transform and gamma variates by
 * the Marsaglia-Tsang method, so the draw sequence depends only on the seed
 * and the call order, never on library-specific distribution internals.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw on the open interval (0, 1).
    double uniform() {
        const std::uint64_t bits = engine_() >> 11; // top 53 bits
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw.
    double normal() { return math::normal_quantile(uniform()); }

    /// Gamma draw with the given shape and unit rate.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw DomainError("Rng::gamma: shape must be positive");
        if (shape < 1.0) {
            // Boost via G(shape) = G(shape+1) * U^(1/shape).
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform(), 1.0 / shape);
        }
        // Marsaglia & Tsang (2000).
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    std::uint64_t next_raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace gdpcast
