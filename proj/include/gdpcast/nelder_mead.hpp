#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gdpcast/errors.hpp"

namespace gdpcast::opt {

struct NMOptions {
    int max_iter = 2000;       // outer iterations (one transform step each)
    double tol_f = 1e-12;      // stop when simplex f-spread falls below this
    double tol_x = 1e-10;      // or when its diameter does
    double init_step = 0.10;   // initial simplex edge length per coordinate
    std::vector<double> lower; // empty = unbounded
    std::vector<double> upper;
};

struct NMResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    std::vector<double> best_trace; // best f seen after each iteration, non-increasing
};

/**
 * Derivative-free Nelder-Mead minimization with optional box bounds
 * (candidates are clipped into the box before evaluation, so the simplex never
 * leaves it). Tracks the best point ever evaluated; the returned minimum is
 * monotone in iterations regardless of simplex moves. Fully deterministic.
 */
inline NMResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                            std::vector<double> x0, const NMOptions& opts = {}) {
    const std::size_t k = x0.size();
    if (k == 0) throw InputError("nelder_mead: empty start point");
    const bool bounded = !opts.lower.empty();
    if (bounded && (opts.lower.size() != k || opts.upper.size() != k))
        throw InputError("nelder_mead: bounds dimension mismatch");

    const auto clip = [&](std::vector<double>& x) {
        if (!bounded) return;
        for (std::size_t i = 0; i < k; ++i) x[i] = std::clamp(x[i], opts.lower[i], opts.upper[i]);
    };
    clip(x0);

    struct Vertex {
        std::vector<double> x;
        double f;
    };
    std::vector<Vertex> simplex;
    simplex.reserve(k + 1);
    simplex.push_back({x0, f(x0)});
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> xi = x0;
        double step = opts.init_step;
        if (bounded && xi[i] + step > opts.upper[i]) step = -opts.init_step;
        xi[i] += step;
        clip(xi);
        simplex.push_back({xi, f(xi)});
    }

    NMResult best;
    const auto note_best = [&](const Vertex& v) {
        if (best.x.empty() || v.f < best.f) {
            best.x = v.x;
            best.f = v.f;
        }
    };
    for (const auto& v : simplex) note_best(v);

    const auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) {
            if (a.f != b.f) return a.f < b.f;
            return a.x < b.x; // deterministic tie-break
        });
    };
    order();

    int it = 0;
    for (; it < opts.max_iter; ++it) {
        // convergence: spread in f and in coordinates
        const double fspread = std::fabs(simplex.back().f - simplex.front().f);
        double xspread = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t v = 1; v <= k; ++v)
                xspread = std::max(xspread, std::fabs(simplex[v].x[i] - simplex[0].x[i]));
        if (fspread <= opts.tol_f && xspread <= opts.tol_x) break;

        // centroid of all but worst
        std::vector<double> c(k, 0.0);
        for (std::size_t v = 0; v < k; ++v)
            for (std::size_t i = 0; i < k; ++i) c[i] += simplex[v].x[i];
        for (auto& ci : c) ci /= static_cast<double>(k);
        const Vertex& worst = simplex.back();

        const auto make = [&](double coef) {
            std::vector<double> x(k);
            for (std::size_t i = 0; i < k; ++i) x[i] = c[i] + coef * (c[i] - worst.x[i]);
            clip(x);
            Vertex v{std::move(x), 0.0};
            v.f = f(v.x);
            note_best(v);
            return v;
        };

        Vertex refl = make(1.0);
        if (refl.f < simplex.front().f) {
            Vertex exp = make(2.0);
            simplex.back() = exp.f < refl.f ? std::move(exp) : std::move(refl);
        } else if (refl.f < simplex[k - 1].f) {
            simplex.back() = std::move(refl);
        } else {
            Vertex contr = refl.f < worst.f ? make(0.5) : make(-0.5);
            if (contr.f < std::min(refl.f, worst.f)) {
                simplex.back() = std::move(contr);
            } else {
                // shrink toward the best vertex
                for (std::size_t v = 1; v <= k; ++v) {
                    for (std::size_t i = 0; i < k; ++i)
                        simplex[v].x[i] = simplex[0].x[i] + 0.5 * (simplex[v].x[i] - simplex[0].x[i]);
                    clip(simplex[v].x);
                    simplex[v].f = f(simplex[v].x);
                    note_best(simplex[v]);
                }
            }
        }
        order();
        best.best_trace.push_back(best.f);
    }
    best.iterations = it;
    return best;
}

} // namespace gdpcast::opt
