#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gdpcast/dlm.hpp"
#include "gdpcast/errors.hpp"
#include "gdpcast/math.hpp"
#include "gdpcast/metrics.hpp"
#include "gdpcast/nelder_mead.hpp"
#include "gdpcast/time_series.hpp"
#include "gdpcast/transforms.hpp"

namespace gdpcast::sarima {

struct SarimaOrder {
    int p = 0, d = 0, q = 0;
    int P = 0, D = 0, Q = 0;
    int s = 4;

    void validate() const {
        if (p < 0 || d < 0 || q < 0 || P < 0 || D < 0 || Q < 0)
            throw InputError("SarimaOrder: orders must be >= 0");
        if (s < 2) throw InputError("SarimaOrder: seasonal period must be >= 2");
        if (d + D > 2) throw InputError("SarimaOrder: d + D must not exceed 2");
    }

    int n_coef() const { return p + q + P + Q; }
    std::string label() const {
        return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) +
               ")(" + std::to_string(P) + "," + std::to_string(D) + "," + std::to_string(Q) +
               ")" + std::to_string(s);
    }
};

namespace detail {

/// Multiply two monic polynomials given as coefficient tails (constant 1
/// implicit, c[i] is the coefficient of B^{i+1}).
inline std::vector<double> poly_mul_monic(const std::vector<double>& a,
                                          const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t j = 0; j < b.size(); ++j) out[j] += b[j];
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j + 1] += a[i] * b[j];
    return out;
}

/// Coefficient tail of a seasonal factor: value v_k at lag (k+1)*s.
inline std::vector<double> seasonal_tail(const std::vector<double>& v, int s) {
    if (v.empty()) return {};
    std::vector<double> out(v.size() * static_cast<std::size_t>(s), 0.0);
    for (std::size_t k = 0; k < v.size(); ++k)
        out[(k + 1) * static_cast<std::size_t>(s) - 1] = v[k];
    return out;
}

/// All roots of 1 + c_1 B + ... + c_k B^k outside the closed unit circle with
/// the given margin (companion spectral radius <= 1 - margin).
inline bool roots_outside_unit(const std::vector<double>& tail, double margin = 1e-6) {
    std::size_t k = tail.size();
    while (k > 0 && tail[k - 1] == 0.0) --k; // drop exact-zero leading coefficients
    if (k == 0) return true;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                                 static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) comp(0, static_cast<Eigen::Index>(i)) = -tail[i];
    for (std::size_t i = 1; i < k; ++i)
        comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    double radius = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        radius = std::max(radius, std::abs(es.eigenvalues()(i)));
    return radius <= 1.0 - margin;
}

/// Levinson recursion from partial autocorrelations r (all |r|<1) to the
/// coefficients phi of a stationary AR polynomial 1 - phi_1 B - ... .
inline std::vector<double> pacf_to_ar(const std::vector<double>& r) {
    std::vector<double> phi(r.size(), 0.0), prev;
    for (std::size_t k = 0; k < r.size(); ++k) {
        prev.assign(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(k));
        phi[k] = r[k];
        for (std::size_t j = 0; j < k; ++j) phi[j] = prev[j] - r[k] * prev[k - 1 - j];
    }
    return phi;
}

/// Coefficient tail of (1-B)^d (1-B^s)^D.
inline std::vector<double> differencing_tail(int d, int D, int s) {
    std::vector<double> out; // monic tail of the accumulated product
    for (int i = 0; i < d; ++i) out = poly_mul_monic(out, {-1.0});
    std::vector<double> seas(static_cast<std::size_t>(s), 0.0);
    seas[static_cast<std::size_t>(s) - 1] = -1.0;
    for (int i = 0; i < D; ++i) out = poly_mul_monic(out, seas);
    return out;
}

} // namespace detail

/**
 * A fully specified SARIMA model. Sign conventions:
 *   AR side  phi(B)  = 1 - phi_1 B - ...   Phi(B^s)   = 1 - Phi_1 B^s - ...
 *   MA side  theta(B) = 1 + theta_1 B + ... Theta(B^s) = 1 + Theta_1 B^s + ...
 * Construction verifies stationarity and invertibility of the expanded
 * polynomials with root margin 1e-6.
 */
struct SarimaModel {
    SarimaOrder order;
    std::vector<double> phi, theta, Phi, Theta;
    double sigma2 = 1.0;
    double loglik = 0.0;
    double aic = 0.0;
};

/// Dense coefficient tails of phi(B)Phi(B^s) and theta(B)Theta(B^s); the
/// implicit constant 1 is excluded, minus signs of the AR convention included.
inline std::pair<std::vector<double>, std::vector<double>>
expand(const SarimaOrder& order, const std::vector<double>& phi, const std::vector<double>& theta,
       const std::vector<double>& Phi, const std::vector<double>& Theta) {
    order.validate();
    if (phi.size() != static_cast<std::size_t>(order.p) ||
        theta.size() != static_cast<std::size_t>(order.q) ||
        Phi.size() != static_cast<std::size_t>(order.P) ||
        Theta.size() != static_cast<std::size_t>(order.Q))
        throw InputError("expand: coefficient lengths do not match the order");
    std::vector<double> ar_tail(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) ar_tail[i] = -phi[i];
    std::vector<double> sar(Phi.size());
    for (std::size_t i = 0; i < Phi.size(); ++i) sar[i] = -Phi[i];
    const auto ar_full = detail::poly_mul_monic(ar_tail, detail::seasonal_tail(sar, order.s));
    const auto ma_full = detail::poly_mul_monic(theta, detail::seasonal_tail(Theta, order.s));
    return {ar_full, ma_full};
}

inline std::pair<std::vector<double>, std::vector<double>> expand(const SarimaModel& m) {
    return expand(m.order, m.phi, m.theta, m.Phi, m.Theta);
}

/// Throws ModelError unless the model is stationary and invertible.
inline void check_admissible(const SarimaModel& m) {
    const auto [ar_full, ma_full] = expand(m);
    if (!detail::roots_outside_unit(ar_full))
        throw ModelError("sarima: AR polynomial root inside the unit circle for " +
                         m.order.label());
    if (!detail::roots_outside_unit(ma_full))
        throw ModelError("sarima: MA polynomial root inside the unit circle for " +
                         m.order.label());
    if (!(m.sigma2 > 0.0)) throw ModelError("sarima: sigma2 must be > 0");
}

/**
 * Companion (Harvey) state-space form of the ARMA part, for the series after
 * differencing: state dimension r = max(p+sP, q+sQ+1), F = e_1', G has the
 * negated AR tail in its first column and an identity superdiagonal, state
 * noise loading R = (1, ma_full...), W = sigma2 R R', V = 0. C0 solves the
 * discrete Lyapunov equation, so filtering starts from the stationary law.
 */
inline dlm::DlmSpec to_state_space(const SarimaModel& m) {
    check_admissible(m);
    const auto [ar_full, ma_full] = expand(m);
    const std::size_t r =
        std::max(ar_full.size(), ma_full.size() + 1);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r),
                                              static_cast<Eigen::Index>(r));
    for (std::size_t i = 0; i < ar_full.size(); ++i)
        G(static_cast<Eigen::Index>(i), 0) = -ar_full[i];
    for (std::size_t i = 0; i + 1 < r; ++i)
        G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = 1.0;
    Eigen::VectorXd Rv = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(r));
    Rv(0) = 1.0;
    for (std::size_t i = 0; i < ma_full.size(); ++i)
        Rv(static_cast<Eigen::Index>(i + 1)) = ma_full[i];
    Eigen::MatrixXd W = m.sigma2 * (Rv * Rv.transpose());
    Eigen::RowVectorXd F = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(r));
    F(0) = 1.0;

    // stationary C0: vec(C0) = (I - G (x) G)^{-1} vec(W)
    const Eigen::Index rr = static_cast<Eigen::Index>(r);
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(rr * rr, rr * rr);
    for (Eigen::Index i = 0; i < rr; ++i)
        for (Eigen::Index j = 0; j < rr; ++j)
            for (Eigen::Index k = 0; k < rr; ++k)
                for (Eigen::Index l = 0; l < rr; ++l)
                    A(i * rr + k, j * rr + l) -= G(i, j) * G(k, l);
    Eigen::VectorXd w(rr * rr);
    for (Eigen::Index j = 0; j < rr; ++j)
        for (Eigen::Index k = 0; k < rr; ++k) w(j * rr + k) = W(k, j);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible())
        throw ModelError("sarima: Lyapunov solve failed (non-stationary AR part) for " +
                         m.order.label());
    const Eigen::VectorXd c = lu.solve(w);
    Eigen::MatrixXd C0(rr, rr);
    for (Eigen::Index j = 0; j < rr; ++j)
        for (Eigen::Index k = 0; k < rr; ++k) C0(k, j) = c(j * rr + k);
    C0 = 0.5 * (C0 + C0.transpose());
    if ((C0 - G * C0 * G.transpose() - W).cwiseAbs().maxCoeff() >
        1e-6 * (1.0 + W.cwiseAbs().maxCoeff()))
        throw ModelError("sarima: Lyapunov residual too large for " + m.order.label());

    return dlm::DlmSpec(F, G, 0.0, W, Eigen::VectorXd::Zero(rr), C0);
}

namespace detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ConcentratedEval {
    double loglik = kNegInf; // concentrated Gaussian log-likelihood
    double sigma2 = 0.0;     // analytically maximizing innovation variance
};

/// Kalman evaluation at unit innovation variance with sigma2 concentrated out.
inline ConcentratedEval concentrated_loglik(const SarimaOrder& order,
                                            const std::vector<double>& phi,
                                            const std::vector<double>& theta,
                                            const std::vector<double>& Phi,
                                            const std::vector<double>& Theta,
                                            std::span<const double> w) {
    SarimaModel unit{order, phi, theta, Phi, Theta, 1.0, 0.0, 0.0};
    ConcentratedEval ev;
    try {
        const dlm::DlmSpec spec = to_state_space(unit);
        const dlm::FilterResult fr = dlm::kalman_filter(spec, w);
        const double n = static_cast<double>(w.size());
        double sum_sq = 0.0, sum_logq = 0.0;
        for (std::size_t t = 0; t < w.size(); ++t) {
            const double e = w[t] - fr.f[t];
            sum_sq += e * e / fr.Q[t];
            sum_logq += std::log(fr.Q[t]);
        }
        const double s2 = sum_sq / n;
        if (!(s2 > 0.0) || !std::isfinite(s2) || !std::isfinite(sum_logq)) return ev;
        constexpr double log2pi = 1.8378770664093454836;
        ev.loglik = -0.5 * (n * (log2pi + 1.0 + std::log(s2)) + sum_logq);
        ev.sigma2 = s2;
    } catch (const Error&) {
        ev.loglik = kNegInf; // inadmissible parameters: sentinel, never abort
    }
    return ev;
}

/// Unconstrained optimizer coordinates -> coefficient blocks via tanh + Levinson.
struct ParamMap {
    SarimaOrder order;

    struct Blocks {
        std::vector<double> phi, theta, Phi, Theta;
    };

    Blocks operator()(std::span<const double> u) const {
        const auto take = [&u](std::size_t& pos, int count) {
            std::vector<double> r(static_cast<std::size_t>(count));
            for (auto& v : r) {
                v = std::tanh(u[pos++]);
                v = std::clamp(v, -(1.0 - 1e-5), 1.0 - 1e-5);
            }
            return pacf_to_ar(r);
        };
        std::size_t pos = 0;
        Blocks b;
        b.phi = take(pos, order.p);
        auto ma = take(pos, order.q);
        b.theta.resize(ma.size());
        for (std::size_t i = 0; i < ma.size(); ++i) b.theta[i] = -ma[i];
        b.Phi = take(pos, order.P);
        auto sma = take(pos, order.Q);
        b.Theta.resize(sma.size());
        for (std::size_t i = 0; i < sma.size(); ++i) b.Theta[i] = -sma[i];
        return b;
    }
};

} // namespace detail

/**
 * Exact Gaussian log-likelihood of (phi, theta, Phi, Theta, sigma2), packed in
 * that block order, for the series differenced per the order. Inadmissible
 * parameter vectors yield -inf rather than an exception, so optimizers may
 * probe freely.
 */
inline double loglik(const SarimaOrder& order, std::span<const double> params,
                     const TimeSeries& s) {
    order.validate();
    if (params.size() != static_cast<std::size_t>(order.n_coef() + 1))
        throw InputError("sarima::loglik: expected " + std::to_string(order.n_coef() + 1) +
                         " parameters");
    const auto w = difference(s, order.d, order.D, order.s).series;
    if (w.size() < static_cast<std::size_t>(order.n_coef() + 1) + 2)
        throw InputError("sarima::loglik: differenced series too short");
    std::size_t pos = 0;
    const auto block = [&](int count) {
        std::vector<double> r(params.begin() + static_cast<std::ptrdiff_t>(pos),
                              params.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(count)));
        pos += static_cast<std::size_t>(count);
        return r;
    };
    SarimaModel m{order, block(order.p), block(order.q), block(order.P), block(order.Q),
                  params[pos], 0.0, 0.0};
    if (!(m.sigma2 > 0.0)) return detail::kNegInf;
    try {
        const dlm::DlmSpec spec = to_state_space(m);
        const dlm::FilterResult fr = dlm::kalman_filter(spec, w.span());
        return fr.loglik;
    } catch (const Error&) {
        return detail::kNegInf;
    }
}

/**
 * Maximum-likelihood fit: Nelder-Mead over unconstrained coordinates mapped
 * through partial autocorrelations (stationary/invertible by construction),
 * sigma2 concentrated out analytically, deterministic start at all-zeros.
 */
inline SarimaModel fit(const SarimaOrder& order, const TimeSeries& s) {
    order.validate();
    const auto w_ts = difference(s, order.d, order.D, order.s).series;
    const std::span<const double> w = w_ts.span();
    const int k = order.n_coef();
    if (w.size() < static_cast<std::size_t>(k) + 3)
        throw InputError("sarima::fit: differenced series too short for " + order.label());

    const detail::ParamMap map{order};
    const auto objective = [&](std::span<const double> u) {
        const auto b = map(u);
        const auto ev = detail::concentrated_loglik(order, b.phi, b.theta, b.Phi, b.Theta, w);
        return std::isfinite(ev.loglik) ? -ev.loglik : 1e300;
    };

    std::vector<double> u_best(static_cast<std::size_t>(k), 0.0);
    if (k > 0) {
        const std::vector<double> u0(static_cast<std::size_t>(k), 0.0);
        if (objective(u0) >= 1e300)
            throw ModelError("sarima::fit: likelihood non-finite at the starting point for " +
                             order.label());
        opt::NMOptions o;
        o.max_iter = 1500;
        o.tol_f = 1e-11;
        o.tol_x = 1e-9;
        o.init_step = 0.25;
        const auto res = opt::nelder_mead(objective, u0, o);
        u_best = res.x;
    }
    const auto b = map(u_best);
    const auto ev = detail::concentrated_loglik(order, b.phi, b.theta, b.Phi, b.Theta, w);
    if (!std::isfinite(ev.loglik))
        throw ModelError("sarima::fit: optimizer returned non-finite likelihood for " +
                         order.label());
    SarimaModel m{order, b.phi, b.theta, b.Phi, b.Theta, ev.sigma2, ev.loglik, 0.0};
    check_admissible(m);
    m.aic = -2.0 * ev.loglik + 2.0 * (k + 1);
    return m;
}

/// One grid-search cell: the attempted order plus either a model or the error.
struct GridEntry {
    SarimaOrder order;
    bool ok = false;
    SarimaModel model;
    std::string error;
};

/**
 * The sixteen-model search: all (p,q,P,Q) in {0,1}^4 at fixed (d, D, s),
 * ranked by ascending AIC with ties broken by fewer parameters then
 * lexicographic (p,q,P,Q). Failed cells sort last, in order of attempt.
 */
inline std::vector<GridEntry> grid_search(const TimeSeries& s, int d, int D, int s_period) {
    std::vector<GridEntry> entries;
    for (int p = 0; p <= 1; ++p)
        for (int q = 0; q <= 1; ++q)
            for (int P = 0; P <= 1; ++P)
                for (int Q = 0; Q <= 1; ++Q) {
                    GridEntry e;
                    e.order = SarimaOrder{p, d, q, P, D, Q, s_period};
                    try {
                        e.model = fit(e.order, s);
                        e.ok = true;
                    } catch (const Error& err) {
                        e.error = err.what();
                    }
                    entries.push_back(std::move(e));
                }
    const auto key = [](const GridEntry& e) {
        return std::make_tuple(e.ok ? 0 : 1, e.ok ? e.model.aic : 0.0, e.order.n_coef(),
                               e.order.p, e.order.q, e.order.P, e.order.Q);
    };
    std::stable_sort(entries.begin(), entries.end(),
                     [&key](const GridEntry& a, const GridEntry& b) { return key(a) < key(b); });
    if (!entries.front().ok) throw ModelError("sarima::grid_search: every candidate fit failed");
    return entries;
}

/// psi-weights of the integrated process theta(B)Theta(B^s) /
/// [phi(B)Phi(B^s)(1-B)^d(1-B^s)^D], weights 0..count-1.
inline std::vector<double> psi_weights(const SarimaModel& m, int count) {
    if (count < 1) throw InputError("psi_weights: count must be >= 1");
    const auto [ar_full, ma_full] = expand(m);
    const auto full_ar =
        detail::poly_mul_monic(ar_full, detail::differencing_tail(m.order.d, m.order.D, m.order.s));
    std::vector<double> psi(static_cast<std::size_t>(count), 0.0);
    psi[0] = 1.0;
    for (std::size_t j = 1; j < psi.size(); ++j) {
        double v = j <= ma_full.size() ? ma_full[j - 1] : 0.0;
        const std::size_t imax = std::min(j, full_ar.size());
        for (std::size_t i = 1; i <= imax; ++i) v -= full_ar[i - 1] * psi[j - i];
        psi[j] = v;
    }
    return psi;
}

/// One-step-ahead fitted values on the undifferenced (working) scale plus
/// standardized innovations; fitted starts d + D*s periods into the sample.
struct SarimaFitted {
    TimeSeries fitted;
    std::vector<double> std_residuals;
};

inline SarimaFitted fitted_values(const SarimaModel& m, const TimeSeries& s) {
    const auto dr = difference(s, m.order.d, m.order.D, m.order.s);
    const auto& w = dr.series;
    const dlm::DlmSpec spec = to_state_space(m);
    const dlm::FilterResult fr = dlm::kalman_filter(spec, w.span());
    std::vector<double> fitted(w.size()), stdres(w.size());
    const std::size_t off = s.size() - w.size();
    for (std::size_t t = 0; t < w.size(); ++t) {
        // the differencing remainder y_t - w_t is known from actual history
        fitted[t] = fr.f[t] + (s[off + t] - w[t]);
        stdres[t] = (w[t] - fr.f[t]) / std::sqrt(fr.Q[t]);
    }
    return {w.with_values(std::move(fitted)), std::move(stdres)};
}

/**
 * h-step forecast: state-space mean recursion on the differenced scale,
 * integrated back through (1-B)^d(1-B^s)^D against observed history; interval
 * variance sigma2 * sum_{j<h} psi_j^2 of the integrated process.
 */
inline ForecastResult forecast(const SarimaModel& m, const TimeSeries& s, int h, double level) {
    if (h < 1) throw InputError("sarima::forecast: h must be >= 1");
    if (!(level > 0.0 && level < 1.0))
        throw InputError("sarima::forecast: level must be in (0,1)");
    const auto dr = difference(s, m.order.d, m.order.D, m.order.s);
    const dlm::DlmSpec spec = to_state_space(m);
    const dlm::FilterResult fr = dlm::kalman_filter(spec, dr.series.span());
    Eigen::VectorXd a = fr.m.back();
    std::vector<double> w_pred(static_cast<std::size_t>(h));
    for (int j = 0; j < h; ++j) {
        a = spec.G * a;
        w_pred[static_cast<std::size_t>(j)] = spec.F.dot(a);
    }
    const std::vector<double> pts = integrate_forward(s, m.order.d, m.order.D, m.order.s, w_pred);

    const auto psi = psi_weights(m, h);
    const double z = math::normal_quantile(0.5 * (1.0 + level));
    std::vector<double> lo(pts.size()), hi(pts.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        acc += psi[j] * psi[j];
        const double half = z * std::sqrt(m.sigma2 * acc);
        lo[j] = pts[j] - half;
        hi[j] = pts[j] + half;
    }
    TimeSeries points = s.continuation(std::vector<double>(pts));
    TimeSeries lower = s.continuation(std::move(lo));
    TimeSeries upper = s.continuation(std::move(hi));
    return ForecastResult(std::move(points), std::move(lower), std::move(upper), level,
                          "sarima" + m.order.label());
}

} // namespace gdpcast::sarima
