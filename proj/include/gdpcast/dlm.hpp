#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gdpcast/errors.hpp"
#include "gdpcast/math.hpp"
#include "gdpcast/metrics.hpp"
#include "gdpcast/rng.hpp"
#include "gdpcast/time_series.hpp"

namespace gdpcast::dlm {

namespace detail {

/// Moore-Penrose pseudo-inverse; singular values below tol * s_max are nulled.
inline Eigen::MatrixXd pinv(const Eigen::MatrixXd& M, double tol = 1e-12) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return Eigen::MatrixXd::Zero(M.cols(), M.rows());
    const double cutoff = tol * sv(0);
    Eigen::VectorXd inv(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) inv(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

inline void check_psd(const Eigen::MatrixXd& M, const char* name) {
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + M.cwiseAbs().maxCoeff()))
        throw InputError(std::string("DlmSpec: ") + name + " is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10 * (1.0 + M.cwiseAbs().maxCoeff()))
        throw InputError(std::string("DlmSpec: ") + name + " is not PSD");
}

/// Draw from N(mean, cov) via eigen square root; tiny negative eigenvalues
/// from roundoff are clamped to zero, so PSD-singular covariances are fine.
inline Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                  Rng& rng) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (cov + cov.transpose()));
    Eigen::VectorXd sd = es.eigenvalues();
    for (Eigen::Index i = 0; i < sd.size(); ++i) sd(i) = sd(i) > 0.0 ? std::sqrt(sd(i)) : 0.0;
    Eigen::VectorXd z(mean.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    return mean + es.eigenvectors() * sd.asDiagonal() * z;
}

} // namespace detail

/**
 * Constant-coefficient univariate Gaussian state-space model:
 *   y_t     = F theta_t + v_t,        v_t ~ N(0, V)
 *   theta_t = G theta_{t-1} + w_t,    w_t ~ N(0, W)
 *   theta_0 ~ N(m0, C0)
 */
struct DlmSpec {
    Eigen::RowVectorXd F;
    Eigen::MatrixXd G;
    double V = 0.0;
    Eigen::MatrixXd W;
    Eigen::VectorXd m0;
    Eigen::MatrixXd C0;

    DlmSpec(Eigen::RowVectorXd F_, Eigen::MatrixXd G_, double V_, Eigen::MatrixXd W_,
            Eigen::VectorXd m0_, Eigen::MatrixXd C0_)
        : F(std::move(F_)), G(std::move(G_)), V(V_), W(std::move(W_)), m0(std::move(m0_)),
          C0(std::move(C0_)) {
        const Eigen::Index p = F.cols();
        if (p < 1) throw InputError("DlmSpec: empty state");
        if (G.rows() != p || G.cols() != p || W.rows() != p || W.cols() != p || m0.size() != p ||
            C0.rows() != p || C0.cols() != p)
            throw InputError("DlmSpec: inconsistent dimensions");
        if (!(V >= 0.0)) throw InputError("DlmSpec: V must be >= 0");
        if (!W.allFinite() || !G.allFinite() || !C0.allFinite() || !m0.allFinite() ||
            !F.allFinite())
            throw InputError("DlmSpec: non-finite entry");
        detail::check_psd(W, "W");
        detail::check_psd(C0, "C0");
    }

    Eigen::Index dim() const { return F.cols(); }
};

/// Local linear trend plus sum-to-zero quarterly seasonal. State is
/// (mu_t, beta_t, gamma_t, gamma_{t-1}, gamma_{t-2}); only the first three
/// state components receive innovation noise.
inline DlmSpec build_trend_seasonal(const Eigen::VectorXd& m0, const Eigen::MatrixXd& C0, double V,
                                    const std::array<double, 5>& W_diag) {
    if (m0.size() != 5 || C0.rows() != 5 || C0.cols() != 5)
        throw InputError("build_trend_seasonal: state dimension must be 5");
    if (W_diag[3] != 0.0 || W_diag[4] != 0.0)
        throw InputError("build_trend_seasonal: last two W entries must be zero");
    Eigen::RowVectorXd F(5);
    F << 1, 0, 1, 0, 0;
    Eigen::MatrixXd G(5, 5);
    G << 1, 1, 0, 0, 0,
         0, 1, 0, 0, 0,
         0, 0, -1, -1, -1,
         0, 0, 1, 0, 0,
         0, 0, 0, 1, 0;
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(5, 5);
    for (int i = 0; i < 5; ++i) W(i, i) = W_diag[static_cast<std::size_t>(i)];
    return DlmSpec(F, G, V, W, m0, C0);
}

/**
 * Filter output: one-step predictions (a, R, f, Q) for t = 1..n at index t-1,
 * filtered moments (m, C) for t = 0..n with the prior at index 0, and the
 * total predictive log-likelihood.
 */
struct FilterResult {
    std::vector<Eigen::VectorXd> a;
    std::vector<Eigen::MatrixXd> R;
    std::vector<double> f;
    std::vector<double> Q;
    std::vector<Eigen::VectorXd> m;
    std::vector<Eigen::MatrixXd> C;
    double loglik = 0.0;
};

namespace detail {
// Q_t at or below this is treated as an exactly deterministic observation.
inline constexpr double kDegenerateQ = 1e-300;
} // namespace detail

inline FilterResult kalman_filter(const DlmSpec& spec, std::span<const double> y) {
    const std::size_t n = y.size();
    if (n == 0) throw InputError("kalman_filter: empty series");
    FilterResult r;
    r.a.reserve(n);
    r.R.reserve(n);
    r.f.reserve(n);
    r.Q.reserve(n);
    r.m.reserve(n + 1);
    r.C.reserve(n + 1);
    r.m.push_back(spec.m0);
    r.C.push_back(spec.C0);
    constexpr double log2pi = 1.8378770664093454836;
    for (std::size_t t = 0; t < n; ++t) {
        const Eigen::VectorXd a = spec.G * r.m.back();
        Eigen::MatrixXd R = spec.G * r.C.back() * spec.G.transpose() + spec.W;
        R = 0.5 * (R + R.transpose());
        const double f = spec.F.dot(a);
        const Eigen::VectorXd RFt = R * spec.F.transpose();
        const double Q = spec.F.dot(RFt) + spec.V;
        const double e = y[t] - f;
        Eigen::VectorXd m;
        Eigen::MatrixXd C;
        if (Q <= detail::kDegenerateQ) {
            // A deterministic observation is acceptable only if nothing would
            // flow through the (undefined) gain and the data agree with it.
            if (RFt.cwiseAbs().maxCoeff() > detail::kDegenerateQ)
                throw NumericalError("kalman_filter: degenerate forecast variance at t=" +
                                     std::to_string(t + 1));
            if (e * e > 1e-16 * std::max(1.0, y[t] * y[t]))
                throw NumericalError(
                    "kalman_filter: observation contradicts deterministic prediction at t=" +
                    std::to_string(t + 1));
            m = a;
            C = R;
        } else {
            const Eigen::VectorXd K = RFt / Q;
            m = a + K * e;
            C = R - K * RFt.transpose();
            C = 0.5 * (C + C.transpose());
            r.loglik += -0.5 * (log2pi + std::log(Q) + e * e / Q);
        }
        if (!m.allFinite() || !std::isfinite(r.loglik))
            throw NumericalError("kalman_filter: non-finite recursion at t=" + std::to_string(t + 1));
        r.a.push_back(a);
        r.R.push_back(std::move(R));
        r.f.push_back(f);
        r.Q.push_back(Q);
        r.m.push_back(std::move(m));
        r.C.push_back(std::move(C));
    }
    return r;
}

inline FilterResult kalman_filter(const DlmSpec& spec, const TimeSeries& y) {
    return kalman_filter(spec, y.span());
}

/// Smoothed moments for t = 0..n (index 0 is the smoothed initial state).
struct SmoothResult {
    std::vector<Eigen::VectorXd> mean;
    std::vector<Eigen::MatrixXd> cov;
};

/// Rauch-Tung-Striebel backward pass; singular R_{t+1} handled by
/// pseudo-inverse so degenerate (W = 0) specs smooth cleanly.
inline SmoothResult kalman_smoother(const DlmSpec& spec, const FilterResult& fr) {
    const std::size_t n = fr.a.size();
    SmoothResult s;
    s.mean.assign(n + 1, Eigen::VectorXd());
    s.cov.assign(n + 1, Eigen::MatrixXd());
    s.mean[n] = fr.m[n];
    s.cov[n] = fr.C[n];
    for (std::size_t t = n; t-- > 0;) {
        const Eigen::MatrixXd J = fr.C[t] * spec.G.transpose() * detail::pinv(fr.R[t], 1e-12);
        s.mean[t] = fr.m[t] + J * (s.mean[t + 1] - fr.a[t]);
        Eigen::MatrixXd S = fr.C[t] + J * (s.cov[t + 1] - fr.R[t]) * J.transpose();
        s.cov[t] = 0.5 * (S + S.transpose());
    }
    return s;
}

/// One joint draw of theta_{0..n} by forward filtering, backward sampling.
inline std::vector<Eigen::VectorXd> ffbs(const DlmSpec& spec, std::span<const double> y, Rng& rng) {
    const FilterResult fr = kalman_filter(spec, y);
    const std::size_t n = fr.a.size();
    std::vector<Eigen::VectorXd> theta(n + 1);
    theta[n] = detail::sample_mvn(fr.m[n], fr.C[n], rng);
    for (std::size_t t = n; t-- > 0;) {
        const Eigen::MatrixXd J = fr.C[t] * spec.G.transpose() * detail::pinv(fr.R[t], 1e-12);
        const Eigen::VectorXd h = fr.m[t] + J * (theta[t + 1] - fr.a[t]);
        const Eigen::MatrixXd H = fr.C[t] - J * fr.R[t] * J.transpose();
        theta[t] = detail::sample_mvn(h, H, rng);
    }
    return theta;
}

inline std::vector<Eigen::VectorXd> ffbs(const DlmSpec& spec, std::span<const double> y,
                                         std::uint64_t seed) {
    Rng rng(seed);
    return ffbs(spec, y, rng);
}

/// Draw from IG(shape, rate), density x^{-shape-1} exp(-rate/x).
inline double sample_inverse_gamma(double shape, double rate, Rng& rng) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw InputError("sample_inverse_gamma: shape and rate must be > 0");
    return rate / (rng.gamma(shape));
}

/// Inverse-gamma prior stated as (mean a, variance b); the full conditionals
/// turn these into pseudo-counts shape = a^2/b, rate = a/b.
struct IgPrior {
    double a = 1.0;
    double b = 1.0;
};

struct VariancePriors {
    IgPrior obs;    // sigma^2
    IgPrior level;  // sigma_mu^2
    IgPrior slope;  // sigma_beta^2
    IgPrior season; // sigma_gamma^2
};

/// Gibbs draws of (sigma^2, sigma_mu^2, sigma_beta^2, sigma_gamma^2); all
/// n_iter draws are kept, retained() views the post-burn-in tail.
struct GibbsChain {
    std::vector<std::array<double, 4>> draws;
    int n_iter = 0;
    int burn_in = 0;
    std::uint64_t seed = 0;

    std::span<const std::array<double, 4>> retained() const {
        return std::span<const std::array<double, 4>>(draws).subspan(
            static_cast<std::size_t>(burn_in));
    }

    std::array<double, 4> retained_means() const {
        std::array<double, 4> m{0, 0, 0, 0};
        const auto r = retained();
        for (const auto& d : r)
            for (int i = 0; i < 4; ++i) m[static_cast<std::size_t>(i)] += d[static_cast<std::size_t>(i)];
        for (auto& v : m) v /= static_cast<double>(r.size());
        return m;
    }
};

/// Priors used when the caller does not supply any: prior mean = sample
/// variance of the differenced series for sigma^2, 1 for the state variances,
/// prior variance = 10 a^2 each (weakly informative).
inline VariancePriors default_priors(const TimeSeries& y) {
    if (y.size() < 2) throw InputError("default_priors: need at least 2 observations");
    std::vector<double> d(y.size() - 1);
    for (std::size_t t = 1; t < y.size(); ++t) d[t - 1] = y[t] - y[t - 1];
    double a = math::variance(d);
    if (!(a > 0.0)) a = 1.0;
    VariancePriors p;
    p.obs = {a, 10.0 * a * a};
    p.level = {1.0, 10.0};
    p.slope = {1.0, 10.0};
    p.season = {1.0, 10.0};
    return p;
}

/**
 * Gibbs sampler over (states, sigma^2, sigma_mu^2, sigma_beta^2,
 * sigma_gamma^2) for the trend+seasonal model. Each sweep draws the full state
 * path by FFBS at the current variances, then each variance from its
 * inverse-gamma full conditional
 *   IG(a^2/b + n/2, a/b + SS/2)
 * with SS_y = sum (y_t - F theta_t)^2 and SS_i = sum (theta_{t,i} -
 * (G theta_{t-1})_i)^2, t = 1..n. Initial variances are the prior means.
 */
inline GibbsChain gibbs(const TimeSeries& y, const VariancePriors& priors, int n_iter, int burn_in,
                        std::uint64_t seed, const Eigen::VectorXd& m0, const Eigen::MatrixXd& C0) {
    const std::size_t n = y.size();
    if (n < 8) throw InputError("gibbs: need at least 8 observations");
    if (!(n_iter > burn_in) || burn_in < 0)
        throw InputError("gibbs: require n_iter > burn_in >= 0");
    const std::array<const IgPrior*, 4> pr = {&priors.obs, &priors.level, &priors.slope,
                                              &priors.season};
    for (const auto* p : pr)
        if (!(p->a > 0.0) || !(p->b > 0.0))
            throw InputError("gibbs: prior means and variances must be > 0");

    GibbsChain chain;
    chain.n_iter = n_iter;
    chain.burn_in = burn_in;
    chain.seed = seed;
    chain.draws.reserve(static_cast<std::size_t>(n_iter));

    Rng rng(seed);
    std::array<double, 4> v = {priors.obs.a, priors.level.a, priors.slope.a, priors.season.a};
    const double nd = static_cast<double>(n);
    for (int it = 0; it < n_iter; ++it) {
        const DlmSpec spec = build_trend_seasonal(m0, C0, v[0], {v[1], v[2], v[3], 0.0, 0.0});
        const auto theta = ffbs(spec, y.span(), rng);
        double ss_y = 0.0;
        std::array<double, 3> ss_th = {0.0, 0.0, 0.0};
        for (std::size_t t = 1; t <= n; ++t) {
            const double e = y[t - 1] - spec.F.dot(theta[t]);
            ss_y += e * e;
            const Eigen::VectorXd pred = spec.G * theta[t - 1];
            for (int i = 0; i < 3; ++i) {
                const double w = theta[t](i) - pred(i);
                ss_th[static_cast<std::size_t>(i)] += w * w;
            }
        }
        if (!std::isfinite(ss_y) || !std::isfinite(ss_th[0] + ss_th[1] + ss_th[2]))
            throw NumericalError("gibbs: non-finite sum of squares at iteration " +
                                 std::to_string(it));
        const std::array<double, 4> ss = {ss_y, ss_th[0], ss_th[1], ss_th[2]};
        for (int i = 0; i < 4; ++i) {
            const IgPrior& p = *pr[static_cast<std::size_t>(i)];
            const double shape = p.a * p.a / p.b + nd / 2.0;
            const double rate = p.a / p.b + 0.5 * ss[static_cast<std::size_t>(i)];
            v[static_cast<std::size_t>(i)] = sample_inverse_gamma(shape, rate, rng);
        }
        chain.draws.push_back(v);
    }
    return chain;
}

/// Convenience overload with the documented diffuse defaults
/// m0 = (y_1, 0, 0, 0, 0), C0 = 1e7 * I.
inline GibbsChain gibbs(const TimeSeries& y, const VariancePriors& priors, int n_iter = 5000,
                        int burn_in = 1000, std::uint64_t seed = 1) {
    Eigen::VectorXd m0 = Eigen::VectorXd::Zero(5);
    m0(0) = y[0];
    const Eigen::MatrixXd C0 = 1e7 * Eigen::MatrixXd::Identity(5, 5);
    return gibbs(y, priors, n_iter, burn_in, seed, m0, C0);
}

/// Cumulative means of the retained draws, one sequence per parameter.
inline std::array<std::vector<double>, 4> ergodic_means(const GibbsChain& chain) {
    const auto r = chain.retained();
    if (r.empty()) throw InputError("ergodic_means: empty chain");
    std::array<std::vector<double>, 4> out;
    for (auto& v : out) v.reserve(r.size());
    std::array<double, 4> acc = {0, 0, 0, 0};
    for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            acc[j] += r[i][j];
            out[j].push_back(acc[j] / static_cast<double>(i + 1));
        }
    }
    return out;
}

/**
 * Posterior-predictive forecast: for each retained draw (thinned to at most
 * 500 equally spaced), plug the variances into the spec, filter, and propagate
 * (a, R) forward h steps; the predictive law is the equally weighted Gaussian
 * mixture over draws. Point forecast is the exact mixture mean; interval
 * bounds are Monte-Carlo mixture quantiles (2000 samples per component),
 * deterministic given chain.seed.
 */
inline ForecastResult dlm_forecast(const DlmSpec& spec_template, const GibbsChain& chain,
                                   const TimeSeries& y, int h, double level) {
    if (h < 1) throw InputError("dlm_forecast: h must be >= 1");
    if (!(level > 0.0 && level < 1.0)) throw InputError("dlm_forecast: level must be in (0,1)");
    const auto retained = chain.retained();
    if (retained.empty()) throw InputError("dlm_forecast: empty chain");
    const std::size_t stride = (retained.size() + 499) / 500;
    std::vector<std::array<double, 4>> comps;
    for (std::size_t i = 0; i < retained.size(); i += stride) comps.push_back(retained[i]);

    const std::size_t hs = static_cast<std::size_t>(h);
    // per horizon, per component: predictive mean and variance
    std::vector<std::vector<double>> mean(hs), var(hs);
    for (auto& v : mean) v.reserve(comps.size());
    for (auto& v : var) v.reserve(comps.size());
    for (const auto& c : comps) {
        DlmSpec spec = spec_template;
        spec.V = c[0];
        spec.W(0, 0) = c[1];
        spec.W(1, 1) = c[2];
        spec.W(2, 2) = c[3];
        const FilterResult fr = kalman_filter(spec, y.span());
        Eigen::VectorXd a = fr.m.back();
        Eigen::MatrixXd P = fr.C.back();
        for (std::size_t j = 0; j < hs; ++j) {
            a = spec.G * a;
            P = spec.G * P * spec.G.transpose() + spec.W;
            P = 0.5 * (P + P.transpose());
            mean[j].push_back(spec.F.dot(a));
            var[j].push_back(std::max(0.0, spec.F.dot(P * spec.F.transpose()) + spec.V));
        }
    }

    std::vector<double> pts(hs), lo(hs), hi(hs);
    const double plo = (1.0 - level) / 2.0;
    const double phi = 1.0 - plo;
    Rng rng(chain.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<double> samples;
    samples.reserve(comps.size() * 2000);
    for (std::size_t j = 0; j < hs; ++j) {
        pts[j] = math::mean(mean[j]);
        samples.clear();
        for (std::size_t k = 0; k < comps.size(); ++k) {
            const double sd = std::sqrt(var[j][k]);
            for (int s = 0; s < 2000; ++s) samples.push_back(mean[j][k] + sd * rng.normal());
        }
        std::sort(samples.begin(), samples.end());
        lo[j] = math::quantile_sorted(samples, plo);
        hi[j] = math::quantile_sorted(samples, phi);
        // the MC mixture quantiles must bracket the exact mixture mean
        lo[j] = std::min(lo[j], pts[j]);
        hi[j] = std::max(hi[j], pts[j]);
    }
    TimeSeries points = y.continuation(std::move(pts));
    TimeSeries lower = y.continuation(std::move(lo));
    TimeSeries upper = y.continuation(std::move(hi));
    return ForecastResult(std::move(points), std::move(lower), std::move(upper), level, "dlm");
}

} // namespace gdpcast::dlm
