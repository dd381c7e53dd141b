#pragma once

// Independent ARMA oracles:
//  * naive_poly_mul — schoolbook convolution of monic polynomials,
//  * psi_series     — MA(infinity) weights via an Eigen triangular Toeplitz
//                     solve (no handwritten recursion),
//  * toeplitz_loglik — dense Gaussian likelihood from truncated-psi
//                     autocovariances.
// Intended for models whose roots are comfortably outside the unit circle so
// the psi truncation error is negligible.

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// (1 + sum a_i B^i)(1 + sum b_j B^j) as a monic tail, schoolbook style.
inline std::vector<double> naive_poly_mul(const std::vector<double>& a,
                                          const std::vector<double>& b) {
    std::vector<double> full_a;
    full_a.push_back(1.0);
    full_a.insert(full_a.end(), a.begin(), a.end());
    std::vector<double> full_b;
    full_b.push_back(1.0);
    full_b.insert(full_b.end(), b.begin(), b.end());
    std::vector<double> prod(full_a.size() + full_b.size() - 1, 0.0);
    for (std::size_t i = 0; i < full_a.size(); ++i)
        for (std::size_t j = 0; j < full_b.size(); ++j) prod[i + j] += full_a[i] * full_b[j];
    return std::vector<double>(prod.begin() + 1, prod.end());
}

/// psi weights of theta(B)/phi(B): solve the lower-triangular Toeplitz system
/// built from the AR tail against the padded MA side.
inline std::vector<double> psi_series(const std::vector<double>& ar_tail,
                                      const std::vector<double>& ma_tail, int count) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(count, count);
    for (int i = 0; i < count; ++i) {
        L(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            const std::size_t lag = static_cast<std::size_t>(i - j);
            if (lag <= ar_tail.size()) L(i, j) = ar_tail[lag - 1];
        }
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);
    rhs(0) = 1.0;
    for (std::size_t j = 0; j < ma_tail.size() && j + 1 < static_cast<std::size_t>(count); ++j)
        rhs(static_cast<int>(j) + 1) = ma_tail[j];
    const Eigen::VectorXd psi = L.triangularView<Eigen::Lower>().solve(rhs);
    return std::vector<double>(psi.data(), psi.data() + count);
}

/// Autocovariances gamma_0..gamma_{max_lag} from truncated psi weights.
inline std::vector<double> arma_autocov(const std::vector<double>& ar_tail,
                                        const std::vector<double>& ma_tail, double sigma2,
                                        int max_lag, int truncation = 4000) {
    const std::vector<double> psi = psi_series(ar_tail, ma_tail, truncation + max_lag + 1);
    std::vector<double> gamma(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (int k = 0; k <= max_lag; ++k) {
        double acc = 0.0;
        for (int j = 0; j < truncation; ++j)
            acc += psi[static_cast<std::size_t>(j)] * psi[static_cast<std::size_t>(j + k)];
        gamma[static_cast<std::size_t>(k)] = sigma2 * acc;
    }
    return gamma;
}

/// Dense zero-mean Gaussian log-density with Toeplitz ARMA covariance.
inline double toeplitz_loglik(const std::vector<double>& y, const std::vector<double>& ar_tail,
                              const std::vector<double>& ma_tail, double sigma2) {
    const int n = static_cast<int>(y.size());
    const std::vector<double> gamma = arma_autocov(ar_tail, ma_tail, sigma2, n - 1);
    Eigen::MatrixXd S(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) S(i, j) = gamma[static_cast<std::size_t>(std::abs(i - j))];
    Eigen::VectorXd yv(n);
    for (int i = 0; i < n; ++i) yv(i) = y[static_cast<std::size_t>(i)];
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
    const Eigen::VectorXd d = ldlt.vectorD();
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) logdet += std::log(d(i));
    const double quad = yv.dot(ldlt.solve(yv));
    return -0.5 * (n * std::log(2.0 * M_PI) + logdet + quad);
}

} // namespace oracle
