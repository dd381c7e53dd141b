#pragma once

// Shared helpers for the test binaries: deterministic random generators for
// series/specs, temp-dir management, and a tiny subprocess runner.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gdpcast/dlm.hpp"
#include "gdpcast/time_series.hpp"

namespace testutil {

inline gdpcast::TimeSeries make_series(std::vector<double> v, int year = 2000, int period = 1,
                                       int m = 4) {
    return gdpcast::TimeSeries(std::move(v), gdpcast::CalendarPoint{year, period}, m);
}

inline std::vector<double> random_values(std::mt19937_64& g, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(g);
    return v;
}

/// Random well-conditioned DLM spec with state dim p: G scaled to spectral
/// radius < 1, W and C0 PSD by construction, V > 0.
inline gdpcast::dlm::DlmSpec random_spec(std::mt19937_64& g, int p) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd G(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) G(i, j) = u(g);
    const double rad = std::abs(G.eigenvalues()[0]);
    double maxrad = 0.0;
    for (int i = 0; i < p; ++i) maxrad = std::max(maxrad, std::abs(G.eigenvalues()[i]));
    (void)rad;
    if (maxrad > 1e-8) G *= 0.9 / std::max(1.0, maxrad);
    Eigen::MatrixXd A(p, p), B(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            A(i, j) = u(g);
            B(i, j) = u(g);
        }
    const Eigen::MatrixXd W = A * A.transpose() + 0.05 * Eigen::MatrixXd::Identity(p, p);
    const Eigen::MatrixXd C0 = B * B.transpose() + 0.05 * Eigen::MatrixXd::Identity(p, p);
    Eigen::RowVectorXd F(p);
    for (int i = 0; i < p; ++i) F(i) = u(g);
    Eigen::VectorXd m0(p);
    for (int i = 0; i < p; ++i) m0(i) = u(g);
    const double V = 0.2 + std::abs(u(g));
    return gdpcast::dlm::DlmSpec(F, G, V, W, m0, C0);
}

inline gdpcast::TimeSeries simulate_from_spec(std::mt19937_64& g, const gdpcast::dlm::DlmSpec& spec,
                                              int n) {
    std::normal_distribution<double> z(0.0, 1.0);
    const int p = static_cast<int>(spec.G.rows());
    const Eigen::LLT<Eigen::MatrixXd> lltC0(
        spec.C0 + 1e-12 * Eigen::MatrixXd::Identity(p, p));
    const Eigen::LLT<Eigen::MatrixXd> lltW(spec.W + 1e-12 * Eigen::MatrixXd::Identity(p, p));
    Eigen::VectorXd eps(p);
    for (int i = 0; i < p; ++i) eps(i) = z(g);
    Eigen::VectorXd theta = spec.m0 + lltC0.matrixL() * eps;
    std::vector<double> y;
    y.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        for (int i = 0; i < p; ++i) eps(i) = z(g);
        theta = spec.G * theta + lltW.matrixL() * eps;
        y.push_back(spec.F.dot(theta) + std::sqrt(spec.V) * z(g));
    }
    return make_series(std::move(y));
}

/// Fresh scratch directory under build/, wiped on construction.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name) : path(std::filesystem::path("build/tmp") / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

/// Run a command, return its exit code (-1 if it did not exit normally).
inline int run_cmd(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

} // namespace testutil
