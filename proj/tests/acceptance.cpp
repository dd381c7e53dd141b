// Acceptance suite: one PASS/FAIL line per release criterion, exit 0 only if
// every criterion holds. argv[1] is the path to the gdpcast binary, used by
// the pipeline criteria (6-8). All tolerances are pinned here, in code.
//
// Criteria:
//   1. Kalman filter/smoother match a dense joint-Gaussian oracle (1e-7,
//      100 random specs, dim <= 3, n <= 6) in under 10 s.
//   2. FFBS draw moments match the smoother within 4 Monte-Carlo standard
//      errors at every time point (20,000 draws) in under 60 s.
//   3. Gibbs 95% credible intervals cover each true variance in >= 17 of 20
//      seeded replications (n = 200, 5000/1000 sweeps) in under 15 min.
//   4. SARIMA ML estimates land within +/-0.06 of truth in >= 18 of 20 seeds
//      (n = 2000) and the true order ranks first by AIC in >= 80% of seeds,
//      in under 5 min.
//   5. hw_filter equals an independent recursion oracle to 1e-12 on 100
//      random instances; hw_optimize beats an 11^3 parameter grid.
//   6. Metric properties hold and every scorecard number is recomputable
//      from the emitted CSVs to 1e-9.
//   7. The default pipeline on the bundled fixture selects additive
//      Holt-Winters by SSE, emits a 16-row AIC-ranked grid, and scores the
//      DLM best on fitted RMSE/MAE/MAPE, in under 20 min.
//   8. Two identically-configured runs emit byte-identical CSVs.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gdpcast/gdpcast.hpp"
#include "support/oracle_hw.hpp"
#include "support/oracle_kalman.hpp"
#include "support/test_util.hpp"

using namespace gdpcast;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// harness
// ---------------------------------------------------------------------------

struct Clock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

bool g_all_pass = true;

void report(int criterion, bool pass, const std::string& note, double seconds) {
    std::printf("%s criterion %d: %s [%.1fs]\n", pass ? "PASS" : "FAIL", criterion, note.c_str(),
                seconds);
    std::fflush(stdout);
    g_all_pass = g_all_pass && pass;
}

template <typename Fn>
void run_criterion(int criterion, Fn&& fn) {
    Clock clock;
    try {
        const auto [pass, note] = fn(clock);
        report(criterion, pass, note, clock.seconds());
    } catch (const std::exception& e) {
        report(criterion, false, std::string("unexpected exception: ") + e.what(),
               clock.seconds());
    }
}

using Result = std::pair<bool, std::string>;

std::string fmt(const char* format, ...)
#if defined(__GNUC__)
    __attribute__((format(printf, 1, 2)))
#endif
    ;

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------------------
// simulators (self-contained so the criteria do not lean on library code
// beyond the object under test)
// ---------------------------------------------------------------------------

/// Trend + sum-to-zero quarterly seasonal with known variances.
TimeSeries simulate_structural(std::uint64_t seed, int n, double v_obs, double v_mu,
                               double v_beta, double v_gamma) {
    Rng rng(seed);
    double mu = 100.0, beta = 0.3;
    std::array<double, 3> gam = {1.5, -0.8, -1.2}; // gamma_t, gamma_{t-1}, gamma_{t-2}
    std::vector<double> y(static_cast<std::size_t>(n));
    for (auto& x : y) {
        const double g_new = -gam[0] - gam[1] - gam[2] + std::sqrt(v_gamma) * rng.normal();
        gam = {g_new, gam[0], gam[1]};
        mu += beta + std::sqrt(v_mu) * rng.normal();
        beta += std::sqrt(v_beta) * rng.normal();
        x = mu + gam[0] + std::sqrt(v_obs) * rng.normal();
    }
    return testutil::make_series(std::move(y));
}

/// (1 - B)(1 - B^4) y = (1 + th B)(1 + Th B^4) eps, built so the doubly
/// differenced series is exactly the target moving-average process.
TimeSeries simulate_airline(std::mt19937_64& g, int n, double th, double Th) {
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> eps(static_cast<std::size_t>(n + 6), 0.0);
    for (auto& e : eps) e = z(g);
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (int t = 0; t < n; ++t) {
        const std::size_t i = static_cast<std::size_t>(t + 6);
        w[static_cast<std::size_t>(t)] =
            eps[i] + th * eps[i - 1] + Th * eps[i - 4] + th * Th * eps[i - 5];
    }
    std::vector<double> zt(static_cast<std::size_t>(n + 4), 0.0);
    zt[0] = 0.5;
    zt[1] = -0.3;
    zt[2] = 0.2;
    zt[3] = 0.1;
    for (int t = 4; t < n + 4; ++t)
        zt[static_cast<std::size_t>(t)] = zt[static_cast<std::size_t>(t - 4)] +
                                          w[static_cast<std::size_t>(t - 4)];
    std::vector<double> y(static_cast<std::size_t>(n + 5), 0.0);
    y[0] = 100.0;
    for (int t = 1; t < n + 5; ++t)
        y[static_cast<std::size_t>(t)] = y[static_cast<std::size_t>(t - 1)] +
                                         zt[static_cast<std::size_t>(t - 1)];
    return testutil::make_series(std::move(y));
}

double quantile(std::vector<double> v, double q) {
    const std::size_t k = static_cast<std::size_t>(q * (static_cast<double>(v.size()) - 1.0));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

// ---------------------------------------------------------------------------
// criterion 1: Kalman filter and smoother vs dense conditioning
// ---------------------------------------------------------------------------

Result criterion1(const Clock& clock) {
    std::mt19937_64 g(4801);
    std::uniform_int_distribution<int> pdist(1, 3), ndist(2, 6);
    int ok = 0;
    const int reps = 100;
    const double tol = 1e-7;
    for (int rep = 0; rep < reps; ++rep) {
        const int p = pdist(g), n = ndist(g);
        const dlm::DlmSpec spec = testutil::random_spec(g, p);
        const TimeSeries y = testutil::simulate_from_spec(g, spec, n);

        const dlm::FilterResult fr = dlm::kalman_filter(spec, y);
        const dlm::SmoothResult sm = dlm::kalman_smoother(spec, fr);
        double worst = std::abs(fr.loglik - oracle::dense_loglik(spec, y));
        const auto sms = oracle::dense_smoothed_means(spec, y);
        for (int t = 0; t <= n; ++t)
            worst = std::max(worst, (sm.mean[static_cast<std::size_t>(t)] -
                                     sms[static_cast<std::size_t>(t)])
                                        .cwiseAbs()
                                        .maxCoeff());
        ok += worst <= tol;
    }
    const bool pass = ok == reps && clock.seconds() < 10.0;
    return {pass, fmt("Kalman loglik+smoothed means vs dense oracle: %d/%d specs within 1e-7",
                      ok, reps)};
}

// ---------------------------------------------------------------------------
// criterion 2: FFBS moments vs smoother
// ---------------------------------------------------------------------------

Result criterion2(const Clock& clock) {
    const int n = 40;
    const double v_obs = 0.8;
    const std::array<double, 5> w_diag = {0.05, 0.005, 0.02, 0.0, 0.0};
    const TimeSeries y = simulate_structural(4802, n, v_obs, w_diag[0], w_diag[1], w_diag[2]);

    Eigen::VectorXd m0 = Eigen::VectorXd::Zero(5);
    m0(0) = y[0];
    const Eigen::MatrixXd C0 = 10.0 * Eigen::MatrixXd::Identity(5, 5);
    const dlm::DlmSpec spec = dlm::build_trend_seasonal(m0, C0, v_obs, w_diag);

    const dlm::FilterResult fr = dlm::kalman_filter(spec, y);
    const dlm::SmoothResult sm = dlm::kalman_smoother(spec, fr);

    const int draws = 20000;
    std::vector<Eigen::VectorXd> sum(static_cast<std::size_t>(n + 1),
                                     Eigen::VectorXd::Zero(5));
    std::vector<Eigen::MatrixXd> sq(static_cast<std::size_t>(n + 1),
                                    Eigen::MatrixXd::Zero(5, 5));
    Rng rng(4803);
    for (int d = 0; d < draws; ++d) {
        const auto theta = dlm::ffbs(spec, y.span(), rng);
        for (std::size_t t = 0; t <= static_cast<std::size_t>(n); ++t) {
            sum[t] += theta[t];
            sq[t] += theta[t] * theta[t].transpose();
        }
    }

    const double N = static_cast<double>(draws);
    int bad = 0;
    double worst_z = 0.0;
    for (std::size_t t = 0; t <= static_cast<std::size_t>(n); ++t) {
        const Eigen::VectorXd mean_hat = sum[t] / N;
        const Eigen::MatrixXd cov_hat =
            sq[t] / N - mean_hat * mean_hat.transpose();
        for (int i = 0; i < 5; ++i) {
            const double se_m = std::sqrt(sm.cov[t](i, i) / N) + 1e-9;
            const double zm = std::abs(mean_hat(i) - sm.mean[t](i)) / se_m;
            worst_z = std::max(worst_z, zm);
            bad += zm > 4.0;
            for (int j = 0; j <= i; ++j) {
                const double se_c = std::sqrt((sm.cov[t](i, i) * sm.cov[t](j, j) +
                                               sm.cov[t](i, j) * sm.cov[t](i, j)) /
                                              N) +
                                    1e-9;
                const double zc = std::abs(cov_hat(i, j) - sm.cov[t](i, j)) / se_c;
                worst_z = std::max(worst_z, zc);
                bad += zc > 4.0;
            }
        }
    }
    const bool pass = bad == 0 && clock.seconds() < 60.0;
    return {pass, fmt("FFBS 20000-draw moments vs smoother: %d violations of 4 MC-SE "
                      "(worst %.2f SE)",
                      bad, worst_z)};
}

// ---------------------------------------------------------------------------
// criterion 3: Gibbs credible-interval calibration
// ---------------------------------------------------------------------------

Result criterion3(const Clock& clock) {
    const std::array<double, 4> truth = {1.0, 0.1, 0.01, 0.05};
    std::array<int, 4> covered = {0, 0, 0, 0};
    const int reps = 20;
    // Calibration needs priors that are broad relative to every variance being
    // tested.  The library defaults (prior variance 10, i.e. IG rate 0.1) put a
    // soft floor of roughly rate/5 = 0.02 under each state variance -- the
    // exp(-rate/x) factor of the inverse-gamma density is e^-10 at the slope
    // truth 0.01 -- so under the defaults no correct sampler can cover that
    // component.  Prior variance 100 (IG shape 0.01, rate 0.01) moves the floor
    // to ~0.002 while staying weakly informative for the other three scales.
    dlm::VariancePriors priors;
    priors.obs = {1.0, 100.0};
    priors.level = {1.0, 100.0};
    priors.slope = {1.0, 100.0};
    priors.season = {1.0, 100.0};
    for (int rep = 0; rep < reps; ++rep) {
        const TimeSeries y = simulate_structural(static_cast<std::uint64_t>(7500 + rep), 200,
                                                 truth[0], truth[1], truth[2], truth[3]);
        const dlm::GibbsChain chain = dlm::gibbs(y, priors, 5000, 1000,
                                                 static_cast<std::uint64_t>(rep + 1));
        const auto ret = chain.retained();
        for (std::size_t j = 0; j < 4; ++j) {
            std::vector<double> col;
            col.reserve(ret.size());
            for (const auto& d : ret) col.push_back(d[j]);
            const double lo = quantile(col, 0.025), hi = quantile(col, 0.975);
            covered[j] += lo <= truth[j] && truth[j] <= hi;
        }
    }
    const int min_cover = *std::min_element(covered.begin(), covered.end());
    const bool pass = min_cover >= 17 && clock.seconds() < 900.0;
    return {pass, fmt("Gibbs 95%% intervals cover the truth %d/%d/%d/%d of %d seeds "
                      "(threshold 17)",
                      covered[0], covered[1], covered[2], covered[3], reps)};
}

// ---------------------------------------------------------------------------
// criterion 4: SARIMA recovery and AIC ranking
// ---------------------------------------------------------------------------

Result criterion4(const Clock& clock) {
    const double th = 0.4, Th = 0.6;
    const sarima::SarimaOrder truth{0, 1, 1, 0, 1, 1, 4};
    int within = 0, aic_first = 0;
    const int reps = 20;
    for (int rep = 0; rep < reps; ++rep) {
        std::mt19937_64 g(static_cast<std::uint64_t>(9100 + rep));
        const TimeSeries y = simulate_airline(g, 2000, th, Th);
        const sarima::SarimaModel m = sarima::fit(truth, y);
        within += std::abs(m.theta[0] - th) <= 0.06 && std::abs(m.Theta[0] - Th) <= 0.06;
        const auto grid = sarima::grid_search(y, 1, 1, 4);
        const sarima::SarimaOrder& f = grid.front().order;
        aic_first += f.p == truth.p && f.q == truth.q && f.P == truth.P && f.Q == truth.Q;
    }
    // Note: ranking the true order first is intrinsically capped near 71%
    // for an exact maximum-likelihood fit: each of the two one-parameter
    // supersets overtakes the truth whenever its likelihood-ratio statistic
    // (asymptotically chi-squared with 1 df) exceeds the AIC penalty of 2,
    // which happens with probability ~0.157 per superset. The 80% threshold
    // is kept as stated; the counts below are the honest outcome.
    const bool pass = within >= 18 && aic_first >= 16 && clock.seconds() < 300.0;
    return {pass, fmt("SARIMA n=2000: estimates within 0.06 in %d/%d seeds (threshold 18); "
                      "true order AIC-first in %d/%d (threshold 16)",
                      within, reps, aic_first, reps)};
}

// ---------------------------------------------------------------------------
// criterion 5: Holt-Winters oracle equivalence and optimizer dominance
// ---------------------------------------------------------------------------

Result criterion5(const Clock&) {
    std::mt19937_64 g(4805);
    std::uniform_real_distribution<double> par(0.05, 0.95);
    std::uniform_int_distribution<int> mdist(2, 4);
    std::uniform_int_distribution<int> extra(1, 20);
    int ok = 0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
        const int m = mdist(g);
        const std::size_t n = static_cast<std::size_t>(2 * m + extra(g));
        const TimeSeries s = testutil::make_series(testutil::random_values(g, n, 5.0, 15.0),
                                                   2000, 1, m);
        const bool mult = rep % 2 == 1;
        const auto method = mult ? hw::Method::multiplicative : hw::Method::additive;
        const hw::HWParams p{par(g), par(g), par(g), method};
        const hw::HWState init = hw::hw_initial_state(s, method);
        const hw::HWFit fit = hw::hw_filter(s, p, init);
        const oracle::HwTrace tr =
            oracle::hw_recursion(std::vector<double>(s.span().begin(), s.span().end()), m,
                                 p.alpha, p.beta, p.gamma, mult, init.level, init.trend,
                                 init.seasonal);
        const auto close = [](double a, double b) {
            return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
        };
        bool good = close(fit.sse, tr.sse) && close(fit.final_state.level, tr.level) &&
                    close(fit.final_state.trend, tr.trend);
        for (std::size_t t = 0; t < n && good; ++t) good = close(fit.fitted[t], tr.fitted[t]);
        for (std::size_t i = 0; i < tr.final_seasonal.size() && good; ++i)
            good = close(fit.final_state.seasonal[i], tr.final_seasonal[i]);
        ok += good;
    }

    // optimizer dominance over the full 11^3 grid, both seasonal methods
    std::normal_distribution<double> z(0.0, 0.8);
    std::vector<double> v(48);
    const double seas[4] = {4.0, -2.0, -5.0, 3.0};
    for (std::size_t t = 0; t < v.size(); ++t)
        v[t] = 100.0 + 0.7 * static_cast<double>(t) + seas[t % 4] + z(g);
    const TimeSeries s = testutil::make_series(std::move(v));
    bool dominated = true;
    for (const auto method : {hw::Method::additive, hw::Method::multiplicative}) {
        const hw::HWState init = hw::hw_initial_state(s, method);
        double grid_best = std::numeric_limits<double>::infinity();
        for (int a = 0; a <= 10; ++a)
            for (int b = 0; b <= 10; ++b)
                for (int c = 0; c <= 10; ++c)
                    grid_best = std::min(
                        grid_best,
                        hw::hw_filter(s, hw::HWParams{a / 10.0, b / 10.0, c / 10.0, method},
                                      init)
                            .sse);
        dominated = dominated && hw::hw_optimize(s, method).sse <= grid_best + 1e-12;
    }
    const bool pass = ok == reps && dominated;
    return {pass, fmt("hw_filter vs recursion oracle: %d/%d instances at 1e-12; optimizer "
                      "%s the 11^3 grid",
                      ok, reps, dominated ? "dominates" : "LOSES TO")};
}

// ---------------------------------------------------------------------------
// shared pipeline run for criteria 6-8
// ---------------------------------------------------------------------------

struct PipelineRun {
    std::string dir;        // output directory of the first run
    std::string config;     // config file path
    double seconds = 0.0;   // wall time of the four stages
    bool ok = false;
};

PipelineRun run_pipeline(const std::string& bin) {
    testutil::TempDir tmp("acceptance");
    PipelineRun r;
    r.config = tmp.file("run.ini");
    r.dir = tmp.file("out");
    testutil::write_file(r.config, "input = data/gdp_fixture.csv\noutput_dir = " + r.dir + "\n");
    Clock clock;
    r.ok = true;
    for (const char* stage : {"fit", "forecast", "plot", "report"}) {
        const int rc = testutil::run_cmd("\"" + bin + "\" " + stage + " --config \"" + r.config +
                                         "\" >/dev/null 2>&1");
        r.ok = r.ok && rc == 0;
    }
    r.seconds = clock.seconds();
    return r;
}

// ---------------------------------------------------------------------------
// criterion 6: metric properties and CSV recomputability
// ---------------------------------------------------------------------------

Result criterion6(const Clock&, const PipelineRun& pipe) {
    std::mt19937_64 g(4806);
    std::uniform_int_distribution<int> ndist(2, 40);
    std::uniform_real_distribution<double> av(1.0, 10.0), pv(-5.0, 15.0);

    int rmse_ge_mae = 0;
    const int pairs = 1000;
    for (int rep = 0; rep < pairs; ++rep) {
        const std::size_t n = static_cast<std::size_t>(ndist(g));
        std::vector<double> a(n), p(n);
        for (auto& x : a) x = av(g);
        for (auto& x : p) x = pv(g);
        rmse_ge_mae += metrics::rmse(a, p) >= metrics::mae(a, p) - 1e-15;
    }

    int naive_exact = 0;
    const int naive_reps = 50;
    for (int rep = 0; rep < naive_reps; ++rep) {
        const std::size_t n = static_cast<std::size_t>(ndist(g)) + 1;
        std::vector<double> a(n), p(n);
        for (auto& x : a) x = av(g);
        p[0] = a[0];
        for (std::size_t t = 1; t < n; ++t) p[t] = a[t - 1]; // the naive forecast
        naive_exact += metrics::u_theil(a, p, metrics::UTheil::U2) == 1.0;
    }

    int scale_ok = 0;
    const int scale_reps = 100;
    for (int rep = 0; rep < scale_reps; ++rep) {
        const std::size_t n = static_cast<std::size_t>(ndist(g));
        std::vector<double> a(n), p(n), ca(n), cp(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = av(g);
            p[i] = pv(g);
        }
        const double c = rep % 2 == 0 ? 1e-3 : 3.7e4;
        for (std::size_t i = 0; i < n; ++i) {
            ca[i] = c * a[i];
            cp[i] = c * p[i];
        }
        scale_ok += std::abs(metrics::mape(ca, cp) - metrics::mape(a, p)) <=
                    1e-12 * metrics::mape(a, p);
    }

    // recompute every scorecard number from the emitted CSVs
    const TimeSeries raw = csv::read_series_file("data/gdp_fixture.csv");
    std::map<std::string, double> obs;
    for (std::size_t i = 0; i < raw.size(); ++i) obs[raw.label_at(i)] = raw[i];
    int cells_checked = 0, cells_bad = 0;
    for (const auto& [card_name, file_stem, value_col] :
         {std::tuple<const char*, const char*, std::size_t>{"scorecard_fitted.csv", "fitted_", 1},
          {"scorecard_forecast.csv", "forecast_", 1}}) {
        const csv::Table card = csv::read_table_file((fs::path(pipe.dir) / card_name).string());
        for (std::size_t row = 0; row < card.rows.size(); ++row) {
            const std::string model = card.rows[row][0];
            const csv::Table t = csv::read_table_file(
                (fs::path(pipe.dir) / (file_stem + model + ".csv")).string());
            std::vector<double> a, p;
            for (std::size_t i = 0; i < t.rows.size(); ++i) {
                a.push_back(obs.at(t.rows[i][0]));
                p.push_back(t.number(i, value_col));
            }
            const std::array<double, 5> want = {
                metrics::rmse(a, p), metrics::mae(a, p), metrics::mape(a, p),
                metrics::u_theil(a, p, metrics::UTheil::U1),
                metrics::u_theil(a, p, metrics::UTheil::U2)};
            for (std::size_t k = 0; k < want.size(); ++k) {
                ++cells_checked;
                const double got = card.number(row, k + 1);
                cells_bad += std::abs(got - want[k]) >
                             1e-9 * std::max(1.0, std::abs(want[k]));
            }
        }
    }

    const bool pass = rmse_ge_mae == pairs && naive_exact == naive_reps &&
                      scale_ok == scale_reps && cells_checked == 30 && cells_bad == 0 &&
                      pipe.ok;
    return {pass, fmt("rmse>=mae %d/%d; U2(naive)==1 %d/%d; mape scale-invariant %d/%d; "
                      "%d/%d scorecard cells recomputed to 1e-9",
                      rmse_ge_mae, pairs, naive_exact, naive_reps, scale_ok, scale_reps,
                      cells_checked - cells_bad, cells_checked)};
}

// ---------------------------------------------------------------------------
// criterion 7: fixture pipeline shape
// ---------------------------------------------------------------------------

Result criterion7(const Clock&, const PipelineRun& pipe) {
    if (!pipe.ok) return {false, "pipeline run failed"};
    bool additive = false, sse_order = false;
    {
        const csv::Table t =
            csv::read_table_file((fs::path(pipe.dir) / "hw_model.csv").string());
        std::map<std::string, std::string> kv;
        for (const auto& r : t.rows) kv[r[0]] = r[1];
        additive = kv.at("method") == "additive";
        sse_order = csv::parse_value(kv.at("sse_additive")) <
                    csv::parse_value(kv.at("sse_multiplicative"));
    }
    bool grid16 = false, grid_sorted = true;
    {
        const csv::Table t =
            csv::read_table_file((fs::path(pipe.dir) / "sarima_grid.csv").string());
        grid16 = t.rows.size() == 16;
        double prev = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const double aic = csv::parse_value(t.rows[i][9]);
            grid_sorted = grid_sorted && aic >= prev;
            prev = aic;
        }
    }
    bool dlm_best = false;
    {
        const csv::Table t =
            csv::read_table_file((fs::path(pipe.dir) / "scorecard_fitted.csv").string());
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            if (t.rows[i][0] == "dlm")
                dlm_best = t.rows[i][7] == "1" && t.rows[i][8] == "1" && t.rows[i][9] == "1";
    }
    const bool within_time = pipe.seconds < 1200.0;
    const bool pass = additive && sse_order && grid16 && grid_sorted && dlm_best && within_time;
    return {pass, fmt("fixture pipeline: additive HW by SSE %s; 16-row AIC-ranked grid %s; "
                      "DLM best fitted RMSE/MAE/MAPE %s; %.0fs of 1200s budget",
                      additive && sse_order ? "yes" : "NO", grid16 && grid_sorted ? "yes" : "NO",
                      dlm_best ? "yes" : "NO", pipe.seconds)};
}

// ---------------------------------------------------------------------------
// criterion 8: byte-identical CSVs across reruns
// ---------------------------------------------------------------------------

Result criterion8(const Clock&, const PipelineRun& pipe, const std::string& bin) {
    if (!pipe.ok) return {false, "pipeline run failed"};
    const std::string dir2 = pipe.dir + "2";
    fs::remove_all(dir2);
    bool rc_ok = true;
    for (const char* stage : {"fit", "forecast"}) {
        const int rc = testutil::run_cmd("\"" + bin + "\" " + stage + " --config \"" +
                                         pipe.config + "\" --output_dir \"" + dir2 +
                                         "\" >/dev/null 2>&1");
        rc_ok = rc_ok && rc == 0;
    }
    int compared = 0, equal = 0;
    for (const auto& e : fs::directory_iterator(pipe.dir)) {
        if (e.path().extension() != ".csv") continue;
        ++compared;
        const fs::path other = fs::path(dir2) / e.path().filename();
        equal += fs::exists(other) && testutil::read_file(e.path().string()) ==
                                          testutil::read_file(other.string());
    }
    // fit emits 10 CSVs, forecast 5 (the remaining artifacts are SVGs and run_meta.txt)
    const bool pass = rc_ok && compared == 15 && equal == compared;
    return {pass,
            fmt("rerun determinism: %d/%d CSV artifacts byte-identical", equal, compared)};
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-gdpcast-binary>\n");
        return 2;
    }
    const std::string bin = argv[1];

    run_criterion(1, [](const Clock& c) { return criterion1(c); });
    run_criterion(2, [](const Clock& c) { return criterion2(c); });
    run_criterion(3, [](const Clock& c) { return criterion3(c); });
    run_criterion(4, [](const Clock& c) { return criterion4(c); });
    run_criterion(5, [](const Clock& c) { return criterion5(c); });

    const PipelineRun pipe = run_pipeline(bin);
    run_criterion(6, [&](const Clock& c) { return criterion6(c, pipe); });
    run_criterion(7, [&](const Clock& c) { return criterion7(c, pipe); });
    run_criterion(8, [&](const Clock& c) { return criterion8(c, pipe, bin); });

    return g_all_pass ? 0 : 1;
}
