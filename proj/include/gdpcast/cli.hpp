#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gdpcast/csv.hpp"
#include "gdpcast/dlm.hpp"
#include "gdpcast/errors.hpp"
#include "gdpcast/fetch.hpp"
#include "gdpcast/holt_winters.hpp"
#include "gdpcast/metrics.hpp"
#include "gdpcast/sarima.hpp"
#include "gdpcast/stats.hpp"
#include "gdpcast/svg.hpp"
#include "gdpcast/time_series.hpp"
#include "gdpcast/transforms.hpp"

namespace gdpcast::cli {

inline constexpr const char* kVersion = "1.0.0";

/**
 * Resolved pipeline configuration. Every field maps to one flat key in the
 * config file and can be overridden by a CLI flag of the same name.
 */
struct RunConfig {
    std::string input;
    std::string transform = "log"; // none | log
    std::string train_end = "2016-Q4";
    int horizon = 12;
    double level = 0.95;
    std::vector<std::string> models = {"hw", "sarima", "dlm"};
    std::uint64_t seed = 42;
    int gibbs_iter = 5000;
    int gibbs_burn = 1000;
    std::string output_dir = "out";
    int sarima_d = 1;
    int sarima_D = 1;
    int sarima_s = 4;
    int acf_lags = 16;
    int lb_lags = 8;
    double prior_obs_mean = 0.0;  // 0 = sample variance of the differenced series
    double prior_obs_var = 0.0;   // 0 = 10 * mean^2
    double prior_state_mean = 1.0;
    double prior_state_var = 10.0;
    std::string endpoint;
    std::string series;
    std::string fixture = "data/gdp_fixture.csv";
    std::string fetch_output; // empty = write to `input`
    bool offline = true;

    bool wants(const std::string& model) const {
        for (const auto& m : models)
            if (m == model) return true;
        return false;
    }
};

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw InputError("config: key '" + key + "' wants a boolean, got '" + v + "'");
}

inline int parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const int r = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing junk");
        return r;
    } catch (const std::exception&) {
        throw InputError("config: key '" + key + "' wants an integer, got '" + v + "'");
    }
}

inline double parse_real(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing junk");
        return r;
    } catch (const std::exception&) {
        throw InputError("config: key '" + key + "' wants a number, got '" + v + "'");
    }
}

inline std::vector<std::string> parse_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : v) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace detail

/// Apply one `key = value` setting; unknown keys are hard errors so typos
/// cannot silently fall back to defaults.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    using namespace detail;
    if (key == "input") cfg.input = value;
    else if (key == "transform") {
        if (value != "none" && value != "log")
            throw InputError("config: transform must be 'none' or 'log'");
        cfg.transform = value;
    } else if (key == "train_end") cfg.train_end = value;
    else if (key == "horizon") cfg.horizon = parse_int(value, key);
    else if (key == "level") cfg.level = parse_real(value, key);
    else if (key == "models") {
        cfg.models = parse_list(value);
        if (cfg.models.empty()) throw InputError("config: models must be non-empty");
        for (const auto& m : cfg.models)
            if (m != "hw" && m != "sarima" && m != "dlm")
                throw InputError("config: unknown model '" + m + "'");
    } else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
    else if (key == "gibbs_iter") cfg.gibbs_iter = parse_int(value, key);
    else if (key == "gibbs_burn") cfg.gibbs_burn = parse_int(value, key);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "sarima_d") cfg.sarima_d = parse_int(value, key);
    else if (key == "sarima_D") cfg.sarima_D = parse_int(value, key);
    else if (key == "sarima_s") cfg.sarima_s = parse_int(value, key);
    else if (key == "acf_lags") cfg.acf_lags = parse_int(value, key);
    else if (key == "lb_lags") cfg.lb_lags = parse_int(value, key);
    else if (key == "prior_obs_mean") cfg.prior_obs_mean = parse_real(value, key);
    else if (key == "prior_obs_var") cfg.prior_obs_var = parse_real(value, key);
    else if (key == "prior_state_mean") cfg.prior_state_mean = parse_real(value, key);
    else if (key == "prior_state_var") cfg.prior_state_var = parse_real(value, key);
    else if (key == "endpoint") cfg.endpoint = value;
    else if (key == "series") cfg.series = value;
    else if (key == "fixture") cfg.fixture = value;
    else if (key == "fetch_output") cfg.fetch_output = value;
    else if (key == "offline") cfg.offline = parse_bool(value, key);
    else throw InputError("config: unknown key '" + key + "'");
}

inline void validate(const RunConfig& cfg) {
    if (cfg.input.empty()) throw InputError("config: 'input' is required");
    if (cfg.horizon < 1) throw InputError("config: horizon must be >= 1");
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw InputError("config: level must be in (0,1)");
    if (cfg.gibbs_iter <= cfg.gibbs_burn || cfg.gibbs_burn < 0)
        throw InputError("config: need gibbs_iter > gibbs_burn >= 0");
    csv::parse_quarter_label(cfg.train_end); // fail fast on malformed quarters
}

/// Flat `key = value` config file; '#' starts a comment; overrides win.
inline RunConfig load_config(const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
    RunConfig cfg;
    std::ifstream in(path);
    if (!in) throw InputError("config: cannot open '" + path + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string trimmed = csv::trim(line);
        if (trimmed.empty()) continue;
        const std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw InputError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        apply_setting(cfg, csv::trim(trimmed.substr(0, eq)), csv::trim(trimmed.substr(eq + 1)));
    }
    for (const auto& [k, v] : overrides) apply_setting(cfg, k, v);
    validate(cfg);
    return cfg;
}

namespace detail {

namespace fs = std::filesystem;

inline std::string path_in(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
}

inline double quarter_coord(CalendarPoint c) {
    return static_cast<double>(c.year) + (c.period - 1) / 4.0;
}

struct SplitData {
    TimeSeries raw;        // original scale, full range
    TimeSeries working;    // transformed scale, full range
    TimeSeries train_w;    // transformed, through train_end
    TimeSeries train_orig; // original, through train_end
    std::size_t split = 0; // index of train_end
};

inline SplitData load_split(const RunConfig& cfg) {
    TimeSeries raw = csv::read_series_file(cfg.input);
    const TimeSeries working = cfg.transform == "log" ? log_transform(raw) : raw;
    const CalendarPoint te = csv::parse_quarter_label(cfg.train_end);
    if (!raw.contains(te))
        throw InputError("config: train_end " + cfg.train_end + " is outside the data range");
    const std::size_t split = raw.index_of(te);
    if (split + 1 >= raw.size())
        throw InputError("config: train_end must leave at least one held-out observation");
    if (split + 1 < 2) throw InputError("config: train_end leaves no training data");
    return SplitData{raw, working, working.slice(0, split + 1), raw.slice(0, split + 1), split};
}

inline TimeSeries to_original(const RunConfig& cfg, const TimeSeries& s) {
    return cfg.transform == "log" ? exp_transform(s) : s;
}

inline dlm::VariancePriors resolve_priors(const RunConfig& cfg, const TimeSeries& train_w) {
    dlm::VariancePriors p = dlm::default_priors(train_w);
    if (cfg.prior_obs_mean > 0.0) p.obs.a = cfg.prior_obs_mean;
    p.obs.b = cfg.prior_obs_var > 0.0 ? cfg.prior_obs_var : 10.0 * p.obs.a * p.obs.a;
    p.level = {cfg.prior_state_mean, cfg.prior_state_var};
    p.slope = p.level;
    p.season = p.level;
    return p;
}

inline Eigen::VectorXd dlm_m0(const TimeSeries& train_w) {
    Eigen::VectorXd m0 = Eigen::VectorXd::Zero(5);
    m0(0) = train_w[0];
    return m0;
}

inline Eigen::MatrixXd dlm_c0() { return 1e7 * Eigen::MatrixXd::Identity(5, 5); }

inline std::string sanitize_cell(std::string s) {
    for (auto& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

inline void write_kv_file(const std::string& path,
                          const std::vector<std::pair<std::string, std::string>>& kv) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(kv.size());
    for (const auto& [k, v] : kv) rows.push_back({k, v});
    csv::write_table_file(path, {"key", "value"}, rows);
}

inline std::map<std::string, std::string> read_kv_file(const std::string& path) {
    const csv::Table t = csv::read_table_file(path);
    if (t.header != std::vector<std::string>{"key", "value"})
        throw InputError("artifact '" + path + "' is not a key,value table");
    std::map<std::string, std::string> kv;
    for (const auto& r : t.rows) kv[r[0]] = r[1];
    return kv;
}

inline double kv_num(const std::map<std::string, std::string>& kv, const std::string& key,
                     const std::string& path) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw InputError("artifact '" + path + "' is missing key '" + key + "'");
    return csv::parse_value(it->second);
}

inline std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// The only artifact allowed to contain a timestamp.
inline void write_run_meta(const RunConfig& cfg, const std::string& command) {
    std::ofstream out(path_in(cfg, "run_meta.txt"), std::ios::binary);
    if (!out) throw InputError("cannot write run_meta.txt in '" + cfg.output_dir + "'");
    out << "tool = gdpcast " << kVersion << "\n";
    out << "command = " << command << "\n";
    out << "timestamp_utc = " << timestamp_utc() << "\n";
    std::string models;
    for (const auto& m : cfg.models) models += (models.empty() ? "" : ",") + m;
    out << "input = " << cfg.input << "\n"
        << "transform = " << cfg.transform << "\n"
        << "train_end = " << cfg.train_end << "\n"
        << "horizon = " << cfg.horizon << "\n"
        << "level = " << csv::format_double(cfg.level) << "\n"
        << "models = " << models << "\n"
        << "seed = " << cfg.seed << "\n"
        << "gibbs_iter = " << cfg.gibbs_iter << "\n"
        << "gibbs_burn = " << cfg.gibbs_burn << "\n"
        << "sarima_d = " << cfg.sarima_d << "\n"
        << "sarima_D = " << cfg.sarima_D << "\n"
        << "sarima_s = " << cfg.sarima_s << "\n"
        << "output_dir = " << cfg.output_dir << "\n";
}

inline std::vector<std::string> scorecard_header() {
    return {"model", "rmse", "mae", "mape", "u_theil_u1", "u_theil_u2",
            "n",     "best_rmse", "best_mae", "best_mape", "best_u1", "best_u2"};
}

inline void write_scorecard(const std::string& path, const ScoreCard& card) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : card.rows) {
        rows.push_back({r.model, csv::format_double(r.rmse), csv::format_double(r.mae),
                        csv::format_double(r.mape), csv::format_double(r.u1),
                        csv::format_double(r.u2), std::to_string(r.n_used),
                        r.best_rmse ? "1" : "0", r.best_mae ? "1" : "0", r.best_mape ? "1" : "0",
                        r.best_u1 ? "1" : "0", r.best_u2 ? "1" : "0"});
    }
    csv::write_table_file(path, scorecard_header(), rows);
}

inline void write_fitted(const std::string& path, const TimeSeries& fitted,
                         const TimeSeries& actual_orig) {
    std::vector<std::vector<std::string>> rows;
    const auto [ia, iff, len] = common_window(actual_orig, fitted);
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        std::string resid;
        if (actual_orig.contains(fitted.calendar_at(i))) {
            const std::size_t ai = actual_orig.index_of(fitted.calendar_at(i));
            resid = csv::format_double(actual_orig[ai] - fitted[i]);
        }
        rows.push_back({fitted.label_at(i), csv::format_double(fitted[i]), resid});
    }
    (void)ia; (void)iff; (void)len;
    csv::write_table_file(path, {"date", "fitted", "residual"}, rows);
}

inline void write_forecast(const std::string& path, const ForecastResult& f) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < f.points.size(); ++i)
        rows.push_back({f.points.label_at(i), csv::format_double(f.points[i]),
                        csv::format_double(f.lower[i]), csv::format_double(f.upper[i])});
    csv::write_table_file(path, {"date", "point", "lower", "upper"}, rows);
}

} // namespace detail

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

inline void cmd_fit(const RunConfig& cfg) {
    namespace d = detail;
    std::filesystem::create_directories(cfg.output_dir);
    const d::SplitData data = d::load_split(cfg);
    const TimeSeries& train_w = data.train_w;
    const int m = train_w.period_length();

    std::vector<ScoreRow> rows;

    if (cfg.wants("hw")) {
        const hw::HWFit fit_add = hw::hw_optimize(train_w, hw::Method::additive);
        std::optional<hw::HWFit> fit_mult;
        std::string mult_error;
        try {
            fit_mult = hw::hw_optimize(train_w, hw::Method::multiplicative);
        } catch (const Error& e) {
            mult_error = e.what();
        }
        const bool use_add = !fit_mult || fit_add.sse <= fit_mult->sse;
        const hw::HWFit& best = use_add ? fit_add : *fit_mult;

        std::vector<std::pair<std::string, std::string>> kv;
        kv.emplace_back("method", use_add ? "additive" : "multiplicative");
        kv.emplace_back("alpha", csv::format_double(best.params.alpha));
        kv.emplace_back("beta", csv::format_double(best.params.beta));
        kv.emplace_back("gamma", csv::format_double(best.params.gamma));
        kv.emplace_back("init_level", csv::format_double(best.initial_state.level));
        kv.emplace_back("init_trend", csv::format_double(best.initial_state.trend));
        for (int i = 0; i < m; ++i)
            kv.emplace_back("init_seasonal_" + std::to_string(i + 1),
                            csv::format_double(best.initial_state.seasonal[static_cast<std::size_t>(i)]));
        kv.emplace_back("sse", csv::format_double(best.sse));
        kv.emplace_back("sse_additive", csv::format_double(fit_add.sse));
        kv.emplace_back("sse_multiplicative",
                        fit_mult ? csv::format_double(fit_mult->sse) : "unavailable");
        if (!fit_mult) kv.emplace_back("multiplicative_error", d::sanitize_cell(mult_error));
        kv.emplace_back("n_train", std::to_string(train_w.size()));
        d::write_kv_file(d::path_in(cfg, "hw_model.csv"), kv);

        const TimeSeries fitted_orig = d::to_original(cfg, best.fitted);
        d::write_fitted(d::path_in(cfg, "fitted_hw.csv"), fitted_orig, data.train_orig);
        rows.push_back(score(data.train_orig, fitted_orig, "hw"));
    }

    if (cfg.wants("sarima")) {
        const auto grid = sarima::grid_search(train_w, cfg.sarima_d, cfg.sarima_D, cfg.sarima_s);
        std::vector<std::vector<std::string>> grows;
        int rank = 1;
        for (const auto& e : grid) {
            grows.push_back(
                {std::to_string(rank++), std::to_string(e.order.p),
                 std::to_string(e.order.d), std::to_string(e.order.q), std::to_string(e.order.P),
                 std::to_string(e.order.D), std::to_string(e.order.Q), std::to_string(e.order.s),
                 std::to_string(e.order.n_coef() + 1),
                 e.ok ? csv::format_double(e.model.aic) : "",
                 e.ok ? csv::format_double(e.model.loglik) : "",
                 e.ok ? csv::format_double(e.model.sigma2) : "",
                 e.ok ? "ok" : d::sanitize_cell(e.error)});
        }
        csv::write_table_file(d::path_in(cfg, "sarima_grid.csv"),
                              {"rank", "p", "d", "q", "P", "D", "Q", "s", "n_params",
                               "aic", "loglik", "sigma2", "status"},
                              grows);

        const sarima::SarimaModel& best = grid.front().model;
        std::vector<std::pair<std::string, std::string>> kv;
        kv.emplace_back("p", std::to_string(best.order.p));
        kv.emplace_back("d", std::to_string(best.order.d));
        kv.emplace_back("q", std::to_string(best.order.q));
        kv.emplace_back("P", std::to_string(best.order.P));
        kv.emplace_back("D", std::to_string(best.order.D));
        kv.emplace_back("Q", std::to_string(best.order.Q));
        kv.emplace_back("s", std::to_string(best.order.s));
        for (std::size_t i = 0; i < best.phi.size(); ++i)
            kv.emplace_back("phi_" + std::to_string(i + 1), csv::format_double(best.phi[i]));
        for (std::size_t i = 0; i < best.theta.size(); ++i)
            kv.emplace_back("theta_" + std::to_string(i + 1), csv::format_double(best.theta[i]));
        for (std::size_t i = 0; i < best.Phi.size(); ++i)
            kv.emplace_back("Phi_" + std::to_string(i + 1), csv::format_double(best.Phi[i]));
        for (std::size_t i = 0; i < best.Theta.size(); ++i)
            kv.emplace_back("Theta_" + std::to_string(i + 1), csv::format_double(best.Theta[i]));
        kv.emplace_back("sigma2", csv::format_double(best.sigma2));
        kv.emplace_back("loglik", csv::format_double(best.loglik));
        kv.emplace_back("aic", csv::format_double(best.aic));
        d::write_kv_file(d::path_in(cfg, "sarima_model.csv"), kv);

        const sarima::SarimaFitted sf = sarima::fitted_values(best, train_w);
        const TimeSeries fitted_orig = d::to_original(cfg, sf.fitted);
        d::write_fitted(d::path_in(cfg, "fitted_sarima.csv"), fitted_orig, data.train_orig);
        rows.push_back(score(data.train_orig, fitted_orig, "sarima"));

        // diagnostics: correlograms of the differenced series, PP before and
        // after differencing, Ljung-Box on the standardized innovations
        const TimeSeries wdiff =
            difference(train_w, cfg.sarima_d, cfg.sarima_D, cfg.sarima_s).series;
        const int max_lag =
            std::min(cfg.acf_lags, static_cast<int>(wdiff.size()) - 1);
        const auto ac = stats::acf(wdiff, max_lag);
        const auto pc = stats::pacf(wdiff, max_lag);
        std::vector<std::vector<std::string>> arows;
        for (int k = 0; k <= max_lag; ++k)
            arows.push_back({std::to_string(k), csv::format_double(ac[static_cast<std::size_t>(k)]),
                             csv::format_double(pc[static_cast<std::size_t>(k)])});
        csv::write_table_file(d::path_in(cfg, "acf_pacf.csv"), {"lag", "acf", "pacf"}, arows);

        std::vector<std::vector<std::string>> trows;
        const auto push_test = [&trows](const std::string& name, const std::string& target,
                                        const stats::TestResult& t) {
            trows.push_back({name, target, csv::format_double(t.statistic),
                             csv::format_double(t.p_value), std::to_string(t.lags_used),
                             t.reject_at.at(0.01) ? "1" : "0", t.reject_at.at(0.05) ? "1" : "0",
                             t.reject_at.at(0.10) ? "1" : "0"});
        };
        push_test("phillips_perron", "train_working", stats::phillips_perron(train_w));
        push_test("phillips_perron", "train_differenced", stats::phillips_perron(wdiff));
        const int lb_lags = std::max(cfg.lb_lags, best.order.n_coef() + 1);
        push_test("ljung_box", "sarima_residuals",
                  stats::ljung_box(sf.std_residuals, lb_lags, best.order.n_coef()));
        csv::write_table_file(d::path_in(cfg, "diag_tests.csv"),
                              {"test", "target", "statistic", "p_value", "lags", "reject_01",
                               "reject_05", "reject_10"},
                              trows);
    }

    if (cfg.wants("dlm")) {
        const dlm::VariancePriors priors = d::resolve_priors(cfg, train_w);
        const dlm::GibbsChain chain = dlm::gibbs(train_w, priors, cfg.gibbs_iter, cfg.gibbs_burn,
                                                 cfg.seed, d::dlm_m0(train_w), d::dlm_c0());
        std::vector<std::vector<std::string>> crows;
        const auto retained = chain.retained();
        for (std::size_t i = 0; i < retained.size(); ++i) {
            const auto& dr = retained[i];
            crows.push_back({std::to_string(chain.burn_in + static_cast<int>(i) + 1),
                             csv::format_double(dr[0]), csv::format_double(dr[1]),
                             csv::format_double(dr[2]), csv::format_double(dr[3])});
        }
        csv::write_table_file(d::path_in(cfg, "gibbs_chain.csv"),
                              {"iter", "sigma2", "sigma2_mu", "sigma2_beta", "sigma2_gamma"},
                              crows);

        // fitted line: smoothed one-step fit at the posterior-mean variances
        const auto vbar = chain.retained_means();
        const dlm::DlmSpec spec = dlm::build_trend_seasonal(
            d::dlm_m0(train_w), d::dlm_c0(), vbar[0], {vbar[1], vbar[2], vbar[3], 0.0, 0.0});
        const dlm::FilterResult fr = dlm::kalman_filter(spec, train_w);
        const dlm::SmoothResult sm = dlm::kalman_smoother(spec, fr);
        std::vector<double> fitted_w(train_w.size());
        for (std::size_t t = 0; t < train_w.size(); ++t)
            fitted_w[t] = spec.F.dot(sm.mean[t + 1]);
        const TimeSeries fitted_orig = d::to_original(cfg, train_w.with_values(std::move(fitted_w)));
        d::write_fitted(d::path_in(cfg, "fitted_dlm.csv"), fitted_orig, data.train_orig);
        rows.push_back(score(data.train_orig, fitted_orig, "dlm"));
    }

    if (rows.empty()) throw InputError("cmd_fit: no models selected");
    d::write_scorecard(d::path_in(cfg, "scorecard_fitted.csv"), compare(std::move(rows)));
    d::write_run_meta(cfg, "fit");
}

// ---------------------------------------------------------------------------
// forecast
// ---------------------------------------------------------------------------

namespace detail {

inline hw::HWFit load_hw_fit(const RunConfig& cfg, const TimeSeries& train_w) {
    const std::string path = path_in(cfg, "hw_model.csv");
    if (!fs::exists(path)) throw InputError("missing artifact hw_model.csv; run fit first");
    const auto kv = read_kv_file(path);
    hw::HWParams params;
    const auto mit = kv.find("method");
    if (mit == kv.end()) throw InputError("hw_model.csv is missing key 'method'");
    params.method = mit->second == "multiplicative" ? hw::Method::multiplicative
                                                    : hw::Method::additive;
    params.alpha = kv_num(kv, "alpha", path);
    params.beta = kv_num(kv, "beta", path);
    params.gamma = kv_num(kv, "gamma", path);
    hw::HWState init;
    init.level = kv_num(kv, "init_level", path);
    init.trend = kv_num(kv, "init_trend", path);
    const int m = train_w.period_length();
    init.seasonal.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        init.seasonal[static_cast<std::size_t>(i)] =
            kv_num(kv, "init_seasonal_" + std::to_string(i + 1), path);
    return hw::hw_filter(train_w, params, init);
}

inline sarima::SarimaModel load_sarima_model(const RunConfig& cfg) {
    const std::string path = path_in(cfg, "sarima_model.csv");
    if (!fs::exists(path)) throw InputError("missing artifact sarima_model.csv; run fit first");
    const auto kv = read_kv_file(path);
    sarima::SarimaModel model;
    model.order.p = static_cast<int>(kv_num(kv, "p", path));
    model.order.d = static_cast<int>(kv_num(kv, "d", path));
    model.order.q = static_cast<int>(kv_num(kv, "q", path));
    model.order.P = static_cast<int>(kv_num(kv, "P", path));
    model.order.D = static_cast<int>(kv_num(kv, "D", path));
    model.order.Q = static_cast<int>(kv_num(kv, "Q", path));
    model.order.s = static_cast<int>(kv_num(kv, "s", path));
    const auto coef = [&](const char* stem, int count) {
        std::vector<double> v(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            v[static_cast<std::size_t>(i)] = kv_num(kv, stem + ("_" + std::to_string(i + 1)), path);
        return v;
    };
    model.phi = coef("phi", model.order.p);
    model.theta = coef("theta", model.order.q);
    model.Phi = coef("Phi", model.order.P);
    model.Theta = coef("Theta", model.order.Q);
    model.sigma2 = kv_num(kv, "sigma2", path);
    model.loglik = kv_num(kv, "loglik", path);
    model.aic = kv_num(kv, "aic", path);
    sarima::check_admissible(model);
    return model;
}

inline dlm::GibbsChain load_chain(const RunConfig& cfg) {
    const std::string path = path_in(cfg, "gibbs_chain.csv");
    if (!fs::exists(path)) throw InputError("missing artifact gibbs_chain.csv; run fit first");
    const csv::Table t = csv::read_table_file(path);
    const std::vector<std::string> want = {"iter", "sigma2", "sigma2_mu", "sigma2_beta",
                                           "sigma2_gamma"};
    if (t.header != want) throw InputError("gibbs_chain.csv has an unexpected header");
    dlm::GibbsChain chain;
    chain.seed = cfg.seed;
    chain.burn_in = 0; // the file holds retained draws only
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        chain.draws.push_back({t.number(i, 1), t.number(i, 2), t.number(i, 3), t.number(i, 4)});
    chain.n_iter = static_cast<int>(chain.draws.size());
    if (chain.draws.empty()) throw InputError("gibbs_chain.csv holds no draws");
    return chain;
}

/// Exponentiate a forecast when the pipeline works on the log scale; exp is
/// monotone, so the interval ordering survives.
inline ForecastResult back_transform(const RunConfig& cfg, const ForecastResult& f) {
    if (cfg.transform != "log") return f;
    return ForecastResult(exp_transform(f.points), exp_transform(f.lower), exp_transform(f.upper),
                          f.level, f.model_label);
}

} // namespace detail

inline void cmd_forecast(const RunConfig& cfg) {
    namespace d = detail;
    std::filesystem::create_directories(cfg.output_dir);
    const d::SplitData data = d::load_split(cfg);
    const TimeSeries& train_w = data.train_w;
    const int h = cfg.horizon;

    const std::size_t holdout_len = data.raw.size() - data.split - 1;
    if (static_cast<std::size_t>(h) > holdout_len)
        std::cerr << "warning: horizon " << h << " exceeds the " << holdout_len
                  << " held-out observations; forecast metrics use the overlap only\n";

    std::vector<std::pair<std::string, ForecastResult>> forecasts;
    if (cfg.wants("hw")) {
        const hw::HWFit fit = d::load_hw_fit(cfg, train_w);
        forecasts.emplace_back("hw", d::back_transform(cfg, hw::hw_forecast(fit, h, cfg.level)));
    }
    if (cfg.wants("sarima")) {
        const sarima::SarimaModel model = d::load_sarima_model(cfg);
        forecasts.emplace_back("sarima",
                               d::back_transform(cfg, sarima::forecast(model, train_w, h, cfg.level)));
    }
    if (cfg.wants("dlm")) {
        const dlm::GibbsChain chain = d::load_chain(cfg);
        const dlm::DlmSpec templ = dlm::build_trend_seasonal(d::dlm_m0(train_w), d::dlm_c0(), 1.0,
                                                             {1.0, 1.0, 1.0, 0.0, 0.0});
        forecasts.emplace_back(
            "dlm", d::back_transform(cfg, dlm::dlm_forecast(templ, chain, train_w, h, cfg.level)));
    }
    if (forecasts.empty()) throw InputError("cmd_forecast: no models selected");

    for (const auto& [name, f] : forecasts)
        d::write_forecast(d::path_in(cfg, "forecast_" + name + ".csv"), f);

    // held-out scorecard on the overlap
    std::vector<ScoreRow> rows;
    for (const auto& [name, f] : forecasts) rows.push_back(score(data.raw, f.points, name));
    d::write_scorecard(d::path_in(cfg, "scorecard_forecast.csv"), compare(std::move(rows)));

    // growth-rate comparison anchored at the last training quarter
    const double base = data.train_orig[data.train_orig.size() - 1];
    std::vector<std::vector<std::string>> grows;
    for (const auto& [name, f] : forecasts) {
        double prev_model = base;
        double prev_obs = base;
        for (int j = 0; j < h; ++j) {
            const std::size_t idx = static_cast<std::size_t>(j);
            const double g_model = (f.points[idx] - prev_model) / prev_model;
            prev_model = f.points[idx];
            std::string obs_cell;
            const CalendarPoint c = f.points.calendar_at(idx);
            if (data.raw.contains(c)) {
                const double actual = data.raw[data.raw.index_of(c)];
                obs_cell = csv::format_double((actual - prev_obs) / prev_obs);
                prev_obs = actual;
            }
            grows.push_back({f.points.label_at(idx), name, csv::format_double(g_model), obs_cell});
        }
    }
    csv::write_table_file(d::path_in(cfg, "growth_comparison.csv"),
                          {"quarter", "model", "model_growth", "observed_growth"}, grows);
    d::write_run_meta(cfg, "forecast");
}

// ---------------------------------------------------------------------------
// plot
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<svg::Point> series_points(const TimeSeries& s) {
    std::vector<svg::Point> pts;
    pts.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        pts.emplace_back(quarter_coord(s.calendar_at(i)), s[i]);
    return pts;
}

inline void require_artifact(const std::string& path) {
    if (!fs::exists(path)) throw InputError("missing artifact '" + path + "'; run earlier stages first");
}

} // namespace detail

inline void cmd_plot(const RunConfig& cfg) {
    namespace d = detail;
    std::filesystem::create_directories(cfg.output_dir);
    const d::SplitData data = d::load_split(cfg);

    for (const auto& name : std::vector<std::string>{"hw", "sarima", "dlm"}) {
        if (!cfg.wants(name)) continue;
        const std::string fpath = d::path_in(cfg, "forecast_" + name + ".csv");
        const std::string fitpath = d::path_in(cfg, "fitted_" + name + ".csv");
        d::require_artifact(fpath);
        d::require_artifact(fitpath);
        const csv::Table ft = csv::read_table_file(fpath);
        const csv::Table fit = csv::read_table_file(fitpath);

        svg::Plot plot("Observed, fitted and " + std::to_string(ft.rows.size()) +
                           "-quarter forecast (" + name + ")",
                       "quarter", "value");
        plot.add_line("observed", "#222222", d::series_points(data.raw), 1.5);
        std::vector<svg::Point> fitted_pts;
        for (std::size_t i = 0; i < fit.rows.size(); ++i) {
            const CalendarPoint c = csv::parse_quarter_label(fit.rows[i][0]);
            fitted_pts.emplace_back(d::quarter_coord(c), fit.number(i, 1));
        }
        plot.add_line("fitted", "#d62728", std::move(fitted_pts), 1.2, true);
        std::vector<double> fx;
        std::vector<double> fpt, flo, fhi;
        for (std::size_t i = 0; i < ft.rows.size(); ++i) {
            const CalendarPoint c = csv::parse_quarter_label(ft.rows[i][0]);
            fx.push_back(d::quarter_coord(c));
            fpt.push_back(ft.number(i, 1));
            flo.push_back(ft.number(i, 2));
            fhi.push_back(ft.number(i, 3));
        }
        plot.add_band("band", "#1f77b4", fx, flo, fhi);
        std::vector<svg::Point> fpts;
        for (std::size_t i = 0; i < fx.size(); ++i) fpts.emplace_back(fx[i], fpt[i]);
        plot.add_line("forecast", "#1f77b4", std::move(fpts), 2.0);
        plot.write(d::path_in(cfg, "fit_forecast_" + name + ".svg"));
    }

    if (cfg.wants("sarima")) {
        const std::string apath = d::path_in(cfg, "acf_pacf.csv");
        d::require_artifact(apath);
        const csv::Table at = csv::read_table_file(apath);
        const double band = at.rows.size() > 1 ? 2.0 / std::sqrt(static_cast<double>(
                                                     data.train_w.size())) : 0.0;
        for (const auto& which : std::vector<std::pair<std::string, std::size_t>>{{"acf", 1},
                                                                                  {"pacf", 2}}) {
            svg::Plot plot(which.first + " of the differenced training series", "lag",
                           which.first);
            std::vector<svg::Point> pts;
            for (std::size_t i = 0; i < at.rows.size(); ++i)
                pts.emplace_back(csv::parse_value(at.rows[i][0]), at.number(i, which.second));
            plot.add_stems(which.first, "#1f77b4", std::move(pts));
            plot.add_hline("band_hi", "#d62728", band);
            plot.add_hline("band_lo", "#d62728", -band);
            plot.write(d::path_in(cfg, which.first + ".svg"));
        }
    }

    if (cfg.wants("dlm")) {
        const std::string cpath = d::path_in(cfg, "gibbs_chain.csv");
        d::require_artifact(cpath);
        const dlm::GibbsChain chain = d::load_chain(cfg);
        const auto erg = dlm::ergodic_means(chain);
        svg::Plot plot("Gibbs draws (solid) and ergodic means (dashed), log10 scale", "draw",
                       "log10 value");
        const std::array<std::string, 4> names = {"sigma2", "sigma2_mu", "sigma2_beta",
                                                  "sigma2_gamma"};
        const std::array<std::string, 4> colors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
        const auto retained = chain.retained();
        for (std::size_t p = 0; p < 4; ++p) {
            std::vector<svg::Point> tr, em;
            for (std::size_t i = 0; i < retained.size(); ++i) {
                tr.emplace_back(static_cast<double>(i + 1), std::log10(retained[i][p]));
                em.emplace_back(static_cast<double>(i + 1), std::log10(erg[p][i]));
            }
            plot.add_line("trace_" + names[p], colors[p], std::move(tr), 0.8);
            plot.add_line("ergodic_" + names[p], colors[p], std::move(em), 1.6, true);
        }
        plot.write(d::path_in(cfg, "gibbs_trace.svg"));
    }

    {
        const std::string gpath = d::path_in(cfg, "growth_comparison.csv");
        d::require_artifact(gpath);
        const csv::Table gt = csv::read_table_file(gpath);
        svg::Plot plot("Forecast vs observed quarterly growth", "quarter", "growth rate");
        std::map<std::string, std::vector<svg::Point>> per_model;
        std::vector<svg::Point> observed;
        for (std::size_t i = 0; i < gt.rows.size(); ++i) {
            const double x = d::quarter_coord(csv::parse_quarter_label(gt.rows[i][0]));
            per_model[gt.rows[i][1]].emplace_back(x, gt.number(i, 2));
            if (!gt.rows[i][3].empty() && observed.size() < 64) {
                const svg::Point p(x, gt.number(i, 3));
                if (observed.empty() || observed.back().first < x) observed.push_back(p);
            }
        }
        const std::map<std::string, std::string> colors = {
            {"hw", "#d62728"}, {"sarima", "#2ca02c"}, {"dlm", "#1f77b4"}};
        for (auto& [name, pts] : per_model) {
            const auto it = colors.find(name);
            plot.add_line("growth_" + name, it != colors.end() ? it->second : "#777777",
                          std::move(pts), 1.5);
        }
        if (!observed.empty()) plot.add_line("growth_observed", "#222222", std::move(observed), 2.0);
        plot.add_hline("zero", "#888888", 0.0);
        plot.write(d::path_in(cfg, "growth_comparison.svg"));
    }
    detail::write_run_meta(cfg, "plot");
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

namespace detail {

/// Render a CSV table as an aligned text block, copying the cell strings
/// verbatim so every reported number exists in the source CSV.
inline std::string render_table(const csv::Table& t, const std::string& title) {
    std::vector<std::size_t> width(t.header.size());
    for (std::size_t j = 0; j < t.header.size(); ++j) width[j] = t.header[j].size();
    for (const auto& r : t.rows)
        for (std::size_t j = 0; j < r.size(); ++j) width[j] = std::max(width[j], r[j].size());
    std::ostringstream out;
    out << title << "\n";
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            out << cells[j] << std::string(width[j] - cells[j].size(), ' ');
            out << (j + 1 < cells.size() ? "  " : "");
        }
        out << "\n";
    };
    line(t.header);
    std::size_t total = 0;
    for (std::size_t j = 0; j < width.size(); ++j) total += width[j] + (j + 1 < width.size() ? 2 : 0);
    out << std::string(total, '-') << "\n";
    for (const auto& r : t.rows) line(r);
    return out.str();
}

} // namespace detail

inline void cmd_report(const RunConfig& cfg, std::ostream& echo = std::cout) {
    namespace d = detail;
    std::ostringstream rep;
    rep << "gdpcast " << kVersion << " comparison report\n";
    rep << "==========================================\n\n";
    const auto add = [&](const std::string& file, const std::string& title, bool required) {
        const std::string path = d::path_in(cfg, file);
        if (!d::fs::exists(path)) {
            if (required) throw InputError("missing artifact '" + path + "'; run earlier stages first");
            return;
        }
        rep << d::render_table(csv::read_table_file(path), title) << "\n";
    };
    add("scorecard_fitted.csv", "In-sample fit (per-model accuracy, flags mark column minima)", true);
    add("scorecard_forecast.csv", "Held-out forecast accuracy", false);
    add("sarima_grid.csv", "SARIMA order search, ranked by AIC", false);
    add("diag_tests.csv", "Stationarity and residual diagnostics", false);
    add("growth_comparison.csv", "Quarterly growth: forecast vs observed", false);
    rep << "Notes\n-----\n";
    rep << "- u_theil_u1 is the bounded accuracy ratio; u_theil_u2 compares against the naive\n"
           "  last-value forecast (1 = no better than naive). Both variants are reported.\n";
    rep << "- Holt-Winters interval half-widths use z * sigma_e * sqrt(c_h) with the standard\n"
           "  variance accumulation c_h for the additive recursions; the method itself does not\n"
           "  prescribe an interval, so the convention is stated here.\n";
    rep << "- mape is on the percent scale. All table cells are verbatim copies of the CSV\n"
           "  artifacts, which remain the source of truth.\n";
    const std::string out_path = d::path_in(cfg, "report.txt");
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + out_path + "'");
    out << rep.str();
    echo << rep.str();
}

// ---------------------------------------------------------------------------
// fetch
// ---------------------------------------------------------------------------

inline void cmd_fetch(const RunConfig& cfg) {
    fetch::FetchConfig fc;
    fc.endpoint = cfg.endpoint;
    fc.series = cfg.series;
    fc.fixture = cfg.fixture;
    fc.offline = cfg.offline;
    fc.output = cfg.fetch_output.empty() ? cfg.input : cfg.fetch_output;
    namespace fs = std::filesystem;
    if (cfg.offline && fs::exists(fc.output) && fs::exists(fc.fixture) &&
        fs::equivalent(fc.output, fc.fixture))
        return; // the fixture already is the requested output
    fetch::run(fc);
}

} // namespace gdpcast::cli
