#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <httplib.h>

#include "gdpcast/csv.hpp"
#include "gdpcast/errors.hpp"

namespace gdpcast::fetch {

struct FetchConfig {
    std::string endpoint; // http(s) URL template or a local file path
    std::string series;   // substituted for {series} in the endpoint
    std::string output;   // canonical CSV destination
    std::string fixture;  // bundled data used in offline mode
    bool offline = false;
};

namespace detail {

inline std::string substitute(std::string templ, const std::string& key, const std::string& val) {
    const std::string needle = "{" + key + "}";
    std::size_t pos;
    while ((pos = templ.find(needle)) != std::string::npos)
        templ.replace(pos, needle.size(), val);
    return templ;
}

inline void copy_bytes(const std::string& from, const std::string& to) {
    std::ifstream in(from, std::ios::binary);
    if (!in) throw InputError("fetch: cannot open '" + from + "'");
    std::ofstream out(to, std::ios::binary);
    if (!out) throw InputError("fetch: cannot write '" + to + "'");
    out << in.rdbuf();
}

inline std::string http_get(const std::string& url) {
    const std::size_t scheme_end = url.find("://");
    const std::size_t host_start = scheme_end + 3;
    std::size_t path_start = url.find('/', host_start);
    if (path_start == std::string::npos) path_start = url.size();
    const std::string origin = url.substr(0, path_start);
    const std::string path = path_start < url.size() ? url.substr(path_start) : "/";
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (url.rfind("https://", 0) == 0)
        throw NetworkError("fetch: built without TLS support; use http, a local path, or offline "
                           "mode with the bundled fixture");
#endif
    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(15);
    client.set_read_timeout(30);
    auto res = client.Get(path);
    if (!res)
        throw NetworkError("fetch: request to '" + url + "' failed (" +
                           httplib::to_string(res.error()) +
                           "); consider offline mode with the bundled fixture");
    if (res->status != 200)
        throw NetworkError("fetch: '" + url + "' returned HTTP " + std::to_string(res->status) +
                           "; consider offline mode with the bundled fixture");
    return res->body;
}

} // namespace detail

/**
 * Obtain the input series and write it as canonical `date,value` CSV.
 * Offline mode copies the bundled fixture byte-for-byte. Online mode fetches
 * the endpoint (http(s); any other string is read as a local file, which is
 * also the test hook for malformed payloads), validates the payload against
 * the full series schema, and rewrites it canonically. Schema violations are
 * network-class failures: the remote content, not this machine, is at fault.
 */
inline void run(const FetchConfig& cfg) {
    if (cfg.output.empty()) throw InputError("fetch: output path is empty");
    if (cfg.offline) {
        if (cfg.fixture.empty()) throw InputError("fetch: offline mode needs a fixture path");
        detail::copy_bytes(cfg.fixture, cfg.output);
        return;
    }
    if (cfg.endpoint.empty()) throw InputError("fetch: endpoint is empty");
    const std::string url = detail::substitute(cfg.endpoint, "series", cfg.series);
    std::string payload;
    if (url.rfind("http://", 0) == 0 || url.rfind("https://", 0) == 0) {
        payload = detail::http_get(url);
    } else {
        std::ifstream in(url, std::ios::binary);
        if (!in)
            throw NetworkError("fetch: cannot read source '" + url +
                               "'; consider offline mode with the bundled fixture");
        std::ostringstream ss;
        ss << in.rdbuf();
        payload = ss.str();
    }
    std::istringstream stream(payload);
    TimeSeries series = [&] {
        try {
            return csv::read_series(stream, "remote payload");
        } catch (const Error& e) {
            throw NetworkError(std::string("fetch: remote payload failed validation: ") +
                               e.what() + "; consider offline mode with the bundled fixture");
        }
    }();
    csv::write_series_file(cfg.output, series);
}

} // namespace gdpcast::fetch
