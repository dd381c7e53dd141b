// gdpcast command-line driver.
//
//   gdpcast <fetch|fit|forecast|plot|report> --config <path> [--key value ...]
//
// Every trailing --key value pair overrides the matching config-file key.
// Exit codes: 0 success, 2 input/config problem, 3 numerical failure,
// 4 network failure.

#include <clocale>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "gdpcast/gdpcast.hpp"

namespace {

std::vector<std::pair<std::string, std::string>>
collect_overrides(const std::vector<std::string>& extras) {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < extras.size(); i += 2) {
        const std::string& key = extras[i];
        if (key.rfind("--", 0) != 0)
            throw gdpcast::InputError("override '" + key + "' must start with --");
        if (i + 1 >= extras.size())
            throw gdpcast::InputError("override '" + key + "' is missing a value");
        out.emplace_back(key.substr(2), extras[i + 1]);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_NUMERIC, "C"); // artifact bytes must not depend on locale
    CLI::App app{"gdpcast: quarterly GDP forecasting and model comparison"};
    app.require_subcommand(1);

    std::string config_path;
    const std::vector<std::string> names = {"fetch", "fit", "forecast", "plot", "report"};
    std::vector<CLI::App*> subs;
    for (const auto& name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "path to the run configuration")->required();
        sub->allow_extras();
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::string chosen;
        std::vector<std::string> extras;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (subs[i]->parsed()) {
                chosen = names[i];
                extras = subs[i]->remaining();
            }
        }
        const gdpcast::cli::RunConfig cfg =
            gdpcast::cli::load_config(config_path, collect_overrides(extras));
        if (chosen == "fetch") gdpcast::cli::cmd_fetch(cfg);
        else if (chosen == "fit") gdpcast::cli::cmd_fit(cfg);
        else if (chosen == "forecast") gdpcast::cli::cmd_forecast(cfg);
        else if (chosen == "plot") gdpcast::cli::cmd_plot(cfg);
        else if (chosen == "report") gdpcast::cli::cmd_report(cfg);
        return 0;
    } catch (const gdpcast::NetworkError& e) {
        std::cerr << "gdpcast: network error: " << e.what() << "\n";
        return 4;
    } catch (const gdpcast::NumericalError& e) {
        std::cerr << "gdpcast: numerical error: " << e.what() << "\n";
        return 3;
    } catch (const gdpcast::ModelError& e) {
        std::cerr << "gdpcast: model error: " << e.what() << "\n";
        return 3;
    } catch (const gdpcast::InputError& e) {
        std::cerr << "gdpcast: input error: " << e.what() << "\n";
        return 2;
    } catch (const gdpcast::DomainError& e) {
        std::cerr << "gdpcast: input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "gdpcast: internal error: " << e.what() << "\n";
        return 3;
    }
}
