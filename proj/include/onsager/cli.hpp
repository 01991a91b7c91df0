#pragma once

// Command-line front end:
//
//   onsager sweep [--config FILE] [--preset fig2|fig3|fig4] [--out FILE.csv|.json] [--verify]
//
// Settings are layered: built-in defaults, then the config file, then the
// preset, then the remaining flags.

#include <exception>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "onsager/errors.hpp"
#include "onsager/sweep.hpp"
#include "onsager/verify.hpp"

namespace onsager {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitVerify = 2,
    kExitNumeric = 3,
};

namespace detail {

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct SweepArgs {
    std::string config;
    std::string preset;
    std::string out;
    bool verify = false;
    unsigned threads = 0;
};

inline SweepConfig resolve_config(const SweepArgs& a) {
    if (a.config.empty() && a.preset.empty()) {
        throw ConfigError("sweep", "need --config FILE and/or --preset NAME");
    }
    SweepConfig c;
    if (!a.config.empty()) apply_config_file(c, a.config);
    if (!a.preset.empty()) apply_preset(c, a.preset);
    if (a.verify) c.verify = true;
    if (a.threads != 0) c.threads = a.threads;
    if (!a.out.empty()) {
        if (ends_with(a.out, ".json")) c.format = OutputFormat::json;
        else if (ends_with(a.out, ".csv")) c.format = OutputFormat::csv;
        else throw ConfigError("--out", "extension must be .csv or .json");
    }
    return c;
}

inline int run_sweep_command(const SweepArgs& args, std::ostream& out, std::ostream& err) {
    const SweepConfig config = resolve_config(args);
    const SweepResult result = run_sweep(config);
    for (const auto& w : result.warnings.messages) err << "warning: " << w << '\n';

    auto emit = [&](std::ostream& os) {
        if (config.format == OutputFormat::json) write_json(os, result, config.columns);
        else write_csv(os, result, config.columns);
    };
    if (args.out.empty()) {
        emit(out);
    } else {
        std::ofstream file(args.out, std::ios::binary);
        if (!file) throw ConfigError("--out", "cannot open '" + args.out + "' for writing");
        emit(file);
        file.flush();
        if (!file) throw ConfigError("--out", "write to '" + args.out + "' failed");
    }

    if (config.verify) {
        const VerificationReport report = verify(config);
        std::ostream& rep = args.out.empty() ? err : out;
        report.print(rep);
        if (!report.passed()) {
            err << "verification failed\n";
            return kExitVerify;
        }
    }
    return kExitOk;
}

}  // namespace detail

/// Parses argv and runs the requested command; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decay rates of a dipole at the center of an absorbing multilayer sphere"};
    app.require_subcommand(1);
    detail::SweepArgs args;
    CLI::App* sweep = app.add_subcommand("sweep", "Frequency sweep of every normalized rate");
    sweep->add_option("--config", args.config, "Config file (INI-style key = value sections)");
    sweep->add_option("--preset", args.preset, "Figure parameter set")
        ->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
    sweep->add_option("--out", args.out, "Output file; .csv or .json (default: CSV on stdout)");
    sweep->add_flag("--verify", args.verify, "Run the invariant battery after the sweep");
    sweep->add_option("--threads", args.threads, "Worker threads (0: hardware concurrency)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        return detail::run_sweep_command(args, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const QuadratureFailure& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const IllConditioned& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const SingularDenominator& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const OverflowError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const DomainError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
}

}  // namespace onsager
