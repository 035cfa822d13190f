// SPDX-License-Identifier: Apache-2.0
//
// irs-noma: IRS-assisted downlink NOMA simulation and DDPG phase control
// Copyright (C) 2026 The irs-noma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef IRS_NOMA_CLI_HPP
#define IRS_NOMA_CLI_HPP

// Command-line front end. Exit codes: 0 success, 2 usage or config error,
// 1 runtime error.

#include "config.hpp"
#include "error.hpp"
#include "harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace irs_noma {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kUsage =
    "usage: irs_noma <train|eval|oracle|sweep-users|sweep-power|sweep-eps|compare-upperbound>\n"
    "                --config <path> [--seed <int>] [--out <path>] [--runs <int>] [--deterministic]\n"
    "                [--checkpoint <path>]\n"
    "Run 'irs_noma --help' for every option and config key.\n";

struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::size_t> runs;
    bool deterministic = false;
    std::string checkpoint;
};

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"IRS-assisted downlink NOMA simulator with DDPG phase control", "irs_noma"};
    app.require_subcommand(1);
    app.footer("\n" + config_keys_help() + experiment_keys_help() +
               "\nEnvironment: IRS_NOMA_THREADS caps the number of parallel Monte-Carlo runs.\n");

    CliOptions opt;
    app.add_option("--config", opt.config_path, "key = value config file")->required()->check(CLI::ExistingFile);
    app.add_option("--seed", opt.seed, "base seed; run r uses seed + r");
    app.add_option("--out", opt.out, "result CSV (stdout when omitted)");
    app.add_option("--runs", opt.runs, "Monte-Carlo runs")->check(CLI::PositiveNumber);
    app.add_flag("--deterministic", opt.deterministic, "write 0 in the wall_time_s column");
    app.add_option("--checkpoint", opt.checkpoint, "train: save the agent here; eval: load it from here");

    struct Command {
        const char* name;
        const char* help;
        ExperimentKind kind;
    };
    const Command commands[] = {
        {"train", "train a DDPG agent; one row per training step", ExperimentKind::train_curve},
        {"eval", "apply a trained agent (--checkpoint) to fresh channels", ExperimentKind::eval},
        {"oracle", "exhaustive grid search per channel", ExperimentKind::oracle_only},
        {"sweep-users", "NOMA and OMA sum rate over user_counts", ExperimentKind::noma_vs_oma_users},
        {"sweep-power", "NOMA sum rate over power_levels_dbm", ExperimentKind::power_sweep},
        {"sweep-eps", "NOMA rates over the SIC residuals in epsilons", ExperimentKind::epsilon_sweep},
        {"compare-upperbound", "DDPG best vs oracle best on the same channel", ExperimentKind::upperbound_compare},
    };
    std::optional<ExperimentKind> chosen;
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->fallthrough();
        sub->callback([&chosen, kind = c.kind] { chosen = kind; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << kUsage;
        return kExitUsage;
    }

    ExperimentSpec spec;
    try {
        spec = spec_from_key_values(load_key_values(opt.config_path), *chosen);
        if (opt.seed) {
            spec.seed = *opt.seed;
            spec.train.seed = *opt.seed;
        }
        if (opt.runs) spec.monte_carlo_runs = *opt.runs;
        spec.output_path = opt.out;
        spec.deterministic = opt.deterministic;
        spec.checkpoint_path = opt.checkpoint;
        spec.threads = default_threads();
        if (spec.kind == ExperimentKind::eval && spec.checkpoint_path.empty()) {
            throw ConfigError("eval requires --checkpoint");
        }
        validate(spec);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParameterError& e) {
        err << "error: invalid configuration: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        const auto rows = run_experiment(spec);
        if (spec.output_path.empty()) write_results_csv(out, rows);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace irs_noma

#endif
