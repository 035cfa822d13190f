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

#ifndef IRS_NOMA_HARNESS_HPP
#define IRS_NOMA_HARNESS_HPP

// Monte-Carlo experiment runner and the result CSV.
//
// Run r of an experiment with base seed s draws its channel from an engine
// seeded with s + r, so any single run can be reproduced in isolation.
// Runs may execute on several threads; rows are always emitted in run order.
//
// CSV header (fixed):
//   experiment,seed,run,K,M,tx_power_dbm,epsilon,scheme,sum_rate,user_rate,wall_time_s
// user_rate is the nearest user's rate where meaningful and empty otherwise.
// wall_time_s is the only nondeterministic column; it is written as 0 when
// the spec is marked deterministic.

#include "channel.hpp"
#include "config.hpp"
#include "ddpg.hpp"
#include "env.hpp"
#include "error.hpp"
#include "noma.hpp"
#include "oracle.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace irs_noma {

enum class ExperimentKind { upperbound_compare, train_curve, noma_vs_oma_users, power_sweep, epsilon_sweep, oracle_only, eval };

inline const char* to_string(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::upperbound_compare: return "upperbound_compare";
    case ExperimentKind::train_curve: return "train_curve";
    case ExperimentKind::noma_vs_oma_users: return "noma_vs_oma_users";
    case ExperimentKind::power_sweep: return "power_sweep";
    case ExperimentKind::epsilon_sweep: return "epsilon_sweep";
    case ExperimentKind::oracle_only: return "oracle_only";
    case ExperimentKind::eval: return "eval";
    }
    return "?";
}

// Where the IRS phases of the sweep experiments come from.
enum class PhaseSource { random, ddpg, oracle };

inline const char* to_string(PhaseSource p) {
    switch (p) {
    case PhaseSource::random: return "random";
    case PhaseSource::ddpg: return "ddpg";
    case PhaseSource::oracle: return "oracle";
    }
    return "?";
}

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::oracle_only;
    SystemConfig system;
    TrainConfig train;
    std::vector<std::size_t> user_counts{2, 4, 8};
    std::vector<double> power_levels_dbm{10, 20, 30, 40, 50, 60, 70, 80};
    std::vector<double> epsilons{0.0, 1e-3, 1e-2, 1e-1};
    std::size_t monte_carlo_runs = 1;
    std::uint64_t seed = 1;
    std::string output_path;

    std::size_t grid_steps = 16;                     // oracle grid N
    std::optional<PhaseSource> phase_source;         // unset: per-kind default
    bool shared_policy = true;                       // ddpg phases: one policy per sweep point
    std::size_t eval_steps = 10;                     // greedy rollout length when applying a policy
    bool pin_training_channel = false;               // train_curve: one channel for all episodes
    bool deterministic = false;                      // zero the wall_time_s column
    unsigned threads = 1;
    std::string checkpoint_path;                     // eval: agent to load; train_curve: run 0's agent is saved here
};

inline PhaseSource effective_phase_source(const ExperimentSpec& spec) {
    if (spec.phase_source) return *spec.phase_source;
    return spec.kind == ExperimentKind::epsilon_sweep ? PhaseSource::oracle : PhaseSource::random;
}

inline bool is_sweep(ExperimentKind k) {
    return k == ExperimentKind::noma_vs_oma_users || k == ExperimentKind::power_sweep || k == ExperimentKind::epsilon_sweep;
}

inline void validate(const ExperimentSpec& spec) {
    validate(spec.system);
    validate(spec.train);
    detail::require(spec.monte_carlo_runs >= 1, "monte_carlo_runs must be >= 1");
    if (spec.kind == ExperimentKind::noma_vs_oma_users) {
        detail::require(!spec.user_counts.empty(), "user_counts must not be empty");
        for (auto k : spec.user_counts) {
            detail::require(k >= 1 && k <= kMaxUsers,
                            "user_counts entries must lie in [1, " + std::to_string(kMaxUsers) + "]");
        }
    }
    if (spec.kind == ExperimentKind::power_sweep) {
        detail::require(!spec.power_levels_dbm.empty(), "power_levels_dbm must not be empty");
    }
    if (spec.kind == ExperimentKind::epsilon_sweep) {
        detail::require(!spec.epsilons.empty(), "epsilons must not be empty");
        for (double e : spec.epsilons) detail::require(e >= 0.0 && e <= 1.0, "epsilons entries must lie in [0, 1]");
    }
    const bool needs_grid = spec.kind == ExperimentKind::oracle_only || spec.kind == ExperimentKind::upperbound_compare ||
                            (is_sweep(spec.kind) && effective_phase_source(spec) == PhaseSource::oracle);
    if (needs_grid) validate(GridSpec{spec.system.num_elements, spec.grid_steps});
    if (spec.kind == ExperimentKind::eval) {
        detail::require(!spec.checkpoint_path.empty(), "eval needs a checkpoint path");
    }
    detail::require(spec.eval_steps >= 1, "eval_steps must be >= 1");
    detail::require(spec.threads >= 1, "threads must be >= 1");
}

struct ResultRow {
    std::string experiment;
    std::uint64_t seed = 0;
    std::size_t run = 0;
    std::size_t num_users = 0;
    std::size_t num_elements = 0;
    double tx_power_dbm = 0.0;
    double epsilon = 0.0;
    std::string scheme; // noma | oma | oracle | ddpg
    double sum_rate = 0.0;
    std::optional<double> user_rate;
    double wall_time_s = 0.0;
};

inline constexpr const char* kResultCsvHeader =
    "experiment,seed,run,K,M,tx_power_dbm,epsilon,scheme,sum_rate,user_rate,wall_time_s";

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << kResultCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.experiment << ',' << r.seed << ',' << r.run << ',' << r.num_users << ',' << r.num_elements << ','
           << format_number(r.tx_power_dbm) << ',' << format_number(r.epsilon) << ',' << r.scheme << ','
           << format_number(r.sum_rate) << ',' << (r.user_rate ? format_number(*r.user_rate) : std::string()) << ','
           << format_number(r.wall_time_s) << '\n';
    }
}

namespace detail {

// Devices and pipes (/dev/null, /dev/stdout, FIFOs) are written in place.
inline bool is_special_file(const std::string& path) {
    std::error_code ec;
    const auto st = std::filesystem::status(path, ec);
    return !ec && std::filesystem::exists(st) && !std::filesystem::is_regular_file(st);
}

inline void write_stream(const std::string& target, const std::string& path, const std::string& content) {
    std::ofstream os(target, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write output file '" + path + "'");
    os << content;
    if (!os.flush()) throw Error("failed writing output file '" + path + "'");
}

} // namespace detail

// Writes to `path.tmp` and renames over `path`, so readers never see a partial
// file. Non-regular targets are written directly.
inline void write_file_atomically(const std::string& path, const std::string& content) {
    if (detail::is_special_file(path)) {
        detail::write_stream(path, path, content);
        return;
    }
    const std::string tmp = path + ".tmp";
    detail::write_stream(tmp, path, content);
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

// Fails early when the output location cannot be written.
inline void check_writable(const std::string& path) {
    if (detail::is_special_file(path)) {
        std::ofstream os(path, std::ios::binary | std::ios::app);
        if (!os) throw Error("output path '" + path + "' is not writable");
        return;
    }
    const std::string tmp = path + ".tmp";
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("output path '" + path + "' is not writable");
    os.close();
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
}

// splitmix64 finalizer; decorrelates the agent's stream from the channel
// stream of the same run.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Threads for replica parallelism: hardware concurrency capped by
// IRS_NOMA_THREADS when set.
inline unsigned default_threads() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("IRS_NOMA_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (const std::exception&) {
        }
    }
    return n;
}

namespace detail {

class Stopwatch {
public:
    explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
    double lap() {
        if (!enabled_) return 0.0;
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return s;
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point start_;
};

inline ResultRow make_row(const ExperimentSpec& spec, std::size_t run, const SystemConfig& cfg, double eps,
                          const char* scheme, double rate, std::optional<double> user_rate, double wall) {
    return ResultRow{to_string(spec.kind), spec.seed,     run,  cfg.num_users, cfg.num_elements, cfg.tx_power_dbm, eps,
                     scheme,              rate,          user_rate, wall};
}

inline TrainConfig agent_config(const ExperimentSpec& spec, std::uint64_t stream) {
    TrainConfig t = spec.train;
    t.seed = derive_seed(spec.seed, stream);
    return t;
}

// Best phases found while training on one pinned channel, scored by the
// noiseless sum rate of the executed actions.
struct PinnedTraining {
    PhaseVector best_phases;
    double best_sum_rate = 0.0;
    double best_snapped_sum_rate = 0.0; // only when a grid is supplied
};

inline PinnedTraining train_on_channel(const ExperimentSpec& spec, const SystemConfig& cfg,
                                       const ChannelRealization& ch, std::uint64_t stream,
                                       const std::optional<GridSpec>& grid) {
    Environment env(cfg);
    env.pin_channel(ch);
    const TrainConfig tcfg = agent_config(spec, stream);
    Agent agent(env.observation_size(), env.action_size(), tcfg);
    Rng env_rng(tcfg.seed);
    PinnedTraining best;
    bool first = true;
    train(agent, env, tcfg, env_rng, [&](const StepRecord& rec, const PhaseVector& action) {
        if (first || rec.sum_rate > best.best_sum_rate) {
            best.best_sum_rate = rec.sum_rate;
            best.best_phases = action;
        }
        if (grid) {
            const double snapped = evaluate_noma(ch, cfg, snap_to_grid(action, *grid).values()).sum_rate;
            if (first || snapped > best.best_snapped_sum_rate) best.best_snapped_sum_rate = snapped;
        }
        first = false;
    });
    return best;
}

// Trains one policy on fresh channels drawn from `cfg`.
inline Agent train_shared_policy(const ExperimentSpec& spec, const SystemConfig& cfg, std::uint64_t stream) {
    Environment env(cfg);
    const TrainConfig tcfg = agent_config(spec, stream);
    Agent agent(env.observation_size(), env.action_size(), tcfg);
    Rng env_rng(derive_seed(tcfg.seed, 7));
    train(agent, env, tcfg, env_rng);
    return agent;
}

inline PhaseVector greedy_phases(Agent agent, const SystemConfig& cfg, const ChannelRealization& ch,
                                 std::size_t steps) {
    Environment env(cfg);
    const EnvState start = env.reset(ch);
    return run_greedy(agent, env, start, steps).best_phases;
}

template <std::uniform_random_bit_generator G>
PhaseVector random_phases(std::size_t m, G& rng) {
    std::uniform_real_distribution<double> uni(0.0, kTwoPi);
    std::vector<double> theta(m);
    for (auto& t : theta) t = uni(rng);
    return PhaseVector(std::move(theta));
}

// Shared state computed once before the Monte-Carlo runs.
struct SharedPolicies {
    std::vector<Agent> per_point; // indexed like the sweep's first axis (or one entry)
};

class Runner {
public:
    Runner(const ExperimentSpec& spec) : spec_(spec), source_(effective_phase_source(spec)) {}

    void prepare() {
        if (spec_.kind == ExperimentKind::eval) {
            Environment env(spec_.system);
            Agent agent(env.observation_size(), env.action_size(), spec_.train);
            load_checkpoint(spec_.checkpoint_path, agent);
            shared_.per_point.push_back(std::move(agent));
            return;
        }
        if (!is_sweep(spec_.kind) || source_ != PhaseSource::ddpg || !spec_.shared_policy) return;
        if (spec_.kind == ExperimentKind::noma_vs_oma_users) {
            for (std::size_t i = 0; i < spec_.user_counts.size(); ++i) {
                SystemConfig cfg = spec_.system;
                set_num_users(cfg, spec_.user_counts[i]);
                shared_.per_point.push_back(train_shared_policy(spec_, cfg, 1000 + i));
            }
        } else {
            shared_.per_point.push_back(train_shared_policy(spec_, spec_.system, 1000));
        }
    }

    std::vector<ResultRow> run(std::size_t r) const {
        switch (spec_.kind) {
        case ExperimentKind::oracle_only: return run_oracle(r);
        case ExperimentKind::upperbound_compare: return run_upperbound(r);
        case ExperimentKind::train_curve: return run_train_curve(r);
        case ExperimentKind::noma_vs_oma_users: return run_users(r);
        case ExperimentKind::power_sweep: return run_power(r);
        case ExperimentKind::epsilon_sweep: return run_epsilon(r);
        case ExperimentKind::eval: return run_eval(r);
        }
        return {};
    }

private:
    std::uint64_t run_seed(std::size_t r) const { return spec_.seed + r; }

    PhaseVector choose_phases(const SystemConfig& cfg, const ChannelRealization& ch, std::size_t r,
                              std::size_t point, Rng& rng) const {
        switch (source_) {
        case PhaseSource::random: return random_phases(cfg.num_elements, rng);
        case PhaseSource::oracle:
            return exhaustive_search(ch, cfg, GridSpec{cfg.num_elements, spec_.grid_steps}).best_phases;
        case PhaseSource::ddpg:
            if (spec_.shared_policy) return greedy_phases(shared_.per_point.at(point), cfg, ch, spec_.eval_steps);
            return train_on_channel(spec_, cfg, ch, 1 + r * 1000 + point, std::nullopt).best_phases;
        }
        return {};
    }

    std::vector<ResultRow> run_oracle(std::size_t r) const {
        Stopwatch sw(!spec_.deterministic);
        Rng rng(run_seed(r));
        const auto& cfg = spec_.system;
        const auto ch = sample_scenario(cfg, rng);
        const auto res = exhaustive_search(ch, cfg, GridSpec{cfg.num_elements, spec_.grid_steps});
        const auto rates = evaluate_noma(ch, cfg, res.best_phases.values());
        return {make_row(spec_, r, cfg, cfg.sic_residual_eps, "oracle", res.best_sum_rate, rates.per_user_rate.back(),
                         sw.lap())};
    }

    std::vector<ResultRow> run_upperbound(std::size_t r) const {
        Stopwatch sw(!spec_.deterministic);
        Rng rng(run_seed(r));
        const auto& cfg = spec_.system;
        const GridSpec grid{cfg.num_elements, spec_.grid_steps};
        const auto ch = sample_scenario(cfg, rng);
        const auto oracle = exhaustive_search(ch, cfg, grid);
        const double t_oracle = sw.lap();
        const auto trained = train_on_channel(spec_, cfg, ch, 1 + r, grid);
        const double t_ddpg = sw.lap();
        return {make_row(spec_, r, cfg, cfg.sic_residual_eps, "oracle", oracle.best_sum_rate, std::nullopt, t_oracle),
                make_row(spec_, r, cfg, cfg.sic_residual_eps, "ddpg", trained.best_snapped_sum_rate, std::nullopt,
                         t_ddpg)};
    }

    std::vector<ResultRow> run_train_curve(std::size_t r) const {
        Stopwatch sw(!spec_.deterministic);
        const auto& cfg = spec_.system;
        Environment env(cfg);
        const TrainConfig tcfg = agent_config(spec_, 1 + r);
        Agent agent(env.observation_size(), env.action_size(), tcfg);
        Rng env_rng(run_seed(r));
        if (spec_.pin_training_channel) env.pin_channel(sample_scenario(cfg, env_rng));
        const TrainingLog log = train(agent, env, tcfg, env_rng);
        if (r == 0 && !spec_.checkpoint_path.empty()) save_checkpoint(spec_.checkpoint_path, agent);
        const double wall = sw.lap();
        std::vector<ResultRow> rows;
        rows.reserve(log.steps.size());
        for (const auto& s : log.steps) {
            rows.push_back(make_row(spec_, r, cfg, cfg.sic_residual_eps, "ddpg", s.sum_rate, std::nullopt, 0.0));
        }
        if (!rows.empty()) rows.back().wall_time_s = wall;
        return rows;
    }

    std::vector<ResultRow> run_users(std::size_t r) const {
        std::vector<ResultRow> rows;
        for (std::size_t i = 0; i < spec_.user_counts.size(); ++i) {
            Stopwatch sw(!spec_.deterministic);
            SystemConfig cfg = spec_.system;
            set_num_users(cfg, spec_.user_counts[i]);
            Rng rng(run_seed(r));
            const auto ch = sample_scenario(cfg, rng);
            const PhaseVector phases = choose_phases(cfg, ch, r, i, rng);
            const auto noma = evaluate_noma(ch, cfg, phases.values());
            const auto oma = evaluate_oma(ch, cfg, phases.values());
            const double wall = sw.lap();
            rows.push_back(make_row(spec_, r, cfg, cfg.sic_residual_eps, "noma", noma.sum_rate,
                                    noma.per_user_rate.back(), wall));
            rows.push_back(make_row(spec_, r, cfg, cfg.sic_residual_eps, "oma", oma.sum_rate,
                                    oma.per_user_rate.back(), wall));
        }
        return rows;
    }

    std::vector<ResultRow> run_power(std::size_t r) const {
        Stopwatch sw(!spec_.deterministic);
        Rng rng(run_seed(r));
        const auto ch = sample_scenario(spec_.system, rng);
        const PhaseVector phases = choose_phases(spec_.system, ch, r, 0, rng);
        std::vector<ResultRow> rows;
        for (double p : spec_.power_levels_dbm) {
            SystemConfig cfg = spec_.system;
            cfg.tx_power_dbm = p;
            const auto noma = evaluate_noma(ch, cfg, phases.values());
            rows.push_back(make_row(spec_, r, cfg, cfg.sic_residual_eps, "noma", noma.sum_rate,
                                    noma.per_user_rate.back(), sw.lap()));
        }
        return rows;
    }

    std::vector<ResultRow> run_epsilon(std::size_t r) const {
        Stopwatch sw(!spec_.deterministic);
        Rng rng(run_seed(r));
        const auto& cfg = spec_.system;
        const auto ch = sample_scenario(cfg, rng);
        const PhaseVector phases = choose_phases(cfg, ch, r, 0, rng);
        std::vector<ResultRow> rows;
        for (double eps : spec_.epsilons) {
            const auto noma = evaluate_noma(ch, cfg, phases.values(), eps);
            rows.push_back(make_row(spec_, r, cfg, eps, "noma", noma.sum_rate, noma.per_user_rate.back(), sw.lap()));
        }
        return rows;
    }

    std::vector<ResultRow> run_eval(std::size_t r) const {
        Stopwatch sw(!spec_.deterministic);
        Rng rng(run_seed(r));
        const auto& cfg = spec_.system;
        const auto ch = sample_scenario(cfg, rng);
        const PhaseVector phases = greedy_phases(shared_.per_point.at(0), cfg, ch, spec_.eval_steps);
        const auto noma = evaluate_noma(ch, cfg, phases.values());
        return {make_row(spec_, r, cfg, cfg.sic_residual_eps, "ddpg", noma.sum_rate, noma.per_user_rate.back(),
                         sw.lap())};
    }

    const ExperimentSpec& spec_;
    PhaseSource source_;
    SharedPolicies shared_;
};

} // namespace detail

// Runs every Monte-Carlo replica and returns the rows in run order. When
// spec.output_path is set the CSV is written there atomically at the end;
// an unwritable path is reported before any computation.
inline std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    validate(spec);
    if (!spec.output_path.empty()) check_writable(spec.output_path);

    detail::Runner runner(spec);
    runner.prepare();

    std::vector<std::vector<ResultRow>> per_run(spec.monte_carlo_runs);
    const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(spec.threads, spec.monte_carlo_runs));
    if (threads <= 1) {
        for (std::size_t r = 0; r < spec.monte_carlo_runs; ++r) per_run[r] = runner.run(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < spec.monte_carlo_runs; r = next++) {
                    try {
                        per_run[r] = runner.run(r);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    std::vector<ResultRow> rows;
    for (auto& chunk : per_run) {
        rows.insert(rows.end(), std::make_move_iterator(chunk.begin()), std::make_move_iterator(chunk.end()));
    }
    if (!spec.output_path.empty()) {
        std::ostringstream os;
        write_results_csv(os, rows);
        write_file_atomically(spec.output_path, os.str());
    }
    return rows;
}

// Convenience wrapper for the upper-bound comparison.
inline std::vector<ResultRow> run_upperbound_compare(ExperimentSpec spec) {
    spec.kind = ExperimentKind::upperbound_compare;
    return run_experiment(spec);
}

// ---------------------------------------------------------------------------
// Experiment keys in the config file (consumed alongside the scenario and
// training keys).

inline void take_experiment_keys(KeyValues& kv, ExperimentSpec& spec) {
    auto take = [&kv](std::string_view key, auto&& apply) {
        if (auto it = kv.find(key); it != kv.end()) {
            apply(it->first, it->second);
            kv.erase(it);
        }
    };
    auto parse_bool = [](const std::string& k, const std::string& v) {
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("config key '" + k + "': expected true/false, got '" + v + "'");
    };
    take("user_counts", [&](const std::string& k, const std::string& v) {
        spec.user_counts.clear();
        for (double d : detail::parse_double_list(k, v)) {
            if (d < 1 || d != std::floor(d)) throw ConfigError("config key 'user_counts': entries must be positive integers");
            spec.user_counts.push_back(static_cast<std::size_t>(d));
        }
    });
    take("power_levels_dbm", [&](const std::string& k, const std::string& v) { spec.power_levels_dbm = detail::parse_double_list(k, v); });
    take("epsilons", [&](const std::string& k, const std::string& v) { spec.epsilons = detail::parse_double_list(k, v); });
    take("monte_carlo_runs", [&](const std::string& k, const std::string& v) { spec.monte_carlo_runs = detail::parse_uint(k, v); });
    take("grid_steps", [&](const std::string& k, const std::string& v) { spec.grid_steps = detail::parse_uint(k, v); });
    take("eval_steps", [&](const std::string& k, const std::string& v) { spec.eval_steps = detail::parse_uint(k, v); });
    take("shared_policy", [&](const std::string& k, const std::string& v) { spec.shared_policy = parse_bool(k, v); });
    take("pin_training_channel", [&](const std::string& k, const std::string& v) { spec.pin_training_channel = parse_bool(k, v); });
    take("phase_source", [&](const std::string& k, const std::string& v) {
        if (v == "random") spec.phase_source = PhaseSource::random;
        else if (v == "ddpg") spec.phase_source = PhaseSource::ddpg;
        else if (v == "oracle") spec.phase_source = PhaseSource::oracle;
        else throw ConfigError("config key '" + k + "': expected random, ddpg or oracle, got '" + v + "'");
    });
}

// Builds a spec from a parsed config file; every key must be recognised.
inline ExperimentSpec spec_from_key_values(KeyValues kv, ExperimentKind kind) {
    ExperimentSpec spec;
    spec.kind = kind;
    spec.system = take_system_config(kv);
    spec.train = take_train_config(kv);
    spec.seed = spec.train.seed;
    take_experiment_keys(kv, spec);
    if (!kv.empty()) throw ConfigError("unknown config key '" + kv.begin()->first + "'");
    return spec;
}

inline std::string experiment_keys_help() {
    const ExperimentSpec d;
    return "  experiments:\n"
           "    monte_carlo_runs      Monte-Carlo replicas (default 1, overridden by --runs)\n"
           "    grid_steps            oracle phase steps N per element (default 16)\n"
           "    user_counts           sweep-users K values (default 2,4,8)\n"
           "    power_levels_dbm      sweep-power levels (default 10,20,...,80)\n"
           "    epsilons              sweep-eps SIC residuals (default 0,0.001,0.01,0.1)\n"
           "    phase_source          random | ddpg | oracle (default: oracle for sweep-eps, random otherwise)\n"
           "    shared_policy         ddpg phases from one policy per sweep point (default true)\n"
           "    eval_steps            greedy policy steps per channel (default 10)\n"
           "    pin_training_channel  train-curve: keep one channel for all episodes (default false)\n";
}

} // namespace irs_noma

#endif
