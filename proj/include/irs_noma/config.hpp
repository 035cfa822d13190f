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

#ifndef IRS_NOMA_CONFIG_HPP
#define IRS_NOMA_CONFIG_HPP

// Scenario and training parameters, and the flat `key = value` file format
// they are loaded from.
//
// File format: one `key = value` pair per line; `#` starts a comment; blank
// lines are ignored; list values are comma separated. Keys are the field
// names below. A key that is not recognised by any consumer is an error.

#include "error.hpp"
#include "noma.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace irs_noma {

// Physical layer and geometry. Defaults are the reference deployment:
// 32 users, 16 elements, 40 dBm, 10 MHz, -174 dBm/Hz, Rician factor 10,
// exponents 2 / 2.8, BS-IRS 50 m, users 200-1500 m from the IRS.
struct SystemConfig {
    std::size_t num_users = 32;
    std::size_t num_elements = 16;
    double tx_power_dbm = 40.0;
    double bandwidth_hz = 10e6;
    double noise_psd_dbm_hz = -174.0;
    double rician_k1 = 10.0; // linear
    double rician_k2 = 10.0; // linear
    double pl_exp_bs_irs = 2.0;
    double pl_exp_irs_user = 2.8;
    double dist_bs_irs_m = 50.0;
    double dist_user_min_m = 200.0;
    double dist_user_max_m = 1500.0;
    double sic_residual_eps = 0.0;
    double pl_ref_loss_db = -30.0; // path loss at pl_ref_dist_m
    double pl_ref_dist_m = 1.0;
    std::vector<double> power_coeffs = allocate_power(32);

    double tx_power_watts() const { return dbm_to_watts(tx_power_dbm); }
    double noise_watts() const { return noise_power_watts(noise_psd_dbm_hz, bandwidth_hz); }
};

// Re-derives power_coeffs for a new user count.
inline void set_num_users(SystemConfig& cfg, std::size_t num_users) {
    cfg.num_users = num_users;
    cfg.power_coeffs = allocate_power(num_users);
}

inline void validate(const SystemConfig& cfg) {
    using detail::require;
    require(cfg.num_users >= 1, "num_users must be >= 1");
    require(cfg.num_elements >= 1, "num_elements must be >= 1");
    require(std::isfinite(cfg.tx_power_dbm), "tx_power_dbm must be finite");
    require(cfg.bandwidth_hz > 0.0, "bandwidth_hz must be positive");
    require(std::isfinite(cfg.noise_psd_dbm_hz), "noise_psd_dbm_hz must be finite");
    require(cfg.rician_k1 >= 0.0, "rician_k1 must be >= 0");
    require(cfg.rician_k2 >= 0.0, "rician_k2 must be >= 0");
    require(std::isfinite(cfg.pl_exp_bs_irs) && std::isfinite(cfg.pl_exp_irs_user), "path-loss exponents must be finite");
    require(cfg.dist_bs_irs_m > 0.0, "dist_bs_irs_m must be positive");
    require(cfg.dist_user_min_m > 0.0, "dist_user_min_m must be positive");
    require(cfg.dist_user_min_m <= cfg.dist_user_max_m, "dist_user_min_m must not exceed dist_user_max_m");
    require(cfg.sic_residual_eps >= 0.0 && cfg.sic_residual_eps <= 1.0, "sic_residual_eps must lie in [0, 1]");
    require(cfg.pl_ref_dist_m > 0.0, "pl_ref_dist_m must be positive");
    require(std::isfinite(cfg.pl_ref_loss_db), "pl_ref_loss_db must be finite");

    const auto& beta = cfg.power_coeffs;
    require(beta.size() == cfg.num_users, "power_coeffs must have num_users entries");
    double total = 0.0;
    for (double b : beta) total += b;
    require(std::abs(total - 1.0) <= 1e-12, "power_coeffs must sum to 1");
    for (std::size_t k = 0; k < beta.size(); ++k) {
        require(beta[k] > 0.0, "power_coeffs must be positive");
        double weaker = 0.0;
        for (std::size_t j = k + 1; j < beta.size(); ++j) weaker += beta[j];
        if (k + 1 < beta.size()) {
            require(beta[k] > beta[k + 1], "power_coeffs must be strictly decreasing");
            require(beta[k] > weaker, "each power coefficient must exceed the sum of all weaker ones");
        }
    }
}

// DDPG hyper-parameters. Learning rates, discount, tau, batch and buffer
// capacity default to the reference training setup.
struct TrainConfig {
    double actor_lr = 5e-4;
    double critic_lr = 1e-3;
    double gamma_discount = 0.05;
    double tau = 0.05;
    std::size_t batch_size = 64;
    std::size_t buffer_capacity = 10000;
    std::size_t steps_per_episode = 1000;
    std::size_t num_episodes = 10;
    std::uint64_t seed = 1;
    std::size_t hidden_units = 256; // width of both hidden layers, actor and critic
    double ou_theta = 0.15;
    double ou_sigma = 0.1;
    double ou_mu = 0.0;
    double ou_dt = 1.0;
};

inline void validate(const TrainConfig& cfg) {
    using detail::require;
    require(cfg.actor_lr >= 0.0 && cfg.critic_lr >= 0.0, "learning rates must be >= 0");
    require(cfg.gamma_discount >= 0.0 && cfg.gamma_discount <= 1.0, "gamma_discount must lie in [0, 1]");
    require(cfg.tau >= 0.0 && cfg.tau <= 1.0, "tau must lie in [0, 1]");
    require(cfg.batch_size >= 1, "batch_size must be >= 1");
    require(cfg.batch_size <= cfg.buffer_capacity, "batch_size must not exceed buffer_capacity");
    require(cfg.steps_per_episode >= 1, "steps_per_episode must be >= 1");
    require(cfg.hidden_units >= 1, "hidden_units must be >= 1");
    require(cfg.ou_theta > 0.0 && cfg.ou_sigma >= 0.0 && cfg.ou_dt > 0.0,
            "ou_theta and ou_dt must be positive, ou_sigma non-negative");
    require(std::isfinite(cfg.ou_mu), "ou_mu must be finite");
}

// ---------------------------------------------------------------------------
// Key-value files

using KeyValues = std::map<std::string, std::string, std::less<>>;

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    try {
        if (value.empty() || value.front() == '-') throw std::invalid_argument(value);
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + value + "'");
    }
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

} // namespace detail

inline KeyValues parse_key_values(std::istream& in, const std::string& origin = "<stream>") {
    KeyValues kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key = detail::trim(std::string_view(body).substr(0, eq));
        std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        if (kv.contains(key)) throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        kv.emplace(std::move(key), std::move(value));
    }
    return kv;
}

inline KeyValues load_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_key_values(in, path);
}

// Consumes the SystemConfig keys present in `kv` (erasing them) and returns
// the resulting config. power_coeffs defaults to allocate_power(num_users).
inline SystemConfig take_system_config(KeyValues& kv) {
    SystemConfig cfg;
    auto take = [&kv](std::string_view key, auto&& apply) {
        if (auto it = kv.find(key); it != kv.end()) {
            apply(it->first, it->second);
            kv.erase(it);
        }
    };
    auto real = [&](std::string_view key, double& field) {
        take(key, [&](const std::string& k, const std::string& v) { field = detail::parse_double(k, v); });
    };
    auto count = [&](std::string_view key, std::size_t& field) {
        take(key, [&](const std::string& k, const std::string& v) { field = detail::parse_uint(k, v); });
    };
    count("num_users", cfg.num_users);
    count("num_elements", cfg.num_elements);
    real("tx_power_dbm", cfg.tx_power_dbm);
    real("bandwidth_hz", cfg.bandwidth_hz);
    real("noise_psd_dbm_hz", cfg.noise_psd_dbm_hz);
    real("rician_k1", cfg.rician_k1);
    real("rician_k2", cfg.rician_k2);
    real("pl_exp_bs_irs", cfg.pl_exp_bs_irs);
    real("pl_exp_irs_user", cfg.pl_exp_irs_user);
    real("dist_bs_irs_m", cfg.dist_bs_irs_m);
    real("dist_user_min_m", cfg.dist_user_min_m);
    real("dist_user_max_m", cfg.dist_user_max_m);
    real("sic_residual_eps", cfg.sic_residual_eps);
    real("pl_ref_loss_db", cfg.pl_ref_loss_db);
    real("pl_ref_dist_m", cfg.pl_ref_dist_m);

    bool explicit_beta = false;
    take("power_coeffs", [&](const std::string& k, const std::string& v) {
        cfg.power_coeffs = detail::parse_double_list(k, v);
        explicit_beta = true;
    });
    if (!explicit_beta) {
        if (cfg.num_users == 0) throw ConfigError("num_users must be >= 1");
        cfg.power_coeffs = allocate_power(cfg.num_users);
    }
    try {
        validate(cfg);
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("invalid system config: ") + e.what());
    }
    return cfg;
}

inline TrainConfig take_train_config(KeyValues& kv) {
    TrainConfig cfg;
    auto take = [&kv](std::string_view key, auto&& apply) {
        if (auto it = kv.find(key); it != kv.end()) {
            apply(it->first, it->second);
            kv.erase(it);
        }
    };
    auto real = [&](std::string_view key, double& field) {
        take(key, [&](const std::string& k, const std::string& v) { field = detail::parse_double(k, v); });
    };
    auto count = [&](std::string_view key, std::size_t& field) {
        take(key, [&](const std::string& k, const std::string& v) { field = detail::parse_uint(k, v); });
    };
    real("actor_lr", cfg.actor_lr);
    real("critic_lr", cfg.critic_lr);
    real("gamma_discount", cfg.gamma_discount);
    real("tau", cfg.tau);
    count("batch_size", cfg.batch_size);
    count("buffer_capacity", cfg.buffer_capacity);
    count("steps_per_episode", cfg.steps_per_episode);
    count("num_episodes", cfg.num_episodes);
    take("seed", [&](const std::string& k, const std::string& v) { cfg.seed = detail::parse_uint(k, v); });
    count("hidden_units", cfg.hidden_units);
    real("ou_theta", cfg.ou_theta);
    real("ou_sigma", cfg.ou_sigma);
    real("ou_mu", cfg.ou_mu);
    real("ou_dt", cfg.ou_dt);
    try {
        validate(cfg);
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("invalid train config: ") + e.what());
    }
    return cfg;
}

// Text for --help: every recognised scenario and training key with its default.
inline std::string config_keys_help() {
    const SystemConfig s;
    const TrainConfig t;
    std::ostringstream os;
    os << "Config file keys (key = value, '#' comments):\n"
       << "  scenario:\n"
       << "    num_users          users K (default " << s.num_users << ")\n"
       << "    num_elements       IRS elements M (default " << s.num_elements << ")\n"
       << "    tx_power_dbm       BS transmit power (default " << s.tx_power_dbm << ")\n"
       << "    bandwidth_hz       system bandwidth (default " << s.bandwidth_hz << ")\n"
       << "    noise_psd_dbm_hz   noise power spectral density (default " << s.noise_psd_dbm_hz << ")\n"
       << "    rician_k1          BS-IRS Rician factor, linear (default " << s.rician_k1 << ")\n"
       << "    rician_k2          IRS-user Rician factor, linear (default " << s.rician_k2 << ")\n"
       << "    pl_exp_bs_irs      BS-IRS path-loss exponent (default " << s.pl_exp_bs_irs << ")\n"
       << "    pl_exp_irs_user    IRS-user path-loss exponent (default " << s.pl_exp_irs_user << ")\n"
       << "    dist_bs_irs_m      BS-IRS distance (default " << s.dist_bs_irs_m << ")\n"
       << "    dist_user_min_m    nearest user distance (default " << s.dist_user_min_m << ")\n"
       << "    dist_user_max_m    farthest user distance (default " << s.dist_user_max_m << ")\n"
       << "    sic_residual_eps   imperfect-SIC residual fraction (default " << s.sic_residual_eps << ")\n"
       << "    pl_ref_loss_db     path loss at the reference distance (default " << s.pl_ref_loss_db << ")\n"
       << "    pl_ref_dist_m      reference distance (default " << s.pl_ref_dist_m << ")\n"
       << "    power_coeffs       comma list of K power shares (default 2^(K-k)/(2^K-1))\n"
       << "  training:\n"
       << "    actor_lr           (default " << t.actor_lr << ")\n"
       << "    critic_lr          (default " << t.critic_lr << ")\n"
       << "    gamma_discount     (default " << t.gamma_discount << ")\n"
       << "    tau                soft-update coefficient (default " << t.tau << ")\n"
       << "    batch_size         (default " << t.batch_size << ")\n"
       << "    buffer_capacity    (default " << t.buffer_capacity << ")\n"
       << "    steps_per_episode  (default " << t.steps_per_episode << ")\n"
       << "    num_episodes       (default " << t.num_episodes << ")\n"
       << "    seed               (default " << t.seed << ", overridden by --seed)\n"
       << "    hidden_units       hidden layer width (default " << t.hidden_units << ")\n"
       << "    ou_theta, ou_sigma, ou_mu, ou_dt   exploration noise (defaults " << t.ou_theta << ", "
       << t.ou_sigma << ", " << t.ou_mu << ", " << t.ou_dt << ")\n";
    return os.str();
}

} // namespace irs_noma

#endif
