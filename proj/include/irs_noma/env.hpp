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

#ifndef IRS_NOMA_ENV_HPP
#define IRS_NOMA_ENV_HPP

// Reinforcement-learning environment around the IRS-NOMA downlink.
//
// The agent acts with a vector of M phases and is rewarded with the
// improvement of the sum rate over the best sum rate seen so far in the
// episode. It observes the BS->IRS channel and the previous SINRs; the
// IRS->user channels stay hidden inside the environment.

#include "channel.hpp"
#include "config.hpp"
#include "error.hpp"
#include "noma.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace irs_noma {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double wrap_phase(double theta) {
    if (!std::isfinite(theta)) throw ParameterError("wrap_phase: phase must be finite");
    double w = std::fmod(theta, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    // fmod of a tiny negative value plus 2*pi can round up to exactly 2*pi.
    if (w >= kTwoPi) w = 0.0;
    return w;
}

// IRS configuration: one phase per element, always stored in [0, 2*pi), so
// every reflection coefficient e^{j theta} has unit modulus by construction.
class PhaseVector {
public:
    PhaseVector() = default;
    explicit PhaseVector(std::vector<double> theta) : theta_(std::move(theta)) {
        for (auto& t : theta_) t = wrap_phase(t);
    }
    static PhaseVector zeros(std::size_t num_elements) { return PhaseVector(std::vector<double>(num_elements, 0.0)); }

    std::size_t size() const { return theta_.size(); }
    double operator[](std::size_t i) const { return theta_[i]; }
    std::span<const double> values() const { return theta_; }

    friend bool operator==(const PhaseVector&, const PhaseVector&) = default;

private:
    std::vector<double> theta_;
};

struct EnvState {
    std::vector<double> h_t_parts;   // [Re h_t..., Im h_t...], 2M raw values
    std::vector<double> prev_phases; // M
    std::vector<double> prev_sinrs;  // K, zeros at episode start
    double h_t_scale = 1.0;          // multiplies h_t_parts in the observation

    friend bool operator==(const EnvState&, const EnvState&) = default;
};

struct StepOutcome {
    EnvState next_state;
    double reward = 0.0;
    double sum_rate = 0.0;
    bool is_new_max = false;
};

inline std::size_t observation_size(std::size_t num_elements, std::size_t num_users) {
    return 2 * num_elements + num_users;
}

// Agent-facing features, length 2M + K:
//   [Re h_t, Im h_t] * h_t_scale   (h_t_scale = 1/sqrt(BS-IRS path loss))
//   log10(1 + prev_sinr)
// The previous phases are kept in EnvState but not observed.
inline std::vector<double> observed_state_vector(const EnvState& state) {
    std::vector<double> obs;
    obs.reserve(state.h_t_parts.size() + state.prev_sinrs.size());
    for (double v : state.h_t_parts) obs.push_back(v * state.h_t_scale);
    for (double s : state.prev_sinrs) obs.push_back(std::log10(1.0 + s));
    return obs;
}

// NOMA rates of one phase configuration on a known channel.
inline RateReport evaluate_noma(const ChannelRealization& ch, const SystemConfig& cfg, std::span<const double> phases,
                                double eps) {
    const auto gains = user_gains(ch, phases);
    const auto sinr = sinr_noma(gains, cfg.tx_power_watts(), cfg.power_coeffs, cfg.noise_watts(), eps);
    return sum_rate(sinr);
}

inline RateReport evaluate_noma(const ChannelRealization& ch, const SystemConfig& cfg, std::span<const double> phases) {
    return evaluate_noma(ch, cfg, phases, cfg.sic_residual_eps);
}

inline RateReport evaluate_oma(const ChannelRealization& ch, const SystemConfig& cfg, std::span<const double> phases) {
    const auto gains = user_gains(ch, phases);
    return oma_sum_rate(gains, cfg.tx_power_watts(), cfg.noise_watts());
}

class Environment {
public:
    explicit Environment(SystemConfig cfg) : cfg_(std::move(cfg)) {
        validate(cfg_);
        p_watts_ = cfg_.tx_power_watts();
        noise_watts_ = cfg_.noise_watts();
        h_t_scale_ = 1.0 / std::sqrt(path_loss_linear(cfg_.dist_bs_irs_m, cfg_.pl_exp_bs_irs, cfg_.pl_ref_loss_db,
                                                      cfg_.pl_ref_dist_m));
    }

    // Every later reset(rng) reuses this realization instead of drawing one.
    void pin_channel(ChannelRealization ch) {
        check_shape(ch);
        pinned_ = std::move(ch);
    }
    void unpin_channel() { pinned_.reset(); }
    bool channel_pinned() const { return pinned_.has_value(); }

    // New episode: fresh channel (unless pinned), zero history, running max 0.
    template <std::uniform_random_bit_generator G>
    EnvState reset(G& rng) {
        return start(pinned_ ? *pinned_ : sample_scenario(cfg_, rng));
    }

    EnvState reset(ChannelRealization ch) {
        check_shape(ch);
        return start(std::move(ch));
    }

    StepOutcome step(const PhaseVector& action) {
        if (!channel_) throw StateError("Environment::step called before reset");
        detail::require_dims(action.size() == cfg_.num_elements, "Environment::step: action must have M phases");

        const auto gains = user_gains(*channel_, action.values());
        const auto sinr = sinr_noma(gains, p_watts_, cfg_.power_coeffs, noise_watts_, cfg_.sic_residual_eps);
        const RateReport rates = sum_rate(sinr);

        StepOutcome out;
        out.sum_rate = rates.sum_rate;
        out.reward = rates.sum_rate - running_max_;
        out.is_new_max = rates.sum_rate > running_max_;
        if (out.is_new_max) running_max_ = rates.sum_rate;

        state_.prev_phases.assign(action.values().begin(), action.values().end());
        state_.prev_sinrs = rates.per_user_sinr;
        out.next_state = state_;
        return out;
    }

    // Rates of `phases` on the current channel without advancing the episode.
    RateReport evaluate(const PhaseVector& phases) const {
        if (!channel_) throw StateError("Environment::evaluate called before reset");
        detail::require_dims(phases.size() == cfg_.num_elements, "Environment::evaluate: need M phases");
        return evaluate_noma(*channel_, cfg_, phases.values());
    }

    const EnvState& state() const { return state_; }
    double running_max() const { return running_max_; }
    const SystemConfig& config() const { return cfg_; }
    std::size_t observation_size() const { return irs_noma::observation_size(cfg_.num_elements, cfg_.num_users); }
    std::size_t action_size() const { return cfg_.num_elements; }

private:
    void check_shape(const ChannelRealization& ch) const {
        detail::require_dims(ch.num_users() == cfg_.num_users && ch.num_elements() == cfg_.num_elements,
                             "Environment: channel realization does not match the configured K and M");
        for (const auto& h : ch.h_r) {
            detail::require_dims(h.size() == cfg_.num_elements, "Environment: IRS-user channel must have M entries");
        }
    }

    EnvState start(ChannelRealization ch) {
        channel_ = std::move(ch);
        running_max_ = 0.0;
        state_ = EnvState{};
        state_.h_t_parts.reserve(2 * cfg_.num_elements);
        for (const auto& h : channel_->h_t) state_.h_t_parts.push_back(h.real());
        for (const auto& h : channel_->h_t) state_.h_t_parts.push_back(h.imag());
        state_.prev_phases.assign(cfg_.num_elements, 0.0);
        state_.prev_sinrs.assign(cfg_.num_users, 0.0);
        state_.h_t_scale = h_t_scale_;
        return state_;
    }

    SystemConfig cfg_;
    double p_watts_ = 0.0;
    double noise_watts_ = 0.0;
    double h_t_scale_ = 1.0;
    std::optional<ChannelRealization> pinned_;
    std::optional<ChannelRealization> channel_;
    EnvState state_;
    double running_max_ = 0.0;
};

} // namespace irs_noma

#endif
