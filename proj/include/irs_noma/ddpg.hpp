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

#ifndef IRS_NOMA_DDPG_HPP
#define IRS_NOMA_DDPG_HPP

// Deep deterministic policy gradient agent for IRS phase control.
//
// Actor:  obs (2M+K) -> H -> H -> M, relu/relu/tanh. A tanh output o maps to
//         the phase theta = pi * (o + 1).
// Critic: [obs ; action feature] (2M+K+M) -> H -> H -> 1, relu/relu/linear,
//         where the action feature of phase theta is theta/pi - 1, i.e. the
//         actor's tanh output when no noise was added.
//
// Each environment step: act with OU noise, store the transition, and (once
// the buffer holds a full batch) do one critic step, one actor step and one
// soft update of both targets.

#include "config.hpp"
#include "env.hpp"
#include "error.hpp"
#include "nn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace irs_noma {

struct Transition {
    std::vector<double> state;      // observation, 2M+K
    std::vector<double> action;     // phases in [0, 2*pi), M
    double reward = 0.0;
    std::vector<double> next_state; // observation, 2M+K
};

// Fixed-capacity FIFO; once full the oldest transition is overwritten.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw ParameterError("ReplayBuffer: capacity must be >= 1");
        slots_.reserve(std::min<std::size_t>(capacity, 1 << 16));
    }

    void push(Transition t) {
        if (slots_.size() < capacity_) {
            slots_.push_back(std::move(t));
        } else {
            slots_[cursor_] = std::move(t);
        }
        cursor_ = (cursor_ + 1) % capacity_;
    }

    // Slot indices drawn uniformly with replacement.
    template <std::uniform_random_bit_generator G>
    std::vector<std::size_t> sample_indices(std::size_t count, G& rng) const {
        if (slots_.empty()) throw StateError("ReplayBuffer: cannot sample from an empty buffer");
        std::uniform_int_distribution<std::size_t> pick(0, slots_.size() - 1);
        std::vector<std::size_t> idx(count);
        for (auto& i : idx) i = pick(rng);
        return idx;
    }

    template <std::uniform_random_bit_generator G>
    std::vector<Transition> sample(std::size_t count, G& rng) const {
        std::vector<Transition> batch;
        batch.reserve(count);
        for (std::size_t i : sample_indices(count, rng)) batch.push_back(slots_[i]);
        return batch;
    }

    // Transitions from oldest to newest.
    std::vector<Transition> contents() const {
        std::vector<Transition> out;
        out.reserve(slots_.size());
        const std::size_t start = slots_.size() < capacity_ ? 0 : cursor_;
        for (std::size_t i = 0; i < slots_.size(); ++i) out.push_back(slots_[(start + i) % slots_.size()]);
        return out;
    }

    const Transition& slot(std::size_t i) const { return slots_.at(i); }
    std::size_t size() const { return slots_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool full() const { return slots_.size() == capacity_; }

private:
    std::size_t capacity_;
    std::size_t cursor_ = 0;
    std::vector<Transition> slots_;
};

// Mean-reverting exploration noise, one independent coordinate per element:
// x <- x + theta (mu - x) dt + sigma sqrt(dt) xi,  xi ~ N(0, 1).
struct OUProcess {
    std::vector<double> x;
    double theta = 0.15;
    double sigma = 0.1;
    double mu = 0.0;
    double dt = 1.0;

    OUProcess() = default;
    OUProcess(std::size_t dim, double theta_ou, double sigma_ou, double mu_ou, double dt_ou)
        : x(dim, mu_ou), theta(theta_ou), sigma(sigma_ou), mu(mu_ou), dt(dt_ou) {
        detail::require(theta > 0.0 && sigma >= 0.0 && dt > 0.0, "OUProcess: theta and dt must be positive, sigma >= 0");
    }

    void reset() { std::fill(x.begin(), x.end(), mu); }
};

template <std::uniform_random_bit_generator G>
std::vector<double> ou_sample(OUProcess& p, G& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double diffusion = p.sigma * std::sqrt(p.dt);
    for (auto& xi : p.x) {
        const double shock = normal(rng);
        xi = xi + p.theta * (p.mu - xi) * p.dt + diffusion * shock;
    }
    return p.x;
}

inline double phase_from_tanh(double o) { return std::numbers::pi * (o + 1.0); }
inline double action_feature(double theta) { return theta / std::numbers::pi - 1.0; }

struct Agent {
    std::size_t state_dim = 0;
    std::size_t action_dim = 0;
    TrainConfig config;
    nn::DenseNet actor, critic, target_actor, target_critic;
    OUProcess noise;
    ReplayBuffer buffer{1};
    Rng rng;

    Agent(std::size_t state_size, std::size_t action_size, const TrainConfig& cfg)
        : state_dim(state_size), action_dim(action_size), config(cfg), buffer(cfg.buffer_capacity), rng(cfg.seed) {
        validate(cfg);
        detail::require(state_size > 0 && action_size > 0, "Agent: state and action sizes must be positive");
        const std::size_t h = cfg.hidden_units;
        const std::array<std::size_t, 4> actor_sizes{state_size, h, h, action_size};
        const std::array<std::size_t, 4> critic_sizes{state_size + action_size, h, h, 1};
        const std::array<nn::Activation, 3> actor_act{nn::Activation::relu, nn::Activation::relu, nn::Activation::tanh};
        const std::array<nn::Activation, 3> critic_act{nn::Activation::relu, nn::Activation::relu,
                                                       nn::Activation::linear};
        actor = nn::make_dense_net(actor_sizes, actor_act, rng, 1e-3);
        critic = nn::make_dense_net(critic_sizes, critic_act, rng);
        target_actor = actor;
        target_critic = critic;
        noise = OUProcess(action_size, cfg.ou_theta, cfg.ou_sigma, cfg.ou_mu, cfg.ou_dt);
    }
};

inline nn::Vector to_vector(std::span<const double> v) {
    nn::Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

// Deterministic policy output (tanh units), then optional OU noise added in
// phase space, then wrapped into [0, 2*pi).
inline PhaseVector select_action(Agent& agent, std::span<const double> state, bool explore) {
    detail::require_dims(state.size() == agent.state_dim, "select_action: state has the wrong length");
    const nn::Vector o = nn::forward(agent.actor, to_vector(state));
    std::vector<double> theta(agent.action_dim);
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = phase_from_tanh(o(static_cast<Eigen::Index>(i)));
    if (explore) {
        const auto n = ou_sample(agent.noise, agent.rng);
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += n[i];
    }
    return PhaseVector(std::move(theta));
}

namespace detail {

struct BatchMatrices {
    nn::Matrix states;      // state_dim x n
    nn::Matrix actions;     // action_dim x n, action features
    nn::Matrix next_states; // state_dim x n
    nn::Vector rewards;     // n
};

inline BatchMatrices stack(std::span<const Transition> batch, std::size_t state_dim, std::size_t action_dim) {
    const auto n = static_cast<Eigen::Index>(batch.size());
    BatchMatrices m{nn::Matrix(state_dim, n), nn::Matrix(action_dim, n), nn::Matrix(state_dim, n), nn::Vector(n)};
    for (Eigen::Index c = 0; c < n; ++c) {
        const auto& t = batch[static_cast<std::size_t>(c)];
        detail::require_dims(t.state.size() == state_dim && t.next_state.size() == state_dim &&
                                 t.action.size() == action_dim,
                             "transition has the wrong shape");
        for (std::size_t r = 0; r < state_dim; ++r) {
            m.states(static_cast<Eigen::Index>(r), c) = t.state[r];
            m.next_states(static_cast<Eigen::Index>(r), c) = t.next_state[r];
        }
        for (std::size_t r = 0; r < action_dim; ++r) m.actions(static_cast<Eigen::Index>(r), c) = action_feature(t.action[r]);
        m.rewards(c) = t.reward;
    }
    return m;
}

inline nn::Matrix concat_rows(const nn::Matrix& top, const nn::Matrix& bottom) {
    nn::Matrix out(top.rows() + bottom.rows(), top.cols());
    out << top, bottom;
    return out;
}

} // namespace detail

// y_i = r_i + gamma * Q'(s'_i, mu'(s'_i))
inline std::vector<double> compute_targets(std::span<const Transition> batch, const nn::DenseNet& target_actor,
                                           const nn::DenseNet& target_critic, double gamma) {
    if (batch.empty()) throw ParameterError("compute_targets: empty batch");
    const std::size_t state_dim = target_actor.input_size();
    const std::size_t action_dim = target_actor.output_size();
    const auto m = detail::stack(batch, state_dim, action_dim);
    const nn::Matrix next_actions = nn::forward(target_actor, m.next_states).output;
    const nn::Matrix q_next = nn::forward(target_critic, detail::concat_rows(m.next_states, next_actions)).output;
    std::vector<double> y(batch.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = m.rewards(static_cast<Eigen::Index>(i)) + gamma * q_next(0, static_cast<Eigen::Index>(i));
    return y;
}

// Gradient of L = mean_i (y_i - Q(s_i, a_i))^2 w.r.t. the critic parameters.
struct CriticLoss {
    double loss = 0.0;
    nn::Gradients grads;
};

inline CriticLoss critic_loss(const nn::DenseNet& critic, std::span<const Transition> batch, std::span<const double> targets,
                              std::size_t state_dim, std::size_t action_dim) {
    detail::require_dims(targets.size() == batch.size() && !batch.empty(), "critic_loss: targets must align with the batch");
    const auto m = detail::stack(batch, state_dim, action_dim);
    const auto pass = nn::forward(critic, detail::concat_rows(m.states, m.actions));
    const auto n = static_cast<double>(batch.size());
    nn::Matrix dq(1, pass.output.cols());
    double loss = 0.0;
    for (Eigen::Index i = 0; i < pass.output.cols(); ++i) {
        const double residual = pass.output(0, i) - targets[static_cast<std::size_t>(i)];
        loss += residual * residual;
        dq(0, i) = 2.0 * residual / n;
    }
    loss /= n;
    if (!std::isfinite(loss)) throw NumericError("critic_loss: non-finite loss");
    return {loss, nn::backward(critic, pass.cache, dq).params};
}

// One Adam step on the critic; returns the loss before the update.
inline double critic_update(Agent& agent, std::span<const Transition> batch, std::span<const double> targets) {
    auto cl = critic_loss(agent.critic, batch, targets, agent.state_dim, agent.action_dim);
    nn::adam_step(agent.critic, cl.grads, nn::AdamConfig{.lr = agent.config.critic_lr});
    return cl.loss;
}

// Sampled deterministic policy gradient of J = mean_i Q(s_i, mu(s_i)) w.r.t.
// the actor parameters, obtained by chaining the critic's input gradient
// (action rows) through the actor.
struct ActorObjective {
    double mean_q = 0.0;
    nn::Gradients grads; // gradient of J (ascent direction)
};

inline ActorObjective actor_objective(const nn::DenseNet& actor, const nn::DenseNet& critic,
                                      std::span<const Transition> batch) {
    if (batch.empty()) throw ParameterError("actor_objective: empty batch");
    const std::size_t state_dim = actor.input_size();
    const std::size_t action_dim = actor.output_size();
    const auto m = detail::stack(batch, state_dim, action_dim);
    const auto actor_pass = nn::forward(actor, m.states);
    const auto critic_pass = nn::forward(critic, detail::concat_rows(m.states, actor_pass.output));
    const auto n = static_cast<double>(batch.size());

    const nn::Matrix dj_dq = nn::Matrix::Constant(1, critic_pass.output.cols(), 1.0 / n);
    const auto critic_back = nn::backward(critic, critic_pass.cache, dj_dq);
    const nn::Matrix dj_da = critic_back.input_gradient.bottomRows(static_cast<Eigen::Index>(action_dim));
    auto actor_back = nn::backward(actor, actor_pass.cache, dj_da);
    return {critic_pass.output.mean(), std::move(actor_back.params)};
}

// Ascends J with one Adam step at the actor learning rate; returns mean Q.
inline double actor_update(Agent& agent, std::span<const Transition> batch) {
    auto obj = actor_objective(agent.actor, agent.critic, batch);
    if (!std::isfinite(obj.mean_q)) throw NumericError("actor_update: non-finite Q estimate");
    for (auto& w : obj.grads.weight) w = -w;
    for (auto& b : obj.grads.bias) b = -b;
    nn::adam_step(agent.actor, obj.grads, nn::AdamConfig{.lr = agent.config.actor_lr});
    return obj.mean_q;
}

struct LearnStats {
    double critic_loss = 0.0;
    double mean_q = 0.0;
};

// Sample, fit critic, improve actor, track targets. Requires at least one
// stored transition.
inline LearnStats learn_step(Agent& agent) {
    const auto batch = agent.buffer.sample(agent.config.batch_size, agent.rng);
    const auto targets = compute_targets(batch, agent.target_actor, agent.target_critic, agent.config.gamma_discount);
    LearnStats stats;
    stats.critic_loss = critic_update(agent, batch, targets);
    stats.mean_q = actor_update(agent, batch);
    nn::soft_update(agent.target_critic, agent.critic, agent.config.tau);
    nn::soft_update(agent.target_actor, agent.actor, agent.config.tau);
    return stats;
}

inline bool all_networks_finite(const Agent& agent) {
    return nn::all_finite(agent.actor) && nn::all_finite(agent.critic) && nn::all_finite(agent.target_actor) &&
           nn::all_finite(agent.target_critic);
}

struct StepRecord {
    std::size_t episode = 0;
    std::size_t step = 0;
    double reward = 0.0;
    double sum_rate = 0.0;
    double best_sum_rate = 0.0; // running max within the episode, after this step

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct TrainingLog {
    std::vector<StepRecord> steps;
    std::vector<double> episode_best; // one entry per episode

    friend bool operator==(const TrainingLog&, const TrainingLog&) = default;
};

// Called after every environment step with the record and the executed action.
using StepHook = std::function<void(const StepRecord&, const PhaseVector&)>;

// Runs cfg.num_episodes episodes of cfg.steps_per_episode steps. Channels are
// drawn from env_rng at each reset (or reused when the environment is pinned).
inline TrainingLog train(Agent& agent, Environment& env, const TrainConfig& cfg, Rng& env_rng,
                         const StepHook& on_step = {}) {
    validate(cfg);
    detail::require_dims(env.observation_size() == agent.state_dim && env.action_size() == agent.action_dim,
                         "train: agent and environment dimensions differ");
    TrainingLog log;
    for (std::size_t ep = 0; ep < cfg.num_episodes; ++ep) {
        EnvState state = env.reset(env_rng);
        agent.noise.reset();
        std::vector<double> obs = observed_state_vector(state);
        for (std::size_t t = 0; t < cfg.steps_per_episode; ++t) {
            const PhaseVector action = select_action(agent, obs, true);
            StepOutcome outcome = env.step(action);
            std::vector<double> next_obs = observed_state_vector(outcome.next_state);
            agent.buffer.push(Transition{obs, std::vector<double>(action.values().begin(), action.values().end()),
                                         outcome.reward, next_obs});
            if (agent.buffer.size() >= cfg.batch_size) {
                learn_step(agent);
                if (!all_networks_finite(agent)) throw NumericError("train: a network became non-finite");
            }
            const StepRecord rec{ep, t, outcome.reward, outcome.sum_rate, env.running_max()};
            log.steps.push_back(rec);
            if (on_step) on_step(rec, action);
            obs = std::move(next_obs);
        }
        log.episode_best.push_back(env.running_max());
    }
    return log;
}

// Greedy rollout on the environment's current channel: the best sum rate
// and its phases over `steps` noise-free actions.
struct PolicyResult {
    PhaseVector best_phases;
    double best_sum_rate = 0.0;
};

inline PolicyResult run_greedy(Agent& agent, Environment& env, const EnvState& start, std::size_t steps) {
    PolicyResult best;
    std::vector<double> obs = observed_state_vector(start);
    for (std::size_t t = 0; t < steps; ++t) {
        const PhaseVector action = select_action(agent, obs, false);
        const StepOutcome outcome = env.step(action);
        if (t == 0 || outcome.sum_rate > best.best_sum_rate) {
            best.best_sum_rate = outcome.sum_rate;
            best.best_phases = action;
        }
        obs = observed_state_vector(outcome.next_state);
    }
    return best;
}

// CSV columns: episode,step,reward,sum_rate,best_sum_rate
inline void write_training_log_csv(std::ostream& os, const TrainingLog& log) {
    os << "episode,step,reward,sum_rate,best_sum_rate\n";
    char buf[128];
    for (const auto& r : log.steps) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%.17g\n", r.episode, r.step, r.reward, r.sum_rate,
                      r.best_sum_rate);
        os << buf;
    }
}

// Checkpoint: "irs_noma_checkpoint 1", then actor, critic, target actor and
// target critic in nn::save format. The replay buffer is not saved.
inline void save_checkpoint(const std::string& path, const Agent& agent) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write checkpoint '" + path + "'");
    os << "irs_noma_checkpoint 1\n";
    nn::save(os, agent.actor);
    nn::save(os, agent.critic);
    nn::save(os, agent.target_actor);
    nn::save(os, agent.target_critic);
    if (!os) throw Error("failed writing checkpoint '" + path + "'");
}

inline void load_checkpoint(const std::string& path, Agent& agent) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open checkpoint '" + path + "'");
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "irs_noma_checkpoint" || version != 1) {
        throw ConfigError("'" + path + "' is not a version 1 checkpoint");
    }
    nn::DenseNet actor = nn::load(is), critic = nn::load(is), target_actor = nn::load(is), target_critic = nn::load(is);
    if (!nn::same_architecture(actor, agent.actor) || !nn::same_architecture(critic, agent.critic) ||
        !nn::same_architecture(target_actor, agent.actor) || !nn::same_architecture(target_critic, agent.critic)) {
        throw ConfigError("checkpoint '" + path + "' does not match the configured network shapes");
    }
    agent.actor = std::move(actor);
    agent.critic = std::move(critic);
    agent.target_actor = std::move(target_actor);
    agent.target_critic = std::move(target_critic);
}

} // namespace irs_noma

#endif
