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

#ifndef IRS_NOMA_CHANNEL_HPP
#define IRS_NOMA_CHANNEL_HPP

// Rician-fading BS -> IRS -> user channels with power-law path loss.
//
// There is no direct BS-user link; every user is reached only through the
// IRS. The line-of-sight component of every channel is the all-ones vector.

#include "config.hpp"
#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace irs_noma {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Engine used for every stochastic component of the simulator.
using Rng = std::mt19937_64;

struct ChannelRealization {
    ComplexVector h_t;                      // BS -> IRS, length M
    std::vector<ComplexVector> h_r;         // IRS -> user k, K vectors of length M
    std::vector<double> user_distances_m;   // non-increasing: user 0 is the farthest

    std::size_t num_users() const { return h_r.size(); }
    std::size_t num_elements() const { return h_t.size(); }

    friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;
};

// 10^(ref_loss_db/10) * (d / d_ref)^(-exponent)
inline double path_loss_linear(double distance_m, double exponent, double ref_loss_db = -30.0,
                               double ref_dist_m = 1.0) {
    if (!(distance_m > 0.0)) throw ParameterError("path_loss_linear: distance must be positive");
    if (!(ref_dist_m > 0.0)) throw ParameterError("path_loss_linear: reference distance must be positive");
    return std::pow(10.0, ref_loss_db / 10.0) * std::pow(distance_m / ref_dist_m, -exponent);
}

// Circularly-symmetric CN(0, 1): variance 1/2 per real dimension.
template <std::uniform_random_bit_generator G>
Complex sample_cn01(G& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

// sqrt(PL) * ( sqrt(k/(k+1)) * los + sqrt(1/(k+1)) * nlos ), nlos ~ CN(0, I).
// k = +inf gives pure line of sight.
template <std::uniform_random_bit_generator G>
ComplexVector sample_rician(std::span<const Complex> los_component, double k_factor, double path_loss,
                            G& rng) {
    if (!(k_factor >= 0.0)) throw ParameterError("sample_rician: Rician factor must be >= 0");
    if (!(path_loss > 0.0) || !std::isfinite(path_loss)) {
        throw ParameterError("sample_rician: path loss must be positive and finite");
    }
    const double los_weight = std::isinf(k_factor) ? 1.0 : std::sqrt(k_factor / (k_factor + 1.0));
    const double nlos_weight = std::isinf(k_factor) ? 0.0 : std::sqrt(1.0 / (k_factor + 1.0));
    const double amplitude = std::sqrt(path_loss);

    ComplexVector out(los_component.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Complex nlos = sample_cn01(rng);
        out[i] = amplitude * (los_weight * los_component[i] + nlos_weight * nlos);
    }
    return out;
}

// g = h_r^H diag(e^{j theta}) h_t
inline Complex effective_gain(std::span<const Complex> h_r, std::span<const double> phases,
                              std::span<const Complex> h_t) {
    detail::require_dims(h_r.size() == phases.size() && h_t.size() == phases.size(),
                         "effective_gain: h_r, phases and h_t must all have length M");
    Complex g{0.0, 0.0};
    for (std::size_t i = 0; i < phases.size(); ++i) {
        g += std::conj(h_r[i]) * std::polar(1.0, phases[i]) * h_t[i];
    }
    return g;
}

// Draws user distances (sorted farthest first), then h_t, then h_r for each
// user in index order.
template <std::uniform_random_bit_generator G>
ChannelRealization sample_scenario(const SystemConfig& cfg, G& rng) {
    validate(cfg);
    const std::size_t num_users = cfg.num_users;
    const std::size_t num_elements = cfg.num_elements;

    ChannelRealization ch;
    ch.user_distances_m.resize(num_users);
    std::uniform_real_distribution<double> dist(cfg.dist_user_min_m, cfg.dist_user_max_m);
    for (auto& d : ch.user_distances_m) d = cfg.dist_user_min_m == cfg.dist_user_max_m ? cfg.dist_user_min_m : dist(rng);
    std::sort(ch.user_distances_m.begin(), ch.user_distances_m.end(), std::greater<>());

    const ComplexVector los(num_elements, Complex{1.0, 0.0});
    ch.h_t = sample_rician(std::span<const Complex>(los), cfg.rician_k1,
                           path_loss_linear(cfg.dist_bs_irs_m, cfg.pl_exp_bs_irs, cfg.pl_ref_loss_db, cfg.pl_ref_dist_m),
                           rng);
    ch.h_r.reserve(num_users);
    for (double d : ch.user_distances_m) {
        ch.h_r.push_back(sample_rician(std::span<const Complex>(los), cfg.rician_k2,
                                       path_loss_linear(d, cfg.pl_exp_irs_user, cfg.pl_ref_loss_db, cfg.pl_ref_dist_m),
                                       rng));
    }
    return ch;
}

// Cascaded gain of every user for one phase configuration.
inline ComplexVector user_gains(const ChannelRealization& ch, std::span<const double> phases) {
    ComplexVector gains;
    gains.reserve(ch.num_users());
    for (const auto& h_r : ch.h_r) gains.push_back(effective_gain(h_r, phases, ch.h_t));
    return gains;
}

} // namespace irs_noma

#endif
