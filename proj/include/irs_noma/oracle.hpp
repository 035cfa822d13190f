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

#ifndef IRS_NOMA_ORACLE_HPP
#define IRS_NOMA_ORACLE_HPP

// Exhaustive search over the quantized phase grid {0, 2pi/N, ..., (N-1)2pi/N}^M
// and the operation-count estimates used to compare it with the learned
// policy.
//
// Candidates are enumerated in lexicographic order of their grid indices
// (element 0 most significant). A candidate replaces the incumbent only if it
// beats it by more than kTieTolerance (relative), so among numerically tied
// candidates the lowest index wins. Ties are common: a common rotation of all
// phases leaves every |g_k| unchanged.

#include "channel.hpp"
#include "config.hpp"
#include "env.hpp"
#include "error.hpp"
#include "noma.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace irs_noma {

inline constexpr double kTieTolerance = 1e-12;
inline constexpr double kGridGuardBits = 40.0;

struct GridSpec {
    std::size_t num_elements = 4; // M
    std::size_t steps = 16;       // N, phase step 2*pi/N

    double step_size() const { return kTwoPi / static_cast<double>(steps); }
    std::uint64_t combinations() const {
        std::uint64_t c = 1;
        for (std::size_t i = 0; i < num_elements; ++i) c *= steps;
        return c;
    }
};

inline void validate(const GridSpec& g) {
    detail::require(g.num_elements >= 1, "GridSpec: num_elements must be >= 1");
    detail::require(g.steps >= 1, "GridSpec: steps must be >= 1");
    const double bits = static_cast<double>(g.num_elements) * std::log2(static_cast<double>(g.steps));
    if (bits > kGridGuardBits) {
        throw ParameterError("exhaustive search refused: M*log2(N) = " + std::to_string(bits) + " exceeds the bound " +
                             std::to_string(kGridGuardBits) + " (N^M must stay below 2^40)");
    }
}

struct OracleResult {
    PhaseVector best_phases;
    std::vector<std::size_t> best_indices; // grid index per element
    double best_sum_rate = 0.0;
    std::uint64_t evaluations = 0;
};

// True if `candidate` beats `incumbent` by more than the tie tolerance.
inline bool strictly_better(double candidate, double incumbent) {
    return candidate > incumbent + kTieTolerance * std::max(1.0, std::abs(incumbent));
}

inline std::vector<std::size_t> grid_digits(std::uint64_t index, const GridSpec& grid) {
    std::vector<std::size_t> digits(grid.num_elements);
    for (std::size_t i = grid.num_elements; i-- > 0;) {
        digits[i] = static_cast<std::size_t>(index % grid.steps);
        index /= grid.steps;
    }
    return digits;
}

inline PhaseVector phases_from_indices(std::span<const std::size_t> indices, const GridSpec& grid) {
    std::vector<double> theta(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) theta[i] = static_cast<double>(indices[i]) * grid.step_size();
    return PhaseVector(std::move(theta));
}

// Nearest grid point, element-wise (index N wraps to 0).
inline PhaseVector snap_to_grid(const PhaseVector& phases, const GridSpec& grid) {
    std::vector<std::size_t> idx(phases.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = static_cast<std::size_t>(std::llround(phases[i] / grid.step_size())) % grid.steps;
    }
    return phases_from_indices(idx, grid);
}

namespace detail {

struct PartialBest {
    std::uint64_t index = 0;
    double rate = -std::numeric_limits<double>::infinity();
    std::uint64_t evaluations = 0;
};

// Evaluates candidates [first, last) in order.
inline PartialBest search_range(const ChannelRealization& ch, const SystemConfig& cfg, const GridSpec& grid,
                                std::uint64_t first, std::uint64_t last) {
    const std::vector<double> grid_values = [&] {
        std::vector<double> v(grid.steps);
        for (std::size_t n = 0; n < grid.steps; ++n) v[n] = static_cast<double>(n) * grid.step_size();
        return v;
    }();
    const double p_watts = cfg.tx_power_watts();
    const double noise = cfg.noise_watts();

    PartialBest best;
    std::vector<double> theta(grid.num_elements);
    for (std::uint64_t idx = first; idx < last; ++idx) {
        std::uint64_t rem = idx;
        for (std::size_t i = grid.num_elements; i-- > 0;) {
            theta[i] = grid_values[rem % grid.steps];
            rem /= grid.steps;
        }
        const auto gains = user_gains(ch, theta);
        const auto sinr = sinr_noma(gains, p_watts, cfg.power_coeffs, noise, cfg.sic_residual_eps);
        double rate = 0.0;
        for (double s : sinr) rate += std::log2(1.0 + s);
        ++best.evaluations;
        if (best.evaluations == 1 || strictly_better(rate, best.rate)) {
            best.rate = rate;
            best.index = idx;
        }
    }
    return best;
}

} // namespace detail

// Argmax of the NOMA sum rate (with the configured SIC residual) over the
// grid. `threads` > 1 splits the index range into contiguous partitions whose
// winners are merged in index order with the same tie rule.
inline OracleResult exhaustive_search(const ChannelRealization& ch, const SystemConfig& cfg, const GridSpec& grid,
                                      unsigned threads = 1) {
    validate(grid);
    validate(cfg);
    detail::require_dims(ch.num_elements() == grid.num_elements && ch.num_users() == cfg.num_users,
                         "exhaustive_search: channel shape differs from grid/config");

    const std::uint64_t total = grid.combinations();
    threads = std::max(1u, threads);
    if (static_cast<std::uint64_t>(threads) > total) threads = static_cast<unsigned>(total);

    std::vector<detail::PartialBest> parts(threads);
    if (threads == 1) {
        parts[0] = detail::search_range(ch, cfg, grid, 0, total);
    } else {
        std::vector<std::thread> workers;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t first = total * t / threads;
            const std::uint64_t last = total * (t + 1) / threads;
            workers.emplace_back([&, t, first, last] { parts[t] = detail::search_range(ch, cfg, grid, first, last); });
        }
        for (auto& w : workers) w.join();
    }

    detail::PartialBest best = parts[0];
    for (std::size_t t = 1; t < parts.size(); ++t) {
        best.evaluations += parts[t].evaluations;
        if (strictly_better(parts[t].rate, best.rate)) {
            best.rate = parts[t].rate;
            best.index = parts[t].index;
        }
    }

    OracleResult out;
    out.best_indices = grid_digits(best.index, grid);
    out.best_phases = phases_from_indices(out.best_indices, grid);
    out.best_sum_rate = best.rate;
    out.evaluations = best.evaluations;
    return out;
}

struct ComplexityEstimate {
    std::uint64_t exhaustive_ops = 0; // K * N^M
    std::uint64_t ddpg_ops = 0;       // S * n * U * A
    bool exhaustive_saturated = false;
    bool ddpg_saturated = false;
};

namespace detail {

// a * b, clamped to UINT64_MAX; sets `saturated` on overflow.
inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b, bool& saturated) {
    std::uint64_t r = 0;
    if (saturated || __builtin_mul_overflow(a, b, &r)) {
        saturated = true;
        return std::numeric_limits<std::uint64_t>::max();
    }
    return r;
}

} // namespace detail

// Operation counts of exhaustive search (users K, elements M, steps N) and of
// one forward pass of the actor (inputs S, hidden layers n, width U,
// outputs A).
inline ComplexityEstimate complexity_estimate(std::uint64_t users, std::uint64_t elements, std::uint64_t steps,
                                              std::uint64_t inputs, std::uint64_t hidden_layers,
                                              std::uint64_t hidden_units, std::uint64_t outputs) {
    detail::require(users > 0 && elements > 0 && steps > 0 && inputs > 0 && hidden_layers > 0 && hidden_units > 0 &&
                        outputs > 0,
                    "complexity_estimate: all arguments must be positive");
    ComplexityEstimate est;
    std::uint64_t e = users;
    for (std::uint64_t i = 0; i < elements && !est.exhaustive_saturated; ++i) {
        e = detail::saturating_mul(e, steps, est.exhaustive_saturated);
    }
    est.exhaustive_ops = e;
    std::uint64_t d = detail::saturating_mul(inputs, hidden_layers, est.ddpg_saturated);
    d = detail::saturating_mul(d, hidden_units, est.ddpg_saturated);
    d = detail::saturating_mul(d, outputs, est.ddpg_saturated);
    est.ddpg_ops = d;
    return est;
}

} // namespace irs_noma

#endif
