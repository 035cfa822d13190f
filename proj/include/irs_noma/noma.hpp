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

#ifndef IRS_NOMA_NOMA_HPP
#define IRS_NOMA_NOMA_HPP

// Power-domain NOMA link budget: fixed power allocation, per-user SINR with
// (im)perfect successive interference cancellation, sum rate, and the
// equal-split OMA baseline.
//
// Users are indexed 0..K-1 with user 0 the farthest (largest power share)
// and user K-1 the nearest. User k decodes and cancels users j < k; with
// imperfect SIC a fraction eps of their power remains as interference.

#include "error.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace irs_noma {

struct RateReport {
    std::vector<double> per_user_sinr;
    std::vector<double> per_user_rate; // bits/s/Hz
    double sum_rate = 0.0;             // bits/s/Hz
};

// Largest user count for which every share still strictly exceeds the sum of
// the weaker shares in double precision; the margin is 1 / (2^K - 1).
inline constexpr std::size_t kMaxUsers = 54;

// Geometric allocation beta_k = 2^(K-k) / (2^K - 1), k = 1..K. Sums to one and
// every share strictly exceeds the sum of all weaker shares.
inline std::vector<double> allocate_power(std::size_t num_users) {
    if (num_users == 0) throw ParameterError("allocate_power: number of users must be >= 1");
    if (num_users > kMaxUsers) {
        throw ParameterError("allocate_power: number of users must be <= " + std::to_string(kMaxUsers));
    }
    const double denom = std::ldexp(1.0, static_cast<int>(num_users)) - 1.0;
    std::vector<double> beta(num_users);
    for (std::size_t k = 0; k < num_users; ++k) {
        beta[k] = std::ldexp(1.0, static_cast<int>(num_users - 1 - k)) / denom;
    }
    return beta;
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// Thermal noise power over the band, in watts.
inline double noise_power_watts(double noise_psd_dbm_hz, double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw ParameterError("noise_power_watts: bandwidth must be positive");
    return std::pow(10.0, (noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) - 30.0) / 10.0);
}

// Per-user SINR under SIC with residual fraction eps. eps = 0 is perfect SIC.
//
// For user k the denominator is
//     eps * sum_{j<k} |g_k|^2 beta_j P  +  sum_{i>k} |g_k|^2 beta_i P  +  noise
// i.e. every term uses user k's own cascaded gain.
inline std::vector<double> sinr_noma(std::span<const std::complex<double>> gains, double p_watts,
                                     std::span<const double> beta, double noise_watts, double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw ParameterError("sinr_noma: eps must lie in [0, 1]");
    if (!(noise_watts > 0.0)) throw ParameterError("sinr_noma: noise power must be positive");
    if (!(p_watts >= 0.0)) throw ParameterError("sinr_noma: transmit power must be non-negative");
    detail::require_dims(gains.size() == beta.size(), "sinr_noma: gains and power coefficients differ in length");

    const std::size_t num_users = gains.size();
    std::vector<double> sinr(num_users);
    for (std::size_t k = 0; k < num_users; ++k) {
        const double gain2 = std::norm(gains[k]);
        double residual = 0.0;
        for (std::size_t j = 0; j < k; ++j) residual += gain2 * beta[j] * p_watts;
        double undecoded = 0.0;
        for (std::size_t i = k + 1; i < num_users; ++i) undecoded += gain2 * beta[i] * p_watts;
        sinr[k] = gain2 * beta[k] * p_watts / (eps * residual + undecoded + noise_watts);
    }
    return sinr;
}

inline RateReport sum_rate(std::span<const double> sinrs) {
    RateReport report;
    report.per_user_sinr.assign(sinrs.begin(), sinrs.end());
    report.per_user_rate.reserve(sinrs.size());
    for (double s : sinrs) {
        if (!(s >= 0.0)) throw DomainError("sum_rate: SINR must be non-negative, got " + std::to_string(s));
        report.per_user_rate.push_back(std::log2(1.0 + s));
    }
    report.sum_rate = std::accumulate(report.per_user_rate.begin(), report.per_user_rate.end(), 0.0);
    return report;
}

// Equal time/frequency split: each user gets the full power over 1/K of the
// resources and sees no inter-user interference.
inline RateReport oma_sum_rate(std::span<const std::complex<double>> gains, double p_watts, double noise_watts) {
    if (gains.empty()) throw ParameterError("oma_sum_rate: no users");
    if (!(noise_watts > 0.0)) throw ParameterError("oma_sum_rate: noise power must be positive");
    if (!(p_watts >= 0.0)) throw ParameterError("oma_sum_rate: transmit power must be non-negative");

    const double share = 1.0 / static_cast<double>(gains.size());
    RateReport report;
    report.per_user_sinr.reserve(gains.size());
    report.per_user_rate.reserve(gains.size());
    for (const auto& g : gains) {
        const double snr = std::norm(g) * p_watts / noise_watts;
        report.per_user_sinr.push_back(snr);
        report.per_user_rate.push_back(share * std::log2(1.0 + snr));
    }
    report.sum_rate = std::accumulate(report.per_user_rate.begin(), report.per_user_rate.end(), 0.0);
    return report;
}

} // namespace irs_noma

#endif
