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

#include <irs_noma/channel.hpp>
#include <irs_noma/noma.hpp>

#include "support/references.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace irs_noma;
using irs_noma::testing::perfect_sic_sinr;

namespace {

ComplexVector random_gains(std::size_t k, Rng& rng) {
    ComplexVector g(k);
    for (auto& z : g) z = sample_cn01(rng);
    return g;
}

} // namespace

TEST(PowerAllocation, SmallUserCounts) {
    EXPECT_EQ(allocate_power(1), std::vector<double>{1.0});
    const auto two = allocate_power(2);
    EXPECT_DOUBLE_EQ(two[0], 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(two[1], 1.0 / 3.0);
    const auto three = allocate_power(3);
    EXPECT_DOUBLE_EQ(three[0], 4.0 / 7.0);
    EXPECT_DOUBLE_EQ(three[1], 2.0 / 7.0);
    EXPECT_DOUBLE_EQ(three[2], 1.0 / 7.0);
    EXPECT_GT(three[0], three[1] + three[2]);
}

TEST(PowerAllocation, OrderingConstraintsHoldForEveryCount) {
    for (std::size_t k = 1; k <= kMaxUsers; ++k) {
        const auto beta = allocate_power(k);
        double total = 0.0;
        for (double b : beta) total += b;
        EXPECT_NEAR(total, 1.0, 1e-12) << "K = " << k;
        for (std::size_t i = 0; i + 1 < k; ++i) {
            double weaker = 0.0;
            for (std::size_t j = i + 1; j < k; ++j) weaker += beta[j];
            EXPECT_GT(beta[i], weaker) << "K = " << k << ", i = " << i;
        }
    }
}

TEST(PowerAllocation, RejectsZeroAndOversizedCounts) {
    EXPECT_THROW(allocate_power(0), ParameterError);
    EXPECT_THROW(allocate_power(kMaxUsers + 1), ParameterError);
}

TEST(NoisePower, DensityTimesBandwidth) {
    EXPECT_NEAR(noise_power_watts(-174.0, 1.0), 3.981e-21, 1e-24);
    EXPECT_NEAR(noise_power_watts(-174.0, 1e7), 3.981e-14, 1e-17);
    EXPECT_NEAR(noise_power_watts(-30.0, 1.0), 1e-6, 1e-20);
    EXPECT_THROW(noise_power_watts(-174.0, 0.0), ParameterError);
    EXPECT_THROW(noise_power_watts(-174.0, -1.0), ParameterError);
}

TEST(NoisePower, DbmConversion) {
    EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
    EXPECT_DOUBLE_EQ(dbm_to_watts(40.0), 10.0);
}

TEST(Sinr, TwoUsersPerfectSic) {
    const ComplexVector g{1.0, 1.0};
    const auto beta = allocate_power(2);
    const auto s = sinr_noma(g, 1.0, beta, 1.0, 0.0);
    EXPECT_NEAR(s[0], 0.5, 1e-15);
    EXPECT_NEAR(s[1], 1.0 / 3.0, 1e-15);
}

TEST(Sinr, FullResidualOnlyHurtsTheSicUser) {
    const ComplexVector g{1.0, 1.0};
    const auto beta = allocate_power(2);
    const auto s = sinr_noma(g, 1.0, beta, 1.0, 1.0);
    EXPECT_NEAR(s[0], 0.5, 1e-15);
    EXPECT_NEAR(s[1], 0.2, 1e-15);
}

TEST(Sinr, BoundaryUsersHaveNoMissingTerms) {
    // K = 3, unit gains, P = 1, noise = 1: the farthest user has no residual
    // term, the nearest user no undecoded-interference term.
    const ComplexVector g{1.0, 1.0, 1.0};
    const std::vector<double> beta{4.0 / 7, 2.0 / 7, 1.0 / 7};
    const auto perfect = sinr_noma(g, 1.0, beta, 1.0, 0.0);
    EXPECT_NEAR(perfect[0], (4.0 / 7) / (3.0 / 7 + 1.0), 1e-15);
    EXPECT_NEAR(perfect[1], (2.0 / 7) / (1.0 / 7 + 1.0), 1e-15);
    EXPECT_NEAR(perfect[2], (1.0 / 7) / 1.0, 1e-15);
    const auto full = sinr_noma(g, 1.0, beta, 1.0, 1.0);
    EXPECT_NEAR(full[0], perfect[0], 1e-15);
    EXPECT_NEAR(full[1], (2.0 / 7) / (4.0 / 7 + 1.0 / 7 + 1.0), 1e-15);
    EXPECT_NEAR(full[2], (1.0 / 7) / (6.0 / 7 + 1.0), 1e-15);

    const auto single = sinr_noma(ComplexVector{2.0}, 3.0, std::vector<double>{1.0}, 1.5, 0.7);
    EXPECT_NEAR(single[0], 4.0 * 3.0 / 1.5, 1e-14);
}

TEST(Sinr, ZeroResidualMatchesPerfectSicBitExactly) {
    Rng rng(31);
    std::uniform_int_distribution<std::size_t> users(1, 12);
    std::uniform_real_distribution<double> power(1e-3, 1e3), noise(1e-6, 10.0);
    for (int n = 0; n < 2000; ++n) {
        const std::size_t k = users(rng);
        const auto g = random_gains(k, rng);
        const auto beta = allocate_power(k);
        const double p = power(rng), s2 = noise(rng);
        EXPECT_EQ(sinr_noma(g, p, beta, s2, 0.0), perfect_sic_sinr(g, p, beta, s2));
    }
}

TEST(Sinr, ValidatesArguments) {
    const ComplexVector g{1.0, 1.0};
    const auto beta = allocate_power(2);
    EXPECT_THROW(sinr_noma(g, 1.0, beta, 1.0, -0.1), ParameterError);
    EXPECT_THROW(sinr_noma(g, 1.0, beta, 1.0, 1.1), ParameterError);
    EXPECT_THROW(sinr_noma(g, 1.0, beta, 0.0, 0.0), ParameterError);
    EXPECT_THROW(sinr_noma(g, -1.0, beta, 1.0, 0.0), ParameterError);
    EXPECT_THROW(sinr_noma(g, 1.0, allocate_power(3), 1.0, 0.0), DimensionError);
}

TEST(Sinr, NonDecreasingInPower) {
    Rng rng(32);
    std::uniform_real_distribution<double> eps_dist(0.0, 1.0);
    for (int n = 0; n < 500; ++n) {
        const std::size_t k = 1 + n % 8;
        const auto g = random_gains(k, rng);
        const auto beta = allocate_power(k);
        const double eps = eps_dist(rng);
        std::vector<double> prev;
        double prev_rate = -1.0;
        for (double dbm = -20.0; dbm <= 80.0; dbm += 10.0) {
            const auto s = sinr_noma(g, dbm_to_watts(dbm), beta, 1e-3, eps);
            if (!prev.empty()) {
                for (std::size_t i = 0; i < k; ++i) EXPECT_GE(s[i], prev[i]);
            }
            const double rate = sum_rate(s).sum_rate;
            EXPECT_GE(rate, prev_rate);
            prev = s;
            prev_rate = rate;
        }
    }
}

TEST(Sinr, StrictlyDecreasingInResidualForSicUsers) {
    Rng rng(33);
    for (int n = 0; n < 500; ++n) {
        const std::size_t k = 2 + n % 7;
        const auto g = random_gains(k, rng);
        const auto beta = allocate_power(k);
        std::vector<double> prev;
        for (double eps : {0.0, 1e-3, 1e-2, 1e-1, 0.5, 1.0}) {
            const auto s = sinr_noma(g, 10.0, beta, 1e-2, eps);
            if (!prev.empty()) {
                EXPECT_EQ(s[0], prev[0]);
                for (std::size_t i = 1; i < k; ++i) EXPECT_LT(s[i], prev[i]);
            }
            prev = s;
        }
    }
}

TEST(SumRate, HandValues) {
    EXPECT_EQ(sum_rate(std::vector<double>{0.0}).sum_rate, 0.0);
    EXPECT_NEAR(sum_rate(std::vector<double>{0.5, 1.0 / 3.0}).sum_rate, 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(sum_rate(std::vector<double>{1.0, 1.0, 1.0}).sum_rate, 3.0);
}

TEST(SumRate, ReportIsSelfConsistent) {
    Rng rng(34);
    std::exponential_distribution<double> sinr_dist(0.3);
    for (int n = 0; n < 200; ++n) {
        std::vector<double> s(1 + n % 10);
        for (auto& x : s) x = sinr_dist(rng);
        const auto r = sum_rate(s);
        double total = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            EXPECT_NEAR(r.per_user_rate[i], std::log2(1.0 + s[i]), 1e-12);
            total += r.per_user_rate[i];
        }
        EXPECT_NEAR(r.sum_rate, total, 1e-9);
        EXPECT_EQ(r.per_user_sinr, s);
    }
}

TEST(SumRate, NegativeSinrIsDomainError) {
    EXPECT_THROW(sum_rate(std::vector<double>{0.5, -1e-9}), DomainError);
}

TEST(Oma, EqualTimeShare) {
    const ComplexVector g{1.0, 1.0};
    const auto r = oma_sum_rate(g, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(r.sum_rate, 1.0);
    EXPECT_DOUBLE_EQ(r.per_user_rate[0], 0.5);
}

TEST(Oma, ZeroPowerGivesZeroRate) {
    const ComplexVector g{2.0, Complex{0.0, 3.0}};
    EXPECT_EQ(oma_sum_rate(g, 0.0, 1.0).sum_rate, 0.0);
}

TEST(Oma, SingleUserMatchesNoma) {
    Rng rng(35);
    for (int n = 0; n < 100; ++n) {
        const auto g = random_gains(1, rng);
        const double p = 0.1 * (n + 1);
        const double noma = sum_rate(sinr_noma(g, p, allocate_power(1), 0.5, 0.3)).sum_rate;
        EXPECT_DOUBLE_EQ(oma_sum_rate(g, p, 0.5).sum_rate, noma);
    }
}

TEST(Oma, ValidatesArguments) {
    EXPECT_THROW(oma_sum_rate(ComplexVector{}, 1.0, 1.0), ParameterError);
    EXPECT_THROW(oma_sum_rate(ComplexVector{1.0}, 1.0, 0.0), ParameterError);
    EXPECT_THROW(oma_sum_rate(ComplexVector{1.0}, -1.0, 1.0), ParameterError);
}
