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

#include "support/gradcheck.hpp"

#include <irs_noma/nn.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace irs_noma;
using nn::Activation;
using nn::DenseNet;
using nn::Matrix;
using nn::Vector;

namespace {

DenseNet single_layer(Matrix w, Vector b, Activation a) {
    DenseNet net;
    net.layers.push_back({std::move(w), std::move(b), a});
    nn::reset_adam(net);
    return net;
}

DenseNet random_net(std::vector<std::size_t> sizes, std::vector<Activation> acts, Rng& rng) {
    return nn::make_dense_net(std::span<const std::size_t>(sizes), std::span<const Activation>(acts), rng);
}

} // namespace

TEST(Forward, IdentityLinearLayer) {
    const auto net = single_layer(Matrix::Identity(3, 3), Vector::Zero(3), Activation::linear);
    const Vector x = Vector::LinSpaced(3, -1.0, 2.0);
    EXPECT_EQ(nn::forward(net, x), x);
}

TEST(Forward, ReluClampsNegatives) {
    const auto net = single_layer(Matrix::Identity(2, 2), Vector::Zero(2), Activation::relu);
    const Vector out = nn::forward(net, Vector{{-1.0, 2.0}});
    EXPECT_EQ(out(0), 0.0);
    EXPECT_EQ(out(1), 2.0);
}

TEST(Forward, ZeroTanhLayerOutputsZero) {
    const auto net = single_layer(Matrix::Zero(4, 3), Vector::Zero(4), Activation::tanh);
    EXPECT_EQ(nn::forward(net, Vector{{5.0, -7.0, 0.3}}), Vector::Zero(4));
}

TEST(Forward, BatchColumnsMatchSingleVectors) {
    Rng rng(1);
    const auto net = random_net({3, 5, 2}, {Activation::relu, Activation::tanh}, rng);
    const Matrix batch = Matrix::Random(3, 6);
    const Matrix out = nn::forward(net, batch).output;
    for (Eigen::Index c = 0; c < 6; ++c) EXPECT_LT((out.col(c) - nn::forward(net, Vector(batch.col(c)))).norm(), 1e-15);
}

TEST(Forward, DimensionMismatchThrows) {
    Rng rng(2);
    const auto net = random_net({3, 2}, {Activation::linear}, rng);
    EXPECT_THROW(nn::forward(net, Vector(Vector::Zero(4))), DimensionError);
}

TEST(MakeDenseNet, InitialisationBoundsAndFinalScale) {
    Rng rng(3);
    const std::array<std::size_t, 3> sizes{9, 16, 4};
    const std::array<Activation, 2> acts{Activation::relu, Activation::tanh};
    const auto net = nn::make_dense_net(std::span<const std::size_t>(sizes), std::span<const Activation>(acts), rng, 1e-3);
    EXPECT_LE(net.layers[0].weight.cwiseAbs().maxCoeff(), 1.0 / 3.0);
    EXPECT_LE(net.layers[1].weight.cwiseAbs().maxCoeff(), 1e-3 / 4.0);
    EXPECT_EQ(net.parameter_count(), 9u * 16 + 16 + 16 * 4 + 4);
    EXPECT_EQ(net.input_size(), 9u);
    EXPECT_EQ(net.output_size(), 4u);
}

TEST(Backward, LinearLayerWeightGradientIsInputRow) {
    Rng rng(4);
    const auto net = random_net({3, 2}, {Activation::linear}, rng);
    const Matrix x = Matrix{{0.5}, {-1.0}, {2.0}};
    const auto pass = nn::forward(net, x);
    const auto back = nn::backward(net, pass.cache, Matrix{{1.0}, {0.0}});
    EXPECT_EQ(Matrix(back.params.weight[0].row(0)), Matrix(x.transpose()));
    EXPECT_EQ(back.params.weight[0].row(1), Matrix::Zero(1, 3));
    EXPECT_EQ(back.params.bias[0], (Vector{{1.0, 0.0}}));
    EXPECT_LT((back.input_gradient - net.layers[0].weight.row(0).transpose()).norm(), 1e-15);
}

TEST(Backward, ZeroOutputGradientGivesZeroGradients) {
    Rng rng(5);
    const auto net = random_net({4, 6, 3}, {Activation::tanh, Activation::relu}, rng);
    const auto pass = nn::forward(net, Matrix(Matrix::Random(4, 5)));
    const auto back = nn::backward(net, pass.cache, Matrix::Zero(3, 5));
    for (double g : nn::flatten_gradients(back.params)) EXPECT_EQ(g, 0.0);
    EXPECT_EQ(back.input_gradient, Matrix::Zero(4, 5));
}

TEST(Backward, StaleCacheIsRejected) {
    Rng rng(6);
    const auto a = random_net({3, 4, 2}, {Activation::relu, Activation::linear}, rng);
    const auto b = random_net({3, 5, 2}, {Activation::relu, Activation::linear}, rng);
    const auto pass = nn::forward(a, Matrix(Matrix::Random(3, 2)));
    EXPECT_THROW(nn::backward(b, pass.cache, Matrix::Ones(2, 2)), StateError);
    EXPECT_THROW(nn::backward(a, pass.cache, Matrix::Ones(2, 3)), DimensionError);
}

TEST(Backward, MatchesFiniteDifferencesOnRandomSmallNets) {
    Rng rng(7);
    std::uniform_int_distribution<std::size_t> width(1, 8), depth(1, 3), batch(1, 4);
    const std::array<Activation, 3> choices{Activation::relu, Activation::tanh, Activation::linear};
    int checked = 0;
    while (checked < 40) {
        std::vector<std::size_t> sizes{width(rng)};
        std::vector<Activation> acts;
        const std::size_t layers = depth(rng);
        for (std::size_t l = 0; l < layers; ++l) {
            sizes.push_back(width(rng));
            acts.push_back(choices[rng() % 3]);
        }
        const auto net = random_net(sizes, acts, rng);
        const Matrix x = Matrix::Random(Eigen::Index(sizes.front()), Eigen::Index(batch(rng)));
        if (irs_noma::testing::relu_margin(net, x) < 1e-3) continue;
        const Matrix weights = Matrix::Random(Eigen::Index(sizes.back()), x.cols());
        auto scalar = [&](const DenseNet& n) { return nn::forward(n, x).output.cwiseProduct(weights).sum(); };

        const auto pass = nn::forward(net, x);
        const auto back = nn::backward(net, pass.cache, weights);
        const auto numeric = irs_noma::testing::numeric_gradient(net, scalar);
        EXPECT_LT(irs_noma::testing::max_relative_error(nn::flatten_gradients(back.params), numeric), 1e-4);
        ++checked;
    }
}

TEST(Backward, ActorAndCriticGradientsMatchFiniteDifferences) {
    Rng rng(8);
    int checked = 0;
    while (checked < 30) {
        const auto problem = irs_noma::testing::make_toy_problem(rng);
        const auto c = irs_noma::testing::check_toy_problem(problem);
        if (!c.usable) continue;
        EXPECT_LT(c.critic_error, 1e-4);
        EXPECT_LT(c.actor_error, 1e-4);
        ++checked;
    }
}

TEST(Adam, FirstStepMovesByLearningRateTimesSign) {
    auto net = single_layer(Matrix{{0.3}}, Vector{{-0.2}}, Activation::linear);
    nn::Gradients g{{Matrix{{2.5}}}, {Vector{{-0.004}}}};
    nn::adam_step(net, g, nn::AdamConfig{.lr = 0.01});
    EXPECT_NEAR(net.layers[0].weight(0, 0), 0.3 - 0.01 * 2.5 / (2.5 + 1e-8), 1e-15);
    EXPECT_NEAR(net.layers[0].bias(0), -0.2 + 0.01 * 0.004 / (0.004 + 1e-8), 1e-15);
    EXPECT_EQ(net.adam.step, 1u);
}

TEST(Adam, ZeroGradientAndZeroLearningRateLeaveParameters) {
    Rng rng(9);
    auto net = random_net({3, 4, 2}, {Activation::relu, Activation::tanh}, rng);
    const auto before = nn::flatten_parameters(net);
    nn::Gradients zero;
    for (const auto& l : net.layers) {
        zero.weight.push_back(Matrix::Zero(l.weight.rows(), l.weight.cols()));
        zero.bias.push_back(Vector::Zero(l.bias.size()));
    }
    nn::adam_step(net, zero, nn::AdamConfig{.lr = 0.1});
    EXPECT_EQ(nn::flatten_parameters(net), before);

    nn::Gradients ones = zero;
    for (auto& w : ones.weight) w.setOnes();
    for (auto& b : ones.bias) b.setOnes();
    nn::adam_step(net, ones, nn::AdamConfig{.lr = 0.0});
    EXPECT_EQ(nn::flatten_parameters(net), before);
    EXPECT_EQ(net.adam.step, 2u);
}

TEST(Adam, NonFiniteGradientIsRejectedWithoutUpdating) {
    Rng rng(10);
    auto net = random_net({2, 2}, {Activation::linear}, rng);
    const auto before = nn::flatten_parameters(net);
    nn::Gradients g{{Matrix::Ones(2, 2)}, {Vector::Ones(2)}};
    g.weight[0](1, 0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(nn::adam_step(net, g, nn::AdamConfig{}), NumericError);
    EXPECT_EQ(nn::flatten_parameters(net), before);
    EXPECT_EQ(net.adam.step, 0u);
}

TEST(SoftUpdate, EndpointsAndInterpolation) {
    Rng rng(11);
    const auto main = random_net({3, 4, 2}, {Activation::relu, Activation::tanh}, rng);
    auto target = random_net({3, 4, 2}, {Activation::relu, Activation::tanh}, rng);
    const auto target_before = nn::flatten_parameters(target);

    nn::soft_update(target, main, 0.0);
    EXPECT_EQ(nn::flatten_parameters(target), target_before);

    nn::soft_update(target, main, 0.05);
    const auto m = nn::flatten_parameters(main);
    const auto t = nn::flatten_parameters(target);
    for (std::size_t i = 0; i < m.size(); ++i) {
        EXPECT_NEAR(t[i], 0.05 * m[i] + 0.95 * target_before[i], 1e-15);
        EXPECT_NEAR(std::abs(t[i] - m[i]), 0.95 * std::abs(target_before[i] - m[i]), 1e-15);
    }

    nn::soft_update(target, main, 1.0);
    EXPECT_EQ(nn::flatten_parameters(target), m);
}

TEST(SoftUpdate, ScalarExample) {
    auto target = single_layer(Matrix{{0.0}}, Vector{{0.0}}, Activation::linear);
    const auto main = single_layer(Matrix{{1.0}}, Vector{{1.0}}, Activation::linear);
    nn::soft_update(target, main, 0.05);
    EXPECT_DOUBLE_EQ(target.layers[0].weight(0, 0), 0.05);
}

TEST(SoftUpdate, RejectsMismatchAndBadTau) {
    Rng rng(12);
    auto a = random_net({3, 4, 2}, {Activation::relu, Activation::tanh}, rng);
    const auto b = random_net({3, 5, 2}, {Activation::relu, Activation::tanh}, rng);
    EXPECT_THROW(nn::soft_update(a, b, 0.5), DimensionError);
    EXPECT_THROW(nn::soft_update(a, a, 1.5), ParameterError);
}

TEST(Serialization, RoundTripIsExact) {
    Rng rng(13);
    auto net = random_net({5, 7, 3}, {Activation::relu, Activation::tanh}, rng);
    const auto pass = nn::forward(net, Matrix(Matrix::Random(5, 3)));
    nn::adam_step(net, nn::backward(net, pass.cache, Matrix::Ones(3, 3)).params, nn::AdamConfig{});
    std::stringstream ss;
    nn::save(ss, net);
    const auto loaded = nn::load(ss);
    EXPECT_TRUE(nn::same_architecture(net, loaded));
    EXPECT_EQ(nn::flatten_parameters(loaded), nn::flatten_parameters(net));
    EXPECT_EQ(loaded.adam.step, net.adam.step);
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        EXPECT_EQ(loaded.adam.m_weight[i], net.adam.m_weight[i]);
        EXPECT_EQ(loaded.adam.v_weight[i], net.adam.v_weight[i]);
        EXPECT_EQ(loaded.adam.m_bias[i], net.adam.m_bias[i]);
        EXPECT_EQ(loaded.adam.v_bias[i], net.adam.v_bias[i]);
    }
}

TEST(Serialization, RejectsGarbage) {
    std::stringstream wrong_magic("not_a_net 1\n");
    EXPECT_THROW(nn::load(wrong_magic), ConfigError);
    std::stringstream truncated("irs_noma_densenet 1\nlayers 1\n2 2 relu\nadam_step 0\n0.5\n");
    EXPECT_THROW(nn::load(truncated), ConfigError);
}

TEST(FlatParameters, AssignInvertsFlatten) {
    Rng rng(14);
    auto net = random_net({2, 3, 1}, {Activation::tanh, Activation::linear}, rng);
    auto values = nn::flatten_parameters(net);
    for (auto& v : values) v *= 2.0;
    nn::assign_parameters(net, values);
    EXPECT_EQ(nn::flatten_parameters(net), values);
    values.pop_back();
    EXPECT_THROW(nn::assign_parameters(net, values), DimensionError);
}
