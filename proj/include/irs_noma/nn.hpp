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

#ifndef IRS_NOMA_NN_HPP
#define IRS_NOMA_NN_HPP

// Small fully-connected networks with hand-written reverse-mode gradients,
// Adam, and Polyak (soft) target updates.
//
// Batches are column-major: a batch of n inputs of width d is a d x n matrix.
// Everything is double precision.

#include "error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace irs_noma::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { relu, tanh, linear };

inline const char* to_string(Activation a) {
    switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::linear: return "linear";
    }
    return "?";
}

inline Activation activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "tanh") return Activation::tanh;
    if (s == "linear") return Activation::linear;
    throw ConfigError("unknown activation '" + s + "'");
}

struct DenseLayer {
    Matrix weight; // out x in
    Vector bias;   // out
    Activation activation = Activation::linear;

    std::size_t inputs() const { return static_cast<std::size_t>(weight.cols()); }
    std::size_t outputs() const { return static_cast<std::size_t>(weight.rows()); }
};

// First/second moment estimates, shape-congruent with the layers.
struct AdamState {
    std::vector<Matrix> m_weight, v_weight;
    std::vector<Vector> m_bias, v_bias;
    std::uint64_t step = 0;
};

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct DenseNet {
    std::vector<DenseLayer> layers;
    AdamState adam;

    std::size_t input_size() const { return layers.empty() ? 0 : layers.front().inputs(); }
    std::size_t output_size() const { return layers.empty() ? 0 : layers.back().outputs(); }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
        return n;
    }
};

// Zeroes the Adam moments for the current layer shapes.
inline void reset_adam(DenseNet& net) {
    net.adam = AdamState{};
    for (const auto& l : net.layers) {
        net.adam.m_weight.push_back(Matrix::Zero(l.weight.rows(), l.weight.cols()));
        net.adam.v_weight.push_back(Matrix::Zero(l.weight.rows(), l.weight.cols()));
        net.adam.m_bias.push_back(Vector::Zero(l.bias.size()));
        net.adam.v_bias.push_back(Vector::Zero(l.bias.size()));
    }
}

inline void check_chain(const DenseNet& net) {
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        const auto& l = net.layers[i];
        detail::require_dims(l.bias.size() == l.weight.rows(), "DenseNet: bias length must equal layer output size");
        if (i > 0) {
            detail::require_dims(l.inputs() == net.layers[i - 1].outputs(),
                                 "DenseNet: consecutive layer dimensions do not chain");
        }
    }
}

// Layer sizes {in, h1, ..., out}; one activation per layer. Weights and biases
// are uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)]; the last layer is then
// multiplied by `final_layer_scale`.
template <std::uniform_random_bit_generator G>
DenseNet make_dense_net(std::span<const std::size_t> sizes, std::span<const Activation> activations, G& rng,
                        double final_layer_scale = 1.0) {
    detail::require_dims(sizes.size() >= 2, "make_dense_net: need at least input and output sizes");
    detail::require_dims(activations.size() + 1 == sizes.size(), "make_dense_net: one activation per layer");
    DenseNet net;
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        detail::require(sizes[i] > 0 && sizes[i + 1] > 0, "make_dense_net: layer sizes must be positive");
        const auto in = static_cast<Eigen::Index>(sizes[i]);
        const auto out = static_cast<Eigen::Index>(sizes[i + 1]);
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        std::uniform_real_distribution<double> uni(-bound, bound);
        DenseLayer layer{Matrix(out, in), Vector(out), activations[i]};
        for (Eigen::Index r = 0; r < out; ++r)
            for (Eigen::Index c = 0; c < in; ++c) layer.weight(r, c) = uni(rng);
        for (Eigen::Index r = 0; r < out; ++r) layer.bias(r) = uni(rng);
        net.layers.push_back(std::move(layer));
    }
    net.layers.back().weight *= final_layer_scale;
    net.layers.back().bias *= final_layer_scale;
    reset_adam(net);
    return net;
}

// Per-layer inputs and post-activation outputs of one forward pass.
struct ForwardCache {
    std::vector<Matrix> inputs;
    std::vector<Matrix> outputs;
};

struct ForwardPass {
    Matrix output;
    ForwardCache cache;
};

struct Gradients {
    std::vector<Matrix> weight;
    std::vector<Vector> bias;
};

struct BackwardPass {
    Gradients params;
    Matrix input_gradient;
};

namespace impl {

inline void activate(Matrix& z, Activation a) {
    switch (a) {
    case Activation::relu: z = z.cwiseMax(0.0); break;
    case Activation::tanh: z = z.array().tanh().matrix(); break;
    case Activation::linear: break;
    }
}

// dL/dz from dL/dy, given the activated output y.
inline Matrix activation_backward(const Matrix& grad_out, const Matrix& y, Activation a) {
    switch (a) {
    case Activation::relu: return (y.array() > 0.0).select(grad_out, 0.0);
    case Activation::tanh: return (grad_out.array() * (1.0 - y.array().square())).matrix();
    case Activation::linear: return grad_out;
    }
    return grad_out;
}

} // namespace impl

inline ForwardPass forward(const DenseNet& net, const Matrix& batch) {
    detail::require_dims(!net.layers.empty(), "forward: empty network");
    detail::require_dims(static_cast<std::size_t>(batch.rows()) == net.input_size(),
                         "forward: input has " + std::to_string(batch.rows()) + " rows, network expects " +
                             std::to_string(net.input_size()));
    ForwardPass pass;
    pass.cache.inputs.reserve(net.layers.size());
    pass.cache.outputs.reserve(net.layers.size());
    Matrix x = batch;
    for (const auto& layer : net.layers) {
        Matrix z = layer.weight * x;
        z.colwise() += layer.bias;
        impl::activate(z, layer.activation);
        pass.cache.inputs.push_back(std::move(x));
        x = z;
        pass.cache.outputs.push_back(std::move(z));
    }
    pass.output = std::move(x);
    return pass;
}

// Single-sample convenience overload; returns only the output.
inline Vector forward(const DenseNet& net, const Vector& x) {
    return forward(net, Matrix(x)).output.col(0);
}

// Reverse-mode gradients of the scalar L whose gradient w.r.t. the network
// output is `output_gradient` (same shape as the forward output).
inline BackwardPass backward(const DenseNet& net, const ForwardCache& cache, const Matrix& output_gradient) {
    const std::size_t n_layers = net.layers.size();
    if (cache.inputs.size() != n_layers || cache.outputs.size() != n_layers) {
        throw StateError("backward: cache does not belong to this network");
    }
    for (std::size_t i = 0; i < n_layers; ++i) {
        const auto& l = net.layers[i];
        if (static_cast<std::size_t>(cache.inputs[i].rows()) != l.inputs() ||
            static_cast<std::size_t>(cache.outputs[i].rows()) != l.outputs() ||
            cache.inputs[i].cols() != cache.inputs[0].cols() || cache.outputs[i].cols() != cache.inputs[0].cols()) {
            throw StateError("backward: stale or mismatched forward cache");
        }
    }
    detail::require_dims(output_gradient.rows() == cache.outputs.back().rows() &&
                             output_gradient.cols() == cache.outputs.back().cols(),
                         "backward: output gradient shape differs from the forward output");

    BackwardPass out;
    out.params.weight.resize(n_layers);
    out.params.bias.resize(n_layers);
    Matrix grad = output_gradient;
    for (std::size_t idx = n_layers; idx-- > 0;) {
        const auto& layer = net.layers[idx];
        const Matrix dz = impl::activation_backward(grad, cache.outputs[idx], layer.activation);
        out.params.weight[idx] = dz * cache.inputs[idx].transpose();
        out.params.bias[idx] = dz.rowwise().sum();
        grad = layer.weight.transpose() * dz;
    }
    out.input_gradient = std::move(grad);
    return out;
}

inline bool all_finite(const Gradients& g) {
    for (const auto& w : g.weight)
        if (!w.allFinite()) return false;
    for (const auto& b : g.bias)
        if (!b.allFinite()) return false;
    return true;
}

inline bool all_finite(const DenseNet& net) {
    for (const auto& l : net.layers)
        if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
    return true;
}

// One bias-corrected Adam step (descent). Rejects non-finite gradients
// without touching the network.
inline void adam_step(DenseNet& net, const Gradients& grads, const AdamConfig& cfg) {
    const std::size_t n_layers = net.layers.size();
    detail::require_dims(grads.weight.size() == n_layers && grads.bias.size() == n_layers,
                         "adam_step: gradient layer count differs from the network");
    for (std::size_t i = 0; i < n_layers; ++i) {
        detail::require_dims(grads.weight[i].rows() == net.layers[i].weight.rows() &&
                                 grads.weight[i].cols() == net.layers[i].weight.cols() &&
                                 grads.bias[i].size() == net.layers[i].bias.size(),
                             "adam_step: gradient shapes differ from the network");
    }
    if (!all_finite(grads)) throw NumericError("adam_step: non-finite gradient, update rejected");
    if (net.adam.m_weight.size() != n_layers) reset_adam(net);

    auto& st = net.adam;
    ++st.step;
    const double t = static_cast<double>(st.step);
    const double bc1 = 1.0 - std::pow(cfg.beta1, t);
    const double bc2 = 1.0 - std::pow(cfg.beta2, t);

    auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
        param.array() -= cfg.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.eps);
    };
    for (std::size_t i = 0; i < n_layers; ++i) {
        update(net.layers[i].weight, st.m_weight[i], st.v_weight[i], grads.weight[i]);
        update(net.layers[i].bias, st.m_bias[i], st.v_bias[i], grads.bias[i]);
    }
}

inline bool same_architecture(const DenseNet& a, const DenseNet& b) {
    if (a.layers.size() != b.layers.size()) return false;
    for (std::size_t i = 0; i < a.layers.size(); ++i) {
        if (a.layers[i].weight.rows() != b.layers[i].weight.rows() ||
            a.layers[i].weight.cols() != b.layers[i].weight.cols() ||
            a.layers[i].activation != b.layers[i].activation) {
            return false;
        }
    }
    return true;
}

// target <- tau * main + (1 - tau) * target, parameter-wise. Adam state of the
// target is left untouched.
inline void soft_update(DenseNet& target, const DenseNet& main, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw ParameterError("soft_update: tau must lie in [0, 1]");
    if (!same_architecture(target, main)) throw DimensionError("soft_update: architectures differ");
    if (tau == 0.0) return;
    for (std::size_t i = 0; i < main.layers.size(); ++i) {
        if (tau == 1.0) {
            target.layers[i].weight = main.layers[i].weight;
            target.layers[i].bias = main.layers[i].bias;
            continue;
        }
        target.layers[i].weight = tau * main.layers[i].weight + (1.0 - tau) * target.layers[i].weight;
        target.layers[i].bias = tau * main.layers[i].bias + (1.0 - tau) * target.layers[i].bias;
    }
}

// Flat views in layer order: W0 (row-major), b0, W1, b1, ...
inline std::vector<double> flatten_parameters(const DenseNet& net) {
    std::vector<double> out;
    out.reserve(net.parameter_count());
    for (const auto& l : net.layers) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) out.push_back(l.weight(r, c));
        for (Eigen::Index r = 0; r < l.bias.size(); ++r) out.push_back(l.bias(r));
    }
    return out;
}

inline void assign_parameters(DenseNet& net, std::span<const double> values) {
    detail::require_dims(values.size() == net.parameter_count(), "assign_parameters: wrong parameter count");
    std::size_t k = 0;
    for (auto& l : net.layers) {
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = values[k++];
        for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = values[k++];
    }
}

inline std::vector<double> flatten_gradients(const Gradients& g) {
    std::vector<double> out;
    for (std::size_t i = 0; i < g.weight.size(); ++i) {
        for (Eigen::Index r = 0; r < g.weight[i].rows(); ++r)
            for (Eigen::Index c = 0; c < g.weight[i].cols(); ++c) out.push_back(g.weight[i](r, c));
        for (Eigen::Index r = 0; r < g.bias[i].size(); ++r) out.push_back(g.bias[i](r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text serialization, version 1:
//
//   irs_noma_densenet 1
//   layers <L>
//   <in> <out> <activation>          (L lines)
//   adam_step <t>
//   then, per layer: W (row-major), b, m_W, v_W, m_b, v_b
//   as whitespace-separated %.17g values, one matrix/vector per line.

namespace impl {

inline void write_values(std::ostream& os, const auto& m) {
    char buf[32];
    bool first = true;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
            if (!first) os << ' ';
            os << buf;
            first = false;
        }
    }
    os << '\n';
}

inline void read_values(std::istream& is, auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            std::string tok;
            if (!(is >> tok)) throw ConfigError("DenseNet load: truncated parameter block");
            try {
                m(r, c) = std::stod(tok);
            } catch (const std::exception&) {
                throw ConfigError("DenseNet load: bad number '" + tok + "'");
            }
        }
    }
}

} // namespace impl

inline void save(std::ostream& os, const DenseNet& net) {
    os << "irs_noma_densenet 1\n";
    os << "layers " << net.layers.size() << '\n';
    for (const auto& l : net.layers) os << l.inputs() << ' ' << l.outputs() << ' ' << to_string(l.activation) << '\n';
    os << "adam_step " << net.adam.step << '\n';
    const bool have_adam = net.adam.m_weight.size() == net.layers.size();
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        const auto& l = net.layers[i];
        impl::write_values(os, l.weight);
        impl::write_values(os, l.bias);
        if (have_adam) {
            impl::write_values(os, net.adam.m_weight[i]);
            impl::write_values(os, net.adam.v_weight[i]);
            impl::write_values(os, net.adam.m_bias[i]);
            impl::write_values(os, net.adam.v_bias[i]);
        } else {
            impl::write_values(os, Matrix::Zero(l.weight.rows(), l.weight.cols()));
            impl::write_values(os, Matrix::Zero(l.weight.rows(), l.weight.cols()));
            impl::write_values(os, Vector::Zero(l.bias.size()));
            impl::write_values(os, Vector::Zero(l.bias.size()));
        }
    }
}

inline DenseNet load(std::istream& is) {
    std::string magic, word;
    int version = 0;
    if (!(is >> magic >> version) || magic != "irs_noma_densenet") throw ConfigError("DenseNet load: bad header");
    if (version != 1) throw ConfigError("DenseNet load: unsupported version " + std::to_string(version));
    std::size_t n_layers = 0;
    if (!(is >> word >> n_layers) || word != "layers") throw ConfigError("DenseNet load: expected 'layers'");
    DenseNet net;
    for (std::size_t i = 0; i < n_layers; ++i) {
        std::size_t in = 0, out = 0;
        std::string act;
        if (!(is >> in >> out >> act)) throw ConfigError("DenseNet load: truncated layer table");
        net.layers.push_back(DenseLayer{Matrix(out, in), Vector(out), activation_from_string(act)});
    }
    check_chain(net);
    reset_adam(net);
    if (!(is >> word >> net.adam.step) || word != "adam_step") throw ConfigError("DenseNet load: expected 'adam_step'");
    for (std::size_t i = 0; i < n_layers; ++i) {
        impl::read_values(is, net.layers[i].weight);
        impl::read_values(is, net.layers[i].bias);
        impl::read_values(is, net.adam.m_weight[i]);
        impl::read_values(is, net.adam.v_weight[i]);
        impl::read_values(is, net.adam.m_bias[i]);
        impl::read_values(is, net.adam.v_bias[i]);
    }
    return net;
}

} // namespace irs_noma::nn

#endif
