#include "anoqrl/approximator.hpp"

#include <cmath>
#include <string>

#include "anoqrl/errors.hpp"
#include "anoqrl/grad.hpp"
#include "anoqrl/rng.hpp"

namespace anoqrl {

QuantumApproximator::QuantumApproximator(QModelConfig config, std::size_t input_dim,
                                         bool reduce_input)
    : config_{config}, input_dim_{input_dim}, reduce_input_{reduce_input} {
    config_.validate();
    if (!reduce_input_ && input_dim_ != config_.n_qubits) {
        throw ConfigError("input dimension " + std::to_string(input_dim_) +
                          " does not match qubit count " + std::to_string(config_.n_qubits) +
                          " and no reduction layer is configured");
    }
    if (input_dim_ == 0) {
        throw ConfigError("input dimension must be positive");
    }
    if (config_.uses_ano()) {
        scheme_ = build_groups(config_.n_qubits, config_.locality);
    }
}

ParamStore QuantumApproximator::init_params(Rng &rng) const {
    const QModelParams circuit = anoqrl::init_params(config_, rng);
    ParamStore store;
    store.add("theta", BlockKind::Theta, circuit.theta.angles);
    if (circuit.ano) {
        store.add("phi", BlockKind::Phi, flatten(circuit.ano->per_group));
    }
    if (reduce_input_) {
        const auto layer = LinearLayer::random(input_dim_, config_.n_qubits, rng);
        store.add("linear.weight", BlockKind::Linear, layer.weights);
        store.add("linear.bias", BlockKind::Linear, layer.bias);
    }
    return store;
}

QModelParams QuantumApproximator::circuit_params(const ParamStore &params) const {
    QModelParams circuit;
    const std::size_t layers = config_.effective_layers();
    circuit.theta.n_layers = layers;
    circuit.theta.n_qubits = config_.n_qubits;
    const auto angles = params.values("theta");
    circuit.theta.angles.assign(angles.begin(), angles.end());
    if (config_.uses_ano()) {
        AnoObservable ano{scheme_, {}};
        const auto flat = params.values("phi");
        const std::size_t per = std::size_t{1} << (2 * config_.locality);
        if (flat.size() != per * scheme_.groups.size()) {
            throw ConfigError("observable block has the wrong size");
        }
        ano.per_group.reserve(scheme_.groups.size());
        for (std::size_t g = 0; g < scheme_.groups.size(); ++g) {
            auto hp = HermitianParams::zeros(config_.locality);
            hp.assign(flat.subspan(g * per, per));
            ano.per_group.push_back(std::move(hp));
        }
        circuit.ano = std::move(ano);
    }
    return circuit;
}

std::optional<LinearLayer> QuantumApproximator::reduction_layer(const ParamStore &params) const {
    if (!reduce_input_) {
        return std::nullopt;
    }
    LinearLayer layer;
    layer.in_dim = input_dim_;
    layer.out_dim = config_.n_qubits;
    const auto w = params.values("linear.weight");
    const auto b = params.values("linear.bias");
    layer.weights.assign(w.begin(), w.end());
    layer.bias.assign(b.begin(), b.end());
    return layer;
}

std::vector<double> QuantumApproximator::features(const ParamStore &params,
                                                  std::span<const double> input,
                                                  std::optional<LinearLayer> &layer) const {
    if (input.size() != input_dim_) {
        throw ConfigError("model expects " + std::to_string(input_dim_) + " inputs, got " +
                          std::to_string(input.size()));
    }
    layer = reduction_layer(params);
    if (layer) {
        return linear_forward(*layer, input);
    }
    return {input.begin(), input.end()};
}

std::vector<double> QuantumApproximator::evaluate(const ParamStore &params,
                                                  std::span<const double> input) const {
    std::optional<LinearLayer> layer;
    const auto feats = features(params, input, layer);
    return forward(config_, circuit_params(params), feats).logits;
}

void QuantumApproximator::accumulate_vjp(const ParamStore &params, std::span<const double> input,
                                         std::span<const double> cotangent,
                                         ParamStore &grad) const {
    std::optional<LinearLayer> layer;
    const auto feats = features(params, input, layer);
    const GradBundle g =
        vector_jacobian(config_, circuit_params(params), feats, cotangent, layer.has_value());

    auto d_theta = grad.values("theta");
    for (std::size_t i = 0; i < d_theta.size(); ++i) {
        d_theta[i] += g.d_theta.angles[i];
    }
    if (config_.uses_ano()) {
        auto d_phi = grad.values("phi");
        std::size_t offset = 0;
        for (const auto &block : g.d_phi) {
            for (const auto *part : {&block.diag, &block.upper_re, &block.upper_im}) {
                for (double v : *part) {
                    d_phi[offset++] += v;
                }
            }
        }
    }
    if (layer) {
        const LinearGrad lg = linear_backward(*layer, input, g.d_features);
        auto d_w = grad.values("linear.weight");
        auto d_b = grad.values("linear.bias");
        for (std::size_t i = 0; i < d_w.size(); ++i) {
            d_w[i] += lg.d_weights[i];
        }
        for (std::size_t i = 0; i < d_b.size(); ++i) {
            d_b[i] += lg.d_bias[i];
        }
    }
}

TabularApproximator::TabularApproximator(std::size_t n_states, std::size_t n_actions)
    : n_states_{n_states}, n_actions_{n_actions} {
    if (n_states == 0 || n_actions == 0) {
        throw ConfigError("table needs at least one state and one action");
    }
}

ParamStore TabularApproximator::init_params(Rng & /*rng*/) const {
    ParamStore store;
    store.add("table", BlockKind::Table, std::vector<double>(n_states_ * n_actions_, 0.0));
    return store;
}

std::size_t TabularApproximator::state_of(std::span<const double> input) const {
    if (input.size() != 1) {
        throw ConfigError("tabular model expects a single state index");
    }
    const double s = input[0];
    if (!(s >= 0.0) || s >= static_cast<double>(n_states_) || s != std::floor(s)) {
        throw IndexError("state index " + std::to_string(s) + " out of range");
    }
    return static_cast<std::size_t>(s);
}

std::vector<double> TabularApproximator::evaluate(const ParamStore &params,
                                                  std::span<const double> input) const {
    const auto table = params.values("table");
    const auto row = table.subspan(state_of(input) * n_actions_, n_actions_);
    return {row.begin(), row.end()};
}

void TabularApproximator::accumulate_vjp(const ParamStore & /*params*/,
                                         std::span<const double> input,
                                         std::span<const double> cotangent,
                                         ParamStore &grad) const {
    auto table = grad.values("table");
    const std::size_t base = state_of(input) * n_actions_;
    for (std::size_t a = 0; a < n_actions_; ++a) {
        table[base + a] += cotangent[a];
    }
}

} // namespace anoqrl
