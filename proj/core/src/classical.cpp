#include "anoqrl/classical.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <utility>

#include "anoqrl/errors.hpp"
#include "anoqrl/rng.hpp"

namespace anoqrl {

void ParamStore::add(std::string name, BlockKind kind, std::vector<double> values) {
    if (contains(name)) {
        throw ConfigError("duplicate parameter block '" + name + "'");
    }
    blocks_.push_back(ParamBlock{std::move(name), kind, std::move(values)});
}

bool ParamStore::contains(std::string_view name) const noexcept {
    return std::any_of(blocks_.begin(), blocks_.end(),
                       [&](const ParamBlock &b) { return b.name == name; });
}

const ParamBlock &ParamStore::block(std::string_view name) const {
    for (const auto &b : blocks_) {
        if (b.name == name) {
            return b;
        }
    }
    throw ConfigError("no parameter block named '" + std::string{name} + "'");
}

ParamBlock &ParamStore::block(std::string_view name) {
    return const_cast<ParamBlock &>(std::as_const(*this).block(name));
}

ParamStore ParamStore::zeros_like() const {
    ParamStore z;
    for (const auto &b : blocks_) {
        z.blocks_.push_back(ParamBlock{b.name, b.kind, std::vector<double>(b.values.size(), 0.0)});
    }
    return z;
}

bool ParamStore::same_shape(const ParamStore &other) const noexcept {
    if (blocks_.size() != other.blocks_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (blocks_[i].name != other.blocks_[i].name ||
            blocks_[i].values.size() != other.blocks_[i].values.size()) {
            return false;
        }
    }
    return true;
}

std::size_t ParamStore::total_size() const noexcept {
    std::size_t n = 0;
    for (const auto &b : blocks_) {
        n += b.values.size();
    }
    return n;
}

void ParamStore::add_scaled(const ParamStore &other, double scale) {
    if (!same_shape(other)) {
        throw ConfigError("parameter stores differ in shape");
    }
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        auto &dst = blocks_[i].values;
        const auto &src = other.blocks_[i].values;
        for (std::size_t j = 0; j < dst.size(); ++j) {
            dst[j] += scale * src[j];
        }
    }
}

void ParamStore::scale(double factor) {
    for (auto &b : blocks_) {
        for (auto &v : b.values) {
            v *= factor;
        }
    }
}

double ParamStore::squared_norm() const noexcept {
    double s = 0.0;
    for (const auto &b : blocks_) {
        for (double v : b.values) {
            s += v * v;
        }
    }
    return s;
}

bool ParamStore::all_finite() const noexcept {
    for (const auto &b : blocks_) {
        for (double v : b.values) {
            if (!std::isfinite(v)) {
                return false;
            }
        }
    }
    return true;
}

std::uint64_t ParamStore::checksum() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto &b : blocks_) {
        for (double v : b.values) {
            std::uint64_t bits = 0;
            std::memcpy(&bits, &v, sizeof bits);
            for (int byte = 0; byte < 8; ++byte) {
                h ^= (bits >> (8 * byte)) & 0xffU;
                h *= 0x100000001b3ULL;
            }
        }
    }
    return h;
}

LinearLayer LinearLayer::zeros(std::size_t in_dim, std::size_t out_dim) {
    if (in_dim == 0 || out_dim == 0) {
        throw ConfigError("linear layer dimensions must be positive");
    }
    return LinearLayer{in_dim, out_dim, std::vector<double>(in_dim * out_dim, 0.0),
                       std::vector<double>(out_dim, 0.0)};
}

LinearLayer LinearLayer::random(std::size_t in_dim, std::size_t out_dim, Rng &rng) {
    auto layer = zeros(in_dim, out_dim);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
    for (auto &w : layer.weights) {
        w = rng.uniform(-bound, bound);
    }
    for (auto &b : layer.bias) {
        b = rng.uniform(-bound, bound);
    }
    return layer;
}

namespace {

void check_layer(const LinearLayer &layer, std::size_t input_size) {
    if (layer.weights.size() != layer.in_dim * layer.out_dim ||
        layer.bias.size() != layer.out_dim) {
        throw ConfigError("linear layer storage does not match its dimensions");
    }
    if (input_size != layer.in_dim) {
        throw ConfigError("linear layer expects " + std::to_string(layer.in_dim) +
                          " inputs, got " + std::to_string(input_size));
    }
}

double preactivation(const LinearLayer &layer, std::span<const double> input, std::size_t row) {
    double z = layer.bias[row];
    const double *w = &layer.weights[row * layer.in_dim];
    for (std::size_t c = 0; c < layer.in_dim; ++c) {
        z += w[c] * input[c];
    }
    return z;
}

} // namespace

std::vector<double> linear_forward(const LinearLayer &layer, std::span<const double> input) {
    check_layer(layer, input.size());
    std::vector<double> out(layer.out_dim);
    for (std::size_t r = 0; r < layer.out_dim; ++r) {
        out[r] = std::numbers::pi * std::tanh(preactivation(layer, input, r));
    }
    return out;
}

LinearGrad linear_backward(const LinearLayer &layer, std::span<const double> input,
                           std::span<const double> upstream) {
    check_layer(layer, input.size());
    if (upstream.size() != layer.out_dim) {
        throw ConfigError("upstream gradient length does not match layer output");
    }
    LinearGrad grad{std::vector<double>(layer.weights.size(), 0.0),
                    std::vector<double>(layer.out_dim, 0.0)};
    for (std::size_t r = 0; r < layer.out_dim; ++r) {
        if (upstream[r] == 0.0) {
            continue;
        }
        const double t = std::tanh(preactivation(layer, input, r));
        const double dz = upstream[r] * std::numbers::pi * (1.0 - t * t);
        grad.d_bias[r] = dz;
        for (std::size_t c = 0; c < layer.in_dim; ++c) {
            grad.d_weights[r * layer.in_dim + c] = dz * input[c];
        }
    }
    return grad;
}

double AdamConfig::rate(BlockKind kind) const noexcept {
    switch (kind) {
    case BlockKind::Theta:
        return lr_theta;
    case BlockKind::Phi:
        return lr_phi;
    case BlockKind::Linear:
        return lr_linear;
    case BlockKind::Table:
        return lr_table;
    }
    return lr_theta;
}

AdamOptimizer::AdamOptimizer(AdamConfig config, const ParamStore &shape)
    : config_{config}, first_{shape.zeros_like()}, second_{shape.zeros_like()} {}

void AdamOptimizer::step(ParamStore &params, const ParamStore &grads) {
    if (!params.same_shape(first_) || !grads.same_shape(first_)) {
        throw ConfigError("optimizer state, parameters and gradients differ in shape");
    }
    if (!grads.all_finite()) {
        throw NumericError("non-finite gradient; optimizer step rejected");
    }
    ++steps_;
    const double t = static_cast<double>(steps_);
    const double correction1 = 1.0 - std::pow(config_.beta1, t);
    const double correction2 = 1.0 - std::pow(config_.beta2, t);
    auto &pblocks = params.blocks();
    auto &mblocks = first_.blocks();
    auto &vblocks = second_.blocks();
    const auto &gblocks = grads.blocks();
    for (std::size_t b = 0; b < pblocks.size(); ++b) {
        const double lr = config_.rate(pblocks[b].kind);
        auto &p = pblocks[b].values;
        auto &m = mblocks[b].values;
        auto &v = vblocks[b].values;
        const auto &g = gblocks[b].values;
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
            v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
            const double m_hat = m[i] / correction1;
            const double v_hat = v[i] / correction2;
            p[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
        }
    }
}

} // namespace anoqrl
