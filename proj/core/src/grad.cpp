#include "anoqrl/grad.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "anoqrl/errors.hpp"

namespace anoqrl {

namespace {

constexpr double kShift = std::numbers::pi / 2.0;
constexpr Axis kAxes[3] = {Axis::X, Axis::Y, Axis::Z};

/// Applies the variational gates that come strictly after rotation
/// (layer, qubit, axis) in circuit order.
void apply_suffix(StateVector &sv, const ThetaParams &theta, std::size_t layer,
                  std::size_t qubit, std::size_t axis) {
    for (std::size_t r = axis + 1; r < 3; ++r) {
        sv.apply_rotation(qubit, kAxes[r], theta.at(layer, qubit, r));
    }
    for (std::size_t q = qubit + 1; q < theta.n_qubits; ++q) {
        for (std::size_t r = 0; r < 3; ++r) {
            sv.apply_rotation(q, kAxes[r], theta.at(layer, q, r));
        }
    }
    for (std::size_t l = layer + 1; l < theta.n_layers; ++l) {
        apply_entangler(sv);
        for (std::size_t q = 0; q < theta.n_qubits; ++q) {
            for (std::size_t r = 0; r < 3; ++r) {
                sv.apply_rotation(q, kAxes[r], theta.at(l, q, r));
            }
        }
    }
}

std::vector<double> one_hot(std::size_t n, std::size_t index) {
    if (index >= n) {
        throw IndexError("output index " + std::to_string(index) + " out of range for " +
                         std::to_string(n) + " outputs");
    }
    std::vector<double> w(n, 0.0);
    w[index] = 1.0;
    return w;
}

} // namespace

std::vector<double> flatten(const std::vector<HermitianParams> &blocks) {
    std::vector<double> flat;
    for (const auto &hp : blocks) {
        const auto f = hp.flatten();
        flat.insert(flat.end(), f.begin(), f.end());
    }
    return flat;
}

GradBundle vector_jacobian(const QModelConfig &config, const QModelParams &params,
                           std::span<const double> features, std::span<const double> weights,
                           bool with_features) {
    config.validate();
    check_params(config, params);
    if (features.size() != config.n_qubits) {
        throw ConfigError("feature count does not match qubit count");
    }
    if (weights.size() != config.n_outputs) {
        throw ConfigError("cotangent length does not match output count");
    }

    GradBundle grad;
    const ThetaParams &theta = params.theta;
    grad.d_theta = ThetaParams::zeros(theta.n_layers, theta.n_qubits);

    const StateVector encoded = encode(features);
    auto eval_shifted = [&](StateVector sv) {
        return weighted_readout(config, params, sv, weights);
    };

    // Prefix state walks through the circuit one gate at a time.
    StateVector prefix = encoded;
    for (std::size_t l = 0; l < theta.n_layers; ++l) {
        apply_entangler(prefix);
        for (std::size_t q = 0; q < theta.n_qubits; ++q) {
            for (std::size_t r = 0; r < 3; ++r) {
                const double angle = theta.at(l, q, r);
                StateVector plus = prefix;
                plus.apply_rotation(q, kAxes[r], angle + kShift);
                apply_suffix(plus, theta, l, q, r);
                StateVector minus = prefix;
                minus.apply_rotation(q, kAxes[r], angle - kShift);
                apply_suffix(minus, theta, l, q, r);
                grad.d_theta.at(l, q, r) =
                    0.5 * (eval_shifted(std::move(plus)) - eval_shifted(std::move(minus)));
                prefix.apply_rotation(q, kAxes[r], angle);
            }
        }
    }

    if (config.uses_ano()) {
        const auto &ano = *params.ano;
        grad.d_phi.reserve(ano.per_group.size());
        for (std::size_t g = 0; g < ano.per_group.size(); ++g) {
            if (g < config.n_outputs && weights[g] != 0.0) {
                auto block = expectation_grad_phi(reduced_density(prefix, ano.scheme.groups[g]));
                for (auto *part : {&block.diag, &block.upper_re, &block.upper_im}) {
                    for (auto &v : *part) {
                        v *= weights[g];
                    }
                }
                grad.d_phi.push_back(std::move(block));
            } else {
                grad.d_phi.push_back(HermitianParams::zeros(ano.scheme.k_local));
            }
        }
    }

    if (with_features) {
        grad.d_features.assign(features.size(), 0.0);
        std::vector<double> shifted(features.begin(), features.end());
        for (std::size_t i = 0; i < features.size(); ++i) {
            const double original = shifted[i];
            shifted[i] = original + kShift;
            StateVector plus = encode(shifted);
            apply_variational(plus, theta);
            shifted[i] = original - kShift;
            StateVector minus = encode(shifted);
            apply_variational(minus, theta);
            shifted[i] = original;
            grad.d_features[i] =
                0.5 * (eval_shifted(std::move(plus)) - eval_shifted(std::move(minus)));
        }
    }
    return grad;
}

ThetaParams grad_theta(const QModelConfig &config, const QModelParams &params,
                       std::span<const double> features, std::size_t output_index) {
    const auto w = one_hot(config.n_outputs, output_index);
    return vector_jacobian(config, params, features, w).d_theta;
}

std::vector<HermitianParams> grad_phi(const QModelConfig &config, const QModelParams &params,
                                      std::span<const double> features,
                                      std::size_t output_index) {
    const auto w = one_hot(config.n_outputs, output_index);
    return vector_jacobian(config, params, features, w).d_phi;
}

std::vector<double> grad_features(const QModelConfig &config, const QModelParams &params,
                                  std::span<const double> features, std::size_t output_index) {
    const auto w = one_hot(config.n_outputs, output_index);
    return vector_jacobian(config, params, features, w, true).d_features;
}

std::vector<double> central_difference(const std::function<double(std::span<const double>)> &f,
                                       std::span<const double> x, double step) {
    if (!(step >= 1e-8 && step <= 1e-3)) {
        throw ConfigError("finite-difference step must lie in [1e-8, 1e-3]");
    }
    std::vector<double> point(x.begin(), x.end());
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double original = point[i];
        point[i] = original + step;
        const double up = f(point);
        point[i] = original - step;
        const double down = f(point);
        point[i] = original;
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

std::vector<double> fd_oracle(const QModelConfig &config, const QModelParams &params,
                              std::span<const double> features, std::size_t output_index,
                              GradTarget block, double step) {
    if (output_index >= config.n_outputs) {
        throw IndexError("output index out of range");
    }
    const std::vector<double> feats(features.begin(), features.end());
    switch (block) {
    case GradTarget::Theta: {
        QModelParams probe = params;
        return central_difference(
            [&](std::span<const double> angles) {
                probe.theta.angles.assign(angles.begin(), angles.end());
                return forward(config, probe, feats).logits[output_index];
            },
            params.theta.angles, step);
    }
    case GradTarget::Phi: {
        if (!params.ano) {
            return {};
        }
        QModelParams probe = params;
        const std::size_t per = params.ano->per_group.front().param_count();
        return central_difference(
            [&](std::span<const double> flat) {
                for (std::size_t g = 0; g < probe.ano->per_group.size(); ++g) {
                    probe.ano->per_group[g].assign(flat.subspan(g * per, per));
                }
                return forward(config, probe, feats).logits[output_index];
            },
            flatten(params.ano->per_group), step);
    }
    case GradTarget::Features:
        return central_difference(
            [&](std::span<const double> x) {
                return forward(config, params, x).logits[output_index];
            },
            feats, step);
    }
    return {};
}

} // namespace anoqrl
