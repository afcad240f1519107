#include "anoqrl/qmodel.hpp"

#include <cmath>
#include <numbers>

#include "anoqrl/errors.hpp"
#include "anoqrl/rng.hpp"

namespace anoqrl {

std::string_view to_string(ReadoutMode mode) {
    switch (mode) {
    case ReadoutMode::AnoWithRotation:
        return "ano_rotation";
    case ReadoutMode::RotationOnly:
        return "rotation_only";
    case ReadoutMode::MeasurementOnly:
        return "measurement_only";
    }
    return "unknown";
}

ReadoutMode parse_readout_mode(std::string_view text) {
    if (text == "ano_rotation") {
        return ReadoutMode::AnoWithRotation;
    }
    if (text == "rotation_only") {
        return ReadoutMode::RotationOnly;
    }
    if (text == "measurement_only") {
        return ReadoutMode::MeasurementOnly;
    }
    throw ConfigError("unknown model mode '" + std::string{text} +
                      "' (expected ano_rotation, rotation_only or measurement_only)");
}

void QModelConfig::validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("qubit count must be in 1..8");
    }
    if (n_outputs < 1) {
        throw ConfigError("model needs at least one output");
    }
    if (n_outputs > n_qubits) {
        throw ConfigError("output count exceeds qubit count");
    }
    if (uses_ano()) {
        if (locality < 1) {
            throw ConfigError("locality must be at least 1");
        }
        if (locality > n_qubits) {
            throw ConfigError("locality exceeds qubit count");
        }
    }
}

ThetaParams ThetaParams::zeros(std::size_t n_layers, std::size_t n_qubits) {
    return ThetaParams{n_layers, n_qubits, std::vector<double>(n_layers * n_qubits * 3, 0.0)};
}

ThetaParams ThetaParams::random(std::size_t n_layers, std::size_t n_qubits, Rng &rng) {
    auto theta = zeros(n_layers, n_qubits);
    for (auto &a : theta.angles) {
        a = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    return theta;
}

StateVector encode(std::span<const double> features) {
    StateVector sv(features.size());
    for (std::size_t q = 0; q < features.size(); ++q) {
        sv.apply_hadamard(q);
        sv.apply_rotation(q, Axis::Y, features[q]);
    }
    return sv;
}

void apply_entangler(StateVector &sv) {
    const std::size_t n = sv.num_qubits();
    for (std::size_t start : {std::size_t{0}, std::size_t{1}}) {
        for (std::size_t q = start; q + 1 < n; q += 2) {
            sv.apply_cnot(q, q + 1);
        }
    }
}

void apply_variational(StateVector &sv, const ThetaParams &theta) {
    if (theta.n_layers == 0) {
        return;
    }
    if (theta.n_qubits != sv.num_qubits() ||
        theta.angles.size() != theta.n_layers * theta.n_qubits * 3) {
        throw ConfigError("rotation parameters do not match the register");
    }
    for (std::size_t l = 0; l < theta.n_layers; ++l) {
        apply_entangler(sv);
        for (std::size_t q = 0; q < theta.n_qubits; ++q) {
            sv.apply_rotation(q, Axis::X, theta.at(l, q, 0));
            sv.apply_rotation(q, Axis::Y, theta.at(l, q, 1));
            sv.apply_rotation(q, Axis::Z, theta.at(l, q, 2));
        }
    }
}

QModelParams init_params(const QModelConfig &config, Rng &rng) {
    config.validate();
    QModelParams params;
    params.theta = ThetaParams::random(config.effective_layers(), config.n_qubits, rng);
    if (config.uses_ano()) {
        params.ano = AnoObservable::random(config.n_qubits, config.locality, rng);
    }
    return params;
}

void check_params(const QModelConfig &config, const QModelParams &params) {
    const std::size_t layers = config.effective_layers();
    if (params.theta.n_layers != layers ||
        (layers > 0 && params.theta.n_qubits != config.n_qubits) ||
        params.theta.angles.size() != layers * config.n_qubits * 3) {
        throw ConfigError("rotation parameter shape does not match the model configuration");
    }
    if (config.uses_ano() != params.ano.has_value()) {
        throw ConfigError(config.uses_ano() ? "model mode requires an adaptive observable"
                                            : "Pauli readout takes no adaptive observable");
    }
    if (params.ano) {
        params.ano->validate();
        if (params.ano->scheme.n_qubits != config.n_qubits ||
            params.ano->scheme.k_local != config.locality) {
            throw ConfigError("observable grouping does not match the model configuration");
        }
    }
}

double weighted_readout(const QModelConfig &config, const QModelParams &params,
                        const StateVector &sv, std::span<const double> weights) {
    double total = 0.0;
    for (std::size_t g = 0; g < config.n_outputs; ++g) {
        if (weights[g] == 0.0) {
            continue;
        }
        double value = 0.0;
        if (config.uses_ano()) {
            const auto &ano = *params.ano;
            value = expectation(sv, ano.scheme.groups[g], ano.per_group[g]);
        } else {
            value = sv.expectation_z(g);
        }
        total += weights[g] * value;
    }
    return total;
}

std::vector<double> readout(const QModelConfig &config, const QModelParams &params,
                            const StateVector &sv) {
    std::vector<double> logits(config.n_outputs);
    for (std::size_t g = 0; g < config.n_outputs; ++g) {
        if (config.uses_ano()) {
            const auto &ano = *params.ano;
            logits[g] = expectation(sv, ano.scheme.groups[g], ano.per_group[g]);
        } else {
            logits[g] = sv.expectation_z(g);
        }
    }
    return logits;
}

ModelOutput forward(const QModelConfig &config, const QModelParams &params,
                    std::span<const double> features) {
    config.validate();
    check_params(config, params);
    if (features.size() != config.n_qubits) {
        throw ConfigError("feature count " + std::to_string(features.size()) +
                          " does not match qubit count " + std::to_string(config.n_qubits));
    }
    StateVector sv = encode(features);
    apply_variational(sv, params.theta);
    return ModelOutput{readout(config, params, sv)};
}

} // namespace anoqrl
