#pragma once

/**
 * @file
 * Variational quantum function approximator.
 *
 *   features -> H on every qubit, RY(feature_i) on qubit i       (encoding)
 *            -> per layer: CNOT brick, then RX RY RZ per qubit    (variational)
 *            -> readout: trainable k-local observable per window,
 *               or Pauli Z per qubit
 *
 * The entangling brick applies CNOT(q, q+1) for even q, then for odd q; on
 * four qubits this is CNOT(0,1), CNOT(2,3), CNOT(1,2).
 */

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anoqrl/observable.hpp"
#include "anoqrl/qstate.hpp"

namespace anoqrl {

enum class ReadoutMode {
    AnoWithRotation, ///< variational layer + trainable observable
    RotationOnly,    ///< variational layer + fixed Pauli Z
    MeasurementOnly, ///< no variational layer, trainable observable only
};

std::string_view to_string(ReadoutMode mode);
/// Accepts "ano_rotation", "rotation_only", "measurement_only".
ReadoutMode parse_readout_mode(std::string_view text);

struct QModelConfig {
    std::size_t n_qubits{4};
    std::size_t n_layers{1};
    std::size_t locality{3};
    ReadoutMode mode{ReadoutMode::AnoWithRotation};
    std::size_t n_outputs{2};

    [[nodiscard]] bool uses_ano() const noexcept { return mode != ReadoutMode::RotationOnly; }
    /// Layers actually applied (0 in MeasurementOnly).
    [[nodiscard]] std::size_t effective_layers() const noexcept {
        return mode == ReadoutMode::MeasurementOnly ? 0 : n_layers;
    }
    /// Throws ConfigError describing the first violated rule.
    void validate() const;

    friend bool operator==(const QModelConfig &, const QModelConfig &) = default;
};

/// Rotation angles, `n_layers x n_qubits x 3` (RX, RY, RZ), row-major.
struct ThetaParams {
    std::size_t n_layers{0};
    std::size_t n_qubits{0};
    std::vector<double> angles;

    static ThetaParams zeros(std::size_t n_layers, std::size_t n_qubits);
    static ThetaParams random(std::size_t n_layers, std::size_t n_qubits, Rng &rng);

    [[nodiscard]] std::size_t size() const noexcept { return angles.size(); }
    double &at(std::size_t layer, std::size_t qubit, std::size_t axis) {
        return angles[(layer * n_qubits + qubit) * 3 + axis];
    }
    [[nodiscard]] double at(std::size_t layer, std::size_t qubit, std::size_t axis) const {
        return angles[(layer * n_qubits + qubit) * 3 + axis];
    }
};

struct QModelParams {
    ThetaParams theta;
    std::optional<AnoObservable> ano;
};

struct ModelOutput {
    std::vector<double> logits;
};

/// H on every qubit then RY(features[i]) on qubit i, from |0...0>.
StateVector encode(std::span<const double> features);

/// The CNOT brick used by each variational layer.
void apply_entangler(StateVector &sv);

/// Applies all layers of `theta` in place; zero layers leaves `sv` untouched.
void apply_variational(StateVector &sv, const ThetaParams &theta);

/// Random parameters shaped for `config` (theta uniform in [-pi, pi]; observables per
/// the HermitianParams initialisation). MeasurementOnly gets an empty theta.
QModelParams init_params(const QModelConfig &config, Rng &rng);

/// Checks that parameter shapes match `config`.
void check_params(const QModelConfig &config, const QModelParams &params);

/// Readout on a prepared state: weighted sum of the selected logits, skipping
/// zero weights. `weights` has n_outputs entries.
double weighted_readout(const QModelConfig &config, const QModelParams &params,
                        const StateVector &sv, std::span<const double> weights);

/// All n_outputs logits for a prepared state.
std::vector<double> readout(const QModelConfig &config, const QModelParams &params,
                            const StateVector &sv);

/// Full model evaluation.
ModelOutput forward(const QModelConfig &config, const QModelParams &params,
                    std::span<const double> features);

} // namespace anoqrl
