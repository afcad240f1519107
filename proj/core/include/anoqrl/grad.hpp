#pragma once

/**
 * @file
 * Gradients of model logits.
 *
 * Rotation angles (variational RX/RY/RZ and encoding RY) use the two-term
 * parameter-shift rule, exact for generators with eigenvalues +-1/2:
 *
 *     df/dangle = (f(angle + pi/2) - f(angle - pi/2)) / 2
 *
 * Observable parameters enter linearly, so their gradient is read directly off
 * the reduced density matrix of each window.
 *
 * All entry points accept a cotangent over logits; a single shifted circuit
 * evaluation yields every logit, so the gradient of a weighted sum costs the
 * same as the gradient of one logit.
 */

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "anoqrl/qmodel.hpp"

namespace anoqrl {

struct GradBundle {
    ThetaParams d_theta;
    std::vector<HermitianParams> d_phi; ///< empty for Pauli readout
    std::vector<double> d_features;     ///< empty unless requested
};

/// Gradient of sum_g weights[g] * logit_g. `weights` has n_outputs entries.
GradBundle vector_jacobian(const QModelConfig &config, const QModelParams &params,
                           std::span<const double> features, std::span<const double> weights,
                           bool with_features = false);

ThetaParams grad_theta(const QModelConfig &config, const QModelParams &params,
                       std::span<const double> features, std::size_t output_index);

std::vector<HermitianParams> grad_phi(const QModelConfig &config, const QModelParams &params,
                                      std::span<const double> features,
                                      std::size_t output_index);

std::vector<double> grad_features(const QModelConfig &config, const QModelParams &params,
                                  std::span<const double> features, std::size_t output_index);

/// Central differences of `f` around `x`. Step must lie in [1e-8, 1e-3].
std::vector<double> central_difference(const std::function<double(std::span<const double>)> &f,
                                       std::span<const double> x, double step);

enum class GradTarget { Theta, Phi, Features };

/// Finite-difference gradient of one logit with respect to one parameter block.
/// Phi is flattened group by group in HermitianParams::flatten() layout.
std::vector<double> fd_oracle(const QModelConfig &config, const QModelParams &params,
                              std::span<const double> features, std::size_t output_index,
                              GradTarget block, double step);

/// Flattens a per-group observable gradient the same way fd_oracle orders Phi.
std::vector<double> flatten(const std::vector<HermitianParams> &blocks);

} // namespace anoqrl
