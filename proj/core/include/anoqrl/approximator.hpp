#pragma once

/**
 * @file
 * Function approximators consumed by the RL drivers.
 *
 * The drivers only see a ParamStore and two operations: evaluate outputs, and
 * accumulate the gradient of a weighted sum of outputs. The quantum model is
 * the production implementation; the lookup table exists so the DQN and A3C
 * loops can be checked against exact tabular solutions.
 */

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "anoqrl/classical.hpp"
#include "anoqrl/qmodel.hpp"

namespace anoqrl {

class Rng;

class Approximator {
  public:
    virtual ~Approximator() = default;

    [[nodiscard]] virtual std::size_t input_dim() const = 0;
    [[nodiscard]] virtual std::size_t num_outputs() const = 0;
    [[nodiscard]] virtual ParamStore init_params(Rng &rng) const = 0;
    [[nodiscard]] virtual std::vector<double> evaluate(const ParamStore &params,
                                                       std::span<const double> input) const = 0;
    /// grad += d(sum_a cotangent[a] * output_a) / d(params)
    virtual void accumulate_vjp(const ParamStore &params, std::span<const double> input,
                                std::span<const double> cotangent, ParamStore &grad) const = 0;
};

/// Variational circuit with an optional classical input-reduction layer in
/// front of it. Parameter blocks: "theta", "phi" (ANO modes only, groups
/// concatenated in HermitianParams::flatten() layout), "linear.weight" and
/// "linear.bias" (when the reduction layer is present).
class QuantumApproximator final : public Approximator {
  public:
    /// Without a reduction layer `input_dim` must equal the qubit count.
    QuantumApproximator(QModelConfig config, std::size_t input_dim, bool reduce_input);

    [[nodiscard]] std::size_t input_dim() const override { return input_dim_; }
    [[nodiscard]] std::size_t num_outputs() const override { return config_.n_outputs; }
    [[nodiscard]] const QModelConfig &config() const noexcept { return config_; }
    [[nodiscard]] bool has_reduction() const noexcept { return reduce_input_; }

    [[nodiscard]] ParamStore init_params(Rng &rng) const override;
    [[nodiscard]] std::vector<double> evaluate(const ParamStore &params,
                                               std::span<const double> input) const override;
    void accumulate_vjp(const ParamStore &params, std::span<const double> input,
                        std::span<const double> cotangent, ParamStore &grad) const override;

    /// Unpacks the circuit parameters held in `params`.
    [[nodiscard]] QModelParams circuit_params(const ParamStore &params) const;
    [[nodiscard]] std::optional<LinearLayer> reduction_layer(const ParamStore &params) const;

  private:
    [[nodiscard]] std::vector<double> features(const ParamStore &params,
                                               std::span<const double> input,
                                               std::optional<LinearLayer> &layer) const;

    QModelConfig config_;
    std::size_t input_dim_;
    bool reduce_input_;
    GroupingScheme scheme_;
};

/// Lookup table indexed by the integer state held in input[0]. Block "table",
/// n_states x n_actions, zero-initialised.
class TabularApproximator final : public Approximator {
  public:
    TabularApproximator(std::size_t n_states, std::size_t n_actions);

    [[nodiscard]] std::size_t input_dim() const override { return 1; }
    [[nodiscard]] std::size_t num_outputs() const override { return n_actions_; }
    [[nodiscard]] ParamStore init_params(Rng &rng) const override;
    [[nodiscard]] std::vector<double> evaluate(const ParamStore &params,
                                               std::span<const double> input) const override;
    void accumulate_vjp(const ParamStore &params, std::span<const double> input,
                        std::span<const double> cotangent, ParamStore &grad) const override;

  private:
    [[nodiscard]] std::size_t state_of(std::span<const double> input) const;

    std::size_t n_states_;
    std::size_t n_actions_;
};

} // namespace anoqrl
