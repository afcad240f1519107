#pragma once

/**
 * @file
 * Experiment configuration as INI-style text.
 *
 *     [experiment]
 *     algorithm = dqn            ; dqn | a3c
 *     env = cartpole             ; cartpole | mountaincar | minigrid8x8 | simplecrossing
 *     seed = 7                   ; required
 *     episodes = 1000
 *     output_dir = runs
 *     label =                    ; defaults to <algorithm>_<env>_<mode>[_k<locality>]
 *
 *     [model]
 *     mode = ano_rotation        ; ano_rotation | rotation_only | measurement_only
 *     qubits = 4                 ; defaults to max(4, locality)
 *     layers = 1
 *     locality = 3               ; not allowed with rotation_only
 *
 *     [env]      grid_side, shaped_reward
 *     [dqn]      gamma, epsilon_start, epsilon_end, epsilon_decay, batch_size,
 *                capacity, target_period, train_every
 *     [a3c]      workers, n_step, gamma, value_coef, entropy_coef, grad_clip,
 *                audit_snapshots
 *     [optimizer] lr_theta, lr_phi, lr_linear, lr_table, beta1, beta2, epsilon
 *
 * dqn.gamma defaults to 0.999 on mountaincar and 0.99 elsewhere.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anoqrl/a3c.hpp"
#include "anoqrl/classical.hpp"
#include "anoqrl/dqn.hpp"
#include "anoqrl/envs.hpp"
#include "anoqrl/errors.hpp"
#include "anoqrl/qmodel.hpp"

namespace anoqrl {

enum class Algorithm { Dqn, A3c };

std::string_view to_string(Algorithm algorithm);

struct ExperimentConfig {
    Algorithm algorithm{Algorithm::Dqn};
    EnvKind env{EnvKind::CartPole};
    std::uint64_t seed{0};
    std::size_t episodes{100};
    std::string output_dir{"runs"};
    std::string label; ///< empty: derived by default_label()
    EnvOptions env_options{};
    QModelConfig model{};
    DqnConfig dqn{};
    A3cConfig a3c{};
    AdamConfig optimizer{};

    friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;
};

/// Every violation found while parsing, each prefixed with its key path.
class ValidationError : public ConfigError {
  public:
    explicit ValidationError(std::vector<std::string> issues);
    [[nodiscard]] const std::vector<std::string> &issues() const noexcept { return issues_; }

  private:
    std::vector<std::string> issues_;
};

/// Parses and validates. `seed_override` stands in for (or replaces) the
/// experiment.seed key. Throws ValidationError.
ExperimentConfig parse_config(std::string_view text,
                              std::optional<std::uint64_t> seed_override = std::nullopt);
ExperimentConfig load_config(const std::string &path,
                             std::optional<std::uint64_t> seed_override = std::nullopt);

/// Text that parse_config() maps back to an equal config.
std::string render_config(const ExperimentConfig &config);

std::string default_label(const ExperimentConfig &config);

} // namespace anoqrl
