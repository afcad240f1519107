#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "anoqrl/approximator.hpp"
#include "anoqrl/classical.hpp"
#include "anoqrl/envs.hpp"
#include "anoqrl/qmodel.hpp"

namespace anoqrl {

class Rng;

/// Observations are stored already mapped to model inputs.
struct Transition {
    std::vector<double> obs;
    std::size_t action{0};
    double reward{0.0};
    std::vector<double> next_obs;
    bool terminal{false}; ///< true only for task termination, not the step cap
};

/// Fixed-capacity FIFO ring of transitions.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }
    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
    /// i = 0 is the oldest stored transition.
    [[nodiscard]] const Transition &at(std::size_t i) const;
    /// `batch` distinct transitions drawn uniformly. Throws UsageError when
    /// fewer than `batch` are stored.
    [[nodiscard]] std::vector<const Transition *> sample(std::size_t batch, Rng &rng) const;

  private:
    std::size_t capacity_;
    std::size_t head_{0}; ///< index of the oldest item once full
    std::vector<Transition> items_;
};

struct EpsilonSchedule {
    double start{1.0};
    double end{0.05};
    double decay{0.99};

    /// max(end, start * decay^episode)
    [[nodiscard]] double at(std::size_t episode) const;

    friend bool operator==(const EpsilonSchedule &, const EpsilonSchedule &) = default;
};

struct DqnConfig {
    double gamma{0.99};
    EpsilonSchedule epsilon{};
    std::size_t batch_size{32};
    std::size_t capacity{10000};
    std::size_t target_period{50}; ///< optimizer updates between target refreshes
    std::size_t episodes{0};
    std::size_t train_every{1}; ///< environment steps per update once warm

    /// Throws ConfigError on the first violated rule.
    void validate() const;

    friend bool operator==(const DqnConfig &, const DqnConfig &) = default;
};

/// Epsilon-greedy; ties go to the lowest index.
std::size_t select_action(std::span<const double> q_values, double epsilon, Rng &rng);

/// Index of the largest value, lowest index on ties.
std::size_t argmax(std::span<const double> values);

/// reward if terminal, else reward + gamma * max_a Q_target(next_obs, a).
double bellman_target(const Transition &t, const Approximator &model, const ParamStore &target,
                      double gamma);

/// One optimizer step on mean((target - Q(s, a))^2). Targets come from
/// `target` and are constants. Returns the loss before the step. Throws
/// NumericError and leaves `params` untouched when the loss or any gradient
/// is non-finite.
double dqn_update(const Approximator &model, std::span<const Transition *const> batch,
                  ParamStore &params, const ParamStore &target, AdamOptimizer &optimizer,
                  double gamma);

struct DqnEpisode {
    std::size_t episode{0};
    double reward{0.0};
    double epsilon{0.0};
    double mean_loss{0.0}; ///< 0 when no update ran during the episode
    std::size_t steps{0};
    bool terminated{false}; ///< ended by the task rather than the step cap
};

struct DqnResult {
    std::vector<DqnEpisode> episodes;
    ParamStore params;
    std::size_t updates{0};
    std::size_t target_refreshes{0};
};

using Featurizer = std::function<std::vector<double>(std::span<const double>)>;
using DqnCallback = std::function<void(const DqnEpisode &)>;

/// Training loop on an arbitrary environment and approximator. Seeded
/// sub-streams: "init", "env", "explore", "replay".
DqnResult run_dqn(const DqnConfig &config, Environment &env, const Featurizer &featurize,
                  const Approximator &model, const AdamConfig &adam, std::uint64_t seed,
                  const DqnCallback &on_episode = {});

/// Quantum model on one of the built-in tasks. Grid tasks get a linear
/// reduction layer in front of the circuit; n_outputs is set from the task.
DqnResult run_dqn(const DqnConfig &config, EnvKind kind, const EnvOptions &env_options,
                  QModelConfig model, const AdamConfig &adam, std::uint64_t seed,
                  const DqnCallback &on_episode = {});

} // namespace anoqrl
