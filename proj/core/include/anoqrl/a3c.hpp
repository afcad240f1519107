#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "anoqrl/approximator.hpp"
#include "anoqrl/classical.hpp"
#include "anoqrl/dqn.hpp"
#include "anoqrl/envs.hpp"

namespace anoqrl {

/// Softmax with max subtraction. Throws NumericError on non-finite logits.
std::vector<double> softmax(std::span<const double> logits);

struct RolloutStep {
    std::vector<double> obs; ///< model input
    std::size_t action{0};
    double reward{0.0};
};

struct RolloutFragment {
    std::vector<RolloutStep> steps;
    bool terminal{false};
    double bootstrap{0.0}; ///< V(s_{t+n}); must be 0 when terminal

    /// Throws ConfigError unless 1 <= length <= n_step and the bootstrap
    /// rule holds.
    void validate(std::size_t n_step) const;
};

struct NStepReturns {
    std::vector<double> returns;
    std::vector<double> advantages;
};

/// G_t = r_t + gamma * G_{t+1}, seeded with the bootstrap value, and
/// A_t = G_t - values[t].
NStepReturns n_step_returns(const RolloutFragment &fragment, std::span<const double> values,
                            double gamma);

struct A3cConfig {
    std::size_t workers{4};
    std::size_t n_step{5};
    double gamma{0.99};
    double value_coef{0.5};
    double entropy_coef{0.01};
    double grad_clip{5.0}; ///< global norm over actor and critic; 0 disables
    std::size_t episodes{0}; ///< global budget shared by all workers
    bool audit_snapshots{true};

    void validate() const;

    friend bool operator==(const A3cConfig &, const A3cConfig &) = default;
};

struct A3cLoss {
    double total{0.0};
    double policy{0.0};  ///< sum of -log pi(a_t|s_t) * A_t
    double value{0.0};   ///< sum of 0.5 * (G_t - V(s_t))^2, before c_v
    double entropy{0.0}; ///< sum of policy entropies H_t
    ParamStore actor_grad;
    ParamStore critic_grad;
};

/// total = sum_t [ -log pi(a_t|s_t) A_t + c_v 0.5 (G_t - V(s_t))^2 - beta H_t ].
/// Advantages and returns are constants; the entropy bonus differentiates
/// through pi. The critic must have exactly one output.
A3cLoss a3c_loss(const RolloutFragment &fragment, const Approximator &actor,
                 const ParamStore &actor_params, const Approximator &critic,
                 const ParamStore &critic_params, const A3cConfig &config);

/// Scales both gradients so their joint L2 norm is at most `max_norm`.
/// Returns the norm before clipping.
double clip_global_norm(ParamStore &a, ParamStore &b, double max_norm);

struct Snapshot {
    std::uint64_t version{0};
    ParamStore actor;
    ParamStore critic;
    std::uint64_t checksum{0};
};

/// Global actor and critic parameters with one Adam state. Updates are
/// serialised; snapshot() hands out immutable, complete versions without
/// waiting on writers.
class SharedStore {
  public:
    SharedStore(ParamStore actor, ParamStore critic, const AdamConfig &adam);

    [[nodiscard]] std::shared_ptr<const Snapshot> snapshot() const;
    /// Applies one optimizer step and publishes the result. Returns the new
    /// version.
    std::uint64_t apply(const ParamStore &actor_grad, const ParamStore &critic_grad);

    [[nodiscard]] std::uint64_t version() const;
    /// True when the snapshot's contents hash to the checksum logged for its
    /// version when that version was published.
    [[nodiscard]] bool audit(const Snapshot &snap) const;

    static std::uint64_t checksum_of(const ParamStore &actor, const ParamStore &critic);

  private:
    std::mutex update_mutex_;
    mutable std::mutex log_mutex_;
    std::vector<std::uint64_t> checksum_log_; ///< indexed by version
    ParamStore actor_;
    ParamStore critic_;
    AdamOptimizer actor_opt_;
    AdamOptimizer critic_opt_;
    std::shared_ptr<const Snapshot> current_;
};

struct A3cEpisode {
    std::size_t global_episode{0}; ///< completion order across workers
    std::size_t worker{0};
    double reward{0.0};
    std::size_t steps{0};
    bool terminated{false};
};

struct WorkerStats {
    std::size_t episodes{0};
    std::size_t updates{0};
    std::size_t audit_failures{0};
    bool versions_monotone{true}; ///< snapshot versions never went backwards
};

struct A3cResult {
    std::vector<A3cEpisode> episodes;
    std::vector<WorkerStats> workers;
    std::uint64_t final_version{0};
    std::size_t total_updates{0};
    std::size_t audit_failures{0};
    bool versions_monotone{true};
    ParamStore actor;
    ParamStore critic;
};

using A3cCallback = std::function<void(const A3cEpisode &)>;
using EnvFactory = std::function<std::unique_ptr<Environment>()>;

/// Serialises episode reports from all workers: assigns global episode
/// indices in arrival order and forwards each record to one consumer.
class EpisodeChannel {
  public:
    explicit EpisodeChannel(A3cCallback consumer) : consumer_{std::move(consumer)} {}

    void publish(std::size_t worker, double reward, std::size_t steps, bool terminated);
    [[nodiscard]] std::vector<A3cEpisode> take();

  private:
    std::mutex mutex_;
    A3cCallback consumer_;
    std::vector<A3cEpisode> log_;
};

struct WorkerContext {
    std::size_t id{0};
    SharedStore *store{nullptr};
    Environment *env{nullptr};
    const Featurizer *featurize{nullptr};
    const Approximator *actor{nullptr};
    const Approximator *critic{nullptr};
    std::atomic<std::size_t> *episodes_claimed{nullptr};
    std::atomic<bool> *stop{nullptr};
    EpisodeChannel *channel{nullptr};
};

/// Claims episodes from the shared budget until it runs out: snapshot,
/// collect up to n_step transitions with the softmax policy, submit the
/// clipped gradient, repeat. Action sampling uses `rng`.
WorkerStats worker_loop(const WorkerContext &ctx, const A3cConfig &config, Rng rng);

/// Seeded sub-streams: "init", and ("worker", i) split into "env" and
/// "policy". workers = 1 runs on the calling thread and is deterministic.
A3cResult run_a3c(const A3cConfig &config, const EnvFactory &make_env, const Featurizer &featurize,
                  const Approximator &actor, const Approximator &critic, const AdamConfig &adam,
                  std::uint64_t seed, const A3cCallback &on_episode = {});

/// Quantum actor and critic (separate circuits of the same shape) on a
/// built-in task. Grid tasks get a reduction layer in each model.
A3cResult run_a3c(const A3cConfig &config, EnvKind kind, const EnvOptions &env_options,
                  QModelConfig model, const AdamConfig &adam, std::uint64_t seed,
                  const A3cCallback &on_episode = {});

} // namespace anoqrl
