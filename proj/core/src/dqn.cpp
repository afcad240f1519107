#include "anoqrl/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "anoqrl/errors.hpp"
#include "anoqrl/rng.hpp"

namespace anoqrl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_{capacity} {
    if (capacity == 0) {
        throw ConfigError("replay capacity must be positive");
    }
    items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::push(Transition t) {
    if (items_.size() < capacity_) {
        items_.push_back(std::move(t));
        return;
    }
    items_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
}

const Transition &ReplayBuffer::at(std::size_t i) const {
    if (i >= items_.size()) {
        throw IndexError("replay index " + std::to_string(i) + " out of range");
    }
    return items_[(head_ + i) % items_.size()];
}

std::vector<const Transition *> ReplayBuffer::sample(std::size_t batch, Rng &rng) const {
    if (batch == 0 || batch > items_.size()) {
        throw UsageError("cannot sample " + std::to_string(batch) + " transitions from " +
                         std::to_string(items_.size()));
    }
    // Partial Fisher-Yates over indices.
    std::vector<std::size_t> idx(items_.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<const Transition *> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) {
        const std::size_t j = i + rng.index(idx.size() - i);
        std::swap(idx[i], idx[j]);
        out.push_back(&items_[idx[i]]);
    }
    return out;
}

double EpsilonSchedule::at(std::size_t episode) const {
    return std::max(end, start * std::pow(decay, static_cast<double>(episode)));
}

void DqnConfig::validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw ConfigError("gamma must lie in [0, 1]");
    }
    if (!(epsilon.start >= 0.0 && epsilon.start <= 1.0 && epsilon.end >= 0.0 &&
          epsilon.end <= epsilon.start)) {
        throw ConfigError("epsilon schedule needs 0 <= end <= start <= 1");
    }
    if (!(epsilon.decay > 0.0 && epsilon.decay <= 1.0)) {
        throw ConfigError("epsilon decay must lie in (0, 1]");
    }
    if (batch_size == 0 || capacity < batch_size) {
        throw ConfigError("batch size must be positive and no larger than the replay capacity");
    }
    if (target_period == 0 || train_every == 0) {
        throw ConfigError("target period and train_every must be positive");
    }
}

std::size_t argmax(std::span<const double> values) {
    if (values.empty()) {
        throw ConfigError("argmax of an empty vector");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) {
            best = i;
        }
    }
    return best;
}

std::size_t select_action(std::span<const double> q_values, double epsilon, Rng &rng) {
    if (q_values.empty()) {
        throw ConfigError("no action values to choose from");
    }
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw ConfigError("epsilon must lie in [0, 1]");
    }
    if (epsilon > 0.0 && rng.uniform() < epsilon) {
        return rng.index(q_values.size());
    }
    return argmax(q_values);
}

double bellman_target(const Transition &t, const Approximator &model, const ParamStore &target,
                      double gamma) {
    if (t.terminal || gamma == 0.0) {
        return t.reward;
    }
    const auto q_next = model.evaluate(target, t.next_obs);
    return t.reward + gamma * *std::max_element(q_next.begin(), q_next.end());
}

double dqn_update(const Approximator &model, std::span<const Transition *const> batch,
                  ParamStore &params, const ParamStore &target, AdamOptimizer &optimizer,
                  double gamma) {
    if (batch.empty()) {
        throw UsageError("empty batch");
    }
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    ParamStore grad = params.zeros_like();
    std::vector<double> cotangent(model.num_outputs(), 0.0);
    double loss = 0.0;
    for (const Transition *t : batch) {
        if (t->action >= model.num_outputs()) {
            throw IndexError("transition action out of range");
        }
        const double y = bellman_target(*t, model, target, gamma);
        const double q = model.evaluate(params, t->obs)[t->action];
        const double err = y - q;
        loss += err * err * inv_b;
        if (err == 0.0) {
            continue;
        }
        std::fill(cotangent.begin(), cotangent.end(), 0.0);
        cotangent[t->action] = -2.0 * err * inv_b;
        model.accumulate_vjp(params, t->obs, cotangent, grad);
    }
    if (!std::isfinite(loss)) {
        throw NumericError("non-finite Bellman loss; update rejected");
    }
    optimizer.step(params, grad);
    return loss;
}

DqnResult run_dqn(const DqnConfig &config, Environment &env, const Featurizer &featurize,
                  const Approximator &model, const AdamConfig &adam, std::uint64_t seed,
                  const DqnCallback &on_episode) {
    config.validate();
    if (model.num_outputs() != env.num_actions()) {
        throw ConfigError("model outputs (" + std::to_string(model.num_outputs()) +
                          ") do not match the action count (" +
                          std::to_string(env.num_actions()) + ")");
    }
    const Rng master{seed};
    Rng init_rng = master.split("init");
    Rng env_rng = master.split("env");
    Rng explore_rng = master.split("explore");
    Rng replay_rng = master.split("replay");

    DqnResult result;
    result.params = model.init_params(init_rng);
    ParamStore target = result.params;
    AdamOptimizer optimizer{adam, result.params};
    ReplayBuffer replay{config.capacity};
    std::size_t total_steps = 0;

    result.episodes.reserve(config.episodes);
    for (std::size_t ep = 0; ep < config.episodes; ++ep) {
        DqnEpisode stats;
        stats.episode = ep;
        stats.epsilon = config.epsilon.at(ep);
        double loss_sum = 0.0;
        std::size_t loss_count = 0;

        std::vector<double> obs = featurize(env.reset(env_rng));
        bool done = false;
        while (!done) {
            const auto q = model.evaluate(result.params, obs);
            const std::size_t action = select_action(q, stats.epsilon, explore_rng);
            StepResult step = env.step(action);
            std::vector<double> next = featurize(step.obs);
            stats.reward += step.reward;
            ++stats.steps;
            ++total_steps;
            done = step.done();
            stats.terminated = step.terminated;
            replay.push(Transition{obs, action, step.reward, next, step.terminated});
            obs = std::move(next);

            if (replay.size() >= config.batch_size && total_steps % config.train_every == 0) {
                const auto batch = replay.sample(config.batch_size, replay_rng);
                loss_sum += dqn_update(model, batch, result.params, target, optimizer,
                                       config.gamma);
                ++loss_count;
                ++result.updates;
                if (result.updates % config.target_period == 0) {
                    target = result.params;
                    ++result.target_refreshes;
                }
            }
        }
        stats.mean_loss = loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0;
        result.episodes.push_back(stats);
        if (on_episode) {
            on_episode(stats);
        }
    }
    return result;
}

DqnResult run_dqn(const DqnConfig &config, EnvKind kind, const EnvOptions &env_options,
                  QModelConfig model, const AdamConfig &adam, std::uint64_t seed,
                  const DqnCallback &on_episode) {
    auto env = make_environment(kind, env_options);
    model.n_outputs = env->num_actions();
    const bool grid = kind == EnvKind::MiniGrid || kind == EnvKind::SimpleCrossing;
    const QuantumApproximator approx{model, feature_count(kind, model.n_qubits), grid};
    const std::size_t n_qubits = model.n_qubits;
    const Featurizer featurize = [kind, n_qubits](std::span<const double> raw) {
        return preprocess(raw, kind, n_qubits);
    };
    return run_dqn(config, *env, featurize, approx, adam, seed, on_episode);
}

} // namespace anoqrl
