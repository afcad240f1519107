#include "anoqrl/a3c.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "anoqrl/errors.hpp"
#include "anoqrl/rng.hpp"

namespace anoqrl {

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) {
        throw ConfigError("softmax of an empty vector");
    }
    double top = logits[0];
    for (double z : logits) {
        if (!std::isfinite(z)) {
            throw NumericError("non-finite logit");
        }
        top = std::max(top, z);
    }
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - top);
        sum += p[i];
    }
    for (auto &v : p) {
        v /= sum;
    }
    return p;
}

void RolloutFragment::validate(std::size_t n_step) const {
    if (steps.empty() || steps.size() > n_step) {
        throw ConfigError("fragment length " + std::to_string(steps.size()) +
                          " outside [1, " + std::to_string(n_step) + "]");
    }
    if (terminal && bootstrap != 0.0) {
        throw ConfigError("terminal fragment must bootstrap from 0");
    }
}

NStepReturns n_step_returns(const RolloutFragment &fragment, std::span<const double> values,
                            double gamma) {
    const std::size_t n = fragment.steps.size();
    if (values.size() != n) {
        throw ConfigError("need one critic value per fragment step");
    }
    NStepReturns out{std::vector<double>(n), std::vector<double>(n)};
    double g = fragment.terminal ? 0.0 : fragment.bootstrap;
    for (std::size_t i = n; i-- > 0;) {
        g = fragment.steps[i].reward + gamma * g;
        out.returns[i] = g;
        out.advantages[i] = g - values[i];
    }
    return out;
}

void A3cConfig::validate() const {
    if (workers < 1) {
        throw ConfigError("a3c needs at least one worker");
    }
    if (n_step < 1) {
        throw ConfigError("n_step must be at least 1");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw ConfigError("gamma must lie in [0, 1]");
    }
    if (!(value_coef > 0.0)) {
        throw ConfigError("value coefficient must be positive");
    }
    if (!(entropy_coef > 0.0)) {
        throw ConfigError("entropy coefficient must be positive");
    }
    if (!(grad_clip >= 0.0)) {
        throw ConfigError("gradient clip must be non-negative");
    }
}

A3cLoss a3c_loss(const RolloutFragment &fragment, const Approximator &actor,
                 const ParamStore &actor_params, const Approximator &critic,
                 const ParamStore &critic_params, const A3cConfig &config) {
    if (critic.num_outputs() != 1) {
        throw ConfigError("critic must have a single output");
    }
    const std::size_t n = fragment.steps.size();
    if (n == 0) {
        throw ConfigError("empty rollout fragment");
    }
    std::vector<std::vector<double>> probs(n);
    std::vector<double> values(n);
    for (std::size_t t = 0; t < n; ++t) {
        const auto &step = fragment.steps[t];
        probs[t] = softmax(actor.evaluate(actor_params, step.obs));
        if (step.action >= probs[t].size()) {
            throw IndexError("fragment action out of range");
        }
        values[t] = critic.evaluate(critic_params, step.obs)[0];
    }
    const NStepReturns ret = n_step_returns(fragment, values, config.gamma);

    A3cLoss loss;
    loss.actor_grad = actor_params.zeros_like();
    loss.critic_grad = critic_params.zeros_like();
    const double beta = config.entropy_coef;
    for (std::size_t t = 0; t < n; ++t) {
        const auto &p = probs[t];
        const std::size_t a = fragment.steps[t].action;
        const double adv = ret.advantages[t];

        double h = 0.0;
        for (double pi : p) {
            if (pi > 0.0) {
                h -= pi * std::log(pi);
            }
        }
        loss.policy += -std::log(p[a]) * adv;
        loss.entropy += h;
        const double err = ret.returns[t] - values[t];
        loss.value += 0.5 * err * err;

        // d/dz_j of [-A log p_a - beta H] with dH/dz_j = -p_j (log p_j + H).
        std::vector<double> cot(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double logp = p[j] > 0.0 ? std::log(p[j]) : 0.0;
            cot[j] = -adv * ((j == a ? 1.0 : 0.0) - p[j]) + beta * p[j] * (logp + h);
        }
        actor.accumulate_vjp(actor_params, fragment.steps[t].obs, cot, loss.actor_grad);
        const double v_cot = -config.value_coef * err;
        critic.accumulate_vjp(critic_params, fragment.steps[t].obs, std::span{&v_cot, 1},
                              loss.critic_grad);
    }
    loss.total = loss.policy + config.value_coef * loss.value - beta * loss.entropy;
    if (!std::isfinite(loss.total) || !loss.actor_grad.all_finite() ||
        !loss.critic_grad.all_finite()) {
        throw NumericError("non-finite actor-critic loss or gradient");
    }
    return loss;
}

double clip_global_norm(ParamStore &a, ParamStore &b, double max_norm) {
    const double norm = std::sqrt(a.squared_norm() + b.squared_norm());
    if (max_norm > 0.0 && norm > max_norm) {
        const double s = max_norm / norm;
        a.scale(s);
        b.scale(s);
    }
    return norm;
}

// ---------------------------------------------------------------------------

std::uint64_t SharedStore::checksum_of(const ParamStore &actor, const ParamStore &critic) {
    const std::uint64_t a = actor.checksum();
    const std::uint64_t b = critic.checksum();
    return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

SharedStore::SharedStore(ParamStore actor, ParamStore critic, const AdamConfig &adam)
    : actor_{std::move(actor)}, critic_{std::move(critic)}, actor_opt_{adam, actor_},
      critic_opt_{adam, critic_} {
    const std::uint64_t sum = checksum_of(actor_, critic_);
    checksum_log_.push_back(sum);
    current_ = std::make_shared<const Snapshot>(Snapshot{0, actor_, critic_, sum});
}

std::shared_ptr<const Snapshot> SharedStore::snapshot() const {
    return std::atomic_load(&current_);
}

std::uint64_t SharedStore::version() const { return snapshot()->version; }

std::uint64_t SharedStore::apply(const ParamStore &actor_grad, const ParamStore &critic_grad) {
    if (!actor_grad.all_finite() || !critic_grad.all_finite()) {
        throw NumericError("non-finite gradient submitted to the shared store");
    }
    std::lock_guard lock{update_mutex_};
    actor_opt_.step(actor_, actor_grad);
    critic_opt_.step(critic_, critic_grad);
    const std::uint64_t version = std::atomic_load(&current_)->version + 1;
    const std::uint64_t sum = checksum_of(actor_, critic_);
    {
        std::lock_guard log_lock{log_mutex_};
        checksum_log_.push_back(sum);
    }
    std::atomic_store(&current_, std::make_shared<const Snapshot>(
                                     Snapshot{version, actor_, critic_, sum}));
    return version;
}

bool SharedStore::audit(const Snapshot &snap) const {
    std::uint64_t logged = 0;
    {
        std::lock_guard lock{log_mutex_};
        if (snap.version >= checksum_log_.size()) {
            return false;
        }
        logged = checksum_log_[snap.version];
    }
    return logged == checksum_of(snap.actor, snap.critic);
}

// ---------------------------------------------------------------------------

void EpisodeChannel::publish(std::size_t worker, double reward, std::size_t steps,
                             bool terminated) {
    std::lock_guard lock{mutex_};
    A3cEpisode ep{log_.size(), worker, reward, steps, terminated};
    log_.push_back(ep);
    if (consumer_) {
        consumer_(ep);
    }
}

std::vector<A3cEpisode> EpisodeChannel::take() {
    std::lock_guard lock{mutex_};
    return std::move(log_);
}

namespace {

std::size_t sample_index(std::span<const double> probs, Rng &rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) {
            return i;
        }
    }
    return probs.size() - 1;
}

} // namespace

WorkerStats worker_loop(const WorkerContext &ctx, const A3cConfig &config, Rng rng) {
    Rng env_rng = rng.split("env");
    Rng policy_rng = rng.split("policy");
    WorkerStats stats;
    std::uint64_t last_version = 0;

    auto claim = [&] {
        return !ctx.stop->load() && ctx.episodes_claimed->fetch_add(1) < config.episodes;
    };
    if (!claim()) {
        return stats;
    }
    std::vector<double> obs = (*ctx.featurize)(ctx.env->reset(env_rng));
    double ep_reward = 0.0;
    std::size_t ep_steps = 0;

    while (true) {
        const auto snap = ctx.store->snapshot();
        if (config.audit_snapshots && !ctx.store->audit(*snap)) {
            ++stats.audit_failures;
        }
        if (snap->version < last_version) {
            stats.versions_monotone = false;
        }
        last_version = snap->version;

        RolloutFragment fragment;
        bool episode_over = false;
        bool terminated = false;
        for (std::size_t k = 0; k < config.n_step; ++k) {
            const auto probs = softmax(ctx.actor->evaluate(snap->actor, obs));
            const std::size_t action = sample_index(probs, policy_rng);
            StepResult step = ctx.env->step(action);
            fragment.steps.push_back(RolloutStep{std::move(obs), action, step.reward});
            ep_reward += step.reward;
            ++ep_steps;
            obs = (*ctx.featurize)(step.obs);
            if (step.done()) {
                episode_over = true;
                terminated = step.terminated;
                break;
            }
        }
        fragment.terminal = terminated;
        if (!terminated) {
            fragment.bootstrap = ctx.critic->evaluate(snap->critic, obs)[0];
        }

        A3cLoss loss = a3c_loss(fragment, *ctx.actor, snap->actor, *ctx.critic, snap->critic,
                                config);
        clip_global_norm(loss.actor_grad, loss.critic_grad, config.grad_clip);
        ctx.store->apply(loss.actor_grad, loss.critic_grad);
        ++stats.updates;

        if (episode_over) {
            ctx.channel->publish(ctx.id, ep_reward, ep_steps, terminated);
            ++stats.episodes;
            if (!claim()) {
                break;
            }
            obs = (*ctx.featurize)(ctx.env->reset(env_rng));
            ep_reward = 0.0;
            ep_steps = 0;
        } else if (ctx.stop->load()) {
            break;
        }
    }
    return stats;
}

A3cResult run_a3c(const A3cConfig &config, const EnvFactory &make_env, const Featurizer &featurize,
                  const Approximator &actor, const Approximator &critic, const AdamConfig &adam,
                  std::uint64_t seed, const A3cCallback &on_episode) {
    config.validate();
    if (critic.num_outputs() != 1) {
        throw ConfigError("critic must have a single output");
    }
    const Rng master{seed};
    Rng init_rng = master.split("init");
    ParamStore actor_params = actor.init_params(init_rng);
    ParamStore critic_params = critic.init_params(init_rng);
    SharedStore store{std::move(actor_params), std::move(critic_params), adam};

    std::vector<std::unique_ptr<Environment>> envs;
    for (std::size_t i = 0; i < config.workers; ++i) {
        envs.push_back(make_env());
        if (envs.back()->num_actions() != actor.num_outputs()) {
            throw ConfigError("actor outputs do not match the action count");
        }
    }

    std::atomic<std::size_t> claimed{0};
    std::atomic<bool> stop{false};
    EpisodeChannel channel{on_episode};
    std::vector<WorkerStats> stats(config.workers);
    std::vector<std::exception_ptr> errors(config.workers);

    auto context = [&](std::size_t i) {
        return WorkerContext{i,      &store,  envs[i].get(), &featurize, &actor,
                             &critic, &claimed, &stop,        &channel};
    };
    if (config.workers == 1) {
        stats[0] = worker_loop(context(0), config, master.split("worker", 0));
    } else {
        std::vector<std::thread> threads;
        threads.reserve(config.workers);
        for (std::size_t i = 0; i < config.workers; ++i) {
            threads.emplace_back([&, i] {
                try {
                    stats[i] = worker_loop(context(i), config, master.split("worker", i));
                } catch (...) {
                    errors[i] = std::current_exception();
                    stop.store(true);
                }
            });
        }
        for (auto &t : threads) {
            t.join();
        }
        for (const auto &e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    A3cResult result;
    result.episodes = channel.take();
    result.workers = stats;
    for (const auto &w : stats) {
        result.total_updates += w.updates;
        result.audit_failures += w.audit_failures;
        result.versions_monotone = result.versions_monotone && w.versions_monotone;
    }
    const auto last = store.snapshot();
    result.final_version = last->version;
    result.actor = last->actor;
    result.critic = last->critic;
    return result;
}

A3cResult run_a3c(const A3cConfig &config, EnvKind kind, const EnvOptions &env_options,
                  QModelConfig model, const AdamConfig &adam, std::uint64_t seed,
                  const A3cCallback &on_episode) {
    const EnvFactory factory = [kind, env_options] { return make_environment(kind, env_options); };
    model.n_outputs = factory()->num_actions();
    QModelConfig critic_model = model;
    critic_model.n_outputs = 1;
    const bool grid = kind == EnvKind::MiniGrid || kind == EnvKind::SimpleCrossing;
    const std::size_t inputs = feature_count(kind, model.n_qubits);
    const QuantumApproximator actor{model, inputs, grid};
    const QuantumApproximator critic{critic_model, inputs, grid};
    const std::size_t n_qubits = model.n_qubits;
    const Featurizer featurize = [kind, n_qubits](std::span<const double> raw) {
        return preprocess(raw, kind, n_qubits);
    };
    return run_a3c(config, factory, featurize, actor, critic, adam, seed, on_episode);
}

} // namespace anoqrl
