#include "toy_envs.hpp"

#include <algorithm>
#include <cmath>

#include "anoqrl/errors.hpp"

namespace toy {

std::pair<std::size_t, double> ChainMdp::model(std::size_t s, std::size_t a) {
    if (a == 1) {
        return s + 1 == kStates ? std::pair{kStates, 1.0} : std::pair{s + 1, 0.0};
    }
    return s == 0 ? std::pair{kStates, kLeftExit} : std::pair{s - 1, 0.0};
}

std::vector<double> ChainMdp::reset(anoqrl::Rng &rng) {
    state_ = rng.index(kStates);
    steps_ = 0;
    finished_ = false;
    return {static_cast<double>(state_)};
}

anoqrl::StepResult ChainMdp::step(std::size_t action) {
    if (finished_) {
        throw anoqrl::UsageError("episode over");
    }
    const auto [next, reward] = model(state_, action);
    ++steps_;
    anoqrl::StepResult r;
    r.reward = reward;
    r.terminated = next == kStates;
    r.truncated = !r.terminated && steps_ >= kCap;
    state_ = r.terminated ? state_ : next;
    r.obs = {static_cast<double>(state_)};
    finished_ = r.done();
    return r;
}

std::array<std::array<double, 2>, ChainMdp::kStates> chain_q_star(double gamma) {
    std::array<double, ChainMdp::kStates + 1> v{};
    std::array<std::array<double, 2>, ChainMdp::kStates> q{};
    for (int sweep = 0; sweep < 10000; ++sweep) {
        double delta = 0.0;
        for (std::size_t s = 0; s < ChainMdp::kStates; ++s) {
            for (std::size_t a = 0; a < 2; ++a) {
                const auto [next, reward] = ChainMdp::model(s, a);
                q[s][a] = reward + gamma * v[next];
            }
            const double nv = std::max(q[s][0], q[s][1]);
            delta = std::max(delta, std::abs(nv - v[s]));
            v[s] = nv;
        }
        if (delta < 1e-14) {
            break;
        }
    }
    return q;
}

std::vector<double> Bandit::reset(anoqrl::Rng & /*rng*/) {
    steps_ = 0;
    finished_ = false;
    return std::vector<double>(obs_size_, 0.0);
}

anoqrl::StepResult Bandit::step(std::size_t action) {
    if (finished_) {
        throw anoqrl::UsageError("episode over");
    }
    ++steps_;
    finished_ = true;
    return {std::vector<double>(obs_size_, 0.0), action == best_ ? 1.0 : 0.0, true, false};
}

} // namespace toy
