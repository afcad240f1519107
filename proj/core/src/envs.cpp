#include "anoqrl/envs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "anoqrl/errors.hpp"
#include "anoqrl/rng.hpp"

namespace anoqrl {

std::string_view to_string(EnvKind kind) {
    switch (kind) {
    case EnvKind::CartPole:
        return "cartpole";
    case EnvKind::MountainCar:
        return "mountaincar";
    case EnvKind::MiniGrid:
        return "minigrid8x8";
    case EnvKind::SimpleCrossing:
        return "simplecrossing";
    }
    return "unknown";
}

EnvKind parse_env_kind(std::string_view text) {
    for (EnvKind k : {EnvKind::CartPole, EnvKind::MountainCar, EnvKind::MiniGrid,
                      EnvKind::SimpleCrossing}) {
        if (text == to_string(k)) {
            return k;
        }
    }
    throw ConfigError("unknown environment '" + std::string{text} +
                      "' (expected cartpole, mountaincar, minigrid8x8 or simplecrossing)");
}

namespace {

void check_action(std::size_t action, std::size_t count) {
    if (action >= count) {
        throw IndexError("action " + std::to_string(action) + " out of range for " +
                         std::to_string(count) + " actions");
    }
}

void check_running(bool finished) {
    if (finished) {
        throw UsageError("episode is over; call reset() before stepping again");
    }
}

} // namespace

// ---------------------------------------------------------------------------

CartPoleState cartpole_dynamics(const CartPoleState &s, std::size_t action) {
    using P = CartPoleParams;
    constexpr double total_mass = P::kCartMass + P::kPoleMass;
    constexpr double polemass_length = P::kPoleMass * P::kHalfLength;

    const double force = action == 1 ? P::kForce : -P::kForce;
    const double cos_t = std::cos(s.theta);
    const double sin_t = std::sin(s.theta);
    const double temp = (force + polemass_length * s.theta_dot * s.theta_dot * sin_t) / total_mass;
    const double theta_acc =
        (P::kGravity * sin_t - cos_t * temp) /
        (P::kHalfLength * (4.0 / 3.0 - P::kPoleMass * cos_t * cos_t / total_mass));
    const double x_acc = temp - polemass_length * theta_acc * cos_t / total_mass;

    return CartPoleState{s.x + P::kDt * s.x_dot, s.x_dot + P::kDt * x_acc,
                         s.theta + P::kDt * s.theta_dot, s.theta_dot + P::kDt * theta_acc};
}

std::vector<double> CartPole::reset(Rng &rng) {
    state_ = CartPoleState{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05),
                           rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
    steps_ = 0;
    finished_ = false;
    return {state_.x, state_.x_dot, state_.theta, state_.theta_dot};
}

void CartPole::set_state(const CartPoleState &s, std::size_t steps) {
    state_ = s;
    steps_ = steps;
    finished_ = false;
}

StepResult CartPole::step(std::size_t action) {
    check_running(finished_);
    check_action(action, 2);
    state_ = cartpole_dynamics(state_, action);
    ++steps_;
    StepResult r;
    r.obs = {state_.x, state_.x_dot, state_.theta, state_.theta_dot};
    r.reward = 1.0;
    r.terminated = std::abs(state_.x) > CartPoleParams::kXLimit ||
                   std::abs(state_.theta) > CartPoleParams::kThetaLimit;
    r.truncated = !r.terminated && steps_ >= CartPoleParams::kMaxSteps;
    finished_ = r.done();
    return r;
}

// ---------------------------------------------------------------------------

MountainCarState mountaincar_dynamics(const MountainCarState &s, std::size_t action) {
    using P = MountainCarParams;
    double v = s.velocity + P::kForce * (static_cast<double>(action) - 1.0) -
               P::kGravity * std::cos(3.0 * s.position);
    v = std::clamp(v, -P::kMaxSpeed, P::kMaxSpeed);
    double x = std::clamp(s.position + v, P::kMinPosition, P::kMaxPosition);
    if (x == P::kMinPosition && v < 0.0) {
        v = 0.0;
    }
    return MountainCarState{x, v};
}

std::vector<double> MountainCar::reset(Rng &rng) {
    state_ = MountainCarState{rng.uniform(-0.6, -0.4), 0.0};
    steps_ = 0;
    finished_ = false;
    return {state_.position, state_.velocity};
}

void MountainCar::set_state(const MountainCarState &s, std::size_t steps) {
    state_ = s;
    steps_ = steps;
    finished_ = false;
}

StepResult MountainCar::step(std::size_t action) {
    check_running(finished_);
    check_action(action, 3);
    state_ = mountaincar_dynamics(state_, action);
    ++steps_;
    StepResult r;
    r.obs = {state_.position, state_.velocity};
    r.reward = -1.0;
    r.terminated = state_.position >= MountainCarParams::kGoalPosition;
    r.truncated = !r.terminated && steps_ >= MountainCarParams::kMaxSteps;
    finished_ = r.done();
    return r;
}

// ---------------------------------------------------------------------------

bool GridLayout::wall(long x, long y) const {
    const long s = static_cast<long>(side);
    if (x < 0 || y < 0 || x >= s || y >= s) {
        return true;
    }
    return walls[static_cast<std::size_t>(y) * side + static_cast<std::size_t>(x)];
}

GridLayout empty_layout(std::size_t side) {
    if (side < 4) {
        throw ConfigError("grid side must be at least 4");
    }
    GridLayout layout{side, std::vector<bool>(side * side, false), side - 2, side - 2};
    for (std::size_t i = 0; i < side; ++i) {
        layout.walls[i] = true;                     // top
        layout.walls[(side - 1) * side + i] = true; // bottom
        layout.walls[i * side] = true;              // left
        layout.walls[i * side + side - 1] = true;   // right
    }
    return layout;
}

GridLayout crossing_layout(std::size_t side, Rng &rng) {
    if (side < 5) {
        throw ConfigError("crossing grid side must be at least 5");
    }
    GridLayout layout = empty_layout(side);
    // Interior even coordinates, as in the classic crossing tasks.
    std::vector<std::size_t> lines;
    for (std::size_t c = 2; c + 2 < side; c += 2) {
        lines.push_back(c);
    }
    const bool vertical = rng.index(2) == 0;
    const std::size_t line = lines[rng.index(lines.size())];
    const std::size_t gap = 1 + rng.index(side - 2);
    for (std::size_t i = 1; i + 1 < side; ++i) {
        if (i == gap) {
            continue;
        }
        if (vertical) {
            layout.walls[i * side + line] = true;
        } else {
            layout.walls[line * side + i] = true;
        }
    }
    return layout;
}

GridWorld::GridWorld(GridOptions options) : options_{options} {
    if (options_.layout == GridLayoutKind::Empty) {
        layout_ = empty_layout(options_.side);
    } else if (options_.side < 5) {
        throw ConfigError("crossing grid side must be at least 5");
    }
}

std::vector<double> GridWorld::reset(Rng &rng) {
    if (options_.layout == GridLayoutKind::Crossing) {
        layout_ = crossing_layout(options_.side, rng);
    }
    x_ = 1;
    y_ = 1;
    dir_ = 0;
    steps_ = 0;
    finished_ = false;
    return observe();
}

void GridWorld::place_agent(std::size_t x, std::size_t y, std::size_t dir, std::size_t steps) {
    if (layout_.walls.empty()) {
        throw UsageError("grid layout not generated yet; call reset() first");
    }
    if (dir > 3 || layout_.wall(static_cast<long>(x), static_cast<long>(y))) {
        throw IndexError("agent placement is not a free cell with a valid direction");
    }
    x_ = x;
    y_ = y;
    dir_ = dir;
    steps_ = steps;
    finished_ = false;
}

namespace {

constexpr long kDx[4] = {1, 0, -1, 0};
constexpr long kDy[4] = {0, 1, 0, -1};

} // namespace

std::vector<double> GridWorld::observe() const {
    std::vector<double> obs(kObservationSize, 0.0);
    const long fx = kDx[dir_];
    const long fy = kDy[dir_];
    // Right-hand side of the facing direction (y grows downwards).
    const long rx = -fy;
    const long ry = fx;
    std::size_t slot = 0;
    for (long ahead = 0; ahead < static_cast<long>(kViewDepth); ++ahead) {
        for (long side = -1; side <= 1; ++side) {
            const long cx = static_cast<long>(x_) + ahead * fx + side * rx;
            const long cy = static_cast<long>(y_) + ahead * fy + side * ry;
            obs[slot] = layout_.wall(cx, cy) ? 1.0 : 0.0;
            obs[slot + 1] = (cx == static_cast<long>(layout_.goal_x) &&
                             cy == static_cast<long>(layout_.goal_y))
                                ? 1.0
                                : 0.0;
            slot += 2;
        }
    }
    obs[slot + dir_] = 1.0;
    slot += 4;
    const double scale = 1.0 / static_cast<double>(layout_.side - 1);
    obs[slot] = static_cast<double>(x_) * scale;
    obs[slot + 1] = static_cast<double>(y_) * scale;
    return obs;
}

StepResult GridWorld::step(std::size_t action) {
    check_running(finished_);
    check_action(action, 3);
    ++steps_;
    StepResult r;
    switch (action) {
    case TurnLeft:
        dir_ = (dir_ + 3) % 4;
        break;
    case TurnRight:
        dir_ = (dir_ + 1) % 4;
        break;
    default: {
        const long nx = static_cast<long>(x_) + kDx[dir_];
        const long ny = static_cast<long>(y_) + kDy[dir_];
        if (!layout_.wall(nx, ny)) {
            x_ = static_cast<std::size_t>(nx);
            y_ = static_cast<std::size_t>(ny);
        }
        break;
    }
    }
    if (x_ == layout_.goal_x && y_ == layout_.goal_y) {
        r.terminated = true;
        r.reward = options_.shaped_reward
                       ? 1.0 - 0.9 * static_cast<double>(steps_) / static_cast<double>(max_steps())
                       : 1.0;
    }
    r.truncated = !r.terminated && steps_ >= max_steps();
    finished_ = r.done();
    r.obs = observe();
    return r;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Environment> make_environment(EnvKind kind, const EnvOptions &options) {
    switch (kind) {
    case EnvKind::CartPole:
        return std::make_unique<CartPole>();
    case EnvKind::MountainCar:
        return std::make_unique<MountainCar>();
    case EnvKind::MiniGrid:
        return std::make_unique<GridWorld>(GridOptions{
            GridLayoutKind::Empty, options.grid_side ? options.grid_side : 8, options.shaped_reward});
    case EnvKind::SimpleCrossing:
        return std::make_unique<GridWorld>(GridOptions{GridLayoutKind::Crossing,
                                                       options.grid_side ? options.grid_side : 9,
                                                       options.shaped_reward});
    }
    throw ConfigError("unknown environment kind");
}

namespace {

std::vector<double> repeat_to(std::span<const double> base, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = base[i % base.size()];
    }
    return out;
}

} // namespace

std::size_t feature_count(EnvKind kind, std::size_t n_qubits) {
    switch (kind) {
    case EnvKind::CartPole:
    case EnvKind::MountainCar:
        return n_qubits;
    case EnvKind::MiniGrid:
    case EnvKind::SimpleCrossing:
        return GridWorld::kObservationSize;
    }
    throw ConfigError("unknown environment kind");
}

std::vector<double> preprocess(std::span<const double> obs, EnvKind kind, std::size_t n_qubits) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    switch (kind) {
    case EnvKind::CartPole: {
        if (obs.size() != 4) {
            throw ConfigError("cart-pole observations have 4 components");
        }
        if (n_qubits < 4) {
            throw ConfigError("cart-pole needs at least 4 qubits");
        }
        const double base[4] = {obs[0] / CartPoleParams::kXLimit * half_pi, std::atan(obs[1]),
                                obs[2] / CartPoleParams::kThetaLimit * half_pi,
                                std::atan(obs[3])};
        return repeat_to(base, n_qubits);
    }
    case EnvKind::MountainCar: {
        using P = MountainCarParams;
        if (obs.size() != 2) {
            throw ConfigError("mountain-car observations have 2 components");
        }
        if (n_qubits < 2) {
            throw ConfigError("mountain car needs at least 2 qubits");
        }
        const double unit_pos =
            2.0 * (obs[0] - P::kMinPosition) / (P::kMaxPosition - P::kMinPosition) - 1.0;
        const double base[2] = {unit_pos * half_pi, obs[1] / P::kMaxSpeed * half_pi};
        return repeat_to(base, n_qubits);
    }
    case EnvKind::MiniGrid:
    case EnvKind::SimpleCrossing:
        if (obs.size() != GridWorld::kObservationSize) {
            throw ConfigError("grid observation has the wrong length");
        }
        return {obs.begin(), obs.end()};
    }
    throw ConfigError("unknown environment kind");
}

} // namespace anoqrl
