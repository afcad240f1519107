#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace anoqrl {

class Rng;

enum class EnvKind { CartPole, MountainCar, MiniGrid, SimpleCrossing };

std::string_view to_string(EnvKind kind);
/// Accepts "cartpole", "mountaincar", "minigrid8x8", "simplecrossing".
EnvKind parse_env_kind(std::string_view text);

struct StepResult {
    std::vector<double> obs;
    double reward{0.0};
    bool terminated{false}; ///< reached a terminal state of the task
    bool truncated{false};  ///< hit the step cap

    [[nodiscard]] bool done() const noexcept { return terminated || truncated; }
};

class Environment {
  public:
    virtual ~Environment() = default;

    /// Starts a new episode; all randomness comes from `rng`.
    virtual std::vector<double> reset(Rng &rng) = 0;
    /// Throws UsageError when the episode is already over.
    virtual StepResult step(std::size_t action) = 0;

    [[nodiscard]] virtual std::size_t num_actions() const = 0;
    [[nodiscard]] virtual std::size_t observation_size() const = 0;
    [[nodiscard]] virtual std::size_t steps() const = 0;
    [[nodiscard]] virtual bool finished() const = 0;
};

// ---------------------------------------------------------------------------
// Cart-pole

struct CartPoleState {
    double x{0.0};
    double x_dot{0.0};
    double theta{0.0};
    double theta_dot{0.0};
};

struct CartPoleParams {
    static constexpr double kGravity = 9.8;
    static constexpr double kCartMass = 1.0;
    static constexpr double kPoleMass = 0.1;
    static constexpr double kHalfLength = 0.5;
    static constexpr double kForce = 10.0;
    static constexpr double kDt = 0.02;
    static constexpr double kXLimit = 2.4;
    static constexpr double kThetaLimit = 12.0 * 3.14159265358979323846 / 180.0;
    static constexpr std::size_t kMaxSteps = 500;
};

/// One explicit-Euler step; action 0 pushes left, 1 pushes right.
CartPoleState cartpole_dynamics(const CartPoleState &s, std::size_t action);

class CartPole final : public Environment {
  public:
    std::vector<double> reset(Rng &rng) override;
    StepResult step(std::size_t action) override;
    [[nodiscard]] std::size_t num_actions() const override { return 2; }
    [[nodiscard]] std::size_t observation_size() const override { return 4; }
    [[nodiscard]] std::size_t steps() const override { return steps_; }
    [[nodiscard]] bool finished() const override { return finished_; }

    void set_state(const CartPoleState &s, std::size_t steps = 0);
    [[nodiscard]] const CartPoleState &state() const noexcept { return state_; }

  private:
    CartPoleState state_{};
    std::size_t steps_{0};
    bool finished_{false};
};

// ---------------------------------------------------------------------------
// Mountain car

struct MountainCarState {
    double position{-0.5};
    double velocity{0.0};
};

struct MountainCarParams {
    static constexpr double kMinPosition = -1.2;
    static constexpr double kMaxPosition = 0.6;
    static constexpr double kMaxSpeed = 0.07;
    static constexpr double kGoalPosition = 0.5;
    static constexpr double kForce = 0.001;
    static constexpr double kGravity = 0.0025;
    static constexpr std::size_t kMaxSteps = 200;
};

/// Actions: 0 accelerate left, 1 no force, 2 accelerate right.
MountainCarState mountaincar_dynamics(const MountainCarState &s, std::size_t action);

class MountainCar final : public Environment {
  public:
    std::vector<double> reset(Rng &rng) override;
    StepResult step(std::size_t action) override;
    [[nodiscard]] std::size_t num_actions() const override { return 3; }
    [[nodiscard]] std::size_t observation_size() const override { return 2; }
    [[nodiscard]] std::size_t steps() const override { return steps_; }
    [[nodiscard]] bool finished() const override { return finished_; }

    void set_state(const MountainCarState &s, std::size_t steps = 0);
    [[nodiscard]] const MountainCarState &state() const noexcept { return state_; }

  private:
    MountainCarState state_{};
    std::size_t steps_{0};
    bool finished_{false};
};

// ---------------------------------------------------------------------------
// Grid navigation

enum class GridLayoutKind { Empty, Crossing };

/// Square grid including its border walls. Directions: 0 east, 1 south,
/// 2 west, 3 north (y grows downwards).
struct GridLayout {
    std::size_t side{0};
    std::vector<bool> walls; ///< side * side, row-major by y
    std::size_t goal_x{0};
    std::size_t goal_y{0};

    [[nodiscard]] bool wall(long x, long y) const;
};

/// Border walls only; goal in the bottom-right interior corner.
GridLayout empty_layout(std::size_t side);
/// Border walls plus one straight interior wall at an even coordinate with a
/// single gap, orientation and positions drawn from `rng`.
GridLayout crossing_layout(std::size_t side, Rng &rng);

struct GridOptions {
    GridLayoutKind layout{GridLayoutKind::Empty};
    std::size_t side{8};
    /// 1 - 0.9 * steps / max_steps on success; otherwise exactly 1.
    bool shaped_reward{true};
};

class GridWorld final : public Environment {
  public:
    enum Action : std::size_t { TurnLeft = 0, TurnRight = 1, Forward = 2 };

    static constexpr std::size_t kViewDepth = 3;
    static constexpr std::size_t kViewWidth = 3;
    /// 3x3 egocentric view x (wall, goal) + direction one-hot + position.
    static constexpr std::size_t kObservationSize = kViewDepth * kViewWidth * 2 + 4 + 2;

    explicit GridWorld(GridOptions options);

    std::vector<double> reset(Rng &rng) override;
    StepResult step(std::size_t action) override;
    [[nodiscard]] std::size_t num_actions() const override { return 3; }
    [[nodiscard]] std::size_t observation_size() const override { return kObservationSize; }
    [[nodiscard]] std::size_t steps() const override { return steps_; }
    [[nodiscard]] bool finished() const override { return finished_; }
    [[nodiscard]] std::size_t max_steps() const noexcept { return 4 * options_.side * options_.side; }

    [[nodiscard]] const GridLayout &layout() const noexcept { return layout_; }
    [[nodiscard]] std::size_t agent_x() const noexcept { return x_; }
    [[nodiscard]] std::size_t agent_y() const noexcept { return y_; }
    [[nodiscard]] std::size_t direction() const noexcept { return dir_; }
    /// Places the agent; the layout must already exist (call reset first).
    void place_agent(std::size_t x, std::size_t y, std::size_t dir, std::size_t steps = 0);

    [[nodiscard]] std::vector<double> observe() const;

  private:
    GridOptions options_;
    GridLayout layout_;
    std::size_t x_{1};
    std::size_t y_{1};
    std::size_t dir_{0};
    std::size_t steps_{0};
    bool finished_{false};
};

struct EnvOptions {
    std::size_t grid_side{0}; ///< 0 keeps the task's default (8 or 9)
    bool shaped_reward{true};

    friend bool operator==(const EnvOptions &, const EnvOptions &) = default;
};

std::unique_ptr<Environment> make_environment(EnvKind kind, const EnvOptions &options = {});

/// Maps a raw observation to circuit inputs. Cart-pole: positions scaled by
/// their bounds to [-1, 1] then by pi/2, velocities through arctan.
/// Mountain car: both components scaled by their bounds to [-1, 1] then by
/// pi/2. Both are repeated cyclically to fill `n_qubits` inputs. Grid
/// observations pass through unchanged for the reduction layer.
std::vector<double> preprocess(std::span<const double> obs, EnvKind kind, std::size_t n_qubits);

/// Length of preprocess() output for a given task and register size.
std::size_t feature_count(EnvKind kind, std::size_t n_qubits);

} // namespace anoqrl
