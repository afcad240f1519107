#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "anoqrl/config.hpp"
#include "anoqrl/errors.hpp"
#include "anoqrl/rng.hpp"

using namespace anoqrl;

namespace {

const char *kMinimal = R"(
[experiment]
algorithm = dqn
env = cartpole
seed = 7
)";

std::vector<std::string> issues_of(const std::string &text) {
    try {
        (void)parse_config(text);
    } catch (const ValidationError &e) {
        return e.issues();
    }
    return {};
}

bool mentions(const std::vector<std::string> &issues, const std::string &needle) {
    return std::any_of(issues.begin(), issues.end(),
                       [&](const std::string &s) { return s.find(needle) != std::string::npos; });
}

} // namespace

TEST(ParseConfig, MinimalDocumentFillsDefaults) {
    const auto c = parse_config(kMinimal);
    EXPECT_EQ(c.algorithm, Algorithm::Dqn);
    EXPECT_EQ(c.env, EnvKind::CartPole);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.model.mode, ReadoutMode::AnoWithRotation);
    EXPECT_EQ(c.model.n_qubits, 4u);
    EXPECT_EQ(c.model.n_outputs, 2u);
    EXPECT_DOUBLE_EQ(c.dqn.gamma, 0.99);
    EXPECT_TRUE(c.label.empty());
    EXPECT_EQ(default_label(c), "dqn_cartpole_ano_rotation_k3");
}

TEST(ParseConfig, LocalityAboveQubitCountIsRejected) {
    const auto issues = issues_of(std::string{kMinimal} + "[model]\nqubits = 4\nlocality = 6\n");
    ASSERT_EQ(issues.size(), 1u);
    EXPECT_EQ(issues[0], "model.locality: locality exceeds qubit count");
}

TEST(ParseConfig, QubitsDefaultToLocality) {
    const auto c = parse_config(std::string{kMinimal} + "[model]\nlocality = 6\n");
    EXPECT_EQ(c.model.n_qubits, 6u);
}

TEST(ParseConfig, LocalityWithPauliReadoutIsRejected) {
    const auto issues =
        issues_of(std::string{kMinimal} + "[model]\nmode = rotation_only\nlocality = 2\n");
    EXPECT_TRUE(mentions(issues, "model.locality: not allowed with mode rotation_only"));
}

TEST(ParseConfig, CollectsEveryIssue) {
    const auto issues = issues_of(R"(
[experiment]
algorithm = ppo
env = cartpole
episodes = -3
colour = blue

[dqn]
gamma = 1.5
batch_size = 64
capacity = 10

[extras]
x = 1
)");
    EXPECT_TRUE(mentions(issues, "experiment.algorithm"));
    EXPECT_TRUE(mentions(issues, "experiment.seed: required"));
    EXPECT_TRUE(mentions(issues, "experiment.episodes"));
    EXPECT_TRUE(mentions(issues, "experiment.colour: unknown key"));
    EXPECT_TRUE(mentions(issues, "dqn.gamma"));
    EXPECT_TRUE(mentions(issues, "dqn.capacity: smaller than dqn.batch_size"));
    EXPECT_TRUE(mentions(issues, "extras: unknown section"));
    EXPECT_GE(issues.size(), 7u);
}

TEST(ParseConfig, MessageListsIssues) {
    try {
        (void)parse_config("[experiment]\nenv = pong\n");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError &e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("experiment.env"), std::string::npos);
        EXPECT_NE(what.find("experiment.seed: required"), std::string::npos);
    }
}

TEST(ParseConfig, SyntaxErrorReportsLine) {
    const auto issues = issues_of("[experiment\nseed = 1\n");
    ASSERT_EQ(issues.size(), 1u);
    EXPECT_EQ(issues[0].rfind("line 1", 0), 0u);
}

TEST(ParseConfig, SeedOverride) {
    EXPECT_EQ(parse_config(kMinimal, 99).seed, 99u);
    EXPECT_EQ(parse_config("[experiment]\nenv = cartpole\n", 3).seed, 3u);
    EXPECT_THROW((void)parse_config("[experiment]\nenv = cartpole\n"), ValidationError);
}

TEST(ParseConfig, MountainCarDiscountDefault) {
    const auto c = parse_config("[experiment]\nenv = mountaincar\nseed = 1\n");
    EXPECT_DOUBLE_EQ(c.dqn.gamma, 0.999);
    EXPECT_EQ(c.model.n_outputs, 3u);
    const auto explicit_gamma =
        parse_config("[experiment]\nenv = mountaincar\nseed = 1\n[dqn]\ngamma = 0.9\n");
    EXPECT_DOUBLE_EQ(explicit_gamma.dqn.gamma, 0.9);
}

TEST(ParseConfig, TooFewQubitsForActions) {
    const auto issues =
        issues_of("[experiment]\nenv = mountaincar\nseed = 1\n[model]\nqubits = 2\nlocality = 2\n");
    EXPECT_TRUE(mentions(issues, "needs 3 outputs"));
}

TEST(ParseConfig, RangeChecks) {
    EXPECT_TRUE(mentions(issues_of(std::string{kMinimal} + "[dqn]\nepsilon_decay = 0\n"),
                         "dqn.epsilon_decay"));
    EXPECT_TRUE(mentions(
        issues_of(std::string{kMinimal} + "[dqn]\nepsilon_start = 0.1\nepsilon_end = 0.5\n"),
        "dqn.epsilon_end"));
    EXPECT_TRUE(mentions(issues_of(std::string{kMinimal} + "[optimizer]\nlr_theta = 0\n"),
                         "optimizer.lr_theta"));
    EXPECT_TRUE(mentions(issues_of(std::string{kMinimal} + "[optimizer]\nbeta1 = 1\n"),
                         "optimizer.beta1"));
    EXPECT_TRUE(mentions(issues_of(std::string{kMinimal} + "[a3c]\nworkers = 0\n"), "a3c.workers"));
    EXPECT_TRUE(mentions(issues_of(std::string{kMinimal} + "[a3c]\naudit_snapshots = maybe\n"),
                         "a3c.audit_snapshots"));
    EXPECT_TRUE(mentions(issues_of(std::string{kMinimal} + "[model]\nqubits = 40\n"),
                         "model.qubits"));
    EXPECT_TRUE(mentions(issues_of("[experiment]\nenv = simplecrossing\nseed = 1\n[env]\n"
                                   "grid_side = 4\n"),
                         "env.grid_side"));
    EXPECT_TRUE(mentions(issues_of("seed = 1\n"), "key outside any section"));
}

TEST(RenderConfig, RoundTripsDefaults) {
    const auto c = parse_config(kMinimal);
    EXPECT_EQ(parse_config(render_config(c)), c);
}

TEST(RenderConfig, RoundTripsRandomConfigs) {
    Rng rng{11};
    const EnvKind envs[] = {EnvKind::CartPole, EnvKind::MountainCar, EnvKind::MiniGrid,
                            EnvKind::SimpleCrossing};
    const ReadoutMode modes[] = {ReadoutMode::AnoWithRotation, ReadoutMode::RotationOnly,
                                 ReadoutMode::MeasurementOnly};
    for (int trial = 0; trial < 100; ++trial) {
        ExperimentConfig c;
        c.algorithm = rng.index(2) ? Algorithm::A3c : Algorithm::Dqn;
        c.env = envs[rng.index(4)];
        c.seed = rng.index(1u << 30);
        c.episodes = rng.index(5000);
        c.output_dir = "out/dir" + std::to_string(trial);
        c.label = rng.index(2) ? "" : "run" + std::to_string(trial);
        c.env_options.grid_side = rng.index(2) ? 0 : 5 + rng.index(6);
        c.env_options.shaped_reward = rng.index(2) == 1;
        c.model.mode = modes[rng.index(3)];
        c.model.n_qubits = 4 + rng.index(5);
        c.model.n_layers = 1 + rng.index(3);
        c.model.locality = c.model.uses_ano() ? 1 + rng.index(c.model.n_qubits) : 3;
        c.model.n_outputs = make_environment(c.env)->num_actions();
        c.dqn.gamma = rng.uniform(0, 1);
        c.dqn.epsilon.end = rng.uniform(0, 0.5);
        c.dqn.epsilon.start = rng.uniform(0.5, 1);
        c.dqn.epsilon.decay = rng.uniform(0.9, 1);
        c.dqn.batch_size = 1 + rng.index(64);
        c.dqn.capacity = c.dqn.batch_size + rng.index(1000);
        c.dqn.target_period = 1 + rng.index(100);
        c.dqn.train_every = 1 + rng.index(4);
        c.a3c.workers = 1 + rng.index(8);
        c.a3c.n_step = 1 + rng.index(20);
        c.a3c.gamma = rng.uniform(0, 1);
        c.a3c.value_coef = rng.uniform(0.01, 2);
        c.a3c.entropy_coef = rng.uniform(0.001, 0.1);
        c.a3c.grad_clip = rng.uniform(0, 10);
        c.a3c.audit_snapshots = rng.index(2) == 1;
        c.optimizer.lr_theta = rng.uniform(1e-4, 1e-1);
        c.optimizer.lr_phi = rng.uniform(1e-4, 1e-1);
        c.optimizer.lr_linear = rng.uniform(1e-4, 1e-1);
        c.optimizer.lr_table = rng.uniform(1e-4, 1e-1);
        c.optimizer.beta1 = rng.uniform(0, 0.99);
        c.optimizer.beta2 = rng.uniform(0, 0.9999);
        c.optimizer.epsilon = rng.uniform(1e-10, 1e-6);
        const auto back = parse_config(render_config(c));
        ASSERT_EQ(back, c) << render_config(c);
    }
}

TEST(LoadConfig, MissingFileIsAValidationError) {
    try {
        (void)load_config("/nonexistent/experiment.ini");
        FAIL() << "expected ValidationError";
    } catch (const ValidationError &e) {
        ASSERT_EQ(e.issues().size(), 1u);
        EXPECT_NE(e.issues()[0].find("cannot open"), std::string::npos);
    }
}

TEST(LoadConfig, ShippedConfigurationsValidate) {
    std::size_t count = 0;
    for (const auto &entry : std::filesystem::directory_iterator{ANOQRL_CONFIG_DIR}) {
        if (entry.path().extension() != ".ini") {
            continue;
        }
        ++count;
        EXPECT_NO_THROW((void)load_config(entry.path().string())) << entry.path();
    }
    EXPECT_GE(count, 10u);
}

TEST(DefaultLabel, OmitsLocalityForPauliReadout) {
    auto c = parse_config(std::string{kMinimal} + "[model]\nmode = rotation_only\n");
    EXPECT_EQ(default_label(c), "dqn_cartpole_rotation_only");
    c.algorithm = Algorithm::A3c;
    c.env = EnvKind::MiniGrid;
    c.model.mode = ReadoutMode::MeasurementOnly;
    c.model.locality = 2;
    EXPECT_EQ(default_label(c), "a3c_minigrid8x8_measurement_only_k2");
}
