#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "anoqrl/config.hpp"

namespace anoqrl {

/// Library version string recorded with every run.
std::string code_version();

struct RunRecord {
    ExperimentConfig config;
    std::string label;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows; ///< one per completed episode
    std::vector<double> rewards;           ///< reward column, episode order
    std::size_t terminated_episodes{0}; ///< ended by the task (goal or failure), not the cap
    std::string code_version;
    double wall_seconds{0.0};
    std::filesystem::path csv_path; ///< empty when files were not written
};

struct RunOptions {
    bool write_files{true};
    std::ostream *log{nullptr}; ///< one progress line per run when set
};

/// CSV header for an algorithm: dqn "episode,reward,epsilon,mean_loss",
/// a3c "global_episode,worker,reward".
std::vector<std::string> csv_columns(Algorithm algorithm);

/// Runs one experiment. Rows are written and flushed as episodes finish, to
/// <output_dir>/<label>_seed<seed>.csv next to a .ini echo of the config.
/// Errors are rethrown with the run label prepended, keeping their type.
RunRecord run_experiment(const ExperimentConfig &config, const RunOptions &options = {});

/// Cartesian product over seeds and readout modes (empty modes keeps the
/// configured one).
std::vector<RunRecord> sweep(const ExperimentConfig &base, std::span<const std::uint64_t> seeds,
                             std::span<const ReadoutMode> modes = {},
                             const RunOptions &options = {});

struct Smoothed {
    std::vector<double> mean;
    std::vector<double> stddev; ///< sample (n - 1) deviation; 0 for a single point
};

/// Trailing-window mean and standard deviation; early points use the
/// available prefix. Throws ConfigError when window is 0.
Smoothed moving_average(std::span<const double> series, std::size_t window);

} // namespace anoqrl
