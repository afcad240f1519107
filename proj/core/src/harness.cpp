#include "anoqrl/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include "anoqrl/errors.hpp"

namespace anoqrl {

std::string code_version() { return ANOQRL_VERSION; }

std::vector<std::string> csv_columns(Algorithm algorithm) {
    if (algorithm == Algorithm::Dqn) {
        return {"episode", "reward", "epsilon", "mean_loss"};
    }
    return {"global_episode", "worker", "reward"};
}

namespace {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path &path, const std::vector<std::string> &columns)
        : out_{path} {
        if (!out_) {
            throw ConfigError("cannot write " + path.string());
        }
        for (std::size_t i = 0; i < columns.size(); ++i) {
            out_ << (i ? "," : "") << columns[i];
        }
        out_ << '\n' << std::flush;
    }

    void row(const std::vector<double> &values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            out_ << (i ? "," : "") << format_number(values[i]);
        }
        out_ << '\n' << std::flush;
    }

  private:
    std::ofstream out_;
};

/// Re-raises the in-flight exception with `context` prepended, keeping its
/// category.
[[noreturn]] void rethrow_with(const std::string &context) {
    try {
        throw;
    } catch (const NumericError &e) {
        throw NumericError(context + e.what());
    } catch (const ValidationError &) {
        throw;
    } catch (const ConfigError &e) {
        throw ConfigError(context + e.what());
    } catch (const IndexError &e) {
        throw IndexError(context + e.what());
    } catch (const UsageError &e) {
        throw UsageError(context + e.what());
    }
    throw;
}

} // namespace

RunRecord run_experiment(const ExperimentConfig &config, const RunOptions &options) {
    RunRecord record;
    record.config = config;
    record.label = config.label.empty() ? default_label(config) : config.label;
    record.columns = csv_columns(config.algorithm);
    record.code_version = code_version();
    const std::string context = record.label + " (seed " + std::to_string(config.seed) + "): ";

    std::optional<CsvWriter> csv;
    if (options.write_files) {
        const std::filesystem::path dir{config.output_dir};
        std::filesystem::create_directories(dir);
        const std::string stem = record.label + "_seed" + std::to_string(config.seed);
        record.csv_path = dir / (stem + ".csv");
        std::ofstream echo{dir / (stem + ".ini")};
        echo << "; version " << record.code_version << "\n" << render_config(config);
        csv.emplace(record.csv_path, record.columns);
    }
    auto emit = [&](std::vector<double> row, double reward, bool terminated) {
        if (csv) {
            csv->row(row);
        }
        record.rows.push_back(std::move(row));
        record.rewards.push_back(reward);
        record.terminated_episodes += terminated ? 1 : 0;
    };

    const auto start = std::chrono::steady_clock::now();
    try {
        if (config.algorithm == Algorithm::Dqn) {
            DqnConfig dqn = config.dqn;
            dqn.episodes = config.episodes;
            run_dqn(dqn, config.env, config.env_options, config.model, config.optimizer,
                    config.seed, [&](const DqnEpisode &ep) {
                        emit({static_cast<double>(ep.episode), ep.reward, ep.epsilon,
                              ep.mean_loss},
                             ep.reward, ep.terminated);
                    });
        } else {
            A3cConfig a3c = config.a3c;
            a3c.episodes = config.episodes;
            run_a3c(a3c, config.env, config.env_options, config.model, config.optimizer,
                    config.seed, [&](const A3cEpisode &ep) {
                        emit({static_cast<double>(ep.global_episode),
                              static_cast<double>(ep.worker), ep.reward},
                             ep.reward, ep.terminated);
                    });
        }
    } catch (...) {
        rethrow_with(context);
    }
    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (options.log) {
        double tail = 0.0;
        if (!record.rewards.empty()) {
            tail = moving_average(record.rewards, 100).mean.back();
        }
        *options.log << record.label << " seed " << config.seed << ": " << record.rows.size()
                     << " episodes, final MA(100) " << tail << ", " << record.wall_seconds
                     << " s\n";
    }
    return record;
}

std::vector<RunRecord> sweep(const ExperimentConfig &base, std::span<const std::uint64_t> seeds,
                             std::span<const ReadoutMode> modes, const RunOptions &options) {
    std::vector<ReadoutMode> mode_list(modes.begin(), modes.end());
    if (mode_list.empty()) {
        mode_list.push_back(base.model.mode);
    }
    std::vector<RunRecord> records;
    for (ReadoutMode mode : mode_list) {
        for (std::uint64_t seed : seeds) {
            ExperimentConfig c = base;
            c.model.mode = mode;
            c.seed = seed;
            if (modes.size() > 1 && !base.label.empty()) {
                c.label = base.label + "_" + std::string{to_string(mode)};
            }
            c.model.validate();
            records.push_back(run_experiment(c, options));
        }
    }
    return records;
}

Smoothed moving_average(std::span<const double> series, std::size_t window) {
    if (window == 0) {
        throw ConfigError("moving-average window must be at least 1");
    }
    Smoothed out;
    out.mean.reserve(series.size());
    out.stddev.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::size_t lo = i + 1 >= window ? i + 1 - window : 0;
        const double n = static_cast<double>(i + 1 - lo);
        double mean = 0.0;
        for (std::size_t j = lo; j <= i; ++j) {
            mean += series[j];
        }
        mean /= n;
        double ss = 0.0;
        for (std::size_t j = lo; j <= i; ++j) {
            ss += (series[j] - mean) * (series[j] - mean);
        }
        out.mean.push_back(mean);
        out.stddev.push_back(n > 1.0 ? std::sqrt(ss / (n - 1.0)) : 0.0);
    }
    return out;
}

} // namespace anoqrl
