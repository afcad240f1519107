// Command-line front end: run, validate, plot, sweep.
//
// Exit codes: 0 success, 2 invalid configuration or arguments, 3 numeric
// failure during a run, 1 anything else.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "anoqrl/config.hpp"
#include "anoqrl/errors.hpp"
#include "anoqrl/harness.hpp"
#include "anoqrl/plot.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

anoqrl::ExperimentConfig load(const std::string &path, std::optional<std::uint64_t> seed,
                              const std::string &out_dir) {
    auto config = anoqrl::load_config(path, seed);
    if (!out_dir.empty()) {
        config.output_dir = out_dir;
    }
    return config;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Variational quantum reinforcement learning experiments"};
    app.set_version_flag("--version", anoqrl::code_version());
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;

    auto *run = app.add_subcommand("run", "Train one configuration and write its CSV");
    run->add_option("--config", config_path, "Experiment file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Override experiment.seed");
    run->add_option("--out", out_dir, "Override experiment.output_dir");
    run->add_flag("--quiet", quiet, "No progress line");

    auto *validate = app.add_subcommand("validate", "Check a configuration file");
    validate->add_option("--config", config_path, "Experiment file")->required();

    std::string plot_out;
    std::vector<std::string> csv_files;
    std::size_t window = 100;
    std::string title;
    auto *plot = app.add_subcommand("plot", "Moving-average reward curves as SVG");
    plot->add_option("--out", plot_out, "Output SVG")->required();
    plot->add_option("--window", window, "Moving-average window")->check(CLI::PositiveNumber);
    plot->add_option("--title", title, "Figure title");
    plot->add_option("csv", csv_files, "Metric CSV files")->required()->check(CLI::ExistingFile);

    std::vector<std::uint64_t> seeds;
    std::vector<std::string> modes;
    auto *sweep = app.add_subcommand("sweep", "Run a configuration over several seeds and modes");
    sweep->add_option("--config", config_path, "Experiment file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--seeds", seeds, "Comma-separated seeds")->required()->delimiter(',');
    sweep->add_option("--modes", modes, "Comma-separated readout modes")->delimiter(',');
    sweep->add_option("--out", out_dir, "Override experiment.output_dir");
    sweep->add_flag("--quiet", quiet, "No progress lines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        anoqrl::RunOptions options;
        options.log = quiet ? nullptr : &std::cerr;
        if (*run) {
            const auto record = anoqrl::run_experiment(load(config_path, seed, out_dir), options);
            std::cout << record.csv_path.string() << '\n';
        } else if (*validate) {
            const auto config = anoqrl::load_config(config_path, seed);
            std::cout << "ok: " << anoqrl::default_label(config) << '\n';
        } else if (*plot) {
            std::vector<anoqrl::PlotSeries> series;
            for (const auto &f : csv_files) {
                series.push_back(anoqrl::read_series(f));
            }
            anoqrl::emit_plot(series, plot_out, window, title);
            std::cout << plot_out << '\n';
        } else if (*sweep) {
            const auto base = load(config_path, seeds.front(), out_dir);
            std::vector<anoqrl::ReadoutMode> mode_list;
            for (const auto &m : modes) {
                mode_list.push_back(anoqrl::parse_readout_mode(m));
            }
            for (const auto &record : anoqrl::sweep(base, seeds, mode_list, options)) {
                std::cout << record.csv_path.string() << '\n';
            }
        }
    } catch (const anoqrl::ValidationError &e) {
        std::cerr << e.what() << '\n';
        return kExitValidation;
    } catch (const anoqrl::ConfigError &e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitValidation;
    } catch (const anoqrl::UsageError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const anoqrl::NumericError &e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
