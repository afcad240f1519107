#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace anoqrl {

/**
 * Seedable generator with labeled sub-streams.
 *
 * Every component (environment, exploration, initialisation, each A3C worker)
 * draws from its own stream derived from the master seed and a label, so
 * adding a component never shifts the numbers another component sees.
 */
class Rng {
  public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t seed) : seed_{seed}, engine_{mix(seed)} {}

    /// Independent stream for `label`, derived from this generator's seed
    /// (not its current position).
    [[nodiscard]] Rng split(std::string_view label) const;
    [[nodiscard]] Rng split(std::string_view label, std::uint64_t index) const;

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>{lo, hi}(engine_);
    }
    double normal(double mean, double stddev) {
        return std::normal_distribution<double>{mean, stddev}(engine_);
    }
    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>{0, n - 1}(engine_);
    }

  private:
    static std::uint64_t mix(std::uint64_t x) noexcept;

    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace anoqrl
