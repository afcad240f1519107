#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anoqrl {

class Rng;

/// Which learning rate a parameter block trains with.
enum class BlockKind { Theta, Phi, Linear, Table };

struct ParamBlock {
    std::string name;
    BlockKind kind{BlockKind::Theta};
    std::vector<double> values;

    friend bool operator==(const ParamBlock &, const ParamBlock &) = default;
};

/// Flat named parameter blocks. Gradients use the same type with the same
/// block names and sizes.
class ParamStore {
  public:
    void add(std::string name, BlockKind kind, std::vector<double> values);

    [[nodiscard]] bool contains(std::string_view name) const noexcept;
    [[nodiscard]] const ParamBlock &block(std::string_view name) const;
    ParamBlock &block(std::string_view name);
    [[nodiscard]] std::span<const double> values(std::string_view name) const {
        return block(name).values;
    }
    std::span<double> values(std::string_view name) { return block(name).values; }

    [[nodiscard]] const std::vector<ParamBlock> &blocks() const noexcept { return blocks_; }
    std::vector<ParamBlock> &blocks() noexcept { return blocks_; }

    [[nodiscard]] ParamStore zeros_like() const;
    [[nodiscard]] bool same_shape(const ParamStore &other) const noexcept;
    [[nodiscard]] std::size_t total_size() const noexcept;

    /// this += scale * other (shapes must match).
    void add_scaled(const ParamStore &other, double scale);
    void scale(double factor);
    [[nodiscard]] double squared_norm() const noexcept;
    [[nodiscard]] bool all_finite() const noexcept;
    /// FNV-1a over the raw bytes of every value, in block order.
    [[nodiscard]] std::uint64_t checksum() const noexcept;

    friend bool operator==(const ParamStore &, const ParamStore &) = default;

  private:
    std::vector<ParamBlock> blocks_;
};

struct LinearLayer {
    std::size_t in_dim{0};
    std::size_t out_dim{0};
    std::vector<double> weights; ///< out_dim x in_dim, row-major
    std::vector<double> bias;

    static LinearLayer zeros(std::size_t in_dim, std::size_t out_dim);
    /// Uniform(-1/sqrt(in), 1/sqrt(in)) for weights and bias.
    static LinearLayer random(std::size_t in_dim, std::size_t out_dim, Rng &rng);
};

/// pi * tanh(W x + b): encoding angles strictly inside (-pi, pi).
std::vector<double> linear_forward(const LinearLayer &layer, std::span<const double> input);

struct LinearGrad {
    std::vector<double> d_weights;
    std::vector<double> d_bias;
};

/// Chain rule through pi * tanh and the affine map, given dL/d(output).
LinearGrad linear_backward(const LinearLayer &layer, std::span<const double> input,
                           std::span<const double> upstream);

struct AdamConfig {
    double lr_theta{1e-3};
    double lr_phi{1e-2};
    double lr_linear{1e-3};
    double lr_table{1e-2};
    double beta1{0.9};
    double beta2{0.999};
    double epsilon{1e-8};

    [[nodiscard]] double rate(BlockKind kind) const noexcept;

    friend bool operator==(const AdamConfig &, const AdamConfig &) = default;
};

/// Adaptive-moment optimiser with bias correction and per-block rates.
class AdamOptimizer {
  public:
    AdamOptimizer(AdamConfig config, const ParamStore &shape);

    /// One descent step on `params` using `grads`. A non-finite gradient throws
    /// NumericError and leaves both the parameters and the optimiser untouched.
    void step(ParamStore &params, const ParamStore &grads);

    [[nodiscard]] std::uint64_t steps() const noexcept { return steps_; }
    [[nodiscard]] const AdamConfig &config() const noexcept { return config_; }

  private:
    AdamConfig config_;
    ParamStore first_;
    ParamStore second_;
    std::uint64_t steps_{0};
};

} // namespace anoqrl
