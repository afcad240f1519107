#pragma once

/**
 * @file
 * Dense statevector simulation for small registers (n <= 8).
 *
 * Bit ordering: qubit 0 is the most significant bit of an amplitude index.
 * For n = 2 the basis order is |q0 q1> = |00>, |01>, |10>, |11>.
 */

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace anoqrl {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 8;

enum class Axis { X, Y, Z };

/// Square complex matrix, row-major.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim) : dim_{dim}, data_(dim * dim) {}

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    Complex &operator()(std::size_t row, std::size_t col) noexcept {
        return data_[row * dim_ + col];
    }
    const Complex &operator()(std::size_t row, std::size_t col) const noexcept {
        return data_[row * dim_ + col];
    }
    [[nodiscard]] std::span<const Complex> data() const noexcept { return data_; }
    [[nodiscard]] std::span<Complex> data() noexcept { return data_; }

  private:
    std::size_t dim_{0};
    std::vector<Complex> data_;
};

class StateVector {
  public:
    /// |0...0> on `n_qubits` qubits. Throws ConfigError outside 1..8.
    explicit StateVector(std::size_t n_qubits);

    /// Wraps explicit amplitudes; length must be a power of two in range.
    /// The caller is responsible for normalisation.
    static StateVector from_amplitudes(std::vector<Complex> amps);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] const Complex &operator[](std::size_t i) const noexcept { return amps_[i]; }

    [[nodiscard]] double norm_squared() const noexcept;

    void apply_hadamard(std::size_t qubit);
    /// exp(-i * angle * sigma_axis / 2) on `qubit`.
    void apply_rotation(std::size_t qubit, Axis axis, double angle);
    void apply_cnot(std::size_t control, std::size_t target);

    /// <Z> on a single qubit; used by the fixed Pauli readout.
    [[nodiscard]] double expectation_z(std::size_t qubit) const;

  private:
    StateVector() = default;

    [[nodiscard]] std::size_t bit(std::size_t qubit) const noexcept {
        return std::size_t{1} << (n_qubits_ - 1 - qubit);
    }
    void check_qubit(std::size_t qubit) const;

    std::size_t n_qubits_{0};
    std::vector<Complex> amps_;
};

/// Reduced state of a qubit subset. Row/column index bits follow the order of
/// the qubit list (first listed qubit is the most significant bit).
class DensityMatrix {
  public:
    DensityMatrix(std::size_t k_qubits, ComplexMatrix entries)
        : k_qubits_{k_qubits}, entries_{std::move(entries)} {}

    [[nodiscard]] std::size_t num_qubits() const noexcept { return k_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return entries_.dim(); }
    [[nodiscard]] const Complex &operator()(std::size_t r, std::size_t c) const noexcept {
        return entries_(r, c);
    }
    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return entries_; }
    [[nodiscard]] Complex trace() const noexcept;

  private:
    std::size_t k_qubits_;
    ComplexMatrix entries_;
};

/// Partial trace over every qubit not in `qubits`.
/// Throws IndexError on duplicates or out-of-range indices.
DensityMatrix reduced_density(const StateVector &sv, std::span<const std::size_t> qubits);

/// Validates a qubit subset against a register size.
void check_qubit_subset(std::size_t n_qubits, std::span<const std::size_t> qubits);

} // namespace anoqrl
