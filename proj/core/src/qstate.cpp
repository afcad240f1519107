#include "anoqrl/qstate.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "anoqrl/errors.hpp"

namespace anoqrl {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_register_size(std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("qubit count must be in 1.." + std::to_string(kMaxQubits) +
                          ", got " + std::to_string(n_qubits));
    }
}

} // namespace

StateVector::StateVector(std::size_t n_qubits) : n_qubits_{n_qubits} {
    check_register_size(n_qubits);
    amps_.assign(std::size_t{1} << n_qubits, Complex{});
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amps) {
    if (amps.empty() || !std::has_single_bit(amps.size())) {
        throw ConfigError("amplitude count must be a power of two");
    }
    StateVector sv;
    sv.n_qubits_ = static_cast<std::size_t>(std::countr_zero(amps.size()));
    check_register_size(sv.n_qubits_);
    sv.amps_ = std::move(amps);
    return sv;
}

double StateVector::norm_squared() const noexcept {
    double total = 0.0;
    for (const auto &a : amps_) {
        total += std::norm(a);
    }
    return total;
}

void StateVector::check_qubit(std::size_t qubit) const {
    if (qubit >= n_qubits_) {
        throw IndexError("qubit " + std::to_string(qubit) + " out of range for " +
                         std::to_string(n_qubits_) + "-qubit register");
    }
}

void StateVector::apply_hadamard(std::size_t qubit) {
    check_qubit(qubit);
    const std::size_t stride = bit(qubit);
    for (std::size_t base = 0; base < amps_.size(); base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const Complex a0 = amps_[i];
            const Complex a1 = amps_[i + stride];
            amps_[i] = kInvSqrt2 * (a0 + a1);
            amps_[i + stride] = kInvSqrt2 * (a0 - a1);
        }
    }
}

void StateVector::apply_rotation(std::size_t qubit, Axis axis, double angle) {
    check_qubit(qubit);
    if (!std::isfinite(angle)) {
        throw NumericError("rotation angle must be finite");
    }
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const std::size_t stride = bit(qubit);
    for (std::size_t base = 0; base < amps_.size(); base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const Complex a0 = amps_[i];
            const Complex a1 = amps_[i + stride];
            switch (axis) {
            case Axis::X:
                // [[c, -is], [-is, c]]
                amps_[i] = c * a0 + Complex{0.0, -s} * a1;
                amps_[i + stride] = Complex{0.0, -s} * a0 + c * a1;
                break;
            case Axis::Y:
                // [[c, -s], [s, c]]
                amps_[i] = c * a0 - s * a1;
                amps_[i + stride] = s * a0 + c * a1;
                break;
            case Axis::Z:
                amps_[i] = Complex{c, -s} * a0;
                amps_[i + stride] = Complex{c, s} * a1;
                break;
            }
        }
    }
}

void StateVector::apply_cnot(std::size_t control, std::size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw IndexError("CNOT control and target must differ");
    }
    const std::size_t cbit = bit(control);
    const std::size_t tbit = bit(target);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & cbit) && !(i & tbit)) {
            std::swap(amps_[i], amps_[i | tbit]);
        }
    }
}

double StateVector::expectation_z(std::size_t qubit) const {
    check_qubit(qubit);
    const std::size_t b = bit(qubit);
    double total = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        total += (i & b) ? -std::norm(amps_[i]) : std::norm(amps_[i]);
    }
    return total;
}

Complex DensityMatrix::trace() const noexcept {
    Complex t{};
    for (std::size_t i = 0; i < dim(); ++i) {
        t += entries_(i, i);
    }
    return t;
}

void check_qubit_subset(std::size_t n_qubits, std::span<const std::size_t> qubits) {
    if (qubits.empty() || qubits.size() > n_qubits) {
        throw IndexError("qubit subset size must be in 1.." + std::to_string(n_qubits));
    }
    unsigned seen = 0;
    for (std::size_t q : qubits) {
        if (q >= n_qubits) {
            throw IndexError("qubit " + std::to_string(q) + " out of range");
        }
        if (seen & (1u << q)) {
            throw IndexError("duplicate qubit " + std::to_string(q) + " in subset");
        }
        seen |= 1u << q;
    }
}

DensityMatrix reduced_density(const StateVector &sv, std::span<const std::size_t> qubits) {
    const std::size_t n = sv.num_qubits();
    check_qubit_subset(n, qubits);
    const std::size_t k = qubits.size();
    const std::size_t dim = std::size_t{1} << k;

    // Map each full index to (subset index, complement index).
    std::vector<std::size_t> kept_bits(k);
    unsigned kept_mask = 0;
    for (std::size_t j = 0; j < k; ++j) {
        kept_bits[j] = std::size_t{1} << (n - 1 - qubits[j]);
        kept_mask |= static_cast<unsigned>(kept_bits[j]);
    }
    const std::size_t rest_count = std::size_t{1} << (n - k);
    // gather[rest * dim + a] = full index
    std::vector<std::size_t> gather(sv.size());
    std::size_t rest = 0;
    for (std::size_t full = 0; full < sv.size(); ++full) {
        if (full & kept_mask) {
            continue;
        }
        for (std::size_t a = 0; a < dim; ++a) {
            std::size_t idx = full;
            for (std::size_t j = 0; j < k; ++j) {
                if (a & (std::size_t{1} << (k - 1 - j))) {
                    idx |= kept_bits[j];
                }
            }
            gather[rest * dim + a] = idx;
        }
        ++rest;
    }

    ComplexMatrix rho(dim);
    const auto amps = sv.amplitudes();
    for (std::size_t r = 0; r < rest_count; ++r) {
        const std::size_t *row = &gather[r * dim];
        for (std::size_t a = 0; a < dim; ++a) {
            const Complex va = amps[row[a]];
            if (va == Complex{}) {
                continue;
            }
            for (std::size_t b = a; b < dim; ++b) {
                rho(a, b) += va * std::conj(amps[row[b]]);
            }
        }
    }
    for (std::size_t a = 0; a < dim; ++a) {
        rho(a, a) = Complex{rho(a, a).real(), 0.0};
        for (std::size_t b = a + 1; b < dim; ++b) {
            rho(b, a) = std::conj(rho(a, b));
        }
    }
    return DensityMatrix{k, std::move(rho)};
}

} // namespace anoqrl
