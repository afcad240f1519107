#pragma once

/**
 * @file
 * Trainable k-local Hermitian observables measured over sliding qubit windows.
 *
 * A K x K Hermitian matrix (K = 2^k) is stored as its K real diagonal entries
 * plus the real and imaginary parts of the strict upper triangle, so exactly
 * K^2 real parameters describe it:
 *
 *     H[i][i] = diag[i]
 *     H[i][j] = upper_re[p] + i * upper_im[p]     (i < j, p = pair index)
 *     H[j][i] = conj(H[i][j])
 *
 * Upper-triangle pairs are enumerated row-major: (0,1), (0,2), ..., (0,K-1),
 * (1,2), ...
 */

#include <cstddef>
#include <span>
#include <vector>

#include "anoqrl/qstate.hpp"

namespace anoqrl {

class Rng;

struct HermitianParams {
    std::size_t k_local{1};
    std::vector<double> diag;
    std::vector<double> upper_re;
    std::vector<double> upper_im;

    static HermitianParams zeros(std::size_t k_local);
    /// diag ~ N(0, 0.1), off-diagonals ~ N(0, 0.05).
    static HermitianParams random(std::size_t k_local, Rng &rng);
    /// Parameters whose materialised matrix equals `m` (which must be Hermitian).
    static HermitianParams from_matrix(const ComplexMatrix &m);

    [[nodiscard]] std::size_t dim() const noexcept { return std::size_t{1} << k_local; }
    [[nodiscard]] std::size_t param_count() const noexcept { return dim() * dim(); }

    /// Flat layout: diag, then upper_re, then upper_im.
    [[nodiscard]] std::vector<double> flatten() const;
    void assign(std::span<const double> flat);
};

/// Index of the (row, col) pair, row < col, in the upper-triangle layout.
std::size_t upper_index(std::size_t dim, std::size_t row, std::size_t col);

struct GroupingScheme {
    std::size_t n_qubits{0};
    std::size_t k_local{0};
    std::vector<std::vector<std::size_t>> groups;
};

/// Cyclic contiguous windows (g, g+1, ..., g+k-1) mod n for g = 0..n-1.
GroupingScheme build_groups(std::size_t n_qubits, std::size_t k_local);

/// One independent observable per grouping window.
struct AnoObservable {
    GroupingScheme scheme;
    std::vector<HermitianParams> per_group;

    static AnoObservable zeros(std::size_t n_qubits, std::size_t k_local);
    static AnoObservable random(std::size_t n_qubits, std::size_t k_local, Rng &rng);
    void validate() const;
};

ComplexMatrix materialize(const HermitianParams &hp);

/// Tr(rho * H(phi)) for an already reduced state.
double expectation(const DensityMatrix &rho, const HermitianParams &hp);
/// Tr(rho_group * H(phi)) with rho_group the reduced state on `group`.
double expectation(const StateVector &sv, std::span<const std::size_t> group,
                   const HermitianParams &hp);

/// d<H>/d(phi): d/d diag[i] = rho_ii, d/d re_ij = 2 Re(rho_ij),
/// d/d im_ij = 2 Im(rho_ij) with rho_ij indexed (row, col), i < j.
/// The result is independent of phi since <H> is linear in it.
HermitianParams expectation_grad_phi(const DensityMatrix &rho);
HermitianParams expectation_grad_phi(const StateVector &sv, std::span<const std::size_t> group,
                                     const HermitianParams &hp);

/// Ascending eigenvalues of H(phi), via cyclic Jacobi on the real symmetric
/// embedding [[A, -B], [B, A]] of H = A + iB. Throws NumericError if the
/// iteration cap is reached.
std::vector<double> spectrum(const HermitianParams &hp);

/// Ascending eigenvalues of a real symmetric matrix (row-major, n x n).
std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n);

} // namespace anoqrl
