#include "anoqrl/observable.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "anoqrl/errors.hpp"
#include "anoqrl/rng.hpp"

namespace anoqrl {

namespace {

constexpr std::size_t kMaxJacobiSweeps = 100;
constexpr double kJacobiTolerance = 1e-12;

std::size_t pair_count(std::size_t dim) { return dim * (dim - 1) / 2; }

void check_shape(const HermitianParams &hp) {
    const std::size_t dim = hp.dim();
    if (hp.diag.size() != dim || hp.upper_re.size() != pair_count(dim) ||
        hp.upper_im.size() != pair_count(dim)) {
        throw ConfigError("HermitianParams storage does not match k_local = " +
                          std::to_string(hp.k_local));
    }
}

} // namespace

std::size_t upper_index(std::size_t dim, std::size_t row, std::size_t col) {
    // Pairs before `row`: sum_{r<row} (dim - 1 - r)
    return row * (2 * dim - row - 1) / 2 + (col - row - 1);
}

HermitianParams HermitianParams::zeros(std::size_t k_local) {
    if (k_local < 1 || k_local > kMaxQubits) {
        throw ConfigError("observable locality must be in 1..8");
    }
    HermitianParams hp;
    hp.k_local = k_local;
    const std::size_t dim = hp.dim();
    hp.diag.assign(dim, 0.0);
    hp.upper_re.assign(pair_count(dim), 0.0);
    hp.upper_im.assign(pair_count(dim), 0.0);
    return hp;
}

HermitianParams HermitianParams::random(std::size_t k_local, Rng &rng) {
    auto hp = zeros(k_local);
    for (auto &d : hp.diag) {
        d = rng.normal(0.0, 0.1);
    }
    for (auto &a : hp.upper_re) {
        a = rng.normal(0.0, 0.05);
    }
    for (auto &b : hp.upper_im) {
        b = rng.normal(0.0, 0.05);
    }
    return hp;
}

HermitianParams HermitianParams::from_matrix(const ComplexMatrix &m) {
    const std::size_t dim = m.dim();
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw ConfigError("observable dimension must be a power of two >= 2");
    }
    auto hp = zeros(static_cast<std::size_t>(std::countr_zero(dim)));
    for (std::size_t i = 0; i < dim; ++i) {
        hp.diag[i] = m(i, i).real();
        for (std::size_t j = i + 1; j < dim; ++j) {
            const std::size_t p = upper_index(dim, i, j);
            hp.upper_re[p] = m(i, j).real();
            hp.upper_im[p] = m(i, j).imag();
        }
    }
    return hp;
}

std::vector<double> HermitianParams::flatten() const {
    std::vector<double> flat;
    flat.reserve(param_count());
    flat.insert(flat.end(), diag.begin(), diag.end());
    flat.insert(flat.end(), upper_re.begin(), upper_re.end());
    flat.insert(flat.end(), upper_im.begin(), upper_im.end());
    return flat;
}

void HermitianParams::assign(std::span<const double> flat) {
    if (flat.size() != param_count()) {
        throw ConfigError("flat observable block has " + std::to_string(flat.size()) +
                          " values, expected " + std::to_string(param_count()));
    }
    const std::size_t dim = this->dim();
    const std::size_t pairs = pair_count(dim);
    diag.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(dim));
    upper_re.assign(flat.begin() + static_cast<std::ptrdiff_t>(dim),
                    flat.begin() + static_cast<std::ptrdiff_t>(dim + pairs));
    upper_im.assign(flat.begin() + static_cast<std::ptrdiff_t>(dim + pairs), flat.end());
}

GroupingScheme build_groups(std::size_t n_qubits, std::size_t k_local) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("qubit count must be in 1..8");
    }
    if (k_local < 1) {
        throw ConfigError("locality must be at least 1");
    }
    if (k_local > n_qubits) {
        throw ConfigError("locality exceeds qubit count");
    }
    GroupingScheme scheme{n_qubits, k_local, {}};
    scheme.groups.reserve(n_qubits);
    for (std::size_t g = 0; g < n_qubits; ++g) {
        std::vector<std::size_t> group(k_local);
        for (std::size_t j = 0; j < k_local; ++j) {
            group[j] = (g + j) % n_qubits;
        }
        scheme.groups.push_back(std::move(group));
    }
    return scheme;
}

AnoObservable AnoObservable::zeros(std::size_t n_qubits, std::size_t k_local) {
    AnoObservable ano{build_groups(n_qubits, k_local), {}};
    ano.per_group.assign(n_qubits, HermitianParams::zeros(k_local));
    return ano;
}

AnoObservable AnoObservable::random(std::size_t n_qubits, std::size_t k_local, Rng &rng) {
    AnoObservable ano{build_groups(n_qubits, k_local), {}};
    ano.per_group.reserve(n_qubits);
    for (std::size_t g = 0; g < n_qubits; ++g) {
        ano.per_group.push_back(HermitianParams::random(k_local, rng));
    }
    return ano;
}

void AnoObservable::validate() const {
    if (per_group.size() != scheme.groups.size()) {
        throw ConfigError("one observable is required per grouping");
    }
    for (const auto &hp : per_group) {
        if (hp.k_local != scheme.k_local) {
            throw ConfigError("observable locality differs from grouping locality");
        }
        check_shape(hp);
    }
}

ComplexMatrix materialize(const HermitianParams &hp) {
    check_shape(hp);
    const std::size_t dim = hp.dim();
    ComplexMatrix m(dim);
    std::size_t p = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = hp.diag[i];
        for (std::size_t j = i + 1; j < dim; ++j, ++p) {
            m(i, j) = Complex{hp.upper_re[p], hp.upper_im[p]};
            m(j, i) = Complex{hp.upper_re[p], -hp.upper_im[p]};
        }
    }
    return m;
}

double expectation(const DensityMatrix &rho, const HermitianParams &hp) {
    check_shape(hp);
    if (rho.dim() != hp.dim()) {
        throw ConfigError("observable acts on " + std::to_string(hp.k_local) +
                          " qubits but the reduced state has " +
                          std::to_string(rho.num_qubits()));
    }
    // Tr(rho H) = sum_i rho_ii c_i + sum_{i<j} 2 (Re rho_ij a_ij + Im rho_ij b_ij)
    const std::size_t dim = hp.dim();
    double total = 0.0;
    std::size_t p = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        total += rho(i, i).real() * hp.diag[i];
        for (std::size_t j = i + 1; j < dim; ++j, ++p) {
            const Complex r = rho(i, j);
            total += 2.0 * (r.real() * hp.upper_re[p] + r.imag() * hp.upper_im[p]);
        }
    }
    return total;
}

double expectation(const StateVector &sv, std::span<const std::size_t> group,
                   const HermitianParams &hp) {
    if (group.size() != hp.k_local) {
        throw ConfigError("group size does not match observable locality");
    }
    check_shape(hp);
    const std::size_t n = sv.num_qubits();
    check_qubit_subset(n, group);
    const std::size_t k = group.size();
    const std::size_t dim = hp.dim();

    // Sum over complement indices r of v_r^dag H v_r, where v_r holds the
    // amplitudes with the group's bits set to each local index.
    std::array<std::size_t, 1u << kMaxQubits> offset{};
    std::size_t kept_mask = 0;
    for (std::size_t a = 0; a < dim; ++a) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (a & (std::size_t{1} << (k - 1 - j))) {
                idx |= std::size_t{1} << (n - 1 - group[j]);
            }
        }
        offset[a] = idx;
        kept_mask |= idx;
    }
    std::array<double, 1u << kMaxQubits> re{};
    std::array<double, 1u << kMaxQubits> im{};
    const auto amps = sv.amplitudes();
    double total = 0.0;
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if (base & kept_mask) {
            continue;
        }
        for (std::size_t a = 0; a < dim; ++a) {
            re[a] = amps[base | offset[a]].real();
            im[a] = amps[base | offset[a]].imag();
        }
        // Tr(rho H) with rho_ab = v_a conj(v_b): diagonal c_a |v_a|^2, and
        // 2 (a_ab Re rho_ab + b_ab Im rho_ab) per upper pair.
        std::size_t p = 0;
        for (std::size_t a = 0; a < dim; ++a) {
            total += hp.diag[a] * (re[a] * re[a] + im[a] * im[a]);
            double pairs = 0.0;
            for (std::size_t b = a + 1; b < dim; ++b, ++p) {
                const double rho_re = re[a] * re[b] + im[a] * im[b];
                const double rho_im = im[a] * re[b] - re[a] * im[b];
                pairs += hp.upper_re[p] * rho_re + hp.upper_im[p] * rho_im;
            }
            total += 2.0 * pairs;
        }
    }
    return total;
}

HermitianParams expectation_grad_phi(const DensityMatrix &rho) {
    auto grad = HermitianParams::zeros(rho.num_qubits());
    const std::size_t dim = rho.dim();
    std::size_t p = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        grad.diag[i] = rho(i, i).real();
        for (std::size_t j = i + 1; j < dim; ++j, ++p) {
            grad.upper_re[p] = 2.0 * rho(i, j).real();
            grad.upper_im[p] = 2.0 * rho(i, j).imag();
        }
    }
    return grad;
}

HermitianParams expectation_grad_phi(const StateVector &sv, std::span<const std::size_t> group,
                                     const HermitianParams &hp) {
    if (group.size() != hp.k_local) {
        throw ConfigError("group size does not match observable locality");
    }
    check_shape(hp);
    return expectation_grad_phi(reduced_density(sv, group));
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
    if (a.size() != n * n) {
        throw ConfigError("matrix storage does not match dimension");
    }
    auto at = [&](std::size_t r, std::size_t c) -> double & { return a[r * n + c]; };

    double frob = 0.0;
    for (double v : a) {
        frob += v * v;
    }
    const double threshold = kJacobiTolerance * std::max(1.0, std::sqrt(frob));

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = r + 1; c < n; ++c) {
                s += 2.0 * at(r, c) * at(r, c);
            }
        }
        return std::sqrt(s);
    };

    std::size_t sweep = 0;
    for (; sweep < kMaxJacobiSweeps && off_norm() > threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    if (off_norm() > threshold) {
        throw NumericError("Jacobi eigen-solver did not converge in " +
                           std::to_string(kMaxJacobiSweeps) + " sweeps");
    }

    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) {
        eig[i] = at(i, i);
    }
    std::sort(eig.begin(), eig.end());
    return eig;
}

std::vector<double> spectrum(const HermitianParams &hp) {
    const ComplexMatrix h = materialize(hp);
    const std::size_t dim = h.dim();
    if (dim > 64) {
        throw ConfigError("spectrum supports observables up to 64 x 64");
    }
    const std::size_t n = 2 * dim;
    std::vector<double> embed(n * n);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            const double re = h(r, c).real();
            const double im = h(r, c).imag();
            embed[r * n + c] = re;
            embed[(r + dim) * n + (c + dim)] = re;
            embed[r * n + (c + dim)] = -im;
            embed[(r + dim) * n + c] = im;
        }
    }
    // Each eigenvalue of H appears twice in the embedding.
    const auto doubled = symmetric_eigenvalues(std::move(embed), n);
    std::vector<double> eig(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        eig[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
    }
    return eig;
}

} // namespace anoqrl
