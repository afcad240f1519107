#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "anoqrl/errors.hpp"
#include "anoqrl/grad.hpp"
#include "anoqrl/observable.hpp"
#include "anoqrl/qstate.hpp"
#include "anoqrl/rng.hpp"
#include "dense_oracle.hpp"

using namespace anoqrl;

namespace {

HermitianParams pauli_z() {
    auto hp = HermitianParams::zeros(1);
    hp.diag = {1.0, -1.0};
    return hp;
}

HermitianParams wide_random(std::size_t k, Rng &rng, double scale = 2.0) {
    auto hp = HermitianParams::zeros(k);
    for (auto *part : {&hp.diag, &hp.upper_re, &hp.upper_im}) {
        for (auto &v : *part) {
            v = rng.uniform(-scale, scale);
        }
    }
    return hp;
}

StateVector random_state(std::size_t n, Rng &rng) {
    std::vector<Complex> a(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &v : a) {
        v = {rng.normal(0, 1), rng.normal(0, 1)};
        norm += std::norm(v);
    }
    for (auto &v : a) {
        v /= std::sqrt(norm);
    }
    return StateVector::from_amplitudes(std::move(a));
}

} // namespace

TEST(BuildGroups, FourQubitsThreeLocal) {
    const auto s = build_groups(4, 3);
    const std::vector<std::vector<std::size_t>> want{{0, 1, 2}, {1, 2, 3}, {2, 3, 0}, {3, 0, 1}};
    EXPECT_EQ(s.groups, want);
}

TEST(BuildGroups, SingleQubitWindows) {
    const auto s = build_groups(4, 1);
    const std::vector<std::vector<std::size_t>> want{{0}, {1}, {2}, {3}};
    EXPECT_EQ(s.groups, want);
}

TEST(BuildGroups, FullRegisterRotations) {
    const auto s = build_groups(6, 6);
    ASSERT_EQ(s.groups.size(), 6u);
    for (std::size_t g = 0; g < 6; ++g) {
        for (std::size_t j = 0; j < 6; ++j) {
            EXPECT_EQ(s.groups[g][j], (g + j) % 6);
        }
    }
}

TEST(BuildGroups, LocalityAboveQubitsIsConfigError) {
    try {
        (void)build_groups(4, 6);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string{e.what()}.find("locality exceeds qubit count"), std::string::npos);
    }
}

TEST(HermitianParams, ParameterCountIsKSquared) {
    for (std::size_t k = 1; k <= 4; ++k) {
        const auto hp = HermitianParams::zeros(k);
        const std::size_t K = std::size_t{1} << k;
        EXPECT_EQ(hp.param_count(), K * K);
        EXPECT_EQ(hp.flatten().size(), K * K);
    }
}

TEST(HermitianParams, FlattenAssignRoundTrip) {
    Rng rng{1};
    const auto hp = wide_random(2, rng);
    auto other = HermitianParams::zeros(2);
    other.assign(hp.flatten());
    EXPECT_EQ(other.diag, hp.diag);
    EXPECT_EQ(other.upper_re, hp.upper_re);
    EXPECT_EQ(other.upper_im, hp.upper_im);
}

TEST(Materialize, PauliMatrices) {
    const auto z = materialize(pauli_z());
    EXPECT_EQ(z(0, 0), Complex(1, 0));
    EXPECT_EQ(z(1, 1), Complex(-1, 0));
    EXPECT_EQ(z(0, 1), Complex(0, 0));

    auto hx = HermitianParams::zeros(1);
    hx.upper_re = {1.0};
    const auto x = materialize(hx);
    EXPECT_EQ(x(0, 1), Complex(1, 0));
    EXPECT_EQ(x(1, 0), Complex(1, 0));

    auto hy = HermitianParams::zeros(1);
    hy.upper_im = {1.0};
    const auto y = materialize(hy);
    // [[0, i], [-i, 0]] is minus Pauli Y.
    EXPECT_EQ(y(0, 1), Complex(0, 1));
    EXPECT_EQ(y(1, 0), Complex(0, -1));
}

TEST(Materialize, ExactlyHermitianAndMatchesOracle) {
    Rng rng{2};
    for (std::size_t k = 1; k <= 3; ++k) {
        const auto hp = wide_random(k, rng);
        const auto m = materialize(hp);
        const auto ref = oracle::hermitian(hp);
        for (std::size_t r = 0; r < m.dim(); ++r) {
            for (std::size_t c = 0; c < m.dim(); ++c) {
                EXPECT_EQ(m(r, c), std::conj(m(c, r)));
                EXPECT_EQ(m(r, c), ref(r, c));
            }
        }
    }
}

TEST(Materialize, FromMatrixInverts) {
    Rng rng{3};
    const auto hp = wide_random(2, rng);
    const auto back = HermitianParams::from_matrix(materialize(hp));
    EXPECT_EQ(back.flatten(), hp.flatten());
}

TEST(Expectation, PauliZOnZeroAndBell) {
    StateVector zero{1};
    const std::size_t g0[] = {0};
    EXPECT_NEAR(expectation(zero, g0, pauli_z()), 1.0, 1e-14);

    StateVector bell{2};
    bell.apply_hadamard(0);
    bell.apply_cnot(0, 1);
    EXPECT_NEAR(expectation(bell, g0, pauli_z()), 0.0, 1e-14);
}

TEST(Expectation, MatchesKroneckerEmbeddingForEveryGroupPosition) {
    Rng rng{4};
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t k = 1; k <= n; ++k) {
            const auto scheme = build_groups(n, k);
            for (const auto &group : scheme.groups) {
                const auto sv = random_state(n, rng);
                const auto hp = wide_random(k, rng);
                const std::vector<oracle::C> psi(sv.amplitudes().begin(), sv.amplitudes().end());
                double imag = 1.0;
                const double want =
                    oracle::expect(oracle::embed_group(n, group, oracle::hermitian(hp)), psi, &imag);
                EXPECT_NEAR(imag, 0.0, 1e-10);
                EXPECT_NEAR(expectation(sv, group, hp), want, 1e-10)
                    << "n=" << n << " k=" << k << " group start " << group[0];
            }
        }
    }
}

TEST(Expectation, ShapeMismatchIsConfigError) {
    StateVector sv{3};
    const std::size_t g[] = {0, 1};
    EXPECT_THROW((void)expectation(sv, g, HermitianParams::zeros(3)), ConfigError);
}

TEST(ExpectationGradPhi, ZeroStateDiagonal) {
    StateVector sv{1};
    const std::size_t g[] = {0};
    const auto d = expectation_grad_phi(sv, g, pauli_z());
    EXPECT_DOUBLE_EQ(d.diag[0], 1.0);
    EXPECT_DOUBLE_EQ(d.diag[1], 0.0);
}

TEST(ExpectationGradPhi, PlusStateOffDiagonal) {
    StateVector sv{1};
    sv.apply_hadamard(0);
    const std::size_t g[] = {0};
    auto hp = HermitianParams::zeros(1);
    const auto d = expectation_grad_phi(sv, g, hp);
    EXPECT_NEAR(d.upper_re[0], 1.0, 1e-14);
    EXPECT_NEAR(d.upper_im[0], 0.0, 1e-14);

    // Central difference with step 1e-6.
    auto f = [&](std::span<const double> flat) {
        auto h = HermitianParams::zeros(1);
        h.assign(flat);
        return expectation(sv, g, h);
    };
    const auto fd = central_difference(f, hp.flatten(), 1e-6);
    EXPECT_NEAR(fd[2], 1.0, 1e-6);
    EXPECT_NEAR(fd[3], 0.0, 1e-6);
}

TEST(ExpectationGradPhi, MatchesFiniteDifferenceAndIgnoresPhi) {
    Rng rng{5};
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + rng.index(4);
        const std::size_t k = 1 + rng.index(n);
        const auto group = build_groups(n, k).groups[rng.index(n)];
        const auto sv = random_state(n, rng);
        const auto hp = wide_random(k, rng);
        const auto grad = expectation_grad_phi(sv, group, hp).flatten();
        auto f = [&](std::span<const double> flat) {
            auto h = HermitianParams::zeros(k);
            h.assign(flat);
            return expectation(sv, group, h);
        };
        const auto fd = central_difference(f, hp.flatten(), 1e-5);
        for (std::size_t i = 0; i < grad.size(); ++i) {
            EXPECT_NEAR(grad[i], fd[i], 1e-6);
        }
        const auto other = expectation_grad_phi(sv, group, wide_random(k, rng)).flatten();
        for (std::size_t i = 0; i < grad.size(); ++i) {
            EXPECT_NEAR(grad[i], other[i], 1e-10);
        }
    }
}

TEST(Spectrum, ClosedForms) {
    const auto z = spectrum(pauli_z());
    EXPECT_NEAR(z[0], -1.0, 1e-12);
    EXPECT_NEAR(z[1], 1.0, 1e-12);

    auto diag = HermitianParams::zeros(1);
    diag.diag = {7.0, 3.0};
    const auto d = spectrum(diag);
    EXPECT_NEAR(d[0], 3.0, 1e-12);
    EXPECT_NEAR(d[1], 7.0, 1e-12);

    auto off = HermitianParams::zeros(1);
    off.upper_re = {3.0};
    off.upper_im = {4.0};
    const auto o = spectrum(off);
    EXPECT_NEAR(o[0], -5.0, 1e-10);
    EXPECT_NEAR(o[1], 5.0, 1e-10);
}

TEST(Spectrum, TraceAndFrobeniusInvariants) {
    Rng rng{6};
    for (std::size_t k = 1; k <= 6; ++k) {
        const auto hp = wide_random(k, rng);
        const auto ev = spectrum(hp);
        ASSERT_EQ(ev.size(), hp.dim());
        EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end()));
        double tr = 0.0;
        double fro = 0.0;
        const auto m = materialize(hp);
        for (std::size_t r = 0; r < m.dim(); ++r) {
            tr += m(r, r).real();
            for (std::size_t c = 0; c < m.dim(); ++c) {
                fro += std::norm(m(r, c));
            }
        }
        double ev_sum = 0.0;
        double ev_sq = 0.0;
        for (double e : ev) {
            ev_sum += e;
            ev_sq += e * e;
        }
        EXPECT_NEAR(ev_sum, tr, 1e-8 * std::max(1.0, std::abs(tr)));
        EXPECT_NEAR(ev_sq, fro, 1e-8 * fro);
    }
}

TEST(Spectrum, EigenvaluesAnnihilateCharacteristicMatrix) {
    // For a 2x2 Hermitian block the eigenvalues are (a+d)/2 +- sqrt(((a-d)/2)^2 + |b|^2).
    Rng rng{7};
    for (int trial = 0; trial < 20; ++trial) {
        const auto hp = wide_random(1, rng, 5.0);
        const double a = hp.diag[0];
        const double d = hp.diag[1];
        const double b2 = hp.upper_re[0] * hp.upper_re[0] + hp.upper_im[0] * hp.upper_im[0];
        const double mid = 0.5 * (a + d);
        const double rad = std::sqrt(0.25 * (a - d) * (a - d) + b2);
        const auto ev = spectrum(hp);
        EXPECT_NEAR(ev[0], mid - rad, 1e-10);
        EXPECT_NEAR(ev[1], mid + rad, 1e-10);
    }
}

TEST(Rayleigh, ExpectationWithinSpectrum) {
    Rng rng{8};
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = 1 + rng.index(3);
        const std::size_t n = k + rng.index(5 - k);
        const auto sv = random_state(n, rng);
        const auto hp = wide_random(k, rng);
        const auto group = build_groups(n, k).groups[rng.index(n)];
        const auto ev = spectrum(hp);
        const double e = expectation(sv, group, hp);
        EXPECT_GE(e, ev.front() - 1e-8);
        EXPECT_LE(e, ev.back() + 1e-8);
    }
}

TEST(Rayleigh, WideSpectrumEscapesPauliRange) {
    auto hp = HermitianParams::zeros(1);
    hp.diag = {-10.0, 10.0};
    StateVector zero{1};
    StateVector one{1};
    one.apply_rotation(0, Axis::X, 3.14159265358979323846);
    const std::size_t g[] = {0};
    EXPECT_NEAR(expectation(zero, g, hp), -10.0, 1e-12);
    EXPECT_NEAR(expectation(one, g, hp), 10.0, 1e-12);
    EXPECT_NEAR(expectation(zero, g, pauli_z()), 1.0, 1e-12);
}

TEST(AnoObservable, RandomInitialisationStatistics) {
    Rng rng{9};
    std::vector<double> diag;
    std::vector<double> off;
    for (int i = 0; i < 400; ++i) {
        const auto hp = HermitianParams::random(2, rng);
        diag.insert(diag.end(), hp.diag.begin(), hp.diag.end());
        off.insert(off.end(), hp.upper_re.begin(), hp.upper_re.end());
        off.insert(off.end(), hp.upper_im.begin(), hp.upper_im.end());
    }
    auto sd = [](const std::vector<double> &v) {
        double m = 0.0;
        for (double x : v) {
            m += x;
        }
        m /= static_cast<double>(v.size());
        double s = 0.0;
        for (double x : v) {
            s += (x - m) * (x - m);
        }
        return std::sqrt(s / static_cast<double>(v.size() - 1));
    };
    EXPECT_NEAR(sd(diag), 0.1, 0.01);
    EXPECT_NEAR(sd(off), 0.05, 0.005);
}

TEST(AnoObservable, GroupsAreIndependent) {
    Rng rng{10};
    const auto ano = AnoObservable::random(4, 3, rng);
    ASSERT_EQ(ano.per_group.size(), 4u);
    EXPECT_NE(ano.per_group[0].flatten(), ano.per_group[1].flatten());
    EXPECT_NO_THROW(ano.validate());
}
