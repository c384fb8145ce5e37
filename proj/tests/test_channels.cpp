// Copyright 2026 The cohrx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cohrx/channels.hpp"

using namespace cohrx;

namespace {

DensityOperator coherent(Complex a, std::size_t d) {
    return DensityOperator::pure(coherent_state(a, d));
}

// Random full-rank density operator supported on the first `support` levels.
DensityOperator random_state(std::size_t support, std::size_t d, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix g = CMatrix::Zero(support, support);
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            g(i, j) = Complex(n(rng), n(rng));
        }
    }
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    CMatrix full = CMatrix::Zero(d, d);
    full.topLeftCorner(support, support) = rho;
    return DensityOperator(full);
}

CMatrix dense_apply(const QuantumChannel& ch, const DensityOperator& rho) {
    CMatrix out = CMatrix::Zero(rho.cutoff(), rho.cutoff());
    for (const auto& k : ch.kraus()) {
        out += k.matrix() * rho.matrix() * k.matrix().adjoint();
    }
    return out;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

double trace_distance(const CMatrix& a, const CMatrix& b) {
    const CMatrix diff = a - b;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (diff + diff.adjoint()));
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

TEST(Nhpamp, KrausDiagonals) {
    const QuantumChannel ch = nhpamp_channel(2.0, 2, 8);
    ASSERT_EQ(ch.kraus().size(), 2u);
    const CMatrix& ms = ch.kraus()[0].matrix();
    const CMatrix& mf = ch.kraus()[1].matrix();
    const double s[] = {0.25, 0.5, 1.0, 1.0, 1.0};
    for (int k = 0; k < 5; ++k) {
        EXPECT_DOUBLE_EQ(ms(k, k).real(), s[k]);
        EXPECT_NEAR(mf(k, k).real(), std::sqrt(1.0 - s[k] * s[k]), 1e-15);
    }
    EXPECT_TRUE(ch.is_diagonal());
}

TEST(Nhpamp, ExactCompleteness) {
    for (double g : {1.0, 1.5, 3.0, 31.0, 500.0}) {
        for (std::size_t n : {0u, 1u, 2u, 3u, 6u}) {
            EXPECT_LT(nhpamp_channel(g, n, 12).completeness_defect(), 1e-12) << g << " " << n;
        }
    }
}

TEST(Nhpamp, UnitGainIsIdentity) {
    const DensityOperator rho = random_state(6, 10, 1);
    const DensityOperator out = apply(nhpamp_channel(1.0, 3, 10), rho);
    EXPECT_LT(max_abs(out.matrix() - rho.matrix()), 1e-15);
}

TEST(Nhpamp, VacuumFixedAndTracePreserved) {
    for (double g : {1.2, 3.0, 31.0}) {
        for (std::size_t n : {1u, 2u, 3u}) {
            const QuantumChannel ch = nhpamp_channel(g, n, 16);
            const DensityOperator vac = apply(ch, DensityOperator::vacuum(16));
            EXPECT_LT(max_abs(vac.matrix() - DensityOperator::vacuum(16).matrix()), 1e-15);
            const DensityOperator out = apply(ch, coherent(0.9, 16));
            EXPECT_NEAR(out.trace(), coherent(0.9, 16).trace(), 1e-10);
        }
    }
}

TEST(Nhpamp, ActsOnMatrixUnitsByScalars) {
    // diag-preserving: Phi(|j><k|) = (s_j s_k + f_j f_k) |j><k|
    const std::size_t d = 7;
    const QuantumChannel ch = nhpamp_channel(3.0, 2, d);
    auto s = [](int k) { return k <= 2 ? std::pow(3.0, k - 2) : 1.0; };
    auto f = [&](int k) { return std::sqrt(1.0 - s(k) * s(k)); };
    for (int j = 0; j < static_cast<int>(d); ++j) {
        for (int k = 0; k < static_cast<int>(d); ++k) {
            CMatrix unit = CMatrix::Zero(d, d);
            unit(j, k) = 1.0;
            const CMatrix out = apply(ch, DensityOperator(unit)).matrix();
            CMatrix expected = CMatrix::Zero(d, d);
            expected(j, k) = s(j) * s(k) + f(j) * f(k);
            EXPECT_LT(max_abs(out - expected), 1e-15) << j << "," << k;
        }
    }
}

TEST(Nhpamp, CommutesWithDephasing) {
    const std::size_t d = 10;
    const DensityOperator rho = random_state(8, d, 3);
    const QuantumChannel amp = nhpamp_channel(5.0, 3, d);
    const QuantumChannel deph = dephaser_channel(1, d);
    const CMatrix ab = apply(amp, apply(deph, rho)).matrix();
    const CMatrix ba = apply(deph, apply(amp, rho)).matrix();
    EXPECT_LT(max_abs(ab - ba), 1e-14);
}

TEST(Nhpamp, Errors) {
    EXPECT_THROW(nhpamp_channel(0.5, 2, 8), std::invalid_argument);
    EXPECT_THROW(nhpamp_channel(INFINITY, 2, 8), std::invalid_argument);
    EXPECT_THROW(nhpamp_channel(2.0, 8, 8), std::invalid_argument);
}

TEST(Infgain, ProjectorsAndLimit) {
    const std::size_t d = 20;
    const QuantumChannel inf = infgain_channel(2, d);
    EXPECT_LT(inf.completeness_defect(), 1e-15);
    EXPECT_LT(max_abs(apply(inf, DensityOperator::vacuum(d)).matrix() -
                      DensityOperator::vacuum(d).matrix()),
              1e-15);
    const DensityOperator rho = coherent(0.64, d);
    const CMatrix big = apply(nhpamp_channel(1e4, 2, d), rho).matrix();
    const CMatrix lim = apply(inf, rho).matrix();
    EXPECT_LT(max_abs(big - lim), 1e-3);
    EXPECT_EQ(lim(1, 2), Complex(0.0));
    EXPECT_NE(lim(0, 1), Complex(0.0));
    EXPECT_THROW(infgain_channel(20, d), std::invalid_argument);
}

TEST(Dephaser, ElementsByHand) {
    const std::size_t d = 16;
    const Complex a(0.5, 0.2);
    const CMatrix out = apply(dephaser_channel(2, d), coherent(a, d)).matrix();
    EXPECT_LT(std::abs(out(0, 1) - std::exp(-std::norm(a)) * std::conj(a)), 1e-15);
    EXPECT_EQ(out(1, 2), Complex(0.0));
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j) {
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(d); ++k) {
            if (j != k && std::max(j, k) >= 2) {
                EXPECT_EQ(out(j, k), Complex(0.0));
            }
        }
    }
    EXPECT_LT(max_abs(apply(dephaser_channel(2, d), DensityOperator::vacuum(d)).matrix() -
                      DensityOperator::vacuum(d).matrix()),
              1e-15);
    EXPECT_THROW(dephaser_channel(0, d), std::invalid_argument);
}

TEST(Dephaser, Idempotent) {
    const std::size_t d = 6;
    const QuantumChannel ch = dephaser_channel(2, d);
    EXPECT_LT(ch.completeness_defect(), 1e-15);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            CMatrix unit = CMatrix::Zero(d, d);
            unit(j, k) = 1.0;
            const DensityOperator once = apply(ch, DensityOperator(unit));
            const DensityOperator twice = apply(ch, once);
            EXPECT_LT(max_abs(once.matrix() - twice.matrix()), 1e-15);
        }
    }
}

TEST(Attenuator, CoherentStatesAttenuate) {
    const std::size_t d = 30;
    const DensityOperator out = apply(attenuator_channel(0.5, d), coherent(0.8, d));
    EXPECT_LT(trace_distance(out.matrix(), coherent(0.8 / std::sqrt(2.0), d).matrix()), 1e-9);
    const DensityOperator one = apply(attenuator_channel(1.0, d), coherent(0.8, d));
    EXPECT_LT(max_abs(one.matrix() - coherent(0.8, d).matrix()), 1e-14);
    for (double eta : {0.1, 0.5, 0.93}) {
        const QuantumChannel ch = attenuator_channel(eta, d);
        EXPECT_LT(ch.completeness_defect(), 1e-12);
        EXPECT_LT(max_abs(apply(ch, DensityOperator::vacuum(d)).matrix() -
                          DensityOperator::vacuum(d).matrix()),
                  1e-15);
    }
    EXPECT_THROW(attenuator_channel(0.0, d), std::invalid_argument);
    EXPECT_THROW(attenuator_channel(1.2, d), std::invalid_argument);
}

TEST(Amplifier, VacuumNoiseAndBulkCompleteness) {
    const std::size_t d = 64;
    const QuantumChannel ch = amplifier_channel(2.0, d);
    EXPECT_NEAR(apply(ch, DensityOperator::vacuum(d)).mean_photon_number(), 1.0, 1e-6);
    EXPECT_LT(ch.completeness_defect(8), 1e-9);
    const DensityOperator id = apply(amplifier_channel(1.0, 12), coherent(0.5, 12));
    EXPECT_LT(max_abs(id.matrix() - coherent(0.5, 12).matrix()), 1e-14);
    EXPECT_THROW(amplifier_channel(0.9, d), std::invalid_argument);
}

TEST(Amplifier, DualIsScaledAttenuator) {
    // <b| A_k(rho) |b> = k^-1 Tr[E_{1/k}(|b><b|) rho]
    const std::size_t d = 64;
    const double k = 1.5;
    const QuantumChannel amp = amplifier_channel(k, d);
    const QuantumChannel att = attenuator_channel(1.0 / k, d);
    for (unsigned seed : {11u, 12u, 13u}) {
        const DensityOperator rho = random_state(4, d, seed);
        const DensityOperator out = apply(amp, rho);
        for (double b : {-0.7, 0.0, 0.4, 1.1}) {
            const double lhs = expectation(coherent_state(b, d), out);
            const CMatrix dual = apply(att, coherent(b, d)).matrix();
            const double rhs = (dual * rho.matrix()).trace().real() / k;
            EXPECT_NEAR(lhs, rhs, 1e-8) << seed << " " << b;
        }
    }
}

TEST(Apply, MatchesDenseKrausSum) {
    const std::size_t d = 14;
    const DensityOperator rho = random_state(9, d, 5);
    const QuantumChannel channels[] = {
        identity_channel(d),   nhpamp_channel(3.0, 2, d), infgain_channel(3, d),
        dephaser_channel(2, d), attenuator_channel(0.6, d), amplifier_channel(1.3, d),
    };
    for (const auto& ch : channels) {
        const DensityOperator out = apply(ch, rho);
        EXPECT_LT(max_abs(out.matrix() - dense_apply(ch, rho)), 1e-13) << ch.label();
        EXPECT_LT(out.hermiticity_defect(), 1e-12) << ch.label();
        EXPECT_GT(out.min_eigenvalue(), -1e-10) << ch.label();
    }
    // A Kraus set without single-diagonal structure takes the general path.
    CMatrix u = expm(Complex(0.0, 0.3) * (annihilation(d) + annihilation(d).adjoint()));
    const QuantumChannel rot({FockOperator(u)}, "rotation");
    EXPECT_FALSE(rot.is_shift_structured());
    EXPECT_LT(max_abs(apply(rot, rho).matrix() - dense_apply(rot, rho)), 1e-13);
    EXPECT_THROW(apply(identity_channel(d + 1), rho), std::invalid_argument);
}
