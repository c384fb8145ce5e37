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
#include <functional>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "cohrx/receivers.hpp"

using namespace cohrx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double kennedy_closed_form(double alpha, double beta, double q0) {
    const double d = 2 * alpha - beta;
    return q0 * std::exp(-beta * beta) + (1 - q0) * (1 - std::exp(-d * d));
}

// Real coherent amplitudes by recurrence, independent of the library.
std::vector<double> amplitudes(double a, int d) {
    std::vector<double> c(d);
    c[0] = std::exp(-0.5 * a * a);
    for (int k = 1; k < d; ++k) {
        c[k] = c[k - 1] * a / std::sqrt(static_cast<double>(k));
    }
    return c;
}

// No-click probability of a diagonal-preserving channel acting on |x><x|, probed with |beta>:
// sum_jk c_j(beta) c_k(beta) m_jk c_j(x) c_k(x), with m_jk the channel's scalar on |j><k|.
double diagonal_channel_no_click(double x, double beta,
                                 const std::function<double(int, int)>& m) {
    const int d = 60;
    const auto cx = amplitudes(x, d);
    const auto cb = amplitudes(beta, d);
    double sum = 0.0;
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            sum += cb[j] * cb[k] * m(j, k) * cx[j] * cx[k];
        }
    }
    return sum;
}

double diagonal_channel_success(double alpha, double beta, double q0,
                                const std::function<double(int, int)>& m) {
    return q0 * diagonal_channel_no_click(0.0, beta, m) +
           (1 - q0) * (1 - diagonal_channel_no_click(2 * alpha, beta, m));
}

ReceiverSpec spec(Scheme s, double beta, double g = 1.0, std::size_t n = 2, double r = 0.0,
                  double q0 = 0.5) {
    return ReceiverSpec{s, g, n, beta, r, q0};
}

}  // namespace

TEST(ProbNoClick, Examples) {
    const std::size_t d = 24;
    EXPECT_DOUBLE_EQ(prob_no_click(DensityOperator::vacuum(d), 0.0, 0.0), 1.0);
    EXPECT_NEAR(prob_no_click(DensityOperator::vacuum(d), -0.412, 0.0), std::exp(-0.412 * 0.412),
                1e-14);
    EXPECT_NEAR(prob_no_click(DensityOperator::vacuum(d), -0.412, 0.0), 0.8439, 1e-4);
    const DensityOperator two_alpha = DensityOperator::pure(coherent_state(0.64, d));
    EXPECT_NEAR(prob_no_click(two_alpha, -0.412, 0.0), std::exp(-1.052 * 1.052), 1e-12);
    EXPECT_NEAR(prob_no_click(two_alpha, -0.412, 0.0), 0.3307, 1e-4);
}

TEST(ProbNoClick, SqueezedProbeMatchesDenseRoute) {
    const std::size_t d = 32;
    const DensityOperator rho = DensityOperator::pure(coherent_state(0.5, d));
    for (double r : {-0.7, -0.2, 0.3}) {
        const std::size_t w = 128;
        const FockVector probe =
            squeeze_operator(-r, w) * (displacement_operator(-0.4, w) * fock_state(0, w));
        EXPECT_NEAR(prob_no_click(rho, -0.4, r), expectation(probe.resized(d), rho), 1e-10) << r;
    }
}

TEST(SuccessProbability, KennedyExamples) {
    const double exact_null = success_probability(spec(Scheme::kKennedy, 0.0), 0.32).p_success;
    EXPECT_NEAR(exact_null, 0.5 * (2 - std::exp(-0.4096)), 1e-12);
    EXPECT_NEAR(exact_null, 0.6680, 1e-4);
    const double tuned = success_probability(spec(Scheme::kKennedy, -0.412), 0.32).p_success;
    EXPECT_NEAR(tuned, 0.7566, 1e-4);
    for (double beta : {-1.2, -0.6, -0.412, -0.1, 0.3}) {
        for (double q0 : {0.5, 0.7, 0.95}) {
            const auto res =
                success_probability(spec(Scheme::kKennedy, beta, 1.0, 2, 0.0, q0), 0.32);
            EXPECT_NEAR(res.p_success, kennedy_closed_form(0.32, beta, q0), 1e-12);
            EXPECT_NEAR(res.p_success,
                        q0 * res.p_no_click_h0 + (1 - q0) * (1 - res.p_no_click_h1), 1e-15);
        }
    }
}

TEST(SuccessProbability, UnitGainEqualsKennedyBitForBit) {
    for (double alpha : {0.1, 0.32, 0.8}) {
        for (double beta : {-0.9, -0.45, 0.0, 0.2}) {
            for (std::size_t n : {1u, 2u, 3u}) {
                EXPECT_EQ(success_probability(spec(Scheme::kNhpamp, beta, 1.0, n), alpha).p_success,
                          success_probability(spec(Scheme::kKennedy, beta), alpha).p_success);
            }
        }
    }
}

TEST(SuccessProbability, NhpampMatchesScalarOracle) {
    for (double g : {3.0, 31.0}) {
        for (std::size_t n : {1u, 2u, 3u}) {
            auto s = [&](int k) { return k <= static_cast<int>(n) ? std::pow(g, k - static_cast<int>(n)) : 1.0; };
            auto f = [&](int k) { return std::sqrt(1 - s(k) * s(k)); };
            auto m = [&](int j, int k) { return s(j) * s(k) + f(j) * f(k); };
            for (double beta : {-0.6, -0.45, 0.1}) {
                const double p =
                    success_probability(spec(Scheme::kNhpamp, beta, g, n), 0.32).p_success;
                EXPECT_NEAR(p, diagonal_channel_success(0.32, beta, 0.5, m), 1e-12)
                    << g << " " << n << " " << beta;
            }
        }
    }
}

TEST(SuccessProbability, InfgainAndDephaserMatchScalarOracles) {
    const int n = 2;
    auto inf = [&](int j, int k) { return (j >= n) == (k >= n) ? 1.0 : 0.0; };
    auto deph = [&](int j, int k) { return j == k || std::max(j, k) < n ? 1.0 : 0.0; };
    for (double alpha : {0.2, 0.5}) {
        for (double beta : {-0.7, -0.3}) {
            EXPECT_NEAR(success_probability(spec(Scheme::kInfgain, beta), alpha).p_success,
                        diagonal_channel_success(alpha, beta, 0.5, inf), 1e-12);
            EXPECT_NEAR(success_probability(spec(Scheme::kNhpamp, beta, kInf), alpha).p_success,
                        diagonal_channel_success(alpha, beta, 0.5, inf), 1e-12);
            EXPECT_NEAR(success_probability(spec(Scheme::kDephaser, beta), alpha).p_success,
                        diagonal_channel_success(alpha, beta, 0.5, deph), 1e-12);
        }
    }
}

TEST(SuccessProbability, CutoffDoublingIsStable) {
    CutoffPolicy wide;
    wide.guard_factor = 4.0;
    for (Scheme s : {Scheme::kKennedy, Scheme::kNhpamp, Scheme::kDephaser, Scheme::kCavity,
                     Scheme::kTsInfgain}) {
        const double r = is_squeezed(s) ? -0.4 : 0.0;
        const ReceiverSpec sp = spec(s, -0.45, s == Scheme::kNhpamp ? 31.0 : 1.0, 2, r);
        EXPECT_NEAR(success_probability(sp, 0.6).p_success,
                    success_probability(sp, 0.6, wide).p_success, 1e-9)
            << to_string(s);
    }
}

TEST(SuccessProbability, RealDisplacementIsOptimal) {
    // 2-D search over complex beta does not beat the real-axis optimum.
    for (double alpha : {0.2, 0.32, 0.6}) {
        const ReceiverModel model(Scheme::kNhpamp, alpha, {31.0, 2});
        const auto& b = model.branches();
        const std::size_t d = b.favored.cutoff();
        auto p = [&](double re, double im) {
            const FockVector probe = coherent_state(Complex(re, im), d);
            return 0.5 * expectation(probe, b.favored) + 0.5 * (1 - expectation(probe, b.other));
        };
        const double bound = 3 * alpha + 1;
        const Optimum2D complex_opt = maximize_2d(p, {{{-bound, bound}, {-bound, bound}}});
        const ReceiverOptimum real_opt = optimize_receiver(model, 0.5);
        EXPECT_LE(complex_opt.value, real_opt.p + 1e-9) << alpha;
        EXPECT_NEAR(complex_opt.x[1], 0.0, 1e-4) << alpha;
    }
}

TEST(Helstrom, Examples) {
    EXPECT_DOUBLE_EQ(helstrom_success(0.0, 0.5), 0.5);
    EXPECT_DOUBLE_EQ(helstrom_success(0.7, 1.0), 1.0);
    EXPECT_NEAR(helstrom_success(0.32, 0.5), 0.5 * (1 + std::sqrt(1 - std::exp(-4 * 0.1024))),
                1e-15);
    EXPECT_NEAR(helstrom_success(0.32, 0.5), 0.7899, 1e-4);
}

TEST(Helstrom, DominatesEveryReceiver) {
    const std::vector<ReceiverSpec> specs = {
        spec(Scheme::kKennedy, -0.4),           spec(Scheme::kNhpamp, -0.45, 31.0),
        spec(Scheme::kNhpamp, -0.2, 3.0, 1),    spec(Scheme::kInfgain, -0.5, 1.0, 3),
        spec(Scheme::kDephaser, -0.45),         spec(Scheme::kCavity, -0.45),
        spec(Scheme::kTsKennedy, -0.4, 1.0, 2, -0.3),
        spec(Scheme::kTsInfgain, -0.5, 1.0, 3, -0.5),
        spec(Scheme::kTsNhpamp, -0.45, 20.0, 2, 0.2, 0.8),
    };
    for (const auto& sp : specs) {
        for (double alpha = 0.05; alpha <= 1.0001; alpha += 0.19) {
            EXPECT_LE(success_probability(sp, alpha).p_success,
                      helstrom_success(alpha, sp.q0) + 1e-9)
                << to_string(sp.scheme) << " alpha=" << alpha;
        }
    }
}

TEST(OptimizedKennedy, Examples) {
    const KennedyOptimum k = optimized_kennedy(0.32, 0.5);
    EXPECT_NEAR(std::abs(k.beta), 0.412, 0.005);
    EXPECT_NEAR(k.p, kennedy_closed_form(0.32, k.beta, 0.5), 1e-12);
    EXPECT_NEAR(optimized_kennedy(0.0, 0.5).p, 0.5, 1e-12);
    EXPECT_NEAR(optimized_kennedy(0.0, 0.8).p, 0.8, 1e-12);
    EXPECT_GT(optimized_kennedy(2.0, 0.5).p, 1 - 1e-4);
}

TEST(OptimizeReceiver, MonotoneInAlpha) {
    for (Scheme s : {Scheme::kKennedy, Scheme::kInfgain}) {
        double last = 0.0;
        for (int i = 0; i <= 20; ++i) {
            const double alpha = 0.05 * i;
            const double p = optimize_receiver(s, alpha, 0.5, {}).p;
            EXPECT_GE(p, last - 1e-12) << to_string(s) << " alpha=" << alpha;
            EXPECT_LE(p, 1.0);
            last = p;
        }
    }
}

TEST(OptimizeReceiver, SingleLevelAmplifierDoesNotHelp) {
    const double kennedy = optimized_kennedy(0.32, 0.5).p;
    ReceiverSearch negative;
    negative.beta_bounds = Interval{-(3 * 0.32 + 1), 0.0};
    for (double g : {1.0, 2.0, 5.0, 31.0, 100.0}) {
        const double p = optimize_receiver(Scheme::kNhpamp, 0.32, 0.5, {g, 1}, negative).p;
        EXPECT_LE(p, kennedy + 1e-9) << g;
    }
    EXPECT_NEAR(optimize_receiver(Scheme::kNhpamp, 0.32, 0.5, {1.0, 1}, negative).p, kennedy,
                1e-12);
}

TEST(OptimizeReceiver, InfiniteGainBetaWindow) {
    const ReceiverOptimum opt = optimize_receiver(Scheme::kInfgain, 0.32, 0.5, {1.0, 2});
    EXPECT_GE(opt.beta, -0.47);
    EXPECT_LE(opt.beta, -0.43);
    EXPECT_EQ(opt.r, 0.0);
}

TEST(OptimizeReceiver, SqueezedThreeLevelPrefersNegativeR) {
    const ReceiverOptimum opt =
        optimize_receiver(Scheme::kTsInfgain, std::sqrt(0.2), 0.5, {1.0, 3});
    EXPECT_LT(opt.r, 0.0);
    EXPECT_GE(opt.r, -1.5);
    const double unsqueezed = optimize_receiver(Scheme::kInfgain, std::sqrt(0.2), 0.5, {1.0, 3}).p;
    EXPECT_GT(opt.p, unsqueezed);
}

TEST(OptimizeReceiver, UnequalPriorsAndDeterminism) {
    const ReceiverOptimum a = optimize_receiver(Scheme::kDephaser, 0.4, 0.75, {1.0, 2});
    const ReceiverOptimum b = optimize_receiver(Scheme::kDephaser, 0.4, 0.75, {1.0, 2});
    EXPECT_EQ(a.beta, b.beta);
    EXPECT_EQ(a.p, b.p);
    EXPECT_GE(a.p, 0.75);
    EXPECT_LE(a.p, helstrom_success(0.4, 0.75) + 1e-9);
}

TEST(Appendix, AmplifierAtZeroDisplacementNeverBeatsKennedy) {
    EXPECT_TRUE(appendix_a_check(0.32, 3.0, 2));
    EXPECT_TRUE(appendix_a_check(0.32, 1.0, 2));
    for (double alpha : {0.1, 0.5, 1.0}) {
        for (double g : {1.0, 3.0, 31.0, kInf}) {
            for (std::size_t n : {1u, 2u, 3u}) {
                EXPECT_GE(appendix_a_margin(alpha, g, n), -1e-9) << alpha << " " << g << " " << n;
            }
        }
    }
}

TEST(Appendix, GaussianChannelsScaleTheGap) {
    const GaussianChannelGaps gaps = gaussian_channel_gaps(0.32, 1.5, 0.8);
    EXPECT_NEAR(gaps.with_channel, gaps.predicted, 1e-6);
    EXPECT_LE(gaps.with_channel, gaps.bare + 1e-12);
    // bare gap: max over beta of exp(-beta^2) - exp(-(2a - beta)^2), by fine scan
    double best = -1.0;
    for (int i = 0; i <= 20000; ++i) {
        const double beta = -2.0 + 4.0 * i / 20000;
        best = std::max(best, std::exp(-beta * beta) - std::exp(-(0.64 - beta) * (0.64 - beta)));
    }
    EXPECT_NEAR(gaps.bare, best, 1e-8);
}

TEST(DephaserVsInfgain, CloseAtEveryAlpha) {
    for (double a2 : {0.01, 0.1, 0.3, 0.6, 1.0}) {
        const double alpha = std::sqrt(a2);
        const double pd = optimize_receiver(Scheme::kDephaser, alpha, 0.5, {1.0, 2}).p;
        const double pi = optimize_receiver(Scheme::kInfgain, alpha, 0.5, {1.0, 2}).p;
        EXPECT_LE(std::abs(pd - pi), 5e-4) << a2;
    }
}

TEST(ReceiverSpec, Validation) {
    EXPECT_THROW(spec(Scheme::kKennedy, 0.0, 1.0, 2, 0.0, 0.4).validate(), std::invalid_argument);
    EXPECT_THROW(spec(Scheme::kKennedy, NAN).validate(), std::invalid_argument);
    EXPECT_THROW(spec(Scheme::kNhpamp, 0.0, 0.5).validate(), std::invalid_argument);
    EXPECT_THROW(spec(Scheme::kKennedy, 0.0, 1.0, 2, 0.3).validate(), std::invalid_argument);
    EXPECT_THROW(spec(Scheme::kTsKennedy, 0.0, 1.0, 2, 2.5).validate(), std::invalid_argument);
    EXPECT_THROW(spec(Scheme::kDephaser, 0.0, 1.0, 0).validate(), std::invalid_argument);
    EXPECT_NO_THROW(spec(Scheme::kNhpamp, 0.0, kInf).validate());
    EXPECT_THROW(success_probability(spec(Scheme::kKennedy, 0.0), -0.1), std::invalid_argument);
    EXPECT_THROW(optimize_gain(Scheme::kKennedy, 0.3, 0.5, 2), std::invalid_argument);
}

TEST(SchemeNames, RoundTrip) {
    for (Scheme s : {Scheme::kKennedy, Scheme::kNhpamp, Scheme::kInfgain, Scheme::kDephaser,
                     Scheme::kCavity, Scheme::kTsKennedy, Scheme::kTsNhpamp, Scheme::kTsInfgain}) {
        EXPECT_EQ(parse_scheme(to_string(s)), s);
    }
    EXPECT_FALSE(parse_scheme("dolinar").has_value());
}
