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

#pragma once

// Binary discrimination of |-alpha> (prior q0, favored) and |+alpha>. Every receiver
// displaces by +alpha so the favored state becomes the vacuum and the other |2 alpha>,
// applies its channel, projects on the displaced(-squeezed) vacuum |beta, -r>, and reads
// "no click" as the favored hypothesis.

#include <cstddef>
#include <optional>
#include <string_view>

#include "cohrx/cavity.hpp"
#include "cohrx/channels.hpp"
#include "cohrx/fock.hpp"
#include "cohrx/optimizer.hpp"

namespace cohrx {

enum class Scheme {
    kKennedy,
    kNhpamp,
    kInfgain,
    kDephaser,
    kCavity,
    kTsKennedy,
    kTsNhpamp,
    kTsInfgain,
};

std::string_view to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);

/// Squeezing before the final displacement.
bool is_squeezed(Scheme scheme);
/// Schemes whose channel has a gain g.
bool uses_gain(Scheme scheme);
/// Schemes whose channel has a level n.
bool uses_level(Scheme scheme);

struct ReceiverSpec {
    Scheme scheme = Scheme::kKennedy;
    double g = 1.0;  ///< +infinity selects the infinite-gain channel
    std::size_t n = 2;
    double beta = 0.0;
    double r = 0.0;
    double q0 = 0.5;

    void validate() const;
};

struct DiscriminationResult {
    double p_success;
    double p_no_click_h0;
    double p_no_click_h1;
};

struct ChannelParams {
    double g = 1.0;
    std::size_t n = 2;
};

/// The channel a scheme places before detection (identity for kennedy / ts_kennedy).
DensityOperator apply_receiver_channel(Scheme scheme, const ChannelParams& params,
                                       const DensityOperator& rho);

/// <beta, -r| rho |beta, -r> with |beta, -r> = S(-r) D(beta) |0>.
double prob_no_click(const DensityOperator& rho, double beta, double r,
                     const CutoffPolicy& policy = {});

/// Fixed-parameter success probability; the cutoff follows choose_cutoff(2 alpha + |beta| +
/// 2 sqrt|r|).
DiscriminationResult success_probability(const ReceiverSpec& spec, double alpha,
                                         const CutoffPolicy& policy = {});

double helstrom_success(double alpha, double q0);

/// Evaluates one scheme at one input amplitude for many (beta, r). The channel outputs are
/// computed once on the input's cutoff (every receiver channel is photon-number
/// non-increasing); the detection state is built on the larger choose_cutoff(2 alpha + |beta|
/// + 2 sqrt|r|) space and restricted to it.
class ReceiverModel {
public:
    ReceiverModel(Scheme scheme, double alpha, ChannelParams params = {},
                  CutoffPolicy policy = {});

    Scheme scheme() const { return scheme_; }
    double alpha() const { return alpha_; }
    const ChannelParams& params() const { return params_; }

    /// Cutoff of the space the detection state |beta, -r> is built in.
    std::size_t cutoff_for(double beta, double r) const;
    std::size_t state_cutoff() const { return branches_.favored.cutoff(); }

    /// No-click probabilities for the nulled (favored) input and the |2 alpha> input.
    DiscriminationResult evaluate(double beta, double r, double q_favored) const;
    double success(double beta, double r, double q_favored) const {
        return evaluate(beta, r, q_favored).p_success;
    }

    /// Channel outputs for the nulled input |0> and the other input |2 alpha>.
    struct Branches {
        DensityOperator favored;
        DensityOperator other;
    };
    const Branches& branches() const { return branches_; }

private:
    Scheme scheme_;
    double alpha_;
    ChannelParams params_;
    CutoffPolicy policy_;
    Branches branches_;
};

struct ReceiverSearch {
    std::optional<Interval> beta_bounds;  ///< default [-(3 alpha + 1), 3 alpha + 1]
    Interval r_bounds{-1.5, 0.5};
    double tolerance = 1e-7;
    int max_evals = 10000;
};

struct ReceiverOptimum {
    double beta;
    double r;
    double p;
};

/// Maximizes over beta (and r for squeezed schemes) at fixed g, n.
ReceiverOptimum optimize_receiver(Scheme scheme, double alpha, double q0, ChannelParams fixed,
                                  const ReceiverSearch& search = {},
                                  const CutoffPolicy& policy = {});
/// Same search on an existing model; q_favored is the prior of the nulled hypothesis.
ReceiverOptimum optimize_receiver(const ReceiverModel& model, double q_favored,
                                  const ReceiverSearch& search = {});

struct KennedyOptimum {
    double beta;
    double p;
};

KennedyOptimum optimized_kennedy(double alpha, double q0, const CutoffPolicy& policy = {});

struct GainScan {
    double g;  ///< +infinity when the infinite-gain channel wins
    double beta;
    double r;
    double p;
};

/// Optimizes the gain of an nhpamp / ts_nhpamp receiver, each gain with optimized beta (and r).
GainScan optimize_gain(Scheme scheme, double alpha, double q0, std::size_t n,
                       const ReceiverSearch& search = {}, const CutoffPolicy& policy = {});

/// Zero final displacement can never beat the optimized Kennedy receiver.
bool appendix_a_check(double alpha, double g, std::size_t n, const CutoffPolicy& policy = {});
/// P_Kennedy,opt(alpha) - P(alpha, g, n, beta = 0); non-negative when the property holds.
double appendix_a_margin(double alpha, double g, std::size_t n, const CutoffPolicy& policy = {});

/// Vacuum-overlap gaps for a phase-insensitive Gaussian channel Phi = A_k o E_eta placed
/// before detection, on the nulled pair (|0>, |2 alpha>).
struct GaussianChannelGaps {
    double with_channel;  ///< max_beta [<b|Phi(|0><0|)|b> - <b|Phi(|2a><2a|)|b>]
    double predicted;     ///< k^{-1} times the bare gap at amplitude sqrt(eta) alpha
    double bare;          ///< bare gap at amplitude alpha
};

GaussianChannelGaps gaussian_channel_gaps(double alpha, double k, double eta,
                                          const CutoffPolicy& policy = {});

/// max_beta [<beta|0>|^2 - |<beta|2 alpha>|^2] evaluated in Fock space.
double bare_overlap_gap(double alpha, const CutoffPolicy& policy = {});

}  // namespace cohrx
