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

// Multiplexed adaptive discrimination: the signal |+-alpha> is split into N copies of
// amplitude alpha / sqrt(N) that are measured one after the other. Every detection history
// is enumerated exactly.
//
// Nodes are heap-indexed: node i has children 2i + 1 (no click) and 2i + 2 (click). Indices
// from 2^N - 1 on are leaves.

#include <array>
#include <cstdint>
#include <vector>

#include "cohrx/receivers.hpp"

namespace cohrx {

inline constexpr std::size_t kMaxDolinarSteps = 10;
inline constexpr std::size_t kMaxBackwardSteps = 4;

enum class DolinarPolicy {
    kGreedy,    ///< each node maximizes its own single-shot success
    kBackward,  ///< each node maximizes the value of its whole subtree
};

struct DolinarNode {
    double prior_h0;       ///< posterior of hypothesis 0 given the history so far
    int favored;           ///< hypothesis nulled at this node (0 or 1)
    double beta;           ///< detection displacement in the frame of the input
    double r;
    std::array<double, 2> no_click;  ///< P(no click | hypothesis)
    std::array<double, 2> weight;    ///< q_h P(history | h)
};

struct DolinarLeaf {
    std::array<double, 2> weight;
    int decision;
};

struct OutcomeTree {
    Scheme scheme;
    ChannelParams params;
    double alpha;
    double q0;
    std::size_t depth;
    DolinarPolicy policy;
    std::vector<DolinarNode> nodes;
    std::vector<DolinarLeaf> leaves;

    double total_mass() const;
    /// Largest |P(no click | h) + P(click | h) - 1| over nodes; zero by construction.
    double branch_defect() const;
};

OutcomeTree build_tree(Scheme scheme, double alpha, double q0, std::size_t N,
                       ChannelParams params = {}, DolinarPolicy policy = DolinarPolicy::kGreedy,
                       const CutoffPolicy& cutoff = {});

double success_probability_tree(const OutcomeTree& tree);

struct MonteCarloEstimate {
    double p;
    double stderr_p;
    std::uint64_t shots;
};

/// Samples hypotheses and detection outcomes through the tree's policy.
MonteCarloEstimate simulate_tree(const OutcomeTree& tree, std::uint64_t shots,
                                 std::uint64_t seed);

}  // namespace cohrx
