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

#include "cohrx/dolinar.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace cohrx {

namespace {

struct Setting {
    int favored;
    double beta;  // in the nulled frame
    double r;
    std::array<double, 2> no_click;
};

// The favored hypothesis is nulled; when that is hypothesis 1 the whole receiver is the
// mirror image (alpha -> -alpha), which leaves the no-click statistics unchanged up to the
// relabeling of the hypotheses.
Setting settle(const ReceiverModel& model, int favored, double beta, double r) {
    const DiscriminationResult res = model.evaluate(beta, r, 1.0);
    Setting s{favored, beta, r, {}};
    s.no_click[favored] = res.p_no_click_h0;
    s.no_click[1 - favored] = res.p_no_click_h1;
    return s;
}

int favored_of(const std::array<double, 2>& w) { return w[0] >= w[1] ? 0 : 1; }

double prior_of(const std::array<double, 2>& w) {
    const double total = w[0] + w[1];
    return total > 0.0 ? w[0] / total : 0.5;
}

class Builder {
public:
    Builder(const ReceiverModel& model, std::size_t depth, DolinarPolicy policy)
        : model_(model), depth_(depth), policy_(policy) {}

    // Value of the subtree below a node with weights w and `remaining` measurements left.
    double value(const std::array<double, 2>& w, std::size_t remaining) const {
        if (remaining == 0) {
            return std::max(w[0], w[1]);
        }
        return best_setting(w, remaining).second;
    }

    std::pair<Setting, double> best_setting(const std::array<double, 2>& w,
                                            std::size_t remaining) const {
        const int favored = favored_of(w);
        const double q = prior_of(w);
        const double q_favored = favored == 0 ? q : 1.0 - q;

        if (policy_ == DolinarPolicy::kGreedy || remaining == 1) {
            const ReceiverOptimum best = optimize_receiver(model_, q_favored);
            const Setting s = settle(model_, favored, best.beta, best.r);
            double v = 0.0;
            if (remaining == 1) {
                v = subtree_value(s, w, 0);
            }
            return {s, v};
        }

        const ReceiverSearch search;
        auto objective = [&](double beta) {
            return subtree_value(settle(model_, favored, beta, 0.0), w, remaining - 1);
        };
        SearchSpec spec{{search.beta_bounds.value_or(
                            Interval{-(3.0 * model_.alpha() + 1.0), 3.0 * model_.alpha() + 1.0})},
                        search.tolerance, search.max_evals};
        const Optimum1D best = maximize_1d(objective, spec);
        return {settle(model_, favored, best.x, 0.0), best.value};
    }

    double subtree_value(const Setting& s, const std::array<double, 2>& w,
                         std::size_t remaining) const {
        const auto [quiet, loud] = split(s, w);
        return value(quiet, remaining) + value(loud, remaining);
    }

    static std::pair<std::array<double, 2>, std::array<double, 2>> split(
        const Setting& s, const std::array<double, 2>& w) {
        std::array<double, 2> quiet{}, loud{};
        for (int h = 0; h < 2; ++h) {
            quiet[h] = w[h] * s.no_click[h];
            loud[h] = w[h] * (1.0 - s.no_click[h]);
        }
        return {quiet, loud};
    }

    void build(OutcomeTree& tree, std::size_t index, const std::array<double, 2>& w,
               std::size_t level) const {
        const std::size_t internal = tree.nodes.size();
        if (index >= internal) {
            tree.leaves[index - internal] = {w, favored_of(w)};
            return;
        }
        const Setting s = best_setting(w, depth_ - level).first;
        const double sign = s.favored == 0 ? 1.0 : -1.0;
        tree.nodes[index] = {prior_of(w), s.favored, sign * s.beta, s.r, s.no_click, w};
        const auto [quiet, loud] = split(s, w);
        build(tree, 2 * index + 1, quiet, level + 1);
        build(tree, 2 * index + 2, loud, level + 1);
    }

private:
    const ReceiverModel& model_;
    std::size_t depth_;
    DolinarPolicy policy_;
};

}  // namespace

double OutcomeTree::total_mass() const {
    double total = 0.0;
    for (const auto& leaf : leaves) {
        total += leaf.weight[0] + leaf.weight[1];
    }
    return total;
}

double OutcomeTree::branch_defect() const {
    double worst = 0.0;
    for (const auto& node : nodes) {
        for (int h = 0; h < 2; ++h) {
            worst = std::max(worst, std::abs(node.no_click[h] + (1.0 - node.no_click[h]) - 1.0));
        }
    }
    return worst;
}

OutcomeTree build_tree(Scheme scheme, double alpha, double q0, std::size_t N,
                       ChannelParams params, DolinarPolicy policy, const CutoffPolicy& cutoff) {
    if (N < 1 || N > kMaxDolinarSteps) {
        throw std::invalid_argument("Dolinar depth N must lie in [1, 10]");
    }
    if (policy == DolinarPolicy::kBackward) {
        if (N > kMaxBackwardSteps) {
            throw std::invalid_argument("backward induction is limited to N <= 4");
        }
        if (is_squeezed(scheme)) {
            throw std::invalid_argument("backward induction supports unsqueezed schemes only");
        }
    }
    if (!(q0 >= 0.0 && q0 <= 1.0)) {
        throw std::invalid_argument("q0 must lie in [0, 1]");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be finite and non-negative");
    }

    const ReceiverModel model(scheme, alpha / std::sqrt(static_cast<double>(N)), params, cutoff);
    OutcomeTree tree{scheme, params, alpha, q0, N, policy, {}, {}};
    const std::size_t leaves = std::size_t{1} << N;
    tree.nodes.resize(leaves - 1);
    tree.leaves.resize(leaves);
    Builder(model, N, policy).build(tree, 0, {q0, 1.0 - q0}, 0);
    return tree;
}

double success_probability_tree(const OutcomeTree& tree) {
    double p = 0.0;
    for (const auto& leaf : tree.leaves) {
        p += leaf.weight[leaf.decision];
    }
    return p;
}

MonteCarloEstimate simulate_tree(const OutcomeTree& tree, std::uint64_t shots,
                                 std::uint64_t seed) {
    if (shots == 0) {
        throw std::invalid_argument("Monte Carlo needs at least one shot");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const std::size_t internal = tree.nodes.size();

    std::uint64_t correct = 0;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const int truth = uniform(rng) < tree.q0 ? 0 : 1;
        std::size_t index = 0;
        while (index < internal) {
            const bool quiet = uniform(rng) < tree.nodes[index].no_click[truth];
            index = 2 * index + (quiet ? 1 : 2);
        }
        if (tree.leaves[index - internal].decision == truth) {
            ++correct;
        }
    }
    const double p = static_cast<double>(correct) / static_cast<double>(shots);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(shots)), shots};
}

}  // namespace cohrx
