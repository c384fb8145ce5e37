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

#include "cohrx/receivers.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cohrx {

namespace {

constexpr std::size_t kCutoffQuantum = 16;
constexpr std::size_t kMaxGapCutoff = 512;
constexpr double kTraceTolerance = 1e-12;

struct SchemeName {
    Scheme scheme;
    std::string_view name;
};

constexpr std::array<SchemeName, 8> kSchemeNames = {{
    {Scheme::kKennedy, "kennedy"},
    {Scheme::kNhpamp, "nhpamp"},
    {Scheme::kInfgain, "infgain"},
    {Scheme::kDephaser, "dephaser"},
    {Scheme::kCavity, "cavity"},
    {Scheme::kTsKennedy, "ts_kennedy"},
    {Scheme::kTsNhpamp, "ts_nhpamp"},
    {Scheme::kTsInfgain, "ts_infgain"},
}};

std::size_t round_up(std::size_t d, std::size_t quantum) {
    return (d + quantum - 1) / quantum * quantum;
}

void require_alpha(double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be finite and non-negative");
    }
}

void require_q0(double q0) {
    if (!(q0 >= 0.5 && q0 <= 1.0)) {
        throw std::invalid_argument("q0 must lie in [0.5, 1]");
    }
}

Interval default_beta_bounds(double alpha) { return {-(3.0 * alpha + 1.0), 3.0 * alpha + 1.0}; }

}  // namespace

std::string_view to_string(Scheme scheme) {
    for (const auto& entry : kSchemeNames) {
        if (entry.scheme == scheme) {
            return entry.name;
        }
    }
    throw std::logic_error("unknown scheme");
}

std::optional<Scheme> parse_scheme(std::string_view name) {
    for (const auto& entry : kSchemeNames) {
        if (entry.name == name) {
            return entry.scheme;
        }
    }
    return std::nullopt;
}

bool is_squeezed(Scheme scheme) {
    return scheme == Scheme::kTsKennedy || scheme == Scheme::kTsNhpamp ||
           scheme == Scheme::kTsInfgain;
}

bool uses_gain(Scheme scheme) { return scheme == Scheme::kNhpamp || scheme == Scheme::kTsNhpamp; }

bool uses_level(Scheme scheme) {
    return scheme != Scheme::kKennedy && scheme != Scheme::kTsKennedy &&
           scheme != Scheme::kCavity;
}

void ReceiverSpec::validate() const {
    require_q0(q0);
    if (!std::isfinite(beta)) {
        throw std::invalid_argument("beta must be finite");
    }
    if (!(std::abs(r) <= 2.0)) {
        throw std::invalid_argument("r must lie in [-2, 2]");
    }
    if (r != 0.0 && !is_squeezed(scheme)) {
        throw std::invalid_argument("squeezing is only available for ts_* schemes");
    }
    if (uses_gain(scheme) && (std::isnan(g) || g < 1.0)) {
        throw std::invalid_argument("gain g must be >= 1 or +inf");
    }
    if (scheme == Scheme::kDephaser && n < 1) {
        throw std::invalid_argument("dephaser level n must be positive");
    }
}

DensityOperator apply_receiver_channel(Scheme scheme, const ChannelParams& params,
                                       const DensityOperator& rho) {
    const std::size_t d = rho.cutoff();
    switch (scheme) {
        case Scheme::kKennedy:
        case Scheme::kTsKennedy:
            return rho;
        case Scheme::kNhpamp:
        case Scheme::kTsNhpamp:
            if (std::isinf(params.g)) {
                return apply(infgain_channel(params.n, d), rho);
            }
            return apply(nhpamp_channel(params.g, params.n, d), rho);
        case Scheme::kInfgain:
        case Scheme::kTsInfgain:
            return apply(infgain_channel(params.n, d), rho);
        case Scheme::kDephaser:
            return apply(dephaser_channel(params.n, d), rho);
        case Scheme::kCavity:
            return CavityChannel(d).apply(rho);
    }
    throw std::logic_error("unknown scheme");
}

double prob_no_click(const DensityOperator& rho, double beta, double r,
                     const CutoffPolicy& policy) {
    return expectation(displaced_squeezed_state(beta, r, rho.cutoff(), policy), rho);
}

double helstrom_success(double alpha, double q0) {
    require_alpha(alpha);
    if (!(q0 >= 0.0 && q0 <= 1.0)) {
        throw std::invalid_argument("q0 must lie in [0, 1]");
    }
    const double inner = 1.0 - 4.0 * q0 * (1.0 - q0) * std::exp(-4.0 * alpha * alpha);
    return 0.5 * (1.0 + std::sqrt(std::max(inner, 0.0)));
}

namespace {

ReceiverModel::Branches make_branches(Scheme scheme, double alpha, const ChannelParams& params,
                                      const CutoffPolicy& policy) {
    require_alpha(alpha);
    ReceiverSpec{scheme, params.g, params.n, 0.0, 0.0, 0.5}.validate();
    std::size_t d = round_up(choose_cutoff(2.0 * alpha, policy), kCutoffQuantum);
    if (uses_level(scheme)) {
        d = std::max(d, round_up(params.n + 1, kCutoffQuantum));
    }
    return {apply_receiver_channel(scheme, params, DensityOperator::vacuum(d)),
            apply_receiver_channel(scheme, params,
                                   DensityOperator::pure(coherent_state(2.0 * alpha, d)))};
}

}  // namespace

ReceiverModel::ReceiverModel(Scheme scheme, double alpha, ChannelParams params,
                             CutoffPolicy policy)
    : scheme_(scheme),
      alpha_(alpha),
      params_(params),
      policy_(policy),
      branches_(make_branches(scheme, alpha, params, policy)) {}

std::size_t ReceiverModel::cutoff_for(double beta, double r) const {
    const double reach = 2.0 * alpha_ + std::abs(beta) + 2.0 * std::sqrt(std::abs(r));
    return std::max(state_cutoff(), round_up(choose_cutoff(reach, policy_), kCutoffQuantum));
}

DiscriminationResult ReceiverModel::evaluate(double beta, double r, double q_favored) const {
    const FockVector probe =
        displaced_squeezed_state(beta, r, cutoff_for(beta, r), policy_).resized(state_cutoff());
    const double nc_favored = expectation(probe, branches_.favored);
    const double nc_other = expectation(probe, branches_.other);
    const double p = q_favored * nc_favored + (1.0 - q_favored) * (1.0 - nc_other);
    return {std::clamp(p, 0.0, 1.0), std::min(nc_favored, 1.0), std::min(nc_other, 1.0)};
}

DiscriminationResult success_probability(const ReceiverSpec& spec, double alpha,
                                         const CutoffPolicy& policy) {
    spec.validate();
    const ReceiverModel model(spec.scheme, alpha, {spec.g, spec.n}, policy);
    return model.evaluate(spec.beta, spec.r, spec.q0);
}

ReceiverOptimum optimize_receiver(const ReceiverModel& model, double q_favored,
                                  const ReceiverSearch& search) {
    if (!(q_favored >= 0.0 && q_favored <= 1.0)) {
        throw std::invalid_argument("prior must lie in [0, 1]");
    }
    const Interval beta_bounds = search.beta_bounds.value_or(default_beta_bounds(model.alpha()));

    if (!is_squeezed(model.scheme())) {
        SearchSpec spec{{beta_bounds}, search.tolerance, search.max_evals};
        const Optimum1D best = maximize_1d(
            [&](double beta) { return model.success(beta, 0.0, q_favored); }, spec);
        return {best.x, 0.0, best.value};
    }
    SearchSpec spec{{beta_bounds, search.r_bounds}, search.tolerance, search.max_evals};
    const Optimum2D best = maximize_2d(
        [&](double beta, double r) { return model.success(beta, r, q_favored); }, spec);
    return {best.x[0], best.x[1], best.value};
}

ReceiverOptimum optimize_receiver(Scheme scheme, double alpha, double q0, ChannelParams fixed,
                                  const ReceiverSearch& search, const CutoffPolicy& policy) {
    require_q0(q0);
    const ReceiverModel model(scheme, alpha, fixed, policy);
    return optimize_receiver(model, q0, search);
}

KennedyOptimum optimized_kennedy(double alpha, double q0, const CutoffPolicy& policy) {
    const ReceiverOptimum best = optimize_receiver(Scheme::kKennedy, alpha, q0, {}, {}, policy);
    return {best.beta, best.p};
}

GainScan optimize_gain(Scheme scheme, double alpha, double q0, std::size_t n,
                       const ReceiverSearch& search, const CutoffPolicy& policy) {
    if (!uses_gain(scheme)) {
        throw std::invalid_argument("gain optimization needs an nhpamp scheme");
    }
    const GainOptimum best = maximize_over_gain(
        [&](double g) {
            return optimize_receiver(scheme, alpha, q0, {g, n}, search, policy).p;
        },
        1e-4);
    const ReceiverOptimum at = optimize_receiver(scheme, alpha, q0, {best.g, n}, search, policy);
    return {best.g, at.beta, at.r, at.p};
}

double appendix_a_margin(double alpha, double g, std::size_t n, const CutoffPolicy& policy) {
    const double kennedy = optimized_kennedy(alpha, 0.5, policy).p;
    const ReceiverModel model(Scheme::kNhpamp, alpha, {g, n}, policy);
    return kennedy - model.success(0.0, 0.0, 0.5);
}

bool appendix_a_check(double alpha, double g, std::size_t n, const CutoffPolicy& policy) {
    return appendix_a_margin(alpha, g, n, policy) >= -1e-9;
}

double bare_overlap_gap(double alpha, const CutoffPolicy& policy) {
    require_alpha(alpha);
    const ReceiverModel model(Scheme::kKennedy, alpha, {}, policy);
    SearchSpec spec{{default_beta_bounds(alpha)}};
    return maximize_1d(
               [&](double beta) {
                   const DiscriminationResult r = model.evaluate(beta, 0.0, 0.5);
                   return r.p_no_click_h0 - r.p_no_click_h1;
               },
               spec)
        .value;
}

GaussianChannelGaps gaussian_channel_gaps(double alpha, double k, double eta,
                                          const CutoffPolicy& policy) {
    require_alpha(alpha);
    const Interval bounds{-(3.0 * alpha + 1.0) * std::sqrt(k), (3.0 * alpha + 1.0) * std::sqrt(k)};
    // The amplifier output has a geometric tail; grow the space until both outputs keep
    // their trace.
    std::size_t d = round_up(choose_cutoff(2.0 * std::sqrt(k) * alpha, policy), kCutoffQuantum);
    std::optional<DensityOperator> favored;
    std::optional<DensityOperator> other;
    for (;; d *= 2) {
        if (d > kMaxGapCutoff) {
            throw std::runtime_error("Gaussian channel output does not fit in the Fock space");
        }
        const QuantumChannel loss = attenuator_channel(eta, d);
        const QuantumChannel gain = amplifier_channel(k, d, policy);
        favored = apply(gain, apply(loss, DensityOperator::vacuum(d)));
        other = apply(gain, apply(loss, DensityOperator::pure(coherent_state(2.0 * alpha, d))));
        if (1.0 - favored->trace() < kTraceTolerance && 1.0 - other->trace() < kTraceTolerance) {
            break;
        }
    }

    SearchSpec spec{{bounds}};
    const double with_channel =
        maximize_1d(
            [&](double beta) {
                const FockVector probe = displaced_squeezed_state(beta, 0.0, d, policy);
                return expectation(probe, *favored) - expectation(probe, *other);
            },
            spec)
            .value;
    return {with_channel, bare_overlap_gap(std::sqrt(eta) * alpha, policy) / k,
            bare_overlap_gap(alpha, policy)};
}

}  // namespace cohrx
