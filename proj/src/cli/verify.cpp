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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cohrx/cavity.hpp"
#include "cohrx/channels.hpp"
#include "cohrx/cli.hpp"

namespace cohrx::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Receivers exercised by the structural suite.
struct Receiver {
    Scheme scheme;
    ChannelParams params;
};

const std::vector<Receiver>& receivers_in_scope() {
    static const std::vector<Receiver> all = {
        {Scheme::kKennedy, {}},
        {Scheme::kNhpamp, {3.0, 2}},
        {Scheme::kNhpamp, {31.0, 2}},
        {Scheme::kNhpamp, {31.0, 1}},
        {Scheme::kInfgain, {1.0, 2}},
        {Scheme::kInfgain, {1.0, 3}},
        {Scheme::kDephaser, {1.0, 2}},
        {Scheme::kCavity, {}},
        {Scheme::kTsKennedy, {}},
        {Scheme::kTsInfgain, {1.0, 2}},
        {Scheme::kTsInfgain, {1.0, 3}},
    };
    return all;
}

std::vector<double> alpha2_grid(int points) {
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] =
            i == points - 1 ? 1.0 : 0.01 + 0.99 * static_cast<double>(i) / (points - 1);
    }
    return grid;
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

CheckResult at_most(std::string name, double measured, double limit) {
    return {std::move(name), measured <= limit, measured, limit};
}

CheckResult at_least(std::string name, double measured, double limit) {
    return {std::move(name), measured >= limit, measured, limit};
}

CheckResult nhpamp_completeness(bool inject_fault) {
    double worst = 0.0;
    for (double g : {1.0, 1.5, 3.0, 31.0, 1e3}) {
        for (std::size_t n : {0, 1, 2, 3, 5}) {
            QuantumChannel channel = nhpamp_channel(g, n, 16);
            if (inject_fault && g == 3.0 && n == 2) {
                auto kraus = channel.kraus();
                kraus[1] = FockOperator(0.9 * kraus[1].matrix());
                channel = QuantumChannel(std::move(kraus), "nhpamp-corrupted");
            }
            worst = std::max(worst, channel.completeness_defect());
        }
    }
    return at_most("nhpamp Kraus completeness", worst, 1e-12);
}

CheckResult projector_completeness() {
    double worst = 0.0;
    for (std::size_t n : {1, 2, 3, 7}) {
        worst = std::max(worst, infgain_channel(n, 16).completeness_defect());
        worst = std::max(worst, dephaser_channel(n, 16).completeness_defect());
    }
    return at_most("infgain / dephaser Kraus completeness", worst, 1e-12);
}

CheckResult gaussian_completeness(const CutoffPolicy& policy) {
    double worst = 0.0;
    for (double eta : {0.3, 0.5, 0.8, 1.0}) {
        worst = std::max(worst, attenuator_channel(eta, 32).completeness_defect());
    }
    for (double k : {1.0, 1.5, 2.0}) {
        worst = std::max(worst, amplifier_channel(k, 64, policy).completeness_defect(8));
    }
    return at_most("attenuator / amplifier completeness (bulk)", worst, 1e-9);
}

CheckResult vacuum_fixed_point() {
    const std::size_t d = 16;
    const DensityOperator vacuum = DensityOperator::vacuum(d);
    double worst = 0.0;
    auto record = [&](const DensityOperator& out) {
        worst = std::max(worst, max_abs(out.matrix() - vacuum.matrix()));
    };
    for (const auto& rx : receivers_in_scope()) {
        record(apply_receiver_channel(rx.scheme, rx.params, vacuum));
    }
    record(apply(nhpamp_channel(1e3, 3, d), vacuum));
    record(apply(attenuator_channel(0.5, d), vacuum));
    record(apply(identity_channel(d), vacuum));
    return at_most("vacuum fixed point of every receiver channel", worst, 1e-12);
}

std::vector<CheckResult> pipeline_outputs(const CutoffPolicy& policy) {
    double hermiticity = 0.0;
    double negativity = 0.0;
    double trace = 0.0;
    for (const auto& rx : receivers_in_scope()) {
        for (double alpha : {0.1, 0.32, 0.7, 1.0}) {
            const ReceiverModel model(rx.scheme, alpha, rx.params, policy);
            const auto& b = model.branches();
            for (const DensityOperator* rho : {&b.favored, &b.other}) {
                hermiticity = std::max(hermiticity, rho->hermiticity_defect());
                negativity = std::max(negativity, -rho->min_eigenvalue());
                trace = std::max(trace, std::abs(rho->trace() - 1.0));
            }
        }
    }
    return {at_most("pipeline outputs Hermitian", hermiticity, 1e-12),
            at_most("pipeline outputs positive (max negativity)", negativity, 1e-10),
            at_most("pipeline outputs trace one", trace, 1e-9)};
}

std::vector<CheckResult> cavity_map() {
    const CavityChannel channel(8);
    const Eigen::SelfAdjointEigenSolver<CMatrix> solver(channel.choi_matrix(),
                                                        Eigen::EigenvaluesOnly);
    const CMatrix process = channel.process_matrix();
    const Eigen::Index d = 8;
    // Trace preservation: sum_k Phi(|j><l|)_kk = delta_jl.
    double tp = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index l = 0; l < d; ++l) {
            Complex t = 0.0;
            for (Eigen::Index k = 0; k < d; ++k) {
                t += process(k * d + k, l * d + j);
            }
            tp = std::max(tp, std::abs(t - (j == l ? 1.0 : 0.0)));
        }
    }
    return {at_least("cavity map completely positive (Choi min eigenvalue)",
                     solver.eigenvalues().minCoeff(), -1e-8),
            at_most("cavity map trace preserving", tp, 1e-10)};
}

CheckResult helstrom_dominance(const CutoffPolicy& policy) {
    double worst = -kInf;
    for (const auto& rx : receivers_in_scope()) {
        for (double a2 : alpha2_grid(50)) {
            const double alpha = std::sqrt(a2);
            const double p = optimize_receiver(rx.scheme, alpha, 0.5, rx.params, {}, policy).p;
            worst = std::max(worst, p - helstrom_success(alpha, 0.5));
        }
    }
    return at_most("Helstrom dominance over every receiver (max excess)", worst, 1e-9);
}

CheckResult cutoff_doubling(const CutoffPolicy& policy) {
    CutoffPolicy doubled = policy;
    doubled.guard_factor *= 2.0;
    double worst = 0.0;
    for (const auto& rx : receivers_in_scope()) {
        const double r = is_squeezed(rx.scheme) ? -0.3 : 0.0;
        for (double alpha : {0.32, 0.7}) {
            const ReceiverModel base(rx.scheme, alpha, rx.params, policy);
            const ReceiverModel wide(rx.scheme, alpha, rx.params, doubled);
            worst = std::max(worst, std::abs(base.success(-0.5, r, 0.5) -
                                             wide.success(-0.5, r, 0.5)));
        }
    }
    const std::vector<Complex> points = {{0.0, 0.0}, {0.5, 0.2}, {-1.0, 0.7}};
    for (std::size_t d : {16, 32}) {
        const auto rho = apply(nhpamp_channel(28.0, 2, d),
                               DensityOperator::pure(coherent_state(0.5, d)));
        const auto rho2 = apply(nhpamp_channel(28.0, 2, 2 * d),
                                DensityOperator::pure(coherent_state(0.5, 2 * d)));
        const auto w = wigner(rho, points);
        const auto w2 = wigner(rho2, points);
        for (std::size_t i = 0; i < points.size(); ++i) {
            worst = std::max(worst, std::abs(w[i] - w2[i]));
        }
    }
    return at_most("cutoff-doubling stability", worst, 1e-9);
}

CheckResult appendix_a(const CutoffPolicy& policy) {
    double worst = kInf;
    for (int i = 1; i <= 10; ++i) {
        const double alpha = 0.1 * i;
        const double kennedy = optimized_kennedy(alpha, 0.5, policy).p;
        for (double g : {1.0, 3.0, 31.0, kInf}) {
            for (std::size_t n : {1, 2, 3}) {
                const ReceiverModel model(Scheme::kNhpamp, alpha, {g, n}, policy);
                worst = std::min(worst, kennedy - model.success(0.0, 0.0, 0.5));
            }
        }
    }
    return at_least("zero final displacement never beats optimized Kennedy (min margin)", worst,
                    -1e-9);
}

std::vector<CheckResult> appendix_b(const CutoffPolicy& policy) {
    double identity = 0.0;
    double excess = -kInf;
    for (double k : {1.5, 2.0}) {
        for (double eta : {0.5, 0.8}) {
            for (double alpha : {0.2, 0.32, 0.5}) {
                const GaussianChannelGaps gaps = gaussian_channel_gaps(alpha, k, eta, policy);
                identity = std::max(identity, std::abs(gaps.with_channel - gaps.predicted));
                excess = std::max(excess, gaps.with_channel - gaps.bare);
            }
        }
    }
    return {at_most("Gaussian channel gap identity", identity, 1e-5),
            at_most("Gaussian channel gives no improvement (max excess)", excess, 0.0)};
}

CheckResult dephaser_vs_infgain(const CutoffPolicy& policy) {
    double worst = 0.0;
    for (double a2 : alpha2_grid(50)) {
        const double alpha = std::sqrt(a2);
        const double dephased =
            optimize_receiver(Scheme::kDephaser, alpha, 0.5, {1.0, 2}, {}, policy).p;
        const double projected =
            optimize_receiver(Scheme::kInfgain, alpha, 0.5, {1.0, 2}, {}, policy).p;
        worst = std::max(worst, std::abs(dephased - projected));
    }
    return at_most("dephaser vs infinite-gain closeness", worst, 5e-4);
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const VerifyOptions& options) {
    const CutoffPolicy& policy = options.policy;
    std::vector<CheckResult> checks;
    auto add = [&](std::vector<CheckResult> more) {
        checks.insert(checks.end(), more.begin(), more.end());
    };
    checks.push_back(nhpamp_completeness(options.inject_fault));
    checks.push_back(projector_completeness());
    checks.push_back(gaussian_completeness(policy));
    checks.push_back(vacuum_fixed_point());
    add(pipeline_outputs(policy));
    add(cavity_map());
    checks.push_back(helstrom_dominance(policy));
    checks.push_back(cutoff_doubling(policy));
    checks.push_back(appendix_a(policy));
    add(appendix_b(policy));
    checks.push_back(dephaser_vs_infgain(policy));
    return checks;
}

std::string format_checks(const std::vector<CheckResult>& checks) {
    std::size_t width = 5;
    for (const auto& c : checks) {
        width = std::max(width, c.name.size());
    }
    std::string text;
    auto pad = [&](const std::string& s) { return s + std::string(width - s.size(), ' '); };
    text += pad("check") + "  status  measured                 limit\n";
    int failed = 0;
    for (const auto& c : checks) {
        std::string measured = format_number(c.measured);
        measured.resize(std::max<std::size_t>(measured.size(), 24), ' ');
        text += pad(c.name) + (c.pass ? "  PASS    " : "  FAIL    ") + measured + " " +
                format_number(c.limit) + "\n";
        failed += c.pass ? 0 : 1;
    }
    text += std::to_string(checks.size() - failed) + "/" + std::to_string(checks.size()) +
            " checks passed\n";
    return text;
}

}  // namespace cohrx::cli
