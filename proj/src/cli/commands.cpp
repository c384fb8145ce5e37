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

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "cohrx/cli.hpp"
#include "cohrx/dolinar.hpp"
#include "json.hpp"

namespace cohrx::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs body(i) for i in [0, count) on a small worker pool. Results are written by index, so
// the output order never depends on scheduling.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

double linspace(double lo, double hi, int i, int steps) {
    if (i == steps - 1) {
        return hi;
    }
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

Cell maybe(bool applies, double value) { return applies ? Cell{value} : Cell{}; }

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw UsageError(message);
    }
}

double fixed_gain(const RunConfig& config, double fallback) {
    return config.g.value_or(fallback);
}

ChannelParams params_for(Scheme scheme, const RunConfig& config, double gain_fallback) {
    return {uses_gain(scheme) ? fixed_gain(config, gain_fallback) : 1.0, config.n};
}

double dolinar_alpha2(const RunConfig& config) {
    if (config.alpha2) {
        return *config.alpha2;
    }
    if (config.alpha) {
        return *config.alpha * *config.alpha;
    }
    return 0.2;
}

int finish(const Table& table, const RunConfig& config, std::ostream& out) {
    emit(config.format == Format::kJson ? to_json(table) : to_csv(table), config.out, out);
    return kExitOk;
}

}  // namespace

void RunConfig::validate() const {
    try {
        policy.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    require(q0 >= 0.5 && q0 <= 1.0, "--q0 must lie in [0.5, 1]");
    require(!alpha || (*alpha >= 0.0 && std::isfinite(*alpha)), "--alpha must be >= 0");
    require(!alpha2 || (*alpha2 >= 0.0 && std::isfinite(*alpha2)), "--alpha2 must be >= 0");
    require(!g || (!std::isnan(*g) && *g >= 1.0), "--g must be >= 1 (or inf)");

    const bool alpha_sweep = subcommand == "sweep" || (subcommand == "dolinar" && !N_max);
    if (alpha_sweep) {
        require(std::isfinite(alpha2_min) && std::isfinite(alpha2_max) && alpha2_min >= 0.0,
                "alpha^2 range must be finite and non-negative");
        require(alpha2_min < alpha2_max, "empty alpha^2 range");
        require(steps >= 2, "--steps must be at least 2");
    }
    if (subcommand == "contour") {
        require(beta_min < beta_max && std::isfinite(beta_min) && std::isfinite(beta_max),
                "empty beta range");
        require(beta_steps >= 2, "--beta-steps must be at least 2");
        require(g_min >= 1.0 && g_min < g_max && std::isfinite(g_max), "empty gain range");
        require(g_steps >= 2, "--g-steps must be at least 2");
    }
    if (subcommand == "wigner") {
        require(extent > 0.0 && std::isfinite(extent), "--extent must be positive");
        require(grid_steps >= 2, "--grid-steps must be at least 2");
    }
    if (subcommand == "dolinar") {
        require(N >= 1 && N <= kMaxDolinarSteps, "--N must lie in [1, 10]");
        require(!N_max || (*N_max >= 1 && *N_max <= kMaxDolinarSteps),
                "--N-max must lie in [1, 10]");
    }
    if (scheme && *scheme == Scheme::kDephaser) {
        require(n >= 1, "dephaser needs --n >= 1");
    }
}

Table sweep_table(const RunConfig& config) {
    config.validate();
    const Scheme scheme = config.scheme.value_or(Scheme::kKennedy);
    Table table{{"alpha2", "p_scheme", "p_helstrom", "gap", "beta_opt", "r_opt", "g_opt"}, {}};
    table.rows.resize(static_cast<std::size_t>(config.steps));

    parallel_for(table.rows.size(), config.threads, [&](std::size_t i) {
        const double a2 = linspace(config.alpha2_min, config.alpha2_max, static_cast<int>(i),
                                   config.steps);
        const double alpha = std::sqrt(a2);
        double p = 0.0, beta = 0.0, r = 0.0, g = 1.0;
        if (uses_gain(scheme) && !config.g) {
            const GainScan best = optimize_gain(scheme, alpha, config.q0, config.n, {},
                                                config.policy);
            p = best.p;
            beta = best.beta;
            r = best.r;
            g = best.g;
        } else {
            const ChannelParams params = params_for(scheme, config, 1.0);
            const ReceiverOptimum best =
                optimize_receiver(scheme, alpha, config.q0, params, {}, config.policy);
            p = best.p;
            beta = best.beta;
            r = best.r;
            g = uses_gain(scheme) ? params.g : kInf;
        }
        const double helstrom = helstrom_success(alpha, config.q0);
        const bool has_gain = uses_gain(scheme) || scheme == Scheme::kInfgain ||
                              scheme == Scheme::kTsInfgain;
        table.rows[i] = {a2,   p, helstrom, helstrom - p, beta, maybe(is_squeezed(scheme), r),
                         maybe(has_gain, g)};
    });
    return table;
}

Table contour_table(const RunConfig& config) {
    config.validate();
    const Scheme scheme = config.scheme.value_or(Scheme::kNhpamp);
    require(scheme == Scheme::kNhpamp, "contour is defined for the nhpamp scheme");
    const double alpha = config.alpha.value_or(0.32);
    const double kennedy = optimized_kennedy(alpha, config.q0, config.policy).p;

    Table table{{"g", "beta", "ratio", "unit_crossing"}, {}};
    const auto gs = static_cast<std::size_t>(config.g_steps);
    const auto bs = static_cast<std::size_t>(config.beta_steps);
    table.rows.resize(gs * bs);
    parallel_for(gs, config.threads, [&](std::size_t i) {
        const double g = linspace(config.g_min, config.g_max, static_cast<int>(i), config.g_steps);
        const ReceiverModel model(scheme, alpha, {g, config.n}, config.policy);
        std::vector<double> ratio(bs);
        for (std::size_t j = 0; j < bs; ++j) {
            const double beta = linspace(config.beta_min, config.beta_max, static_cast<int>(j),
                                         config.beta_steps);
            ratio[j] = model.success(beta, 0.0, config.q0) / kennedy;
        }
        for (std::size_t j = 0; j < bs; ++j) {
            // Marks the grid cell where ratio - 1 changes sign toward the next beta.
            const bool crossing = ratio[j] == 1.0 ||
                                  (j + 1 < bs && (ratio[j] - 1.0) * (ratio[j + 1] - 1.0) < 0.0);
            const double beta = linspace(config.beta_min, config.beta_max, static_cast<int>(j),
                                         config.beta_steps);
            table.rows[i * bs + j] = {g, beta, ratio[j], std::int64_t{crossing ? 1 : 0}};
        }
    });
    return table;
}

Table wigner_table(const RunConfig& config) {
    config.validate();
    const Scheme scheme = config.scheme.value_or(Scheme::kNhpamp);
    const double alpha = config.alpha.value_or(0.5);
    const ChannelParams params = params_for(scheme, config, 28.0);

    std::size_t d = choose_cutoff(alpha, config.policy);
    d = std::max(d, config.n + 1);
    const DensityOperator rho =
        apply_receiver_channel(scheme, params, DensityOperator::pure(coherent_state(alpha, d)));

    const auto steps = static_cast<std::size_t>(config.grid_steps);
    Table table{{"re_gamma", "im_gamma", "w"}, {}};
    table.rows.resize(steps * steps);
    parallel_for(steps, config.threads, [&](std::size_t i) {
        const double re = linspace(-config.extent, config.extent, static_cast<int>(i),
                                   config.grid_steps);
        std::vector<Complex> column(steps);
        for (std::size_t j = 0; j < steps; ++j) {
            column[j] = {re, linspace(-config.extent, config.extent, static_cast<int>(j),
                                      config.grid_steps)};
        }
        const std::vector<double> w = wigner(rho, column);
        for (std::size_t j = 0; j < steps; ++j) {
            table.rows[i * steps + j] = {re, column[j].imag(), w[j]};
        }
    });
    return table;
}

Table dolinar_table(const RunConfig& config) {
    config.validate();
    const Scheme scheme = config.scheme.value_or(Scheme::kKennedy);
    const ChannelParams params = params_for(scheme, config, 31.0);

    struct Point {
        double alpha2;
        std::size_t N;
    };
    std::vector<Point> points;
    if (config.N_max) {
        const double a2 = dolinar_alpha2(config);
        for (std::size_t N = 1; N <= *config.N_max; ++N) {
            points.push_back({a2, N});
        }
    } else {
        for (int i = 0; i < config.steps; ++i) {
            points.push_back({linspace(config.alpha2_min, config.alpha2_max, i, config.steps),
                              config.N});
        }
    }

    Table table{{"alpha2", "N", "p_scheme", "p_helstrom", "gap"}, {}};
    table.rows.resize(points.size());
    parallel_for(points.size(), config.threads, [&](std::size_t i) {
        const double alpha = std::sqrt(points[i].alpha2);
        const OutcomeTree tree = build_tree(scheme, alpha, config.q0, points[i].N, params,
                                            DolinarPolicy::kGreedy, config.policy);
        const double p = success_probability_tree(tree);
        const double helstrom = helstrom_success(alpha, config.q0);
        table.rows[i] = {points[i].alpha2, static_cast<std::int64_t>(points[i].N), p, helstrom,
                         helstrom - p};
    });
    return table;
}

std::string optimize_report(const RunConfig& config) {
    config.validate();
    const Scheme scheme = config.scheme.value_or(Scheme::kNhpamp);
    const double alpha = config.alpha.value_or(0.32);

    double p = 0.0, beta = 0.0, r = 0.0;
    double g = uses_gain(scheme) ? fixed_gain(config, 1.0) : kInf;
    if (uses_gain(scheme) && !config.g) {
        const GainScan best = optimize_gain(scheme, alpha, config.q0, config.n, {}, config.policy);
        p = best.p;
        beta = best.beta;
        r = best.r;
        g = best.g;
    } else {
        const ReceiverOptimum best = optimize_receiver(
            scheme, alpha, config.q0, params_for(scheme, config, 1.0), {}, config.policy);
        p = best.p;
        beta = best.beta;
        r = best.r;
    }
    const double kennedy = optimized_kennedy(alpha, config.q0, config.policy).p;
    const double helstrom = helstrom_success(alpha, config.q0);

    nlohmann::ordered_json report;
    report["scheme"] = std::string(to_string(scheme));
    report["alpha"] = alpha;
    report["alpha2"] = alpha * alpha;
    report["q0"] = config.q0;
    report["n"] = config.n;
    report["g_opt"] = std::isfinite(g) ? nlohmann::ordered_json(g) : nlohmann::ordered_json("inf");
    report["beta_opt"] = beta;
    report["r_opt"] = r;
    report["p_scheme"] = p;
    report["p_kennedy_opt"] = kennedy;
    report["ratio"] = p / kennedy;
    report["p_helstrom"] = helstrom;
    report["gap"] = helstrom - p;
    return report.dump(2) + "\n";
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
    return finish(sweep_table(config), config, out);
}

int cmd_contour(const RunConfig& config, std::ostream& out) {
    return finish(contour_table(config), config, out);
}

int cmd_wigner(const RunConfig& config, std::ostream& out) {
    return finish(wigner_table(config), config, out);
}

int cmd_dolinar(const RunConfig& config, std::ostream& out) {
    return finish(dolinar_table(config), config, out);
}

int cmd_optimize(const RunConfig& config, std::ostream& out) {
    emit(optimize_report(config), config.out, out);
    return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
    config.validate();
    const auto checks = run_verify_suite({config.policy, config.inject_fault});
    const std::string text = format_checks(checks);
    emit(text, config.out, out);
    if (!config.out.empty()) {
        out << text;
    }
    for (const auto& c : checks) {
        if (!c.pass) {
            return kExitVerifyFailed;
        }
    }
    return kExitOk;
}

}  // namespace cohrx::cli
