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
#include <cstdlib>
#include <limits>
#include <ostream>
#include <utility>

#include "CLI11.hpp"
#include "cohrx/cli.hpp"

namespace cohrx::cli {

namespace {

double parse_gain(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "Inf") {
        return std::numeric_limits<double>::infinity();
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || used == 0) {
        throw UsageError("--g expects a number or 'inf', got '" + text + "'");
    }
    return value;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Binary coherent-state receiver simulator", "cohrx"};
    app.require_subcommand(1);

    RunConfig config;
    std::string scheme_name;
    std::string gain_text;
    std::string format_name = "csv";
    std::size_t n_max = 0;
    double alpha = 0.0;
    double alpha2 = 0.0;

    auto* alpha_opt = app.add_option("--alpha", alpha, "input amplitude");
    auto* alpha2_opt = app.add_option("--alpha2", alpha2, "input mean photon number");
    app.add_option("--scheme", scheme_name,
                   "kennedy|nhpamp|infgain|dephaser|cavity|ts_kennedy|ts_nhpamp|ts_infgain");
    app.add_option("--alpha2-min", config.alpha2_min, "sweep lower bound on alpha^2");
    app.add_option("--alpha2-max", config.alpha2_max, "sweep upper bound on alpha^2");
    app.add_option("--steps", config.steps, "sweep points");
    app.add_option("--g", gain_text, "amplifier gain (number or inf); optimized when omitted");
    app.add_option("--n", config.n, "amplifier / dephaser level");
    app.add_option("--beta-min", config.beta_min, "contour beta lower bound");
    app.add_option("--beta-max", config.beta_max, "contour beta upper bound");
    app.add_option("--beta-steps", config.beta_steps, "contour beta points");
    app.add_option("--g-min", config.g_min, "contour gain lower bound");
    app.add_option("--g-max", config.g_max, "contour gain upper bound");
    app.add_option("--g-steps", config.g_steps, "contour gain points");
    app.add_option("--N", config.N, "Dolinar steps");
    auto* n_max_opt = app.add_option("--N-max", n_max, "Dolinar: sweep N = 1..N-max");
    app.add_option("--q0", config.q0, "prior of the favored state");
    app.add_option("--extent", config.extent, "Wigner grid half-width");
    app.add_option("--grid-steps", config.grid_steps, "Wigner grid points per axis");
    app.add_option("--out", config.out, "output file (stdout when omitted)");
    app.add_option("--format", format_name, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--tail-tol", config.policy.tail_tolerance, "Poisson tail tolerance");
    app.add_option("--guard", config.policy.guard_factor, "cutoff guard factor");
    app.add_option("--threads", config.threads, "worker threads (0 = all cores)");
    app.add_flag("--inject-fault", config.inject_fault)->group("");

    const std::pair<const char*, const char*> commands[] = {
        {"sweep", "success probability and Helstrom gap over an alpha^2 grid"},
        {"contour", "nhpamp success ratio to optimized Kennedy over a (g, beta) grid"},
        {"wigner", "Wigner function of the channel output on a square grid"},
        {"dolinar", "multi-step adaptive receiver, over alpha^2 or over N"},
        {"optimize", "single-point optimization report (JSON)"},
        {"verify", "structural invariant checks; exit 1 on any failure"},
    };
    for (const auto& [name, about] : commands) {
        app.add_subcommand(name, about)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        config.subcommand = app.get_subcommands().front()->get_name();
        if (!scheme_name.empty()) {
            config.scheme = parse_scheme(scheme_name);
            if (!config.scheme) {
                throw UsageError("unknown scheme '" + scheme_name + "'");
            }
        }
        if (!gain_text.empty()) {
            config.g = parse_gain(gain_text);
        }
        if (alpha_opt->count() > 0) {
            config.alpha = alpha;
        }
        if (alpha2_opt->count() > 0) {
            config.alpha2 = alpha2;
            if (!config.alpha) {
                config.alpha = std::sqrt(std::max(alpha2, 0.0));
            }
        }
        if (n_max_opt->count() > 0) {
            config.N_max = n_max;
        }
        config.format = format_name == "json" ? Format::kJson : Format::kCsv;

        if (config.subcommand == "sweep") return cmd_sweep(config, out);
        if (config.subcommand == "contour") return cmd_contour(config, out);
        if (config.subcommand == "wigner") return cmd_wigner(config, out);
        if (config.subcommand == "dolinar") return cmd_dolinar(config, out);
        if (config.subcommand == "optimize") return cmd_optimize(config, out);
        return cmd_verify(config, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace cohrx::cli
