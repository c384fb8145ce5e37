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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cohrx/fock.hpp"
#include "cohrx/receivers.hpp"

namespace cohrx::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { kCsv, kJson };

struct RunConfig {
    std::string subcommand;
    std::optional<Scheme> scheme;
    std::optional<double> alpha;
    std::optional<double> alpha2;
    double alpha2_min = 0.01;
    double alpha2_max = 1.0;
    int steps = 50;
    std::optional<double> g;
    std::size_t n = 2;
    double beta_min = -0.6;
    double beta_max = 0.0;
    int beta_steps = 61;
    double g_min = 1.0;
    double g_max = 100.0;
    int g_steps = 100;
    std::size_t N = 2;
    std::optional<std::size_t> N_max;
    double q0 = 0.5;
    double extent = 4.0;
    int grid_steps = 81;
    std::string out;
    Format format = Format::kCsv;
    CutoffPolicy policy;
    bool inject_fault = false;
    unsigned threads = 0;  ///< 0 picks the hardware concurrency

    /// Throws UsageError on empty ranges, bad step counts or out-of-domain values.
    void validate() const;
};

// A cell is empty when the column does not apply to the row (e.g. g_opt for kennedy).
using Cell = std::variant<std::monostate, std::int64_t, double>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Shortest round-trip decimal form; independent of the global locale.
std::string format_number(double value);
std::string to_csv(const Table& table);
std::string to_json(const Table& table);
/// Writes to `path`, or to `out` when the path is empty. Throws UsageError when unwritable.
void emit(const std::string& text, const std::string& path, std::ostream& out);

Table sweep_table(const RunConfig& config);
Table contour_table(const RunConfig& config);
Table wigner_table(const RunConfig& config);
Table dolinar_table(const RunConfig& config);
/// Single-point report as a JSON object.
std::string optimize_report(const RunConfig& config);

struct CheckResult {
    std::string name;
    bool pass;
    double measured;
    double limit;
};

struct VerifyOptions {
    CutoffPolicy policy;
    bool inject_fault = false;  ///< corrupts one Kraus set, for negative-control runs
};

std::vector<CheckResult> run_verify_suite(const VerifyOptions& options);
std::string format_checks(const std::vector<CheckResult>& checks);

int cmd_sweep(const RunConfig& config, std::ostream& out);
int cmd_contour(const RunConfig& config, std::ostream& out);
int cmd_wigner(const RunConfig& config, std::ostream& out);
int cmd_dolinar(const RunConfig& config, std::ostream& out);
int cmd_optimize(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cohrx::cli
