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

// Deterministic derivative-free maximization: a coarse grid picks the basin, then a local
// method (golden section in 1-D, Nelder-Mead in 2-D) refines it. Grid ties go to the
// lowest index, so repeated runs and ports agree bit for bit.

#include <array>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cohrx {

struct Interval {
    double lo;
    double hi;
};

struct SearchSpec {
    std::vector<Interval> bounds;
    double tolerance = 1e-7;
    int max_evals = 10000;

    void validate(std::size_t dims) const;
};

class OptimizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Optimum1D {
    double x;
    double value;
    int evals;
};

struct Optimum2D {
    std::array<double, 2> x;
    double value;
    int evals;
};

struct GainOptimum {
    double g;  ///< +infinity when the infinite-gain evaluation wins
    double value;
};

inline constexpr int kGrid1D = 129;
inline constexpr int kGrid2D = 33;
inline constexpr int kGainGrid = 65;
inline constexpr double kMaxFiniteGain = 1e3;

/// 129-point scan then golden-section refinement inside the best grid bracket.
Optimum1D maximize_1d(const std::function<double(double)>& f, const SearchSpec& spec);

/// 33x33 scan then Nelder-Mead from the three best grid points.
Optimum2D maximize_2d(const std::function<double(double, double)>& f, const SearchSpec& spec);

/// Maximizes over g in [1, 1e3] on a 65-point log grid with golden-section refinement in
/// log g, and compares against f(+infinity).
GainOptimum maximize_over_gain(const std::function<double(double)>& f,
                               double tolerance = 1e-7);

}  // namespace cohrx
