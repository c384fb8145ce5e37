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

#include "cohrx/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cohrx {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

class Counter {
public:
    explicit Counter(int limit) : limit_(limit) {}
    void tick() {
        if (++count_ > limit_) {
            throw OptimizationError("optimizer exceeded max_evals = " + std::to_string(limit_));
        }
    }
    int count() const { return count_; }

private:
    int limit_;
    int count_ = 0;
};

struct Point {
    double x;
    double value;
};

// Golden-section maximization on [a, b]; ties keep the left part. Returns the midpoint of
// the final bracket and its value.
template <typename F>
Point golden_section(F&& f, double a, double b, double tolerance) {
    double c = b - kInvPhi * (b - a);
    double e = a + kInvPhi * (b - a);
    double fc = f(c);
    double fe = f(e);
    while (b - a > tolerance) {
        if (fc >= fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + kInvPhi * (b - a);
            fe = f(e);
        }
    }
    const double mid = 0.5 * (a + b);
    return {mid, f(mid)};
}

double grid_point(const Interval& iv, int i, int n) {
    if (i == n - 1) {
        return iv.hi;
    }
    return iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

using Vertex = std::array<double, 2>;

Vertex clamp_to_box(const Vertex& p, const std::vector<Interval>& box) {
    return {std::clamp(p[0], box[0].lo, box[0].hi), std::clamp(p[1], box[1].lo, box[1].hi)};
}

// Nelder-Mead maximization restricted to the box by projection.
template <typename F>
std::pair<Vertex, double> nelder_mead(F&& f, Vertex start, const std::vector<Interval>& box,
                                      double tolerance) {
    const std::array<double, 2> step = {(box[0].hi - box[0].lo) / (kGrid2D - 1),
                                        (box[1].hi - box[1].lo) / (kGrid2D - 1)};
    std::array<Vertex, 3> simplex;
    simplex[0] = start;
    for (int k = 0; k < 2; ++k) {
        Vertex p = start;
        p[k] += step[k];
        if (p[k] > box[k].hi) {
            p[k] = start[k] - step[k];
        }
        simplex[k + 1] = clamp_to_box(p, box);
    }
    std::array<double, 3> values;
    for (int i = 0; i < 3; ++i) {
        values[i] = f(simplex[i]);
    }

    auto diameter = [&] {
        double dmax = 0.0;
        for (int i = 1; i < 3; ++i) {
            for (int k = 0; k < 2; ++k) {
                dmax = std::max(dmax, std::abs(simplex[i][k] - simplex[0][k]));
            }
        }
        return dmax;
    };

    while (true) {
        // Order best (largest) first; stable on ties.
        std::array<int, 3> order = {0, 1, 2};
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return values[a] > values[b]; });
        std::array<Vertex, 3> s = {simplex[order[0]], simplex[order[1]], simplex[order[2]]};
        std::array<double, 3> v = {values[order[0]], values[order[1]], values[order[2]]};
        simplex = s;
        values = v;
        if (diameter() < tolerance) {
            break;
        }

        const Vertex centroid = {0.5 * (simplex[0][0] + simplex[1][0]),
                                 0.5 * (simplex[0][1] + simplex[1][1])};
        auto along = [&](double t) {
            return clamp_to_box({centroid[0] + t * (simplex[2][0] - centroid[0]),
                                 centroid[1] + t * (simplex[2][1] - centroid[1])},
                                box);
        };

        const Vertex reflected = along(-1.0);
        const double fr = f(reflected);
        if (fr > values[0]) {
            const Vertex expanded = along(-2.0);
            const double fe = f(expanded);
            if (fe > fr) {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
            continue;
        }
        if (fr > values[1]) {
            simplex[2] = reflected;
            values[2] = fr;
            continue;
        }
        const bool outside = fr > values[2];
        const Vertex contracted = along(outside ? -0.5 : 0.5);
        const double fc = f(contracted);
        if (fc > std::max(fr, values[2]) || (outside && fc >= fr)) {
            simplex[2] = contracted;
            values[2] = fc;
            continue;
        }
        for (int i = 1; i < 3; ++i) {
            simplex[i] = clamp_to_box({simplex[0][0] + 0.5 * (simplex[i][0] - simplex[0][0]),
                                       simplex[0][1] + 0.5 * (simplex[i][1] - simplex[0][1])},
                                      box);
            values[i] = f(simplex[i]);
        }
    }
    return {simplex[0], values[0]};
}

}  // namespace

void SearchSpec::validate(std::size_t dims) const {
    if (bounds.size() != dims) {
        throw std::invalid_argument("SearchSpec needs " + std::to_string(dims) + " bounds");
    }
    for (const auto& b : bounds) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi)) {
            throw std::invalid_argument("SearchSpec bounds must be finite with lo < hi");
        }
    }
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("SearchSpec tolerance must be positive");
    }
    if (max_evals < 1) {
        throw std::invalid_argument("SearchSpec max_evals must be positive");
    }
}

Optimum1D maximize_1d(const std::function<double(double)>& f, const SearchSpec& spec) {
    spec.validate(1);
    Counter counter(spec.max_evals);
    auto eval = [&](double x) {
        counter.tick();
        return f(x);
    };

    const Interval& iv = spec.bounds[0];
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    std::vector<double> xs(kGrid1D);
    for (int i = 0; i < kGrid1D; ++i) {
        xs[i] = grid_point(iv, i, kGrid1D);
        const double v = eval(xs[i]);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }

    const double a = xs[std::max(best - 1, 0)];
    const double b = xs[std::min(best + 1, kGrid1D - 1)];
    const Point refined = golden_section(eval, a, b, spec.tolerance);
    if (refined.value >= best_value) {
        return {refined.x, refined.value, counter.count()};
    }
    return {xs[best], best_value, counter.count()};
}

Optimum2D maximize_2d(const std::function<double(double, double)>& f, const SearchSpec& spec) {
    spec.validate(2);
    Counter counter(spec.max_evals);
    auto eval = [&](const Vertex& p) {
        counter.tick();
        return f(p[0], p[1]);
    };

    std::vector<Vertex> grid;
    std::vector<double> values;
    grid.reserve(kGrid2D * kGrid2D);
    values.reserve(kGrid2D * kGrid2D);
    for (int i = 0; i < kGrid2D; ++i) {
        for (int j = 0; j < kGrid2D; ++j) {
            grid.push_back({grid_point(spec.bounds[0], i, kGrid2D),
                            grid_point(spec.bounds[1], j, kGrid2D)});
            values.push_back(eval(grid.back()));
        }
    }

    std::vector<std::size_t> order(grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

    Vertex best_x = grid[order[0]];
    double best_value = values[order[0]];
    for (std::size_t s = 0; s < 3 && s < order.size(); ++s) {
        const auto [x, v] = nelder_mead(eval, grid[order[s]], spec.bounds, spec.tolerance);
        if (v > best_value) {
            best_value = v;
            best_x = x;
        }
    }
    return {best_x, best_value, counter.count()};
}

GainOptimum maximize_over_gain(const std::function<double(double)>& f, double tolerance) {
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("gain search tolerance must be positive");
    }
    const double top = std::log10(kMaxFiniteGain);
    auto at = [&](double t) { return f(std::pow(10.0, t)); };

    std::vector<double> ts(kGainGrid);
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGainGrid; ++i) {
        ts[i] = grid_point({0.0, top}, i, kGainGrid);
        const double v = at(ts[i]);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    double best_g = std::pow(10.0, ts[best]);

    const Point refined = golden_section(at, ts[std::max(best - 1, 0)],
                                         ts[std::min(best + 1, kGainGrid - 1)], tolerance);
    if (refined.value > best_value) {
        best_value = refined.value;
        best_g = std::pow(10.0, refined.x);
    }

    const double infinite = f(std::numeric_limits<double>::infinity());
    if (infinite > best_value) {
        return {std::numeric_limits<double>::infinity(), infinite};
    }
    return {best_g, best_value};
}

}  // namespace cohrx
