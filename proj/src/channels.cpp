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

#include "cohrx/channels.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

namespace cohrx {

namespace {

Eigen::Index idx(std::size_t k) { return static_cast<Eigen::Index>(k); }

void require_level_below_cutoff(std::size_t n, std::size_t d) {
    if (n >= d) {
        throw std::invalid_argument("channel level n must be below the cutoff");
    }
}

// exp(t G) e_0 for the real antisymmetric tridiagonal G with G(m+1, m) = sub[m] and
// G(m, m+1) = -sub[m]. With D = diag(i^m), D G D^{-1} = i S where S is the real symmetric
// tridiagonal matrix with off-diagonal sub, so exp(t G) e_0 = D^{-1} Q exp(i t L) Q^T e_0.
std::vector<Complex> antisymmetric_tridiagonal_exp_e0(const std::vector<double>& sub, double t) {
    const auto m = static_cast<Eigen::Index>(sub.size() + 1);
    if (m == 1) {
        return {Complex(1.0, 0.0)};
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd off(m - 1);
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
        off(i) = sub[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    const Eigen::MatrixXd& q = solver.eigenvectors();

    CVector c(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        c(j) = q(0, j) * std::polar(1.0, t * lambda(j));
    }
    const CVector v = q.cast<Complex>() * c;

    std::vector<Complex> out(static_cast<std::size_t>(m));
    Complex phase(1.0, 0.0);  // i^{-m}
    for (Eigen::Index j = 0; j < m; ++j) {
        out[static_cast<std::size_t>(j)] = phase * v(j);
        phase *= Complex(0.0, -1.0);
    }
    return out;
}

// Offset o such that every nonzero K(a, b) has a - b = o; zero operators count as offset 0.
std::optional<int> single_offset(const CMatrix& k) {
    std::optional<int> offset;
    for (Eigen::Index b = 0; b < k.cols(); ++b) {
        for (Eigen::Index a = 0; a < k.rows(); ++a) {
            if (k(a, b) == Complex(0.0, 0.0)) {
                continue;
            }
            const int o = static_cast<int>(a - b);
            if (offset && *offset != o) {
                return std::nullopt;
            }
            offset = o;
        }
    }
    return offset.value_or(0);
}

// diag(a) = K(a, a - o), zero where a - o falls outside the space.
CVector offset_diagonal(const CMatrix& k, int offset) {
    CVector diag = CVector::Zero(k.rows());
    for (Eigen::Index a = 0; a < k.rows(); ++a) {
        const Eigen::Index b = a - offset;
        if (b >= 0 && b < k.cols()) {
            diag(a) = k(a, b);
        }
    }
    return diag;
}

std::vector<FockOperator> empty_kraus(std::size_t count, std::size_t d) {
    return std::vector<FockOperator>(count, FockOperator(CMatrix::Zero(idx(d), idx(d))));
}

}  // namespace

QuantumChannel::QuantumChannel(std::vector<FockOperator> kraus, std::string label,
                               std::map<std::string, double> params)
    : kraus_(std::move(kraus)), label_(std::move(label)), params_(std::move(params)) {
    if (kraus_.empty()) {
        throw std::invalid_argument("channel needs at least one Kraus operator");
    }
    const std::size_t d = kraus_.front().cutoff();
    for (const auto& k : kraus_) {
        if (k.cutoff() != d) {
            throw std::invalid_argument("Kraus operators must share a cutoff");
        }
    }
    diagonal_ = std::all_of(kraus_.begin(), kraus_.end(),
                            [](const FockOperator& k) { return k.is_diagonal(); });

    std::map<int, OffsetGroup> by_offset;
    for (const auto& k : kraus_) {
        const auto offset = single_offset(k.matrix());
        if (!offset) {
            by_offset.clear();
            break;
        }
        auto& group = by_offset[*offset];
        group.offset = *offset;
        group.diagonals.push_back(offset_diagonal(k.matrix(), *offset));
    }
    for (auto& [offset, group] : by_offset) {
        if (group.diagonals.size() > 1) {
            group.factor = CMatrix::Zero(idx(d), idx(d));
            for (const auto& diag : group.diagonals) {
                group.factor.noalias() += diag * diag.adjoint();
            }
            group.diagonals.clear();
        }
        groups_.push_back(std::move(group));
    }
}

double QuantumChannel::completeness_defect(std::size_t block) const {
    const std::size_t d = cutoff();
    const Eigen::Index b = idx(std::min(block, d));
    CMatrix sum = CMatrix::Zero(idx(d), idx(d));
    for (const auto& k : kraus_) {
        sum += k.matrix().adjoint() * k.matrix();
    }
    return (sum.topLeftCorner(b, b) - CMatrix::Identity(b, b)).cwiseAbs().maxCoeff();
}

QuantumChannel nhpamp_channel(double g, std::size_t n, std::size_t d) {
    if (!std::isfinite(g) || !(g >= 1.0)) {
        throw std::invalid_argument("nh-P-Amp gain must be finite and >= 1");
    }
    require_level_below_cutoff(n, d);
    std::vector<double> success(d, 1.0);
    std::vector<double> failure(d, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
        success[k] = std::pow(g, static_cast<double>(k) - static_cast<double>(n));
        failure[k] = std::sqrt(1.0 - success[k] * success[k]);
    }
    return QuantumChannel({FockOperator::diagonal(success), FockOperator::diagonal(failure)},
                          "nhpamp", {{"g", g}, {"n", static_cast<double>(n)}});
}

QuantumChannel infgain_channel(std::size_t n, std::size_t d) {
    require_level_below_cutoff(n, d);
    std::vector<double> upper(d, 0.0);
    std::vector<double> lower(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        (k >= n ? upper : lower)[k] = 1.0;
    }
    return QuantumChannel({FockOperator::diagonal(upper), FockOperator::diagonal(lower)},
                          "infgain", {{"n", static_cast<double>(n)}});
}

QuantumChannel dephaser_channel(std::size_t n, std::size_t d) {
    if (n < 1) {
        throw std::invalid_argument("dephaser level n must be positive");
    }
    require_level_below_cutoff(n, d);
    std::vector<FockOperator> kraus;
    kraus.reserve(d - n + 1);
    std::vector<double> lower(d, 0.0);
    std::fill(lower.begin(), lower.begin() + static_cast<std::ptrdiff_t>(n), 1.0);
    kraus.push_back(FockOperator::diagonal(lower));
    for (std::size_t k = n; k < d; ++k) {
        std::vector<double> e(d, 0.0);
        e[k] = 1.0;
        kraus.push_back(FockOperator::diagonal(e));
    }
    return QuantumChannel(std::move(kraus), "dephaser", {{"n", static_cast<double>(n)}});
}

QuantumChannel attenuator_channel(double eta, std::size_t d) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("attenuator transmissivity must lie in (0, 1]");
    }
    // U = exp(theta (a^dag b - a b^dag)), cos(theta) = sqrt(eta). Total photon number is
    // conserved, so |k, 0> evolves inside span{|k - j, j>, j = 0..k}.
    const double theta = std::acos(std::sqrt(eta));
    std::vector<FockOperator> kraus = empty_kraus(d, d);
    std::vector<CMatrix> mats(d, CMatrix::Zero(idx(d), idx(d)));
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> sub(k);
        for (std::size_t j = 0; j < k; ++j) {
            sub[j] = std::sqrt(static_cast<double>((k - j) * (j + 1)));
        }
        // In this basis the generator has +sub above the diagonal, hence the sign.
        const auto column = antisymmetric_tridiagonal_exp_e0(sub, -theta);
        for (std::size_t j = 0; j <= k; ++j) {
            mats[j](idx(k - j), idx(k)) = column[j];
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        kraus[j] = FockOperator(std::move(mats[j]));
    }
    return QuantumChannel(std::move(kraus), "attenuator", {{"eta", eta}});
}

QuantumChannel amplifier_channel(double k, std::size_t d, const CutoffPolicy& policy) {
    if (!std::isfinite(k) || !(k >= 1.0)) {
        throw std::invalid_argument("amplifier gain must be finite and >= 1");
    }
    // U = exp(s (a^dag b^dag - a b)), cosh(s) = sqrt(k). n_a - n_b is conserved, so
    // |p, 0> evolves inside the infinite chain span{|p + m, m>}. Only m < d - p survives the
    // truncation; the chain is cut at the guard-enlarged length of that range.
    const double s = std::acosh(std::sqrt(k));
    std::vector<CMatrix> mats(d, CMatrix::Zero(idx(d), idx(d)));
    for (std::size_t p = 0; p < d; ++p) {
        const std::size_t w = std::max<std::size_t>(working_dimension(d - p, policy), 2);
        std::vector<double> sub(w - 1);
        for (std::size_t m = 0; m + 1 < w; ++m) {
            sub[m] = std::sqrt(static_cast<double>((p + m + 1) * (m + 1)));
        }
        const auto column = antisymmetric_tridiagonal_exp_e0(sub, s);
        for (std::size_t m = 0; m < d && p + m < d; ++m) {
            mats[m](idx(p + m), idx(p)) = column[m];
        }
    }
    std::vector<FockOperator> kraus = empty_kraus(d, d);
    for (std::size_t m = 0; m < d; ++m) {
        kraus[m] = FockOperator(std::move(mats[m]));
    }
    return QuantumChannel(std::move(kraus), "amplifier", {{"k", k}});
}

QuantumChannel identity_channel(std::size_t d) {
    return QuantumChannel({FockOperator::identity(d)}, "identity");
}

DensityOperator apply(const QuantumChannel& channel, const DensityOperator& rho) {
    if (channel.cutoff() != rho.cutoff()) {
        throw std::invalid_argument("apply: channel and state cutoffs differ");
    }
    const Eigen::Index d = idx(rho.cutoff());
    CMatrix out = CMatrix::Zero(d, d);
    if (channel.is_shift_structured()) {
        for (const auto& group : channel.groups_) {
            const Eigen::Index o = group.offset;
            // Rows/cols a with 0 <= a - o < d.
            const Eigen::Index first = std::max<Eigen::Index>(0, o);
            const Eigen::Index count = d - std::abs(o);
            if (count <= 0) {
                continue;
            }
            const auto source = rho.matrix().block(first - o, first - o, count, count);
            if (group.factor.size() > 0) {
                out.block(first, first, count, count) +=
                    group.factor.block(first, first, count, count).cwiseProduct(source);
                continue;
            }
            for (const auto& diag : group.diagonals) {
                const CVector seg = diag.segment(first, count);
                out.block(first, first, count, count) +=
                    (seg * seg.adjoint()).cwiseProduct(source);
            }
        }
        return DensityOperator(std::move(out));
    }
    for (const auto& k : channel.kraus()) {
        out.noalias() += k.matrix() * rho.matrix() * k.matrix().adjoint();
    }
    return DensityOperator(std::move(out));
}

}  // namespace cohrx
