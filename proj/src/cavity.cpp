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

#include "cohrx/cavity.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cohrx {

namespace {

Eigen::Index idx(std::size_t k) { return static_cast<Eigen::Index>(k); }

// The JC propagator as 2x2 rotations on index pairs plus phases on isolated levels.
struct BlockUnitary {
    struct Pair {
        Eigen::Index first;
        Eigen::Index second;
        Eigen::Matrix2cd u;
    };
    std::vector<Pair> pairs;
    std::vector<std::pair<Eigen::Index, Complex>> singles;

    // U M U^dagger without forming U.
    CMatrix conjugate(const CMatrix& m) const {
        CMatrix out = m;
        for (const auto& [i, ph] : singles) {
            out.row(i) *= ph;
        }
        for (const auto& p : pairs) {
            const Eigen::RowVectorXcd ri = out.row(p.first);
            const Eigen::RowVectorXcd rj = out.row(p.second);
            out.row(p.first) = p.u(0, 0) * ri + p.u(0, 1) * rj;
            out.row(p.second) = p.u(1, 0) * ri + p.u(1, 1) * rj;
        }
        for (const auto& [i, ph] : singles) {
            out.col(i) *= std::conj(ph);
        }
        for (const auto& p : pairs) {
            const CVector ci = out.col(p.first);
            const CVector cj = out.col(p.second);
            out.col(p.first) = std::conj(p.u(0, 0)) * ci + std::conj(p.u(0, 1)) * cj;
            out.col(p.second) = std::conj(p.u(1, 0)) * ci + std::conj(p.u(1, 1)) * cj;
        }
        return out;
    }
};

BlockUnitary jc_propagator(std::size_t d, const JCParams& params) {
    BlockUnitary u;
    const auto ground = [d](std::size_t k) { return idx(JointState::index(Atom::kGround, k, d)); };
    const auto excited = [d](std::size_t k) {
        return idx(JointState::index(Atom::kExcited, k, d));
    };
    const Complex minus_i(0.0, -1.0);

    // |0,G>: N = -1/2, no coupling.
    u.singles.emplace_back(ground(0), std::polar(1.0, 0.5 * params.omega * params.tau));
    for (std::size_t k = 0; k + 1 < d; ++k) {
        // Block {|k,E>, |k+1,G>}: N = k + 1/2, Rabi frequency gamma sqrt(k+1).
        const double angle = params.gamma * std::sqrt(static_cast<double>(k + 1)) * params.tau;
        const Complex phase =
            std::polar(1.0, -(static_cast<double>(k) + 0.5) * params.omega * params.tau);
        Eigen::Matrix2cd rot;
        rot << std::cos(angle), minus_i * std::sin(angle), minus_i * std::sin(angle),
            std::cos(angle);
        u.pairs.push_back({excited(k), ground(k + 1), phase * rot});
    }
    // |d-1,E> would couple to |d,G>, which is outside the truncation.
    u.singles.emplace_back(
        excited(d - 1),
        std::polar(1.0, -(static_cast<double>(d - 1) + 0.5) * params.omega * params.tau));
    return u;
}

}  // namespace

JointState::JointState(CMatrix matrix, std::size_t d) : matrix_(std::move(matrix)), d_(d) {
    if (d_ < 1 || matrix_.rows() != idx(2 * d_) || matrix_.cols() != idx(2 * d_)) {
        throw std::invalid_argument("JointState must be a 2d x 2d matrix");
    }
}

JointState JointState::product(const DensityOperator& cavity, Atom atom) {
    const std::size_t d = cavity.cutoff();
    CMatrix m = CMatrix::Zero(idx(2 * d), idx(2 * d));
    const Eigen::Index offset = idx(index(atom, 0, d));
    m.block(offset, offset, idx(d), idx(d)) = cavity.matrix();
    return JointState(std::move(m), d);
}

Complex JointState::element(Atom a, std::size_t j, Atom b, std::size_t k) const {
    return matrix_(idx(index(a, j, d_)), idx(index(b, k, d_)));
}

DensityOperator JointState::trace_atom() const {
    const Eigen::Index d = idx(d_);
    return DensityOperator(matrix_.topLeftCorner(d, d) + matrix_.bottomRightCorner(d, d));
}

void JCParams::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("JC coupling gamma must be positive");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("JC interaction time tau must be positive");
    }
    if (!std::isfinite(omega)) {
        throw std::invalid_argument("JC frequency omega must be finite");
    }
}

JointState jc_evolve(const JointState& state, const JCParams& params) {
    params.validate();
    return JointState(jc_propagator(state.cutoff(), params).conjugate(state.matrix()),
                      state.cutoff());
}

JointState dephase_cavity(const JointState& state) {
    const std::size_t d = state.cutoff();
    CMatrix m = state.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (r % idx(d) != c % idx(d)) {
                m(r, c) = 0.0;
            }
        }
    }
    return JointState(std::move(m), d);
}

CavityChannel::CavityChannel(std::size_t d, JCParams params) : d_(d), params_(params) {
    if (d_ < 4) {
        throw std::invalid_argument("cavity channel needs a cutoff of at least 4");
    }
    params_.validate();
}

DensityOperator CavityChannel::apply(const DensityOperator& rho) const {
    if (rho.cutoff() != d_) {
        throw std::invalid_argument("cavity channel: cutoff mismatch");
    }
    const BlockUnitary u = jc_propagator(d_, params_);
    CMatrix joint = JointState::product(rho, Atom::kGround).matrix();
    joint = u.conjugate(joint);
    joint = dephase_cavity(JointState(std::move(joint), d_)).matrix();
    joint = u.conjugate(joint);
    return JointState(std::move(joint), d_).trace_atom();
}

CMatrix CavityChannel::process_matrix() const {
    const Eigen::Index d = idx(d_);
    CMatrix process = CMatrix::Zero(d * d, d * d);
    for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index j = 0; j < d; ++j) {
            CMatrix unit = CMatrix::Zero(d, d);
            unit(j, k) = 1.0;
            const CMatrix out = apply(DensityOperator(std::move(unit))).matrix();
            process.col(k * d + j) = out.reshaped();
        }
    }
    return process;
}

CMatrix CavityChannel::choi_matrix() const {
    const Eigen::Index d = idx(d_);
    CMatrix choi = CMatrix::Zero(d * d, d * d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
            CMatrix unit = CMatrix::Zero(d, d);
            unit(j, k) = 1.0;
            choi.block(j * d, k * d, d, d) = apply(DensityOperator(std::move(unit))).matrix();
        }
    }
    return choi;
}

CavityChannel cavity_dephaser_channel(std::size_t d) { return CavityChannel(d, JCParams{}); }

DensityOperator apply(const CavityChannel& channel, const DensityOperator& rho) {
    return channel.apply(rho);
}

DensityOperator cavity_receiver_state(Complex alpha, std::size_t d) {
    return cavity_dephaser_channel(d).apply(DensityOperator::pure(coherent_state(alpha, d)));
}

}  // namespace cohrx
