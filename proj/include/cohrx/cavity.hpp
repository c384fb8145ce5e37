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

#include <numbers>

#include "cohrx/fock.hpp"

namespace cohrx {

enum class Atom { kGround = 0, kExcited = 1 };

/// Density matrix on atom{G, E} (x) Fock(d). Basis index = atom * d + photons.
class JointState {
public:
    JointState(CMatrix matrix, std::size_t d);

    /// rho_cavity (x) |atom><atom|
    static JointState product(const DensityOperator& cavity, Atom atom);

    std::size_t cutoff() const { return d_; }
    const CMatrix& matrix() const { return matrix_; }
    static std::size_t index(Atom atom, std::size_t photons, std::size_t d) {
        return static_cast<std::size_t>(atom) * d + photons;
    }
    Complex element(Atom a, std::size_t j, Atom b, std::size_t k) const;

    DensityOperator trace_atom() const;

private:
    CMatrix matrix_;
    std::size_t d_;
};

/// Resonant Jaynes-Cummings evolution parameters; gamma is the frequency unit.
struct JCParams {
    double omega = 0.0;
    double gamma = 1.0;
    double tau = std::numbers::pi / 2.0;

    void validate() const;
};

/// Exact evolution under omega N + gamma (a^dag s_- + a s_+), N = a^dag a + Z/2, computed in
/// the two-dimensional blocks {|k,E>, |k+1,G>}. omega = 0 is the interaction picture.
JointState jc_evolve(const JointState& state, const JCParams& params);

/// Uniform average over theta of exp(-i theta a^dag a) on the cavity: removes coherence
/// between different photon numbers, keeps atomic coherence at equal photon number.
JointState dephase_cavity(const JointState& state);

/// Cavity field map: Rabi transfer, cavity dephasing, Rabi transfer, trace over the atom
/// (which starts in |G>).
class CavityChannel {
public:
    explicit CavityChannel(std::size_t d, JCParams params = {});

    std::size_t cutoff() const { return d_; }
    const JCParams& params() const { return params_; }

    DensityOperator apply(const DensityOperator& rho) const;

    /// Dense d^2 x d^2 superoperator acting on column-stacked vec(rho).
    CMatrix process_matrix() const;
    /// Choi matrix sum_jk |j><k| (x) Phi(|j><k|), of size d^2 x d^2.
    CMatrix choi_matrix() const;

private:
    std::size_t d_;
    JCParams params_;
};

/// The protocol at tau = pi / (2 gamma) in the interaction picture.
CavityChannel cavity_dephaser_channel(std::size_t d);

DensityOperator apply(const CavityChannel& channel, const DensityOperator& rho);

/// Cavity channel applied to |alpha><alpha|.
DensityOperator cavity_receiver_state(Complex alpha, std::size_t d);

}  // namespace cohrx
