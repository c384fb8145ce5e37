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

#include <map>
#include <string>
#include <vector>

#include "cohrx/fock.hpp"

namespace cohrx {

/// A CPTP map given by its Kraus operators. `label` and `params` are for reporting.
class QuantumChannel {
public:
    QuantumChannel(std::vector<FockOperator> kraus, std::string label,
                   std::map<std::string, double> params = {});

    const std::vector<FockOperator>& kraus() const { return kraus_; }
    const std::string& label() const { return label_; }
    const std::map<std::string, double>& params() const { return params_; }
    std::size_t cutoff() const { return kraus_.front().cutoff(); }
    bool is_diagonal() const { return diagonal_; }
    /// True when every Kraus operator has its nonzeros on a single diagonal (k -> k + offset).
    bool is_shift_structured() const { return !groups_.empty(); }

    /// max |sum_i K_i^dagger K_i - I| over the leading `block` levels (all levels by default).
    double completeness_defect(std::size_t block = static_cast<std::size_t>(-1)) const;

private:
    std::vector<FockOperator> kraus_;
    std::string label_;
    std::map<std::string, double> params_;
    bool diagonal_ = false;

    // Kraus operators grouped by diagonal offset o: K(a, a - o) = diag(a).
    // rho'(a, b) += sum_K diag_K(a) conj(diag_K(b)) rho(a - o, b - o).
    struct OffsetGroup {
        int offset = 0;
        std::vector<CVector> diagonals;
        CMatrix factor;  // sum of outer products, kept when the group has several members
    };
    std::vector<OffsetGroup> groups_;

    friend DensityOperator apply(const QuantumChannel&, const DensityOperator&);
};

/// Non-heralded probabilistic amplifier of gain g >= 1 and cutoff degree n (success and
/// failure branches both kept).
QuantumChannel nhpamp_channel(double g, std::size_t n, std::size_t d);

/// Infinite-gain limit of the amplifier: Kraus {P_{>=n}, P_{<n}}.
QuantumChannel infgain_channel(std::size_t n, std::size_t d);

/// Keeps coherence inside span{|0>..|n-1>} and dephases every level above.
QuantumChannel dephaser_channel(std::size_t n, std::size_t d);

/// Quantum-limited attenuator with transmissivity eta in (0, 1] (beamsplitter dilation).
QuantumChannel attenuator_channel(double eta, std::size_t d);

/// Quantum-limited amplifier with gain k >= 1 (two-mode-squeezer dilation).
QuantumChannel amplifier_channel(double k, std::size_t d, const CutoffPolicy& policy = {});

QuantumChannel identity_channel(std::size_t d);

DensityOperator apply(const QuantumChannel& channel, const DensityOperator& rho);

}  // namespace cohrx
