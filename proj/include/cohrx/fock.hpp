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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cohrx {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// How many Fock levels to keep for a given amplitude scale.
///
/// The cutoff is the smallest d whose Poisson tail at the amplitude is below
/// `tail_tolerance`, scaled by `guard_factor`. Unitaries are additionally
/// built in a `guard_factor`-enlarged working space and truncated.
struct CutoffPolicy {
    double tail_tolerance = 1e-12;
    double guard_factor = 2.0;

    void validate() const;
};

/// Smallest cutoff covering a coherent amplitude of `max_amplitude`; never below 8.
std::size_t choose_cutoff(double max_amplitude, const CutoffPolicy& policy = {});

/// Working dimension used to build a unitary that is later truncated to `d`.
std::size_t working_dimension(std::size_t d, const CutoffPolicy& policy = {});

/// Pure state amplitudes over |0>..|d-1>. May be sub-normalized by truncation.
class FockVector {
public:
    explicit FockVector(CVector amplitudes);

    std::size_t cutoff() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const CVector& amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t k) const { return amplitudes_(static_cast<Eigen::Index>(k)); }
    double norm() const { return amplitudes_.norm(); }

    /// Zero-padded or truncated copy with a different cutoff.
    FockVector resized(std::size_t d) const;

private:
    CVector amplitudes_;
};

class DensityOperator {
public:
    explicit DensityOperator(CMatrix matrix);

    static DensityOperator pure(const FockVector& psi);
    static DensityOperator vacuum(std::size_t d);

    std::size_t cutoff() const { return static_cast<std::size_t>(matrix_.rows()); }
    const CMatrix& matrix() const { return matrix_; }
    Complex operator()(std::size_t j, std::size_t k) const {
        return matrix_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
    }

    double trace() const { return matrix_.trace().real(); }
    double purity() const;
    /// Largest |rho_jk - conj(rho_kj)|.
    double hermiticity_defect() const;
    double min_eigenvalue() const;
    double mean_photon_number() const;

    DensityOperator resized(std::size_t d) const;

private:
    CMatrix matrix_;
};

class FockOperator {
public:
    explicit FockOperator(CMatrix matrix);

    static FockOperator identity(std::size_t d);
    static FockOperator diagonal(std::span<const double> entries);

    std::size_t cutoff() const { return static_cast<std::size_t>(matrix_.rows()); }
    const CMatrix& matrix() const { return matrix_; }
    bool is_diagonal() const;

    FockOperator adjoint() const { return FockOperator(matrix_.adjoint()); }
    FockOperator operator*(const FockOperator& other) const;
    FockVector operator*(const FockVector& psi) const;

    /// max |U^dagger U - I| over the leading `block` x `block` entries.
    double unitarity_defect(std::size_t block) const;

private:
    CMatrix matrix_;
};

FockVector coherent_state(Complex alpha, std::size_t d);
FockVector fock_state(std::size_t k, std::size_t d);

/// exp(beta a^dagger - conj(beta) a), built in the enlarged working space and truncated.
FockOperator displacement_operator(Complex beta, std::size_t d, const CutoffPolicy& policy = {});

/// exp((a^2 - a^dagger^2) r / 2); |r| <= 2.
FockOperator squeeze_operator(double r, std::size_t d, const CutoffPolicy& policy = {});

/// S(-r) D(beta) |0>, evaluated in the enlarged working space before truncation.
FockVector displaced_squeezed_state(Complex beta, double r, std::size_t d,
                                    const CutoffPolicy& policy = {});

/// <psi|rho|psi>, clamped to [0, 1 + 1e-9].
double expectation(const FockVector& psi, const DensityOperator& rho);

/// W(gamma) = (2/pi) Tr[rho D(gamma) P D(-gamma)] with P the photon-number parity.
std::vector<double> wigner(const DensityOperator& rho, std::span<const Complex> grid);

/// <m|D(z)|n> from the associated-Laguerre closed form (no truncation).
Complex displacement_element(Complex z, std::size_t m, std::size_t n);

/// Dense matrix exponential (Padé scaling-and-squaring).
CMatrix expm(const CMatrix& generator);

/// Annihilation operator on a `d`-level space.
CMatrix annihilation(std::size_t d);

}  // namespace cohrx
