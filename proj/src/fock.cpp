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

#include "cohrx/fock.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

namespace cohrx {

namespace {

constexpr double kNormSlack = 1e-12;
constexpr double kMaxSqueeze = 2.0;
constexpr std::size_t kMinCutoff = 8;
constexpr std::size_t kSpectrumGranule = 32;

Eigen::Index idx(std::size_t k) { return static_cast<Eigen::Index>(k); }

void require_same_cutoff(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": cutoff mismatch (" + std::to_string(a) +
                                    " vs " + std::to_string(b) + ")");
    }
}

void require_squeeze_range(double r) {
    if (!std::isfinite(r) || std::abs(r) > kMaxSqueeze) {
        throw std::invalid_argument("squeeze parameter out of range [-2, 2]: " + std::to_string(r));
    }
}

// exp(t G) for the squeeze generator G = (a^2 - a^dagger^2) / 2. G only couples levels of
// equal parity, and on each parity chain m_j = p + 2j it is antisymmetric tridiagonal with
// superdiagonal s_j. With P = diag(i^j), P^-1 G P = i S for the real symmetric tridiagonal S
// with off-diagonal s_j, so exp(t G) = P Q diag(exp(i t lambda)) Q^T P^-1.
struct SqueezeSpectrum {
    std::array<Eigen::VectorXd, 2> eigenvalues;
    std::array<Eigen::MatrixXd, 2> eigenvectors;

    CVector exp_times(double t, const CVector& v) const {
        CVector out(v.size());
        for (Eigen::Index parity = 0; parity < 2; ++parity) {
            const Eigen::MatrixXd& q = eigenvectors[parity];
            const Eigen::Index len = q.rows();
            Eigen::MatrixXd x(len, 2);
            Complex unit(1.0, 0.0);
            for (Eigen::Index j = 0; j < len; ++j) {
                const Complex c = v(parity + 2 * j) * std::conj(unit);
                x(j, 0) = c.real();
                x(j, 1) = c.imag();
                unit *= Complex(0.0, 1.0);
            }
            Eigen::MatrixXd c = q.transpose() * x;
            for (Eigen::Index k = 0; k < len; ++k) {
                const Complex z = Complex(c(k, 0), c(k, 1)) *
                                  std::polar(1.0, t * eigenvalues[parity](k));
                c(k, 0) = z.real();
                c(k, 1) = z.imag();
            }
            const Eigen::MatrixXd y = q * c;
            unit = Complex(1.0, 0.0);
            for (Eigen::Index j = 0; j < len; ++j) {
                out(parity + 2 * j) = Complex(y(j, 0), y(j, 1)) * unit;
                unit *= Complex(0.0, 1.0);
            }
        }
        return out;
    }
};

std::shared_ptr<const SqueezeSpectrum> squeeze_spectrum(std::size_t w) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const SqueezeSpectrum>> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        if (auto it = cache.find(w); it != cache.end()) {
            return it->second;
        }
    }

    auto entry = std::make_shared<SqueezeSpectrum>();
    for (std::size_t parity = 0; parity < 2; ++parity) {
        const std::size_t len = (w - parity + 1) / 2;
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(idx(len));
        Eigen::VectorXd off(idx(std::max<std::size_t>(len, 1) - 1));
        for (std::size_t j = 0; j + 1 < len; ++j) {
            const auto m = static_cast<double>(parity + 2 * j);
            off(idx(j)) = 0.5 * std::sqrt((m + 1.0) * (m + 2.0));
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
        entry->eigenvalues[parity] = solver.eigenvalues();
        entry->eigenvectors[parity] = solver.eigenvectors();
    }

    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.emplace(w, std::move(entry));
    return it->second;
}

// Wide enough for the guard band and for the squeezed-vacuum photon tail ~ tanh(|r|)^w,
// whose geometric decay the Poisson cutoff rule underestimates at large |r|.
std::size_t spectral_dimension(std::size_t d, double r, const CutoffPolicy& policy) {
    std::size_t w = working_dimension(d, policy);
    if (r != 0.0) {
        const double tail = std::log(policy.tail_tolerance) / std::log(std::tanh(std::abs(r)));
        w = std::max(w, static_cast<std::size_t>(std::ceil(tail)));
    }
    return ((w + kSpectrumGranule - 1) / kSpectrumGranule) * kSpectrumGranule;
}

double log_factorial(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

void CutoffPolicy::validate() const {
    if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
        throw std::invalid_argument("tail_tolerance must lie in (0, 1)");
    }
    if (!(guard_factor >= 1.0) || !std::isfinite(guard_factor)) {
        throw std::invalid_argument("guard_factor must be >= 1");
    }
}

std::size_t choose_cutoff(double max_amplitude, const CutoffPolicy& policy) {
    policy.validate();
    if (!(max_amplitude >= 0.0) || !std::isfinite(max_amplitude)) {
        throw std::invalid_argument("max_amplitude must be finite and non-negative");
    }

    const double mean = max_amplitude * max_amplitude;
    // Terms beyond mean + 40 sqrt(mean) + 60 are far below any usable tolerance.
    const auto last = static_cast<std::size_t>(std::ceil(mean + 40.0 * std::sqrt(mean) + 60.0));
    std::vector<double> pmf(last + 1, 0.0);
    if (max_amplitude == 0.0) {
        pmf[0] = 1.0;
    } else {
        const double log_a2 = std::log(mean);
        for (std::size_t k = 0; k <= last; ++k) {
            pmf[k] = std::exp(-mean + static_cast<double>(k) * log_a2 - log_factorial(k));
        }
    }

    // Suffix sums from the top keep the small tails accurate.
    std::vector<double> tail(last + 2, 0.0);
    for (std::size_t k = last + 1; k-- > 0;) {
        tail[k] = tail[k + 1] + pmf[k];
    }
    std::size_t d0 = 1;
    while (d0 <= last && tail[d0] >= policy.tail_tolerance) {
        ++d0;
    }
    const auto guarded =
        static_cast<std::size_t>(std::ceil(static_cast<double>(d0) * policy.guard_factor));
    return std::max(guarded, kMinCutoff);
}

std::size_t working_dimension(std::size_t d, const CutoffPolicy& policy) {
    policy.validate();
    return std::max<std::size_t>(
        d, static_cast<std::size_t>(std::ceil(static_cast<double>(d) * policy.guard_factor)));
}

// --- FockVector -------------------------------------------------------------

FockVector::FockVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1) {
        throw std::invalid_argument("FockVector needs a cutoff of at least 1");
    }
    if (!amplitudes_.allFinite()) {
        throw std::invalid_argument("FockVector amplitudes must be finite");
    }
    if (amplitudes_.norm() > 1.0 + kNormSlack) {
        throw std::invalid_argument("FockVector norm exceeds 1");
    }
}

FockVector FockVector::resized(std::size_t d) const {
    CVector out = CVector::Zero(idx(d));
    const Eigen::Index n = std::min(out.size(), amplitudes_.size());
    out.head(n) = amplitudes_.head(n);
    return FockVector(std::move(out));
}

// --- DensityOperator --------------------------------------------------------

DensityOperator::DensityOperator(CMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() < 1 || matrix_.rows() != matrix_.cols()) {
        throw std::invalid_argument("DensityOperator must be a non-empty square matrix");
    }
    if (!matrix_.allFinite()) {
        throw std::invalid_argument("DensityOperator entries must be finite");
    }
}

DensityOperator DensityOperator::pure(const FockVector& psi) {
    return DensityOperator(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityOperator DensityOperator::vacuum(std::size_t d) {
    return pure(fock_state(0, d));
}

double DensityOperator::purity() const { return matrix_.cwiseAbs2().sum(); }

double DensityOperator::hermiticity_defect() const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOperator::min_eigenvalue() const {
    const CMatrix symmetrized = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(symmetrized, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double DensityOperator::mean_photon_number() const {
    double n = 0.0;
    for (Eigen::Index k = 0; k < matrix_.rows(); ++k) {
        n += static_cast<double>(k) * matrix_(k, k).real();
    }
    return n;
}

DensityOperator DensityOperator::resized(std::size_t d) const {
    CMatrix out = CMatrix::Zero(idx(d), idx(d));
    const Eigen::Index n = std::min(out.rows(), matrix_.rows());
    out.topLeftCorner(n, n) = matrix_.topLeftCorner(n, n);
    return DensityOperator(std::move(out));
}

// --- FockOperator -----------------------------------------------------------

FockOperator::FockOperator(CMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() < 1 || matrix_.rows() != matrix_.cols()) {
        throw std::invalid_argument("FockOperator must be a non-empty square matrix");
    }
}

FockOperator FockOperator::identity(std::size_t d) {
    return FockOperator(CMatrix::Identity(idx(d), idx(d)));
}

FockOperator FockOperator::diagonal(std::span<const double> entries) {
    CMatrix m = CMatrix::Zero(idx(entries.size()), idx(entries.size()));
    for (std::size_t k = 0; k < entries.size(); ++k) {
        m(idx(k), idx(k)) = entries[k];
    }
    return FockOperator(std::move(m));
}

bool FockOperator::is_diagonal() const {
    for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
        for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
            if (i != j && matrix_(i, j) != Complex(0.0, 0.0)) {
                return false;
            }
        }
    }
    return true;
}

FockOperator FockOperator::operator*(const FockOperator& other) const {
    require_same_cutoff(cutoff(), other.cutoff(), "operator product");
    return FockOperator(matrix_ * other.matrix_);
}

FockVector FockOperator::operator*(const FockVector& psi) const {
    require_same_cutoff(cutoff(), psi.cutoff(), "operator action");
    return FockVector(matrix_ * psi.amplitudes());
}

double FockOperator::unitarity_defect(std::size_t block) const {
    const Eigen::Index b = std::min(idx(block), matrix_.rows());
    const CMatrix gram = matrix_.adjoint() * matrix_;
    return (gram.topLeftCorner(b, b) - CMatrix::Identity(b, b)).cwiseAbs().maxCoeff();
}

// --- States and operators ---------------------------------------------------

CMatrix annihilation(std::size_t d) {
    CMatrix a = CMatrix::Zero(idx(d), idx(d));
    for (std::size_t k = 1; k < d; ++k) {
        a(idx(k - 1), idx(k)) = std::sqrt(static_cast<double>(k));
    }
    return a;
}

CMatrix expm(const CMatrix& generator) { return generator.exp(); }

FockVector fock_state(std::size_t k, std::size_t d) {
    if (k >= d) {
        throw std::invalid_argument("Fock index outside cutoff");
    }
    CVector v = CVector::Zero(idx(d));
    v(idx(k)) = 1.0;
    return FockVector(std::move(v));
}

FockVector coherent_state(Complex alpha, std::size_t d) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw std::invalid_argument("coherent amplitude must be finite");
    }
    if (d < 1) {
        throw std::invalid_argument("cutoff must be positive");
    }
    CVector v(idx(d));
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t k = 1; k < d; ++k) {
        v(idx(k)) = v(idx(k - 1)) * alpha / std::sqrt(static_cast<double>(k));
    }
    return FockVector(std::move(v));
}

FockOperator displacement_operator(Complex beta, std::size_t d, const CutoffPolicy& policy) {
    if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) {
        throw std::invalid_argument("displacement must be finite");
    }
    const std::size_t w = working_dimension(d, policy);
    const CMatrix a = annihilation(w);
    const CMatrix g = beta * a.adjoint() - std::conj(beta) * a;
    return FockOperator(expm(g).topLeftCorner(idx(d), idx(d)));
}

FockOperator squeeze_operator(double r, std::size_t d, const CutoffPolicy& policy) {
    require_squeeze_range(r);
    const std::size_t w = working_dimension(d, policy);
    const CMatrix a = annihilation(w);
    const CMatrix g = (0.5 * r) * (a * a - a.adjoint() * a.adjoint());
    return FockOperator(expm(g).topLeftCorner(idx(d), idx(d)));
}

FockVector displaced_squeezed_state(Complex beta, double r, std::size_t d,
                                    const CutoffPolicy& policy) {
    if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) {
        throw std::invalid_argument("displacement must be finite");
    }
    require_squeeze_range(r);
    const std::size_t w = spectral_dimension(d, r, policy);

    // The coherent amplitudes are D(beta)|0> exactly; the squeeze acts in the wider space.
    CVector v = coherent_state(beta, w).amplitudes();
    if (r != 0.0) {
        v = squeeze_spectrum(w)->exp_times(-r, v);
    }
    CVector head = v.head(idx(d));
    // Renormalization drift from the eigensolver sits at the 1e-15 level.
    const double n = head.norm();
    if (n > 1.0) {
        head /= n;
    }
    return FockVector(std::move(head));
}

double expectation(const FockVector& psi, const DensityOperator& rho) {
    require_same_cutoff(psi.cutoff(), rho.cutoff(), "expectation");
    const Complex value = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
    return std::clamp(value.real(), 0.0, 1.0 + 1e-9);
}

Complex displacement_element(Complex z, std::size_t m, std::size_t n) {
    const double x = std::norm(z);
    if (m >= n) {
        const auto k = static_cast<unsigned>(m - n);
        const double scale = std::exp(0.5 * (log_factorial(n) - log_factorial(m)) - 0.5 * x);
        const double lag = std::assoc_laguerre(static_cast<unsigned>(n), k, x);
        return scale * lag * std::pow(z, static_cast<int>(k));
    }
    const auto k = static_cast<unsigned>(n - m);
    const double scale = std::exp(0.5 * (log_factorial(m) - log_factorial(n)) - 0.5 * x);
    const double lag = std::assoc_laguerre(static_cast<unsigned>(m), k, x);
    return scale * lag * std::pow(-std::conj(z), static_cast<int>(k));
}

std::vector<double> wigner(const DensityOperator& rho, std::span<const Complex> grid) {
    const std::size_t d = rho.cutoff();
    std::vector<double> out;
    out.reserve(grid.size());
    for (const Complex gamma : grid) {
        // D(gamma) P D(-gamma) = D(2 gamma) P
        const Complex z = 2.0 * gamma;
        Complex sum = 0.0;
        for (std::size_t m = 0; m < d; ++m) {
            const double parity = (m % 2 == 0) ? 1.0 : -1.0;
            for (std::size_t n = 0; n < d; ++n) {
                const Complex r = rho(m, n);
                if (r == Complex(0.0, 0.0)) {
                    continue;
                }
                sum += r * parity * displacement_element(z, n, m);
            }
        }
        out.push_back(2.0 / std::numbers::pi * sum.real());
    }
    return out;
}

}  // namespace cohrx
