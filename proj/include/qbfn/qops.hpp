// Copyright 2026 The qbfn Authors
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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qbfn/tolerances.hpp"

namespace qbfn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

enum class Axis { x, y, z };

/// A spin quantum number F, stored as the integer 2F so half-integers are exact.
class Spin {
public:
    explicit constexpr Spin(int twice_f = 1) : twice_(twice_f) {}

    /// Throws when F is not a positive multiple of 1/2.
    static Spin from_value(double f);

    constexpr int twice() const { return twice_; }
    constexpr int dim() const { return twice_ + 1; }
    constexpr double value() const { return 0.5 * twice_; }
    constexpr bool is_qubit() const { return twice_ == 1; }

    friend constexpr bool operator==(Spin, Spin) = default;

private:
    int twice_;
};

ComplexMatrix pauli(Axis axis);
ComplexMatrix identity(int dim);

/// Spin-F matrices in the |F, m> basis ordered m = F, F-1, ..., -F
/// (Condon-Shortley phases, real non-negative ladder elements).
ComplexMatrix angular_momentum(Spin spin, Axis axis);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Re tr(observable * state). Throws if the imaginary part exceeds
/// tol::kExpectImag while both arguments are Hermitian.
double expect(const ComplexMatrix& observable, const ComplexMatrix& state);

double max_abs(const ComplexMatrix& m);
/// ||M - M^dag||_max / ||M||_max (0 for the zero matrix).
double hermiticity_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double rel_tol = tol::kHermitianRel);
ComplexMatrix hermitian_part(const ComplexMatrix& m);

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm_squared() const { return x * x + y * y + z * z; }
};

BlochVector bloch_decompose(const ComplexMatrix& m);
ComplexMatrix bloch_compose(const BlochVector& v, double trace);

/// tr(A^2) for Hermitian A; the squared Frobenius norm.
double lyapunov_v(const ComplexMatrix& err);

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m);
double min_eigenvalue(const ComplexMatrix& m);

/// Square root of a PSD Hermitian matrix; eigenvalues below tol::kEigenClamp are
/// clamped to zero.
ComplexMatrix hermitian_sqrt(const ComplexMatrix& m);

/// A Hermitian, unit-trace matrix. Positivity is not part of the invariant:
/// observer states are allowed to leave the positive cone.
class DensityMatrix {
public:
    /// Validates Hermiticity and trace.
    explicit DensityMatrix(ComplexMatrix m);

    static DensityMatrix maximally_mixed(int dim);
    static DensityMatrix pure(const Eigen::VectorXcd& psi);

    const ComplexMatrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }
    double min_eigenvalue() const;
    bool is_positive(double tol = tol::kPositivity) const;
    double purity() const;

private:
    ComplexMatrix m_;
};

/// Clamp negative eigenvalues to zero and renormalize the trace to one.
DensityMatrix psd_project(const ComplexMatrix& m);

/// Uhlmann fidelity tr sqrt(sqrt(a) b sqrt(a)) of the PSD projections of both
/// arguments. Symmetric; 1 iff the states coincide.
double fidelity(const DensityMatrix& estimate, const DensityMatrix& truth);

/// Generalized Gell-Mann matrices scaled so that tr(E_i E_j) = delta_ij.
/// d^2 - 1 traceless Hermitian elements.
std::vector<ComplexMatrix> gell_mann_basis(int dim);

/// Dimension of the real span of the observable together with its nested
/// brackets i[G, .] with the generators, up to the given depth.
int lie_span_rank(const ComplexMatrix& observable, std::span<const ComplexMatrix> generators,
                  int depth);

}  // namespace qbfn
