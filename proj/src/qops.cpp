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

#include "qbfn/qops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qbfn/error.hpp"

namespace qbfn {
namespace {

const Complex kI{0.0, 1.0};

void require_square_same(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a.rows() << "x" << a.cols() << " vs " << b.rows()
           << "x" << b.cols() << ")";
        throw Error(ErrorCode::dimension_mismatch, os.str());
    }
}

void require_hermitian(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols() || !is_hermitian(m)) {
        throw Error(ErrorCode::not_hermitian, std::string(what) + ": matrix is not Hermitian");
    }
}

// Real coordinates of a Hermitian matrix (diagonal, then sqrt(2) Re/Im of the
// upper triangle); an isometry for the Hilbert-Schmidt inner product.
Eigen::VectorXd hermitian_coordinates(const ComplexMatrix& m) {
    const auto d = m.rows();
    Eigen::VectorXd v(d * d);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < d; ++i) v(k++) = m(i, i).real();
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            v(k++) = std::sqrt(2.0) * m(i, j).real();
            v(k++) = std::sqrt(2.0) * m(i, j).imag();
        }
    }
    return v;
}

}  // namespace

Spin Spin::from_value(double f) {
    const double twice = 2.0 * f;
    const double rounded = std::round(twice);
    if (!(f > 0.0) || std::abs(twice - rounded) > 1e-12) {
        std::ostringstream os;
        os << "spin F=" << f << " is not a positive half-integer";
        throw Error(ErrorCode::invalid_argument, os.str());
    }
    return Spin(static_cast<int>(rounded));
}

ComplexMatrix pauli(Axis axis) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    switch (axis) {
        case Axis::x:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case Axis::y:
            m(0, 1) = -kI;
            m(1, 0) = kI;
            break;
        case Axis::z:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
    }
    return m;
}

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix angular_momentum(Spin spin, Axis axis) {
    const int d = spin.dim();
    const double f = spin.value();
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    if (axis == Axis::z) {
        for (int i = 0; i < d; ++i) m(i, i) = f - i;
        return m;
    }
    // Raising operator: <m+1|F+|m> = sqrt(F(F+1) - m(m+1)).
    ComplexMatrix raise = ComplexMatrix::Zero(d, d);
    for (int i = 1; i < d; ++i) {
        const double mi = f - i;
        raise(i - 1, i) = std::sqrt(f * (f + 1.0) - mi * (mi + 1.0));
    }
    const ComplexMatrix lower = raise.adjoint();
    if (axis == Axis::x) return 0.5 * (raise + lower);
    return (raise - lower) / (2.0 * kI);
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square_same(a, b, "commutator");
    return a * b - b * a;
}

double expect(const ComplexMatrix& observable, const ComplexMatrix& state) {
    require_square_same(observable, state, "expect");
    const Complex value = (observable * state).trace();
    if (std::abs(value.imag()) > tol::kExpectImag && is_hermitian(observable) && is_hermitian(state)) {
        throw Error(ErrorCode::not_hermitian, "expect: non-real expectation of Hermitian operands");
    }
    return value.real();
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const ComplexMatrix& m) {
    const double scale = max_abs(m);
    if (scale == 0.0) return 0.0;
    return max_abs(m - m.adjoint()) / scale;
}

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
    return m.rows() == m.cols() && hermiticity_defect(m) <= rel_tol;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

BlochVector bloch_decompose(const ComplexMatrix& m) {
    if (m.rows() != 2 || m.cols() != 2) {
        throw Error(ErrorCode::dimension_mismatch, "bloch_decompose: expected a 2x2 matrix");
    }
    require_hermitian(m, "bloch_decompose");
    return {(pauli(Axis::x) * m).trace().real(), (pauli(Axis::y) * m).trace().real(),
            (pauli(Axis::z) * m).trace().real()};
}

ComplexMatrix bloch_compose(const BlochVector& v, double trace) {
    return 0.5 * (trace * identity(2) + v.x * pauli(Axis::x) + v.y * pauli(Axis::y) +
                  v.z * pauli(Axis::z));
}

double lyapunov_v(const ComplexMatrix& err) {
    require_hermitian(err, "lyapunov_v");
    // tr(A^2) = sum |a_ij|^2 for Hermitian A.
    return err.squaredNorm();
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double min_eigenvalue(const ComplexMatrix& m) { return hermitian_eigenvalues(m).minCoeff(); }

ComplexMatrix hermitian_sqrt(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
    Eigen::VectorXd roots = solver.eigenvalues();
    for (auto& lambda : roots) lambda = lambda < tol::kEigenClamp ? 0.0 : std::sqrt(lambda);
    const ComplexMatrix& u = solver.eigenvectors();
    return u * roots.cast<Complex>().asDiagonal() * u.adjoint();
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 2) {
        throw Error(ErrorCode::dimension_mismatch, "density matrix must be square with dim >= 2");
    }
    if (!m_.allFinite()) throw Error(ErrorCode::invalid_argument, "density matrix has non-finite entries");
    require_hermitian(m_, "density matrix");
    const Complex tr = m_.trace();
    if (std::abs(tr - 1.0) > tol::kTrace) {
        std::ostringstream os;
        os << "density matrix trace is " << tr << ", expected 1";
        throw Error(ErrorCode::invalid_argument, os.str());
    }
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    return DensityMatrix(identity(dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
    const Eigen::VectorXcd unit = psi.normalized();
    return DensityMatrix(hermitian_part(unit * unit.adjoint()));
}

double DensityMatrix::min_eigenvalue() const { return qbfn::min_eigenvalue(m_); }

bool DensityMatrix::is_positive(double tol) const { return min_eigenvalue() >= -tol; }

double DensityMatrix::purity() const { return lyapunov_v(m_); }

DensityMatrix psd_project(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
    Eigen::VectorXd lambda = solver.eigenvalues().cwiseMax(0.0);
    const double total = lambda.sum();
    if (!(total > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "psd_project: matrix has no positive spectrum");
    }
    lambda /= total;
    const ComplexMatrix& u = solver.eigenvectors();
    return DensityMatrix(hermitian_part(u * lambda.cast<Complex>().asDiagonal() * u.adjoint()));
}

double fidelity(const DensityMatrix& estimate, const DensityMatrix& truth) {
    if (estimate.dim() != truth.dim()) {
        throw Error(ErrorCode::dimension_mismatch, "fidelity: states have different dimensions");
    }
    const ComplexMatrix a = psd_project(estimate.matrix()).matrix();
    const ComplexMatrix b = psd_project(truth.matrix()).matrix();
    const ComplexMatrix root_a = hermitian_sqrt(a);
    const ComplexMatrix inner = hermitian_part(root_a * b * root_a);
    const double f = hermitian_sqrt(inner).trace().real();
    return std::clamp(f, 0.0, 1.0);
}

std::vector<ComplexMatrix> gell_mann_basis(int dim) {
    if (dim < 2) throw Error(ErrorCode::invalid_argument, "gell_mann_basis: dim must be >= 2");
    std::vector<ComplexMatrix> basis;
    basis.reserve(static_cast<std::size_t>(dim * dim - 1));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < dim; ++j) {
        for (int k = j + 1; k < dim; ++k) {
            ComplexMatrix sym = ComplexMatrix::Zero(dim, dim);
            sym(j, k) = inv_sqrt2;
            sym(k, j) = inv_sqrt2;
            basis.push_back(std::move(sym));
            ComplexMatrix anti = ComplexMatrix::Zero(dim, dim);
            anti(j, k) = -kI * inv_sqrt2;
            anti(k, j) = kI * inv_sqrt2;
            basis.push_back(std::move(anti));
        }
    }
    for (int l = 1; l < dim; ++l) {
        ComplexMatrix diag = ComplexMatrix::Zero(dim, dim);
        const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int j = 0; j < l; ++j) diag(j, j) = norm;
        diag(l, l) = -static_cast<double>(l) * norm;
        basis.push_back(std::move(diag));
    }
    return basis;
}

int lie_span_rank(const ComplexMatrix& observable, std::span<const ComplexMatrix> generators,
                  int depth) {
    std::vector<ComplexMatrix> all{observable};
    std::vector<ComplexMatrix> frontier{observable};
    for (int level = 0; level < depth; ++level) {
        std::vector<ComplexMatrix> next;
        for (const auto& e : frontier) {
            for (const auto& g : generators) next.push_back(kI * commutator(g, e));
        }
        all.insert(all.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    const auto d = observable.rows();
    Eigen::MatrixXd coords(d * d, static_cast<Eigen::Index>(all.size()));
    for (std::size_t c = 0; c < all.size(); ++c) {
        coords.col(static_cast<Eigen::Index>(c)) = hermitian_coordinates(all[c]);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(coords);
    const auto& sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
    return static_cast<int>((sigma.array() > 1e-9 * sigma(0)).count());
}

}  // namespace qbfn
