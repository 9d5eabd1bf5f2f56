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

#include <cmath>
#include <random>

#include "qbfn/qops.hpp"

namespace qbfn::testing {

inline ComplexMatrix random_complex(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(n(rng), n(rng));
    return m;
}

inline ComplexMatrix random_hermitian(int dim, std::mt19937_64& rng) {
    const ComplexMatrix a = random_complex(dim, rng);
    return 0.5 * (a + a.adjoint());
}

inline ComplexMatrix random_traceless_hermitian(int dim, std::mt19937_64& rng) {
    ComplexMatrix h = random_hermitian(dim, rng);
    h -= (h.trace() / static_cast<double>(dim)) * ComplexMatrix::Identity(dim, dim);
    return h;
}

inline ComplexMatrix random_unitary(int dim, std::mt19937_64& rng) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_complex(dim, rng));
    return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

/// Full-rank mixed state from a Wishart draw.
inline DensityMatrix random_density(int dim, std::mt19937_64& rng) {
    const ComplexMatrix a = random_complex(dim, rng);
    ComplexMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

inline Eigen::VectorXcd basis_ket(int dim, int index) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(index) = 1.0;
    return psi;
}

}  // namespace qbfn::testing
