// Copyright 2026 The lindctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// linalg.hpp - dense complex linear algebra used by every other module:
// Kronecker products, matrix exponential, row-major vectorization, partial
// trace and norm estimates.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lindctl {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

ComplexMatrix identity(Eigen::Index dim);

/// Kronecker product: (a⊗b)(i*rb + k, j*cb + l) = a(i,j) * b(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Matrix exponential (Padé-13 with scaling and squaring).
/// Throws std::invalid_argument for a non-square input.
ComplexMatrix expm(const ComplexMatrix& m);

/// Row-major stacking: res(|i><j|) is the unit vector at i*d + j.
/// Under this convention res(A rho B) = kron(A, B^T) res(rho).
ComplexVector res(const ComplexMatrix& m);

/// Inverse of res() for a vector of length d*d.
ComplexMatrix unres(const ComplexVector& v);

/// Reduced matrix on the subsystems listed in `keep`, in increasing
/// subsystem order. `dims` lists every subsystem dimension, slot 0 leftmost.
ComplexMatrix partial_trace(const ComplexMatrix& m,
                            std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Upper bound on the spectral norm. Computed from the singular values and
/// padded by a few ulps so it never falls below the true value through
/// rounding.
double spectral_norm_upper(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& m, double tol);

/// max |a_ij - b_ij|.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace lindctl
