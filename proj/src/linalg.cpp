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

#include "lindctl/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lindctl {

ComplexMatrix identity(Eigen::Index dim) {
  return ComplexMatrix::Identity(dim, dim);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index rb = b.rows();
  const Eigen::Index cb = b.cols();
  ComplexMatrix out(a.rows() * rb, a.cols() * cb);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix expm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("expm: matrix is " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()) +
                                ", expected square");
  }
  if (m.size() == 0) return m;
  // Eigen's MatrixExponential: Padé-13 with 1-norm driven scaling/squaring.
  return m.exp();
}

ComplexVector res(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("res: matrix must be square");
  }
  const Eigen::Index d = m.rows();
  ComplexVector v(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = m(i, j);
  }
  return v;
}

ComplexMatrix unres(const ComplexVector& v) {
  const auto d = static_cast<Eigen::Index>(
      std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) {
    throw std::invalid_argument("unres: length " + std::to_string(v.size()) +
                                " is not a perfect square");
  }
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = v(i * d + j);
  }
  return m;
}

ComplexMatrix partial_trace(const ComplexMatrix& m,
                            std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != total) {
    throw std::invalid_argument(
        "partial_trace: subsystem dimensions multiply to " +
        std::to_string(total) + " but matrix is " + std::to_string(m.rows()) +
        "x" + std::to_string(m.cols()));
  }
  std::vector<bool> kept(dims.size(), false);
  for (auto k : keep) {
    if (k >= dims.size()) {
      throw std::invalid_argument("partial_trace: subsystem index " +
                                  std::to_string(k) + " out of range");
    }
    kept[k] = true;
  }

  // Strides of each subsystem in the full index (slot 0 most significant).
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t s = dims.size(); s-- > 1;) stride[s - 1] = stride[s] * dims[s];

  // Offsets into the full index contributed by every kept / traced multi-index.
  auto offsets = [&](bool want_kept) {
    std::vector<std::size_t> out{0};
    for (std::size_t s = 0; s < dims.size(); ++s) {
      if (kept[s] != want_kept) continue;
      std::vector<std::size_t> next;
      next.reserve(out.size() * dims[s]);
      for (auto base : out) {
        for (std::size_t x = 0; x < dims[s]; ++x) next.push_back(base + x * stride[s]);
      }
      out = std::move(next);
    }
    return out;
  };
  const auto keep_off = offsets(true);
  const auto trace_off = offsets(false);

  const auto dk = static_cast<Eigen::Index>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index b = 0; b < dk; ++b) {
      Complex acc{0.0, 0.0};
      for (auto t : trace_off) {
        acc += m(static_cast<Eigen::Index>(keep_off[a] + t),
                 static_cast<Eigen::Index>(keep_off[b] + t));
      }
      out(a, b) = acc;
    }
  }
  return out;
}

double spectral_norm_upper(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("spectral_norm_upper: matrix must be square");
  }
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const double sigma = svd.singularValues()(0);
  const double pad = 16.0 * std::numeric_limits<double>::epsilon() *
                     static_cast<double>(m.rows());
  const double cheap = std::sqrt(m.cwiseAbs().colwise().sum().maxCoeff() *
                                 m.cwiseAbs().rowwise().sum().maxCoeff());
  return std::min(sigma * (1.0 + pad), cheap);
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs_diff(m, m.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs_diff(m.adjoint() * m, identity(m.rows())) <= tol;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace lindctl
