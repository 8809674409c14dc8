// Copyright 2026 The Purity Authors
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

#include "purity/random.h"

#include <cmath>
#include <limits>

namespace purity {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection sampling keeps this exact and independent of the library's
  // distribution implementation.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % bound;
}

Matrix ginibre(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      double re = rng.normal();
      double im = rng.normal();
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return g;
}

Matrix randomIsometry(int rows, int cols, Rng& rng) {
  Matrix g = ginibre(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int j = 0; j < cols; ++j) {
    Complex d = r(j, j);
    double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

Matrix randomUnitary(int dim, Rng& rng) { return randomIsometry(dim, dim, rng); }

Vector randomPureVector(int dim, Rng& rng) {
  Vector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

DensityMatrix randomDensityMatrix(int dim, Rng& rng, int rank) {
  if (rank <= 0) rank = dim;
  Matrix g = ginibre(dim, rank, rng);
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix((m + m.adjoint()) * 0.5);
}

Matrix randomContraction(int dim, Rng& rng) {
  Matrix u = randomUnitary(dim, rng);
  RealVector spec(dim);
  for (int i = 0; i < dim; ++i) spec(i) = rng.uniform();
  Matrix m = u * spec.cast<Complex>().asDiagonal() * u.adjoint();
  return (m + m.adjoint()) * 0.5;
}

BipartiteState randomSeparableState(int dimA, int dimB, int terms, Rng& rng) {
  std::vector<double> q(terms);
  double total = 0.0;
  for (double& w : q) {
    w = rng.uniform() + 1e-3;
    total += w;
  }
  Matrix m = Matrix::Zero(dimA * dimB, dimA * dimB);
  for (int k = 0; k < terms; ++k) {
    m += (q[k] / total) * kron(randomDensityMatrix(dimA, rng).matrix(), randomDensityMatrix(dimB, rng).matrix());
  }
  m /= m.trace().real();
  return BipartiteState(dimA, dimB, DensityMatrix((m + m.adjoint()) * 0.5));
}

}  // namespace purity
