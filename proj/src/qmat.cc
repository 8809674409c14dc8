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

#include "purity/qmat.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "purity/errors.h"

namespace purity {

namespace {

void requireSquare(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ValidationError(std::string(what) + ": matrix must be square and non-empty");
  }
}

bool isExactlyDiagonal(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
    }
  }
  return true;
}

}  // namespace

Matrix hermitianPart(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

// ---- DensityMatrix -----------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix m) {
  requireSquare(m, "DensityMatrix");
  double dev = hermitianDeviation(m);
  if (dev >= kSymmetrizeTol) {
    throw ValidationError("DensityMatrix: not Hermitian (deviation " + std::to_string(dev) + ")");
  }
  m_ = hermitianPart(m);
  double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw ValidationError("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
  }
  if (!isExactlyDiagonal(m_)) {
    RealVector ev = hermitianEigenvalues(m_);
    if (ev.minCoeff() < -kEigenClamp) {
      throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(ev.minCoeff()));
    }
  } else if (m_.diagonal().real().minCoeff() < -kEigenClamp) {
    throw ValidationError("DensityMatrix: negative diagonal entry");
  }
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw ValidationError("DensityMatrix::pure: vector is not normalized");
  }
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximallyMixed(int dim) {
  if (dim <= 0) throw ValidationError("maximallyMixed: dimension must be positive");
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probs) {
  Matrix m = Matrix::Zero(probs.size(), probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) m(i, i) = probs[i];
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::basisState(int dim, int index) {
  return DensityMatrix::pure(basisVector(dim, index));
}

BipartiteState::BipartiteState(int dA, int dB, DensityMatrix r) : dimA(dA), dimB(dB), rho(std::move(r)) {
  if (dA <= 0 || dB <= 0 || rho.dim() != dA * dB) {
    throw ValidationError("BipartiteState: dimension mismatch (" + std::to_string(dA) + "x" + std::to_string(dB) +
                          " vs " + std::to_string(rho.dim()) + ")");
  }
}

ClassicalQuantumState::ClassicalQuantumState(std::vector<double> p, std::vector<DensityMatrix> s)
    : probs(std::move(p)), states(std::move(s)) {
  if (probs.empty() || probs.size() != states.size()) {
    throw ValidationError("ClassicalQuantumState: need one state per probability");
  }
  double total = 0.0;
  for (double q : probs) {
    if (q < 0.0) throw ValidationError("ClassicalQuantumState: negative probability");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-10) throw ValidationError("ClassicalQuantumState: probabilities do not sum to 1");
  for (const auto& st : states) {
    if (st.dim() != states.front().dim()) throw ValidationError("ClassicalQuantumState: states differ in dimension");
  }
}

Povm::Povm(std::vector<Matrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw ValidationError("Povm: no elements");
  const Eigen::Index d = elements_.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (auto& e : elements_) {
    requireSquare(e, "Povm");
    if (e.rows() != d) throw ValidationError("Povm: elements differ in dimension");
    if (hermitianDeviation(e) >= kSymmetrizeTol) throw ValidationError("Povm: element not Hermitian");
    e = hermitianPart(e);
    if (!isExactlyDiagonal(e) ? hermitianEigenvalues(e).minCoeff() < -kEigenClamp
                              : e.diagonal().real().minCoeff() < -kEigenClamp) {
      throw ValidationError("Povm: element not positive semidefinite");
    }
    sum += e;
  }
  double err = (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (err > kPovmSumTol) throw ValidationError("Povm: elements do not sum to identity (error " + std::to_string(err) + ")");
}

// ---- helpers -------------------------------------------------------------------

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector basisVector(int dim, int index) {
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

RealVector hermitianEigenvalues(const Matrix& m) {
  if (isExactlyDiagonal(m)) {
    RealVector d = m.diagonal().real();
    std::sort(d.data(), d.data() + d.size());
    return d;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Matrix psdSqrt(const Matrix& m) {
  requireSquare(m, "psdSqrt");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitianPart(m));
  RealVector ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -kEigenClamp) throw ValidationError("psdSqrt: matrix is not positive semidefinite");
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix psdInvSqrt(const Matrix& m, double cutoff) {
  requireSquare(m, "psdInvSqrt");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitianPart(m));
  RealVector ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) > cutoff ? 1.0 / std::sqrt(ev(i)) : 0.0;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

bool isUnitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

double hermitianDeviation(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix partialTraceKeep(const Matrix& m, std::span<const int> dims, std::span<const bool> keep) {
  if (dims.size() != keep.size()) throw ValidationError("partialTraceKeep: dims/keep length mismatch");
  Eigen::Index total = 1;
  for (int d : dims) {
    if (d <= 0) throw ValidationError("partialTraceKeep: non-positive dimension");
    total *= d;
  }
  if (m.rows() != total || m.cols() != total) throw ValidationError("partialTraceKeep: dimension mismatch");

  const std::size_t k = dims.size();
  Eigen::Index keptDim = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (keep[i]) keptDim *= dims[i];
  }
  // Strides of each factor in the full index and in the kept index.
  std::vector<Eigen::Index> stride(k), keptStride(k, 0);
  Eigen::Index s = 1, ks = 1;
  for (std::size_t i = k; i-- > 0;) {
    stride[i] = s;
    s *= dims[i];
    if (keep[i]) {
      keptStride[i] = ks;
      ks *= dims[i];
    }
  }
  // For every full index: its kept index and its traced-out index.
  std::vector<Eigen::Index> keptOf(total), tracedOf(total);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index kept = 0, traced = 0, rem = idx;
    for (std::size_t i = 0; i < k; ++i) {
      Eigen::Index digit = rem / stride[i];
      rem %= stride[i];
      if (keep[i]) {
        kept += digit * keptStride[i];
      } else {
        traced = traced * dims[i] + digit;
      }
    }
    keptOf[idx] = kept;
    tracedOf[idx] = traced;
  }
  Matrix out = Matrix::Zero(keptDim, keptDim);
  for (Eigen::Index c = 0; c < total; ++c) {
    for (Eigen::Index r = 0; r < total; ++r) {
      if (tracedOf[r] == tracedOf[c]) out(keptOf[r], keptOf[c]) += m(r, c);
    }
  }
  return out;
}

Matrix permuteSubsystems(const Matrix& m, std::span<const int> dims, std::span<const int> perm) {
  const std::size_t k = dims.size();
  if (perm.size() != k) throw ValidationError("permuteSubsystems: permutation length mismatch");
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  if (m.rows() != total || m.cols() != total) throw ValidationError("permuteSubsystems: dimension mismatch");

  std::vector<int> newDims(k);
  for (std::size_t i = 0; i < k; ++i) newDims[i] = dims[perm[i]];
  std::vector<Eigen::Index> oldStride(k), newStride(k);
  Eigen::Index so = 1, sn = 1;
  for (std::size_t i = k; i-- > 0;) {
    oldStride[i] = so;
    so *= dims[i];
    newStride[i] = sn;
    sn *= newDims[i];
  }
  // map[new index] = old index
  std::vector<Eigen::Index> map(total);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rem = idx, old = 0;
    for (std::size_t i = 0; i < k; ++i) {
      Eigen::Index digit = rem / newStride[i];
      rem %= newStride[i];
      old += digit * oldStride[perm[i]];
    }
    map[idx] = old;
  }
  Matrix out(total, total);
  for (Eigen::Index c = 0; c < total; ++c) {
    for (Eigen::Index r = 0; r < total; ++r) out(r, c) = m(map[r], map[c]);
  }
  return out;
}

// ---- operations --------------------------------------------------------------

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()));
}

DensityMatrix partialTrace(const BipartiteState& s, Subsystem keep) {
  const int dims[2] = {s.dimA, s.dimB};
  const bool mask[2] = {keep == Subsystem::A, keep == Subsystem::B};
  return DensityMatrix(partialTraceKeep(s.rho.matrix(), dims, mask));
}

double traceNorm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && hermitianDeviation(m) <= 1e-12) {
    RealVector ev = hermitianEigenvalues(hermitianPart(m));
    return ev.cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

ClassicalQuantumState applyPovm(const Povm& povm, const BipartiteState& s) {
  if (povm.dim() != s.dimA) throw ValidationError("applyPovm: POVM acts on dimension " + std::to_string(povm.dim()) +
                                                  " but subsystem A has dimension " + std::to_string(s.dimA));
  const int dA = s.dimA, dB = s.dimB;
  const Matrix& rho = s.rho.matrix();
  std::vector<double> probs;
  std::vector<Matrix> cond;
  for (const Matrix& lam : povm.elements()) {
    // Tr_A((Λ ⊗ 1)ρ)[b, b'] = Σ_{a,a'} Λ[a, a'] ρ[(a' b), (a b')]
    Matrix sigma = Matrix::Zero(dB, dB);
    for (int a = 0; a < dA; ++a) {
      for (int ap = 0; ap < dA; ++ap) {
        if (lam(a, ap) == Complex(0.0, 0.0)) continue;
        sigma += lam(a, ap) * rho.block(ap * dB, a * dB, dB, dB);
      }
    }
    double p = sigma.trace().real();
    if (p < 1e-14) continue;
    probs.push_back(p);
    cond.push_back(sigma / p);
  }
  double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  std::vector<DensityMatrix> states;
  states.reserve(cond.size());
  for (std::size_t i = 0; i < cond.size(); ++i) {
    probs[i] /= total;
    Matrix c = hermitianPart(cond[i]);
    c /= c.trace().real();
    states.emplace_back(std::move(c));
  }
  return ClassicalQuantumState(std::move(probs), std::move(states));
}

namespace {

void requireOrthonormalBasis(const Matrix& basis, int dim) {
  if (basis.rows() != dim || basis.cols() != dim) throw ValidationError("dephase: basis has wrong shape");
  if (!isUnitary(basis, 1e-10)) throw ValidationError("dephase: basis is not orthonormal");
}

}  // namespace

DensityMatrix dephase(const DensityMatrix& d, const Matrix& basis) {
  requireOrthonormalBasis(basis, d.dim());
  Matrix inBasis = basis.adjoint() * d.matrix() * basis;
  Matrix diag = Matrix::Zero(d.dim(), d.dim());
  diag.diagonal() = inBasis.diagonal().real().cast<Complex>();
  Matrix out = basis * diag * basis.adjoint();
  out /= out.trace().real();
  return DensityMatrix(std::move(out));
}

BipartiteState dephaseA(const BipartiteState& s, const Matrix& basis) {
  requireOrthonormalBasis(basis, s.dimA);
  const int dA = s.dimA, dB = s.dimB;
  Matrix u = kron(basis, Matrix::Identity(dB, dB));
  Matrix inBasis = u.adjoint() * s.rho.matrix() * u;
  for (int a = 0; a < dA; ++a) {
    for (int ap = 0; ap < dA; ++ap) {
      if (a != ap) inBasis.block(a * dB, ap * dB, dB, dB).setZero();
    }
  }
  return BipartiteState(dA, dB, DensityMatrix(u * inBasis * u.adjoint()));
}

BipartiteState embedCq(const ClassicalQuantumState& cq) {
  const int nx = cq.alphabet(), d = cq.dim();
  Matrix m = Matrix::Zero(nx * d, nx * d);
  for (int x = 0; x < nx; ++x) m.block(x * d, x * d, d, d) = cq.probs[x] * cq.states[x].matrix();
  return BipartiteState(nx, d, DensityMatrix(std::move(m)));
}

FidelityBound fidelityPureBound(const DensityMatrix& rho, const Vector& phi) {
  if (phi.size() != rho.dim()) throw ValidationError("fidelityPureBound: dimension mismatch");
  if (std::abs(phi.norm() - 1.0) > 1e-10) throw ValidationError("fidelityPureBound: target is not a unit vector");
  double overlap = (phi.adjoint() * rho.matrix() * phi)(0, 0).real();
  double distance = traceNorm(rho.matrix() - phi * phi.adjoint());
  return {distance, 2.0 * std::sqrt(std::max(0.0, 1.0 - overlap))};
}

GentleBound gentleOperator(const Matrix& rho, const Matrix& lambda) {
  requireSquare(rho, "gentleOperator");
  if (lambda.rows() != rho.rows() || lambda.cols() != rho.cols()) throw ValidationError("gentleOperator: dimension mismatch");
  if (hermitianDeviation(lambda) >= kSymmetrizeTol) throw ValidationError("gentleOperator: operator not Hermitian");
  RealVector spec = hermitianEigenvalues(hermitianPart(lambda));
  if (spec.minCoeff() < -kEigenClamp || spec.maxCoeff() > 1.0 + kEigenClamp) {
    throw ValidationError("gentleOperator: operator spectrum outside [0, 1]");
  }
  if (hermitianDeviation(rho) >= kSymmetrizeTol) throw ValidationError("gentleOperator: state not Hermitian");
  Matrix r = hermitianPart(rho);
  double tr = r.trace().real();
  if (tr > 1.0 + kTraceTol || hermitianEigenvalues(r).minCoeff() < -kEigenClamp) {
    throw ValidationError("gentleOperator: state must be positive with trace at most 1");
  }
  Matrix root = psdSqrt(lambda);
  double success = (r * hermitianPart(lambda)).trace().real();
  double lam = std::max(0.0, 1.0 - success);
  return {traceNorm(r - root * r * root), std::sqrt(8.0 * lam)};
}

Matrix controlledUnitary(std::span<const Matrix> blocks) {
  if (blocks.empty()) throw ValidationError("controlledUnitary: no blocks");
  const Eigen::Index d = blocks.front().rows();
  for (const Matrix& b : blocks) {
    if (b.rows() != d || b.cols() != d) throw ValidationError("controlledUnitary: blocks differ in dimension");
    if (!isUnitary(b)) throw ValidationError("controlledUnitary: block is not unitary");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(blocks.size());
  Matrix u = Matrix::Zero(n * d, n * d);
  for (Eigen::Index x = 0; x < n; ++x) u.block(x * d, x * d, d, d) = blocks[x];
  return u;
}

}  // namespace purity
