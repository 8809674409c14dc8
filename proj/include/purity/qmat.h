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

#pragma once

// Dense complex-matrix substrate: density matrices, bipartite and
// classical-quantum states, POVMs, channels and trace-norm distances.
//
// Index convention: for a composite system A⊗B the A index is the slow
// (major) one, i.e. basis vector |a⟩|b⟩ lives at index a * dimB + b.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace purity {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kSymmetrizeTol = 1e-8;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigenClamp = 1e-10;
inline constexpr double kPovmSumTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-10;

/// Positive, unit-trace Hermitian matrix. Construction validates; inputs
/// within 1e-8 of Hermitian are symmetrized, anything further is rejected.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);

  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix maximallyMixed(int dim);
  static DensityMatrix diagonal(std::span<const double> probs);
  static DensityMatrix basisState(int dim, int index);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

struct BipartiteState {
  BipartiteState(int dimA, int dimB, DensityMatrix rho);

  int dimA;
  int dimB;
  DensityMatrix rho;
};

/// Ensemble (p(x), ρ_x) encoding Σ_x p(x)|x⟩⟨x| ⊗ ρ_x.
struct ClassicalQuantumState {
  ClassicalQuantumState(std::vector<double> probs, std::vector<DensityMatrix> states);

  int alphabet() const { return static_cast<int>(probs.size()); }
  int dim() const { return states.front().dim(); }

  std::vector<double> probs;
  std::vector<DensityMatrix> states;
};

class Povm {
 public:
  explicit Povm(std::vector<Matrix> elements);

  int dim() const { return static_cast<int>(elements_.front().rows()); }
  int outcomes() const { return static_cast<int>(elements_.size()); }
  const Matrix& element(int x) const { return elements_[x]; }
  const std::vector<Matrix>& elements() const { return elements_; }

 private:
  std::vector<Matrix> elements_;
};

enum class Subsystem { A, B };

// ---- linear-algebra helpers -------------------------------------------------

Matrix kron(const Matrix& a, const Matrix& b);
Vector basisVector(int dim, int index);

/// Eigenvalues of a Hermitian matrix, ascending.
RealVector hermitianEigenvalues(const Matrix& m);

/// Square root of a positive semidefinite matrix; eigenvalues in
/// [-1e-10, 0) are clamped to zero, more negative ones are rejected.
Matrix psdSqrt(const Matrix& m);

/// Pseudo-inverse square root on the support (eigenvalues > cutoff).
Matrix psdInvSqrt(const Matrix& m, double cutoff = 1e-12);

bool isUnitary(const Matrix& u, double tol = kUnitaryTol);
double hermitianDeviation(const Matrix& m);
Matrix hermitianPart(const Matrix& m);

/// Reduced operator on the subsystems flagged in `keep`, for an operator on
/// ⊗_k C^{dims[k]} (first factor slowest).
Matrix partialTraceKeep(const Matrix& m, std::span<const int> dims, std::span<const bool> keep);

/// Reorders the tensor factors of `m` so that output factor k is input factor
/// perm[k].
Matrix permuteSubsystems(const Matrix& m, std::span<const int> dims, std::span<const int> perm);

// ---- operations ---------------------------------------------------------------

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix partialTrace(const BipartiteState& s, Subsystem keep);

/// Sum of absolute eigenvalues for Hermitian input, Tr√(m†m) otherwise.
double traceNorm(const Matrix& m);

/// p(x) = Tr(Λ_x ρ^A), ρ_x^B = Tr_A((Λ_x ⊗ 1)ρ^{AB}) / p(x). Outcomes with
/// p(x) < 1e-14 are dropped and the rest renormalized.
ClassicalQuantumState applyPovm(const Povm& povm, const BipartiteState& s);

/// Completely dephases `d` in the orthonormal basis given by the columns of
/// `basis`.
DensityMatrix dephase(const DensityMatrix& d, const Matrix& basis);

/// Dephases only the A factor of a bipartite state.
BipartiteState dephaseA(const BipartiteState& s, const Matrix& basis);

/// Dense classical-quantum state Σ p(x)|x⟩⟨x| ⊗ ρ_x with X as subsystem A.
BipartiteState embedCq(const ClassicalQuantumState& cq);

struct FidelityBound {
  double distance;
  double bound;
};

/// (‖ρ − |φ⟩⟨φ|‖₁, 2√(1 − ⟨φ|ρ|φ⟩)).
FidelityBound fidelityPureBound(const DensityMatrix& rho, const Vector& phi);

struct GentleBound {
  double disturbance;
  double bound;
};

/// (‖ρ − √Λ ρ √Λ‖₁, √(8λ)) with λ = 1 − Tr(ρΛ). `rho` may be
/// subnormalized; Λ must satisfy 0 ≤ Λ ≤ 1.
GentleBound gentleOperator(const Matrix& rho, const Matrix& lambda);

/// Block-diagonal Σ_x |x⟩⟨x| ⊗ U_x on X ⊗ target.
Matrix controlledUnitary(std::span<const Matrix> blocks);

}  // namespace purity
