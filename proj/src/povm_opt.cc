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

#include "purity/povm_opt.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "purity/entropy.h"
#include "purity/errors.h"
#include "purity/random.h"

namespace purity {

namespace {

constexpr double kPruneWeight = 1e-12;
constexpr double kLogFloor = 1e-12;
constexpr double kIsometryTol = 1e-9;

// Entropy in bits of a Hermitian matrix with tiny negative eigenvalues
// clamped to zero.
double clampedEntropy(const RealVector& ev) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 0.0) h -= ev(i) * std::log2(ev(i));
  }
  return h;
}

// Summing in sorted order makes the objective exactly invariant under
// relabeling of outcomes.
double sortedSum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

// σ_x = Tr_A((r_x†r_x ⊗ 1)ρ) = Σ_{a',a} r_{a'} conj(r_a) ρ_[a'][a].
Matrix conditionalBlock(const Matrix& rho, int dA, int dB, const Matrix& rows, int x) {
  Matrix sigma = Matrix::Zero(dB, dB);
  for (int ap = 0; ap < dA; ++ap) {
    Complex rp = rows(x, ap);
    if (rp == Complex(0.0)) continue;
    for (int a = 0; a < dA; ++a) {
      Complex w = rp * std::conj(rows(x, a));
      if (w == Complex(0.0)) continue;
      sigma.noalias() += w * rho.block(ap * dB, a * dB, dB, dB);
    }
  }
  return sigma;
}

void checkDims(const RankOnePovm& p, const BipartiteState& s) {
  if (p.dim() != s.dimA) throw ValidationError("POVM dimension does not match subsystem A");
}

Matrix retract(const Matrix& y) {
  Matrix g = y.adjoint() * y;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  RealVector inv = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return y * (es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint());
}

struct AscentResult {
  Matrix rows;
  double value;
  bool converged;
};

AscentResult ascend(const BipartiteState& s, Matrix m, const OptimizerConfig& cfg) {
  Matrix e;
  double f = objectiveWithGradient(RankOnePovm(m), s, e);
  double step = 1.0;
  int stall = 0;
  for (int it = 0; it < cfg.maxIters; ++it) {
    Matrix mte = m.adjoint() * e;
    Matrix g = e - m * ((mte + mte.adjoint()) * 0.5);
    double gn2 = g.squaredNorm();
    if (std::sqrt(gn2) < cfg.gradTol) return {m, f, true};
    double t = step;
    bool accepted = false;
    Matrix mn;
    double fn = f;
    for (int ls = 0; ls < 60; ++ls) {
      mn = retract(m + t * g);
      fn = objective(RankOnePovm(mn), s);
      if (fn >= f + 1e-4 * t * gn2) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) return {m, f, true};
    double gain = fn - f;
    m = mn;
    f = objectiveWithGradient(RankOnePovm(m), s, e);
    step = std::min(4.0 * t, 1e4);
    stall = gain < 1e-13 ? stall + 1 : 0;
    if (stall >= 3) return {m, f, true};
  }
  return {m, f, false};
}

}  // namespace

RankOnePovm::RankOnePovm(Matrix rows) : rows_(std::move(rows)) {
  if (rows_.rows() == 0 || rows_.cols() == 0) throw ValidationError("RankOnePovm: empty");
  if (rows_.rows() < rows_.cols()) throw ValidationError("RankOnePovm: fewer outcomes than dimension");
  Matrix g = rows_.adjoint() * rows_;
  double dev = (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= kIsometryTol)) throw ValidationError("RankOnePovm: elements do not sum to identity");
}

RankOnePovm RankOnePovm::computationalBasis(int dim, int outcomes) {
  return fromBasis(Matrix::Identity(dim, dim), outcomes);
}

RankOnePovm RankOnePovm::fromBasis(const Matrix& unitary, int outcomes) {
  int d = static_cast<int>(unitary.rows());
  if (outcomes < 0) outcomes = d;
  Matrix rows = Matrix::Zero(outcomes, d);
  rows.topRows(d) = unitary.adjoint();
  return RankOnePovm(std::move(rows));
}

RankOnePovm RankOnePovm::fromPovm(const Povm& povm) {
  Matrix rows(povm.outcomes(), povm.dim());
  for (int x = 0; x < povm.outcomes(); ++x) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(povm.element(x));
    const RealVector& ev = es.eigenvalues();
    int top = static_cast<int>(ev.size()) - 1;
    for (int i = 0; i < top; ++i) {
      if (std::abs(ev(i)) > kPovmSumTol) throw ValidationError("RankOnePovm: element has rank above one");
    }
    rows.row(x) = std::sqrt(std::max(ev(top), 0.0)) * es.eigenvectors().col(top).adjoint();
  }
  return RankOnePovm(std::move(rows));
}

Povm RankOnePovm::toPovm() const {
  std::vector<Matrix> elements;
  elements.reserve(outcomes());
  for (int x = 0; x < outcomes(); ++x) elements.push_back(element(x));
  return Povm(std::move(elements));
}

RankOnePovm RankOnePovm::padded(int outcomes) const {
  if (outcomes < this->outcomes()) throw ValidationError("RankOnePovm::padded: cannot drop outcomes");
  Matrix rows = Matrix::Zero(outcomes, dim());
  rows.topRows(this->outcomes()) = rows_;
  return RankOnePovm(std::move(rows));
}

RankOnePovm tensorPovm(const RankOnePovm& a, const RankOnePovm& b) {
  return RankOnePovm(kron(a.rows(), b.rows()));
}

double objective(const RankOnePovm& povm, const BipartiteState& s) {
  checkDims(povm, s);
  const Matrix& rho = s.rho.matrix();
  double hB = vonNeumann(partialTrace(s, Subsystem::B));
  std::vector<double> terms;
  for (int x = 0; x < povm.outcomes(); ++x) {
    Matrix sigma = conditionalBlock(rho, s.dimA, s.dimB, povm.rows(), x);
    double p = sigma.trace().real();
    if (p < kPruneWeight) continue;
    terms.push_back(p * clampedEntropy(hermitianEigenvalues((sigma + sigma.adjoint()) * (0.5 / p))));
  }
  return hB - sortedSum(terms);
}

double objectiveWithGradient(const RankOnePovm& povm, const BipartiteState& s, Matrix& gradient) {
  checkDims(povm, s);
  const int dA = s.dimA, dB = s.dimB;
  const Matrix& rho = s.rho.matrix();
  const Matrix& rows = povm.rows();
  gradient = Matrix::Zero(rows.rows(), rows.cols());
  double hB = vonNeumann(partialTrace(s, Subsystem::B));
  std::vector<double> terms;
  for (int x = 0; x < povm.outcomes(); ++x) {
    Matrix sigma = conditionalBlock(rho, dA, dB, rows, x);
    double p = sigma.trace().real();
    if (p < kPruneWeight) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es((sigma + sigma.adjoint()) * (0.5 / p));
    RealVector ev = es.eigenvalues();
    terms.push_back(p * clampedEntropy(ev));
    // d/dσ of −p H(σ/p) in nats is log(σ/p); the gradient in bits carries 1/ln 2.
    RealVector logs = ev.unaryExpr([](double l) { return std::log(std::max(l, kLogFloor)); });
    Matrix g = es.eigenvectors() * logs.asDiagonal() * es.eigenvectors().adjoint();
    Matrix gt = g.transpose();
    Matrix t(dA, dA);
    for (int ap = 0; ap < dA; ++ap) {
      for (int a = 0; a < dA; ++a) t(ap, a) = gt.cwiseProduct(rho.block(ap * dB, a * dB, dB, dB)).sum();
    }
    gradient.row(x) = (2.0 / std::numbers::ln2) * (rows.row(x) * t);
  }
  return hB - sortedSum(terms);
}

DeficitResult oneShotDeficit(const BipartiteState& s, const OptimizerConfig& cfg) {
  const int d = s.dimA;
  const int n = cfg.outcomes > 0 ? cfg.outcomes : d * d;
  if (n < d) throw ValidationError("OptimizerConfig: outcomes must be at least dimA");
  if (cfg.restarts < 1) throw ValidationError("OptimizerConfig: restarts must be at least 1");

  std::vector<Matrix> starts;
  if (cfg.defaultWarmStarts) {
    starts.push_back(RankOnePovm::computationalBasis(d, n).rows());
    Eigen::SelfAdjointEigenSolver<Matrix> es(partialTrace(s, Subsystem::A).matrix());
    starts.push_back(RankOnePovm::fromBasis(es.eigenvectors(), n).rows());
  }
  for (const RankOnePovm& w : cfg.warmStarts) {
    if (w.dim() != d) throw ValidationError("warm start dimension does not match subsystem A");
    if (w.outcomes() > n) throw ValidationError("warm start has more outcomes than the configured count");
    starts.push_back(w.padded(n).rows());
  }
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
    starts.push_back(randomIsometry(n, d, rng));
  }

  const int total = static_cast<int>(starts.size());
  std::vector<AscentResult> results(total);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < total; i = next++) results[i] = ascend(s, starts[i], cfg);
  };
  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, total);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  DeficitResult out;
  out.outcomes = n;
  int best = 0;
  for (int i = 0; i < total; ++i) {
    out.trace.push_back(results[i].value);
    if (results[i].value > results[best].value) best = i;
  }
  out.bestRestart = best;
  out.argmax = RankOnePovm(results[best].rows);
  out.value = std::max(objective(out.argmax, s), 0.0);
  out.converged = results[best].converged;
  EntropyReport e = entropyReport(s);
  out.ceiling = std::min({e.hA, e.hB, e.iAB});
  return out;
}

double oracleGridQubit(const BipartiteState& s, int resolution, std::uint64_t seed, int randomSamples) {
  if (s.dimA != 2) throw ValidationError("oracleGridQubit: subsystem A must be a qubit");
  if (resolution < 1) throw ValidationError("oracleGridQubit: resolution must be positive");
  double best = 0.0;
  for (int i = 0; i <= resolution; ++i) {
    double theta = std::numbers::pi * i / resolution;
    for (int j = 0; j < resolution; ++j) {
      double phi = 2.0 * std::numbers::pi * j / resolution;
      Matrix u(2, 2);
      u(0, 0) = std::cos(theta / 2);
      u(1, 0) = std::polar(std::sin(theta / 2), phi);
      u(0, 1) = -std::sin(theta / 2);
      u(1, 1) = std::polar(std::cos(theta / 2), phi);
      best = std::max(best, objective(RankOnePovm::fromBasis(u), s));
      if (i == 0 || i == resolution) break;
    }
  }
  Rng rng(seed, 0x6f7261636c65ULL);
  for (int k = 0; k < randomSamples; ++k) {
    int outcomes = 3 + (k % 2);
    best = std::max(best, objective(RankOnePovm(randomIsometry(outcomes, 2, rng)), s));
  }
  return best;
}

double kappaLocal(const DensityMatrix& rho) {
  return std::max(std::log2(static_cast<double>(rho.dim())) - vonNeumann(rho), 0.0);
}

BipartiteState tensorPower(const BipartiteState& s, int n) {
  if (n < 1) throw ValidationError("tensorPower: n must be positive");
  double total = std::pow(static_cast<double>(s.dimA) * s.dimB, n);
  if (total > 4096) throw GuardExceeded("tensorPower: total dimension above 4096");
  Matrix m = s.rho.matrix();
  for (int k = 1; k < n; ++k) m = kron(m, s.rho.matrix());
  std::vector<int> dims, perm;
  for (int k = 0; k < n; ++k) {
    dims.push_back(s.dimA);
    dims.push_back(s.dimB);
  }
  for (int k = 0; k < n; ++k) perm.push_back(2 * k);
  for (int k = 0; k < n; ++k) perm.push_back(2 * k + 1);
  int dA = 1, dB = 1;
  for (int k = 0; k < n; ++k) {
    dA *= s.dimA;
    dB *= s.dimB;
  }
  return BipartiteState(dA, dB, DensityMatrix(permuteSubsystems(m, dims, perm)));
}

BipartiteState tensorBipartite(const BipartiteState& rho, const BipartiteState& sigma) {
  double total = static_cast<double>(rho.dimA) * rho.dimB * sigma.dimA * sigma.dimB;
  if (total > 4096) throw GuardExceeded("tensorBipartite: total dimension above 4096");
  Matrix m = kron(rho.rho.matrix(), sigma.rho.matrix());
  const int dims[4] = {rho.dimA, rho.dimB, sigma.dimA, sigma.dimB};
  const int perm[4] = {0, 2, 1, 3};
  return BipartiteState(rho.dimA * sigma.dimA, rho.dimB * sigma.dimB, DensityMatrix(permuteSubsystems(m, dims, perm)));
}

DeficitResult classicalDeficitResult(const BipartiteState& s, int n, const OptimizerConfig& cfg) {
  BipartiteState power = tensorPower(s, n);
  OptimizerConfig c = cfg;
  if (n > 1) {
    DeficitResult single = oneShotDeficit(s, cfg);
    RankOnePovm product = single.argmax;
    for (int k = 1; k < n; ++k) product = tensorPovm(product, single.argmax);
    int outcomes = c.outcomes > 0 ? c.outcomes : power.dimA * power.dimA;
    if (product.outcomes() <= outcomes) c.warmStarts.push_back(product);
  }
  DeficitResult r = oneShotDeficit(power, c);
  r.value /= n;
  r.ceiling /= n;
  for (double& v : r.trace) v /= n;
  return r;
}

double classicalDeficit(const BipartiteState& s, int n, const OptimizerConfig& cfg) {
  return classicalDeficitResult(s, n, cfg).value;
}

double kappaOneWayLevel(const BipartiteState& s, int n, const OptimizerConfig& cfg) {
  return kappaLocal(partialTrace(s, Subsystem::A)) + kappaLocal(partialTrace(s, Subsystem::B)) +
         classicalDeficit(s, n, cfg);
}

AdditivityResult additivityCheck(const BipartiteState& s, const OptimizerConfig& cfg) {
  BipartiteState sigma(s.dimA, s.dimB, DensityMatrix::maximallyMixed(s.dimA * s.dimB));
  AdditivityResult r;
  DeficitResult alone = oneShotDeficit(s, cfg);
  r.rhs = alone.value;
  r.sigmaAlone = oneShotDeficit(sigma, cfg).value;
  OptimizerConfig c = cfg;
  RankOnePovm product = tensorPovm(alone.argmax, RankOnePovm::computationalBasis(s.dimA));
  c.warmStarts.clear();
  if (c.outcomes <= 0 || product.outcomes() <= c.outcomes) c.warmStarts.push_back(product);
  r.lhs = oneShotDeficit(tensorBipartite(s, sigma), c).value;
  return r;
}

}  // namespace purity
