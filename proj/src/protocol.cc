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

#include "purity/protocol.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "purity/entropy.h"
#include "purity/errors.h"

namespace purity {

namespace {

constexpr double kCompletionTol = 1e-8;
constexpr std::uint64_t kDecoderGuard = 1024;
constexpr std::uint64_t kDenseGuard = 1024;

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int k = 0; k < e; ++k) r *= b;
  return r;
}

Matrix zeroProjector(Eigen::Index dim) {
  Matrix p = Matrix::Zero(dim, dim);
  p(0, 0) = 1.0;
  return p;
}

double distanceToZero(const Matrix& rho) { return traceNorm(rho - zeroProjector(rho.rows())); }

bool isExactlyDiagonalMatrix(const Matrix& m) {
  Matrix off = m;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() == 0.0;
}

// Applies blockdiag(u, u, …) ⊗-style: every (i, j) block of size b gets
// left[i] · block · left[j]†.
Matrix conjugateBlocks(const Matrix& rho, const std::vector<Matrix>& left) {
  const Eigen::Index b = left.front().rows();
  Matrix out(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < left.size(); ++j) {
      out.block(i * b, j * b, b, b) = left[i] * rho.block(i * b, j * b, b, b) * left[j].adjoint();
    }
  }
  return out;
}

DistillationResult baseResult(const BipartiteState& s, const RankOnePovm& lambda, const DistillationConfig& cfg,
                              const CoveringCode& code, const ConcentrationCode& bob, const ClassicalQuantumState& cq) {
  const int n = cfg.n;
  const std::uint64_t dC = ipow(lambda.outcomes(), n);
  const std::uint64_t bins = code.mu * code.lambda;
  DistillationResult r;
  r.ledger = makeLedger(n, dC, ipow(s.dimA, n) * (dC / bins), code.mu * bob.d2, std::log2(static_cast<double>(bins)) / n);
  r.trace.epsilon = cfg.epsilon;
  r.trace.envelope = 7 * cfg.epsilon + (2 + std::sqrt(8.0)) * std::sqrt(cfg.epsilon);
  r.trace.measurementInfo = n * holevoInformation(cq);
  r.trace.mu = code.mu;
  r.trace.lambda = code.lambda;
  r.trace.coveringMinSuccess = code.minSuccess;
  r.trace.setMass = code.setMass;
  return r;
}

void finishDecode(ProtocolTrace& t, const Matrix& averageM) {
  t.decodeOverlap = averageM(0, 0).real();
  t.decodeDistance = distanceToZero(averageM);
  t.decodeBound = 2.0 * std::sqrt(std::max(1.0 - t.decodeOverlap, 0.0));
}

DistillationResult runClassical(const BipartiteState& s, const RankOnePovm& lambda, const DistillationConfig& cfg) {
  const int n = cfg.n;
  ClassicalQuantumState cq = measurementEnsemble(s, lambda);
  CoveringCode code = buildCovering(cq, n, cfg.epsilon, cfg.delta, cfg.seed);
  if (code.mu > kDecoderGuard) throw GuardExceeded("distillation: bin size above 1024");
  ConcentrationCode bob = buildConcentrationCode(partialTrace(s, Subsystem::B), n, cfg.delta);
  DistillationResult r = baseResult(s, lambda, cfg, code, bob, cq);
  r.trace.path = "classical";

  const std::uint64_t mu = code.mu;
  const std::uint64_t dimBn = code.dimBn;
  Matrix all = Matrix::Zero(mu, mu), kept = Matrix::Zero(mu, mu);
  RealVector c(mu), w(mu);
  for (std::uint64_t l = 0; l < code.lambda; ++l) {
    std::vector<RealVector> joint;
    for (std::uint64_t m = 0; m < mu; ++m) {
      double p = 1.0;
      for (int x : sequenceLetters(code.f(m, l), cq.alphabet(), n)) p *= cq.probs[x];
      RealVector v = RealVector::Ones(1);
      for (int x : sequenceLetters(code.f(m, l), cq.alphabet(), n)) {
        RealVector d = cq.states[x].matrix().diagonal().real();
        RealVector next(v.size() * d.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * d.size(), d.size()) = v(i) * d;
        v = std::move(next);
      }
      joint.push_back(p * v);
    }
    for (std::uint64_t y = 0; y < dimBn; ++y) {
      bool any = false;
      for (std::uint64_t m = 0; m < mu; ++m) {
        w(m) = joint[m](y);
        any = any || w(m) > 0.0;
        c(m) = std::sqrt(std::max(code.diagonalDecoders[l * mu + m](y), 0.0));
      }
      if (!any) continue;
      Matrix u = diagonalDecoderUnitary(c);
      Matrix tau = Matrix::Zero(mu, mu);
      for (std::uint64_t m = 0; m < mu; ++m) {
        if (w(m) > 0.0) tau.noalias() += w(m) * (u.col(m) * u.col(m).adjoint());
      }
      all += tau;
      if (bob.relabel[y] % bob.d2 == 0) kept += tau;
    }
  }
  if (code.setMass > 0) finishDecode(r.trace, all / code.setMass);
  double outside = 1.0 - kept.trace().real();
  r.trace.finalDistance = std::max(outside, 0.0) + distanceToZero(kept);
  r.trace.steps = {{"concentrate-A1", 0.0},
                   {"coherent-measurement", 0.0},
                   {"compact-X", 2.0 * std::max(1.0 - code.setMass, 0.0)},
                   {"dephase-ML", 0.0},
                   {"decode-M", r.trace.decodeDistance},
                   {"gentle-B", 0.0},
                   {"concentrate-B", bob.achievedEpsilon}};
  return r;
}

DistillationResult runDense(const BipartiteState& s, const RankOnePovm& lambda, const DistillationConfig& cfg) {
  const int n = cfg.n;
  const std::uint64_t nn = ipow(lambda.outcomes(), n);
  const std::uint64_t dimBn = ipow(s.dimB, n);
  if (std::pow(static_cast<double>(lambda.outcomes()) * s.dimB, n) > static_cast<double>(kDenseGuard)) {
    throw GuardExceeded("dense distillation: X^n B^n dimension above 1024");
  }
  if (lambda.dim() != s.dimA) throw ValidationError("distillation: POVM dimension does not match subsystem A");
  ClassicalQuantumState cq = measurementEnsemble(s, lambda);
  CoveringCode code = buildCovering(cq, n, cfg.epsilon, cfg.delta, cfg.seed);
  ConcentrationCode bob = buildConcentrationCode(partialTrace(s, Subsystem::B), n, cfg.delta);
  DistillationResult r = baseResult(s, lambda, cfg, code, bob, cq);
  r.trace.path = "dense";

  const std::uint64_t bins = code.mu * code.lambda;
  const std::uint64_t dXp = nn / bins;
  const auto D = static_cast<Eigen::Index>(dimBn);
  const auto total = static_cast<Eigen::Index>(nn * dimBn);

  // Step 2: coherent measurement; A₂ⁿ is left exactly in |0⟩ and dropped.
  BipartiteState power = tensorPower(s, n);
  Matrix mn = lambda.rows();
  for (int k = 1; k < n; ++k) mn = kron(mn, lambda.rows());
  Matrix iso = kron(mn, Matrix::Identity(D, D));
  Matrix rho = iso * power.rho.matrix() * iso.adjoint();

  // Step 3: relabel Xⁿ so that S occupies x' = 0 with (l, m) from f.
  std::vector<std::uint64_t> target(nn, 0);
  std::vector<bool> inS(nn, false);
  for (std::uint64_t t = 0; t < code.table.size(); ++t) {
    target[code.table[t]] = t;
    inS[code.table[t]] = true;
  }
  std::uint64_t next = bins;
  for (std::uint64_t x = 0; x < nn; ++x) {
    if (!inS[x]) target[x] = next++;
  }
  Matrix permuted(total, total);
  for (std::uint64_t x = 0; x < nn; ++x) {
    for (std::uint64_t x2 = 0; x2 < nn; ++x2) {
      permuted.block(target[x] * D, target[x2] * D, D, D) = rho.block(x * D, x2 * D, D, D);
    }
  }
  rho = std::move(permuted);
  const int dimsXp[2] = {static_cast<int>(dXp), static_cast<int>(bins * dimBn)};
  const bool keepXp[2] = {true, false};
  double compact = distanceToZero(partialTraceKeep(rho, dimsXp, keepXp));

  // Step 4: dephase M and L.
  Matrix dephased = rho;
  for (Eigen::Index i = 0; i < total; ++i) {
    for (Eigen::Index j = 0; j < total; ++j) {
      if ((i / D) % bins != (j / D) % bins) dephased(i, j) = 0.0;
    }
  }
  double dephaseChange = traceNorm(dephased - rho);
  rho = std::move(dephased);

  // Step 5: controlled W_l on M ⊗ Bⁿ.
  const int dimsB[2] = {static_cast<int>(nn), static_cast<int>(dimBn)};
  const bool keepB[2] = {false, true};
  Matrix bBefore = partialTraceKeep(rho, dimsB, keepB);
  std::vector<Matrix> decoders;
  for (std::uint64_t l = 0; l < code.lambda; ++l) decoders.push_back(bobDecoder(code, l));
  std::vector<Matrix> blocks;
  for (std::uint64_t xp = 0; xp < dXp; ++xp) {
    for (std::uint64_t l = 0; l < code.lambda; ++l) blocks.push_back(decoders[l]);
  }
  rho = conjugateBlocks(rho, blocks);
  double gentle = traceNorm(partialTraceKeep(rho, dimsB, keepB) - bBefore);

  const auto inner = static_cast<Eigen::Index>(bins * dimBn);
  Matrix branch = rho.topLeftCorner(inner, inner);
  const int dimsLMB[3] = {static_cast<int>(code.lambda), static_cast<int>(code.mu), static_cast<int>(dimBn)};
  const bool keepM[3] = {false, true, false};
  Matrix averageM = partialTraceKeep(branch, dimsLMB, keepM);
  double branchMass = averageM.trace().real();
  if (branchMass > 0) finishDecode(r.trace, averageM / branchMass);

  // Step 6: concentrate Bⁿ with Bob's code.
  Matrix eb = bob.spectrum.basis.adjoint();
  Matrix ebn = eb;
  for (int k = 1; k < n; ++k) ebn = kron(ebn, eb);
  Matrix perm = Matrix::Zero(D, D);
  for (Eigen::Index y = 0; y < D; ++y) perm(bob.relabel[y], y) = 1.0;
  Matrix ub = perm * ebn;
  rho = conjugateBlocks(rho, std::vector<Matrix>(nn, ub));

  const int dimsFinal[5] = {static_cast<int>(dXp), static_cast<int>(code.lambda), static_cast<int>(code.mu),
                            static_cast<int>(bob.d1), static_cast<int>(bob.d2)};
  const bool keepBp[5] = {false, false, false, false, true};
  const bool keepPure[5] = {true, false, true, false, true};
  double concentrate = distanceToZero(partialTraceKeep(rho, dimsFinal, keepBp));
  r.trace.finalDistance = distanceToZero(partialTraceKeep(rho, dimsFinal, keepPure));
  r.trace.steps = {{"concentrate-A1", 0.0},
                   {"coherent-measurement", 0.0},
                   {"compact-X", compact},
                   {"dephase-ML", dephaseChange},
                   {"decode-M", r.trace.decodeDistance},
                   {"gentle-B", gentle},
                   {"concentrate-B", concentrate}};
  return r;
}

}  // namespace

double Ledger::borrowedQubits() const { return std::log2(static_cast<double>(dC)); }

double Ledger::returnedQubits() const {
  return std::log2(static_cast<double>(dAp)) + std::log2(static_cast<double>(dBp));
}

Ledger makeLedger(int n, std::uint64_t dC, std::uint64_t dAp, std::uint64_t dBp, double classicalBitsSent) {
  if (n < 1 || dC < 1 || dAp < 1 || dBp < 1) throw ValidationError("ledger: dimensions must be positive");
  Ledger l;
  l.n = n;
  l.dC = dC;
  l.dAp = dAp;
  l.dBp = dBp;
  l.rate = (l.returnedQubits() - l.borrowedQubits()) / n;
  l.catalystRate = l.borrowedQubits() / n;
  l.classicalBitsSent = classicalBitsSent;
  return l;
}

DistillationResult runExample1() {
  const double probs[4] = {0.5, 0.0, 0.0, 0.5};
  BipartiteState phi(2, 2, DensityMatrix::diagonal(probs));
  BipartiteState dephased = dephaseA(phi, Matrix::Identity(2, 2));
  double dephaseChange = traceNorm(dephased.rho.matrix() - phi.rho.matrix());

  Matrix flip(2, 2);
  flip << 0, 1, 1, 0;
  const Matrix blocks[2] = {Matrix::Identity(2, 2), flip};
  Matrix u = controlledUnitary(blocks);
  BipartiteState out(2, 2, DensityMatrix(u * dephased.rho.matrix() * u.adjoint()));
  double bDistance = distanceToZero(partialTrace(out, Subsystem::B).matrix());

  DistillationResult r;
  r.ledger = makeLedger(1, 1, 1, 2, 1.0);
  r.trace.path = "example";
  r.trace.steps = {{"dephase-A", dephaseChange}, {"controlled-unitary", bDistance}};
  r.trace.finalDistance = bDistance;
  r.trace.measurementInfo = mutualInfo(dephased);
  r.trace.decodeOverlap = 1.0;
  r.trace.lambda = 2;
  return r;
}

Matrix unitaryToZero(const Vector& u) {
  const Eigen::Index d = u.size();
  Complex alpha = std::abs(u(0)) > 0 ? u(0) / std::abs(u(0)) : Complex(1.0);
  Vector v = u;
  v(0) -= alpha;
  Matrix h = Matrix::Identity(d, d);
  double nv = v.squaredNorm();
  if (nv > 0) h -= (2.0 / nv) * (v * v.adjoint());
  return std::conj(alpha) * h;
}

CoherentMeasurement coherentMeasurement(const RankOnePovm& lambda, const Matrix& input, int dimR) {
  const int dA = lambda.dim();
  const int outcomes = lambda.outcomes();
  if (dimR < 1 || input.rows() != static_cast<Eigen::Index>(dA) * dimR || input.cols() != input.rows()) {
    throw ValidationError("coherentMeasurement: input is not a state on A ⊗ R");
  }
  DensityMatrix checked(input);
  Matrix iso = Matrix::Zero(static_cast<Eigen::Index>(outcomes) * dA, dA);
  std::vector<Matrix> controls;
  for (int x = 0; x < outcomes; ++x) {
    Vector m = lambda.vector(x);
    double norm = m.norm();
    if (norm == 0.0) {
      controls.push_back(Matrix::Identity(dA, dA));
      continue;
    }
    Vector ux = m / norm;
    iso.block(x * dA, 0, dA, dA) = ux * lambda.rows().row(x);
    controls.push_back(unitaryToZero(ux));
  }
  Matrix idR = Matrix::Identity(dimR, dimR);
  Matrix full = kron(controlledUnitary(controls), idR) * kron(iso, idR);
  CoherentMeasurement out;
  out.state = full * checked.matrix() * full.adjoint();
  out.dims = {outcomes, dA, dimR};
  const bool keepA[3] = {false, true, false};
  const bool keepX[3] = {true, false, false};
  out.a2Distance = distanceToZero(partialTraceKeep(out.state, out.dims, keepA));
  out.outcomeProbs = partialTraceKeep(out.state, out.dims, keepX).diagonal().real();
  return out;
}

Matrix bobDecoder(const CoveringCode& code, std::uint64_t l) {
  if (l >= code.lambda) throw ValidationError("bobDecoder: bin index out of range");
  const std::uint64_t mu = code.mu;
  const std::uint64_t dimBn = code.dimBn;
  if (mu * dimBn > kDecoderGuard) throw GuardExceeded("bobDecoder: M ⊗ B^n dimension above 1024");
  const auto D = static_cast<Eigen::Index>(dimBn);
  const auto total = static_cast<Eigen::Index>(mu * dimBn);

  // Orthonormal vectors u with W's rows equal to u†.
  Matrix basis(total, total);
  Eigen::Index count = 0;
  Matrix firstRow(D, total);
  for (std::uint64_t m = 0; m < mu; ++m) firstRow.block(0, m * D, D, D) = psdSqrt(code.decoderElement(l, m));
  for (Eigen::Index b = 0; b < D; ++b) basis.col(count++) = firstRow.row(b).adjoint();

  Matrix w = Matrix::Zero(total, total);
  std::vector<bool> used(total, false);
  for (Eigen::Index b = 0; b < D; ++b) {
    w.row(b) = firstRow.row(b);
    used[b] = true;
  }
  for (Eigen::Index j = 0; j < total && count < total; ++j) {
    Vector v = Vector::Zero(total);
    v(j) = 1.0;
    for (int pass = 0; pass < 2; ++pass) v -= basis.leftCols(count) * (basis.leftCols(count).adjoint() * v);
    double norm = v.norm();
    if (norm <= kCompletionTol) continue;
    v /= norm;
    basis.col(count++) = v;
    // Preferred slot: the next free (m', b) with b the seed's Bⁿ index.
    Eigen::Index slot = -1;
    for (std::uint64_t mp = 1; mp < mu && slot < 0; ++mp) {
      Eigen::Index candidate = mp * D + j % D;
      if (!used[candidate]) slot = candidate;
    }
    if (slot < 0) slot = std::find(used.begin(), used.end(), false) - used.begin();
    used[slot] = true;
    w.row(slot) = v.adjoint();
  }
  if (count != total || !isUnitary(w, 1e-9)) throw CompletionError("bobDecoder: completion did not produce a unitary");
  return w;
}

Matrix diagonalDecoderUnitary(const RealVector& c) {
  const Eigen::Index mu = c.size();
  RealVector suffix(mu + 1);
  suffix(mu) = 0.0;
  for (Eigen::Index k = mu - 1; k >= 0; --k) suffix(k) = suffix(k + 1) + c(k) * c(k);
  if (std::abs(suffix(0) - 1.0) > 1e-9) throw CompletionError("diagonal decoder row is not normalized");
  Eigen::Index last = mu - 1;
  while (last > 0 && c(last) == 0.0) --last;

  Matrix w = Matrix::Zero(mu, mu);
  w.row(0) = c.cast<Complex>().transpose();
  Eigen::Index row = 1;
  for (Eigen::Index k = 0; k < mu; ++k) {
    if (k == last) continue;
    if (k > last) {
      w(row++, k) = 1.0;
      continue;
    }
    // Gram-Schmidt residual of e_k against c and e_0 … e_{k−1}.
    double ratio = suffix(k + 1) / suffix(k);
    w(row, k) = std::sqrt(ratio);
    double scale = c(k) / std::sqrt(suffix(k) * suffix(k + 1));
    for (Eigen::Index j = k + 1; j < mu; ++j) w(row, j) = -c(j) * scale;
    ++row;
  }
  return w;
}

ClassicalQuantumState measurementEnsemble(const BipartiteState& s, const RankOnePovm& lambda) {
  if (lambda.dim() != s.dimA) throw ValidationError("POVM dimension does not match subsystem A");
  const int dims[2] = {s.dimA, s.dimB};
  const bool keepB[2] = {false, true};
  std::vector<double> probs;
  std::vector<DensityMatrix> states;
  Matrix idB = Matrix::Identity(s.dimB, s.dimB);
  for (int x = 0; x < lambda.outcomes(); ++x) {
    Matrix sigma = partialTraceKeep(kron(lambda.element(x), idB) * s.rho.matrix(), dims, keepB);
    sigma = hermitianPart(sigma);
    double p = sigma.trace().real();
    if (p > 1e-14) {
      probs.push_back(p);
      states.emplace_back(sigma / p);
    } else {
      probs.push_back(0.0);
      states.push_back(DensityMatrix::basisState(s.dimB, 0));
    }
  }
  double total = 0.0;
  for (double p : probs) total += p;
  for (double& p : probs) p /= total;
  return ClassicalQuantumState(std::move(probs), std::move(states));
}

bool classicalPathApplies(const BipartiteState& s, const RankOnePovm& lambda) {
  if (!isExactlyDiagonalMatrix(s.rho.matrix())) return false;
  const Matrix& rows = lambda.rows();
  for (Eigen::Index x = 0; x < rows.rows(); ++x) {
    int nonzero = 0;
    for (Eigen::Index a = 0; a < rows.cols(); ++a) {
      if (rows(x, a) == Complex(0.0)) continue;
      ++nonzero;
      if (std::abs(std::abs(rows(x, a)) - 1.0) > 1e-12) return false;
    }
    if (nonzero > 1) return false;
  }
  return true;
}

DistillationResult runDistillation(const BipartiteState& s, const RankOnePovm& lambda, const DistillationConfig& cfg) {
  if (cfg.n < 1) throw ValidationError("distillation: n must be positive");
  if (lambda.dim() != s.dimA) throw ValidationError("distillation: POVM dimension does not match subsystem A");
  switch (cfg.path) {
    case DistillPath::Classical:
      if (!classicalPathApplies(s, lambda)) {
        throw ValidationError("classical path needs a diagonal state and a computational-basis measurement");
      }
      return runClassical(s, lambda, cfg);
    case DistillPath::Dense:
      return runDense(s, lambda, cfg);
    case DistillPath::Auto:
      break;
  }
  return classicalPathApplies(s, lambda) ? runClassical(s, lambda, cfg) : runDense(s, lambda, cfg);
}

double rateFormula(const BipartiteState& s, const OptimizerConfig& cfg) { return kappaOneWayLevel(s, 1, cfg); }

double converseMargin(const Ledger& ledger, const BipartiteState& s, const ProtocolTrace& trace) {
  EntropyReport e = entropyReport(s);
  double logDims = std::log2(static_cast<double>(s.dimA)) + std::log2(static_cast<double>(s.dimB));
  double delta = 1.0 / (std::numbers::e * ledger.n) + trace.finalDistance * logDims;
  double bound = logDims - e.hA - e.hB + trace.measurementInfo / ledger.n + delta;
  return bound - ledger.rate;
}

std::vector<BootstrapRow> bootstrapSummary(const Ledger& ledger, int maxBlocks) {
  std::vector<BootstrapRow> rows;
  for (int k = 1; k <= maxBlocks; ++k) {
    double produced = k * (ledger.returnedQubits() - ledger.borrowedQubits());
    rows.push_back({k, ledger.borrowedQubits() / (static_cast<double>(k) * ledger.n), produced / (k * ledger.n)});
  }
  return rows;
}

nlohmann::json toJson(const Ledger& l) {
  return {{"n", l.n},
          {"dC", l.dC},
          {"dAp", l.dAp},
          {"dBp", l.dBp},
          {"rate", l.rate},
          {"catalystRate", l.catalystRate},
          {"classicalBitsSent", l.classicalBitsSent},
          {"borrowedQubits", l.borrowedQubits()},
          {"returnedQubits", l.returnedQubits()},
          {"catalystReturned", l.catalystReturned()}};
}

nlohmann::json toJson(const ProtocolTrace& t) {
  nlohmann::json steps = nlohmann::json::array();
  for (const TraceStep& s : t.steps) steps.push_back({{"step", s.name}, {"distance", s.distance}});
  return {{"path", t.path},
          {"steps", steps},
          {"finalDistance", t.finalDistance},
          {"epsilon", t.epsilon},
          {"envelope", t.envelope},
          {"withinEnvelope", t.finalDistance <= t.envelope},
          {"decodeOverlap", t.decodeOverlap},
          {"decodeDistance", t.decodeDistance},
          {"decodeBound", t.decodeBound},
          {"measurementInfo", t.measurementInfo},
          {"mu", t.mu},
          {"lambda", t.lambda},
          {"coveringMinSuccess", t.coveringMinSuccess},
          {"setMass", t.setMass}};
}

}  // namespace purity
