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

#include "purity/typicality.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "purity/entropy.h"
#include "purity/errors.h"

namespace purity {

namespace {

constexpr double kBoundaryTol = 1e-12;

// Neumaier-compensated running sum.
class Accumulator {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      c_ += (sum_ - t) + v;
    } else {
      c_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

std::uint64_t sequenceCount(int d, int n) {
  double total = std::pow(static_cast<double>(d), n);
  if (total > static_cast<double>(kSequenceGuard)) throw GuardExceeded("more than 2^20 letter sequences");
  std::uint64_t count = 1;
  for (int k = 0; k < n; ++k) count *= static_cast<std::uint64_t>(d);
  return count;
}

double entropyOfProbs(const RealVector& probs) {
  std::vector<double> p(probs.data(), probs.data() + probs.size());
  return shannonEntropy(p);
}

// Letter log-probabilities, −∞ for zero-probability letters.
std::vector<double> letterLogs(const RealVector& probs) {
  std::vector<double> logs(probs.size());
  for (Eigen::Index c = 0; c < probs.size(); ++c) {
    logs[c] = probs(c) > 0.0 ? std::log2(probs(c)) : -std::numeric_limits<double>::infinity();
  }
  return logs;
}

double logProbFromCounts(const std::vector<int>& counts, const std::vector<double>& logs) {
  double lp = 0.0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) continue;
    if (std::isinf(logs[c])) return -std::numeric_limits<double>::infinity();
    lp += counts[c] * logs[c];
  }
  return lp;
}

// Per-sequence log-probabilities, computed from letter counts so that all
// sequences of one type get bit-identical values.
std::vector<double> allLogProbs(const RealVector& probs, int n) {
  const int d = static_cast<int>(probs.size());
  const std::uint64_t total = sequenceCount(d, n);
  std::vector<double> logs = letterLogs(probs);
  std::vector<double> out(total);
  std::vector<int> counts(d);
  for (std::uint64_t s = 0; s < total; ++s) {
    std::fill(counts.begin(), counts.end(), 0);
    std::uint64_t rem = s;
    for (int k = 0; k < n; ++k) {
      ++counts[rem % d];
      rem /= d;
    }
    out[s] = logProbFromCounts(counts, logs);
  }
  return out;
}

std::uint64_t smallestDivisorAtLeast(std::uint64_t total, std::uint64_t target) {
  target = std::max<std::uint64_t>(target, 1);
  for (std::uint64_t q = target; q < total; ++q) {
    if (total % q == 0) return q;
  }
  return total;
}

}  // namespace

Spectrum spectrumOf(const DensityMatrix& rho) {
  const Matrix& m = rho.matrix();
  const int d = rho.dim();
  Spectrum sp;
  Matrix off = m;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() == 0.0) {
    sp.probs = m.diagonal().real().cwiseMax(0.0);
    sp.basis = Matrix::Identity(d, d);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    sp.probs = es.eigenvalues().reverse().cwiseMax(0.0);
    sp.basis = es.eigenvectors().rowwise().reverse();
  }
  sp.probs /= sp.probs.sum();
  return sp;
}

bool isTypical(double logProb, int n, double entropy, double delta) {
  if (std::isinf(logProb)) return false;
  double rate = -logProb / n;
  return rate >= entropy - delta - kBoundaryTol && rate <= entropy + delta + kBoundaryTol;
}

double sequenceLogProb(std::uint64_t index, const RealVector& probs, int n) {
  const int d = static_cast<int>(probs.size());
  std::vector<int> counts(d, 0);
  for (int k = 0; k < n; ++k) {
    ++counts[index % d];
    index /= d;
  }
  return logProbFromCounts(counts, letterLogs(probs));
}

bool TypicalProjector::contains(std::uint64_t index) const {
  return std::binary_search(indexSet.begin(), indexSet.end(), index);
}

TypicalProjector typicalProjector(const DensityMatrix& rho, int n, double delta) {
  if (n < 1) throw ValidationError("typicalProjector: n must be positive");
  if (delta < 0) throw ValidationError("typicalProjector: delta must be nonnegative");
  TypicalProjector t;
  t.n = n;
  t.delta = delta;
  t.dim = rho.dim();
  t.spectrum = spectrumOf(rho);
  t.entropy = entropyOfProbs(t.spectrum.probs);
  std::vector<double> lp = allLogProbs(t.spectrum.probs, n);
  Accumulator mass;
  for (std::uint64_t s = 0; s < lp.size(); ++s) {
    if (!isTypical(lp[s], n, t.entropy, delta)) continue;
    t.indexSet.push_back(s);
    mass.add(std::exp2(lp[s]));
  }
  t.size = t.indexSet.size();
  t.mass = mass.value();
  return t;
}

TypeSummary typicalMass(const RealVector& probs, int n, double delta) {
  if (n < 1) throw ValidationError("typicalMass: n must be positive");
  const int d = static_cast<int>(probs.size());
  const double h = entropyOfProbs(probs);
  std::vector<double> logs = letterLogs(probs);
  Accumulator mass;
  double logSize = -std::numeric_limits<double>::infinity();
  std::vector<int> counts(d, 0);
  counts[d - 1] = n;
  // Walk all compositions of n into d parts.
  while (true) {
    double lp = logProbFromCounts(counts, logs);
    if (isTypical(lp, n, h, delta)) {
      double logMult = std::lgamma(n + 1.0);
      for (int c : counts) logMult -= std::lgamma(c + 1.0);
      logMult /= std::numbers::ln2;
      mass.add(std::exp2(logMult + lp));
      double hi = std::max(logSize, logMult), lo = std::min(logSize, logMult);
      logSize = std::isinf(lo) ? hi : hi + std::log2(1.0 + std::exp2(lo - hi));
    }
    int k = d - 1;
    while (k > 0 && counts[k] == 0) --k;
    if (k == 0) break;
    int moved = counts[k];
    counts[k] = 0;
    ++counts[k - 1];
    counts[d - 1] = moved - 1;
  }
  return {mass.value(), logSize};
}

RelabelResult relabelToProduct(const Matrix& pi, const Matrix& rho, int d1, int d2) {
  const int dim = static_cast<int>(rho.rows());
  if (pi.rows() != dim || pi.cols() != dim) throw ValidationError("relabelToProduct: dimension mismatch");
  if (d1 < 1 || d2 < 1 || d1 * d2 != dim) throw ValidationError("relabelToProduct: d1·d2 must equal the dimension");
  if ((pi * pi - pi).cwiseAbs().maxCoeff() > 1e-9 || hermitianDeviation(pi) > 1e-9) {
    throw ValidationError("relabelToProduct: input is not an orthogonal projector");
  }
  if ((pi * rho - rho * pi).norm() > 1e-9) throw ValidationError("relabelToProduct: projector does not commute with the state");

  Eigen::SelfAdjointEigenSolver<Matrix> ep(pi);
  std::vector<int> support, kernel;
  for (int k = dim - 1; k >= 0; --k) (ep.eigenvalues()(k) > 0.5 ? support : kernel).push_back(k);
  const int rank = static_cast<int>(support.size());
  if (rank > d1) throw ValidationError("relabelToProduct: Tr Π exceeds d1");

  // Joint eigenbasis: diagonalize ρ separately on the support and the kernel.
  auto block = [&](const std::vector<int>& cols) {
    Matrix p(dim, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) p.col(j) = ep.eigenvectors().col(cols[j]);
    if (cols.empty()) return p;
    Matrix r = p.adjoint() * rho * p;
    Eigen::SelfAdjointEigenSolver<Matrix> es((r + r.adjoint()) * 0.5);
    return Matrix(p * es.eigenvectors().rowwise().reverse());
  };
  Matrix vs = block(support), vk = block(kernel);

  RelabelResult out;
  out.unitary = Matrix::Zero(dim, dim);
  std::vector<bool> used(dim, false);
  for (int i = 0; i < rank; ++i) {
    out.slot.push_back(i * d2);
    used[i * d2] = true;
    out.unitary.row(i * d2) = vs.col(i).adjoint();
  }
  int next = 0;
  for (Eigen::Index j = 0; j < vk.cols(); ++j) {
    while (used[next]) ++next;
    used[next] = true;
    out.slot.push_back(next);
    out.unitary.row(next) = vk.col(j).adjoint();
  }
  Matrix u = out.unitary;
  Matrix ideal = u * (pi * rho * pi) * u.adjoint();
  out.outputDistance = traceNorm(u * rho * u.adjoint() - ideal);
  return out;
}

ConcentrationCode buildConcentrationCode(const DensityMatrix& rho, int n, double delta) {
  TypicalProjector t = typicalProjector(rho, n, delta);
  const int d = rho.dim();
  const std::uint64_t total = sequenceCount(d, n);
  std::vector<double> lp = allLogProbs(t.spectrum.probs, n);

  ConcentrationCode code;
  code.n = n;
  code.delta = delta;
  code.dim = d;
  code.spectrum = t.spectrum;
  code.typicalSize = t.size;
  code.typicalMass = t.mass;
  code.relabelDistance = 1.0 - t.mass;
  code.d1 = smallestDivisorAtLeast(total, t.size);
  code.d2 = total / code.d1;
  code.rate = std::log2(static_cast<double>(code.d2)) / n;

  // Kept sequences: the typical set, padded with the most probable atypical
  // sequences up to d₁.
  std::vector<std::uint64_t> kept = t.indexSet;
  if (kept.size() < code.d1) {
    std::vector<std::uint64_t> rest;
    rest.reserve(total - kept.size());
    for (std::uint64_t s = 0; s < total; ++s) {
      if (!t.contains(s)) rest.push_back(s);
    }
    std::size_t need = code.d1 - kept.size();
    std::partial_sort(rest.begin(), rest.begin() + need, rest.end(), [&](std::uint64_t a, std::uint64_t b) {
      return lp[a] != lp[b] ? lp[a] > lp[b] : a < b;
    });
    kept.insert(kept.end(), rest.begin(), rest.begin() + need);
  }

  code.relabel.assign(total, 0);
  std::vector<bool> isKept(total, false);
  Accumulator keptMass;
  for (std::uint64_t i = 0; i < kept.size(); ++i) {
    code.relabel[kept[i]] = static_cast<std::uint32_t>(i * code.d2);
    isKept[kept[i]] = true;
    keptMass.add(std::exp2(lp[kept[i]]));
  }
  std::uint64_t slot = 0;
  for (std::uint64_t s = 0; s < total; ++s) {
    if (isKept[s]) continue;
    do {
      ++slot;
    } while (slot % code.d2 == 0);
    code.relabel[s] = static_cast<std::uint32_t>(slot);
  }
  code.keptMass = keptMass.value();
  code.achievedEpsilon = measuredEpsilon(code, rho);
  return code;
}

RealVector pureRegisterDistribution(const ConcentrationCode& code, const RealVector& probs) {
  if (probs.size() != code.dim) throw ValidationError("pureRegisterDistribution: alphabet mismatch");
  std::vector<double> lp = allLogProbs(probs, code.n);
  if (lp.size() != code.relabel.size()) throw ValidationError("pureRegisterDistribution: table size mismatch");
  std::vector<bool> hit(lp.size(), false);
  std::vector<Accumulator> acc(code.d2);
  for (std::uint64_t s = 0; s < lp.size(); ++s) {
    std::uint32_t target = code.relabel[s];
    if (target >= lp.size() || hit[target]) throw ValidationError("relabeling table is not a permutation");
    hit[target] = true;
    if (!std::isinf(lp[s])) acc[target % code.d2].add(std::exp2(lp[s]));
  }
  RealVector q(code.d2);
  for (std::uint64_t c = 0; c < code.d2; ++c) q(c) = acc[c].value();
  return q;
}

double measuredEpsilon(const ConcentrationCode& code, const DensityMatrix& rho) {
  if (rho.dim() != code.dim) throw ValidationError("measuredEpsilon: dimension mismatch");
  // Letter probabilities of ρ in the code's basis.
  RealVector probs = (code.spectrum.basis.adjoint() * rho.matrix() * code.spectrum.basis).diagonal().real().cwiseMax(0.0);
  probs /= probs.sum();
  RealVector q = pureRegisterDistribution(code, probs);
  double eps = std::abs(q(0) - 1.0);
  for (Eigen::Index c = 1; c < q.size(); ++c) eps += q(c);
  return eps;
}

ConverseResult converseCheck(const ConcentrationCode& code, const DensityMatrix& rho) {
  const double logd = std::log2(static_cast<double>(rho.dim()));
  ConverseResult r;
  r.bound = logd - vonNeumann(rho) + 1.0 / (std::numbers::e * code.n) + code.achievedEpsilon * logd;
  r.slack = r.bound - code.rate;
  return r;
}

}  // namespace purity
