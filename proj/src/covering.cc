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

#include "purity/covering.h"

#include <algorithm>
#include <cmath>

#include "purity/entropy.h"
#include "purity/errors.h"
#include "purity/random.h"

namespace purity {

namespace {

constexpr std::uint64_t kSequenceGuard = std::uint64_t{1} << 16;
constexpr std::uint64_t kWorkGuard = std::uint64_t{1} << 22;
constexpr double kPgmCutoff = 1e-12;

bool isDiagonalEnsemble(const ClassicalQuantumState& cq) {
  for (const DensityMatrix& s : cq.states) {
    Matrix off = s.matrix();
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() != 0.0) return false;
  }
  return true;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int k = 0; k < e; ++k) r *= b;
  return r;
}

double sequenceProb(const ClassicalQuantumState& cq, std::uint64_t index, int n) {
  double p = 1.0;
  for (int x : sequenceLetters(index, cq.alphabet(), n)) p *= cq.probs[x];
  return p;
}

RealVector sequenceDiagonal(const ClassicalQuantumState& cq, std::uint64_t index, int n) {
  RealVector v = RealVector::Ones(1);
  for (int x : sequenceLetters(index, cq.alphabet(), n)) {
    RealVector d = cq.states[x].matrix().diagonal().real();
    RealVector next(v.size() * d.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * d.size(), d.size()) = v(i) * d;
    v = std::move(next);
  }
  return v;
}

double sumKahan(const std::vector<double>& values) {
  double sum = 0.0, c = 0.0;
  for (double v : values) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::uint64_t nextDivisor(std::uint64_t total, std::uint64_t atLeast) {
  atLeast = std::max<std::uint64_t>(atLeast, 1);
  for (std::uint64_t q = atLeast; q < total; ++q) {
    if (total % q == 0) return q;
  }
  return total;
}

void checkGuards(const ClassicalQuantumState& cq, int n, std::uint64_t setSize, bool diagonal) {
  std::uint64_t dimBn = ipow(cq.dim(), n);
  if (diagonal) {
    if (dimBn > 4096) throw GuardExceeded("covering: B^n dimension above 4096");
    if (setSize * dimBn > kWorkGuard) throw GuardExceeded("covering: |S|·dim(B^n) above 2^22");
  } else {
    if (dimBn > 256) throw GuardExceeded("covering: dense B^n dimension above 256");
    if (setSize * dimBn * dimBn > kWorkGuard) throw GuardExceeded("covering: |S|·dim(B^n)² above 2^22");
  }
}

}  // namespace

Povm prettyGoodMeasurement(const std::vector<DensityMatrix>& states, std::span<const double> priors) {
  if (states.empty()) throw ValidationError("prettyGoodMeasurement: no states");
  if (priors.size() != states.size()) throw ValidationError("prettyGoodMeasurement: one prior per state required");
  const int d = states.front().dim();
  Matrix sigma = Matrix::Zero(d, d);
  for (std::size_t m = 0; m < states.size(); ++m) {
    if (states[m].dim() != d) throw ValidationError("prettyGoodMeasurement: states differ in dimension");
    if (priors[m] < 0) throw ValidationError("prettyGoodMeasurement: negative prior");
    sigma += priors[m] * states[m].matrix();
  }
  Matrix s = psdInvSqrt(sigma, kPgmCutoff);
  std::vector<Matrix> elements;
  Matrix total = Matrix::Zero(d, d);
  for (std::size_t m = 0; m < states.size(); ++m) {
    Matrix e = s * (priors[m] * states[m].matrix()) * s;
    e = hermitianPart(e);
    total += e;
    elements.push_back(std::move(e));
  }
  Matrix junk = Matrix::Identity(d, d) - total;
  junk = hermitianPart(junk);
  if (junk.cwiseAbs().maxCoeff() > kPovmSumTol) elements.push_back(std::move(junk));
  return Povm(std::move(elements));
}

std::vector<int> sequenceLetters(std::uint64_t index, int alphabet, int n) {
  std::vector<int> letters(n);
  for (int k = n - 1; k >= 0; --k) {
    letters[k] = static_cast<int>(index % alphabet);
    index /= alphabet;
  }
  return letters;
}

Matrix sequenceState(const ClassicalQuantumState& cq, std::uint64_t index, int n) {
  Matrix m = Matrix::Ones(1, 1);
  for (int x : sequenceLetters(index, cq.alphabet(), n)) m = kron(m, cq.states[x].matrix());
  return m;
}

Matrix CoveringCode::decoderElement(std::uint64_t l, std::uint64_t m) const {
  if (diagonal) return diagonalDecoders[l * mu + m].cast<Complex>().asDiagonal();
  return denseDecoders[l * mu + m];
}

Povm CoveringCode::decoder(std::uint64_t l) const {
  std::vector<Matrix> elements;
  for (std::uint64_t m = 0; m < mu; ++m) elements.push_back(decoderElement(l, m));
  return Povm(std::move(elements));
}

void attachDecoders(CoveringCode& code, const ClassicalQuantumState& cq) {
  const std::uint64_t dimBn = code.dimBn;
  const double share = 1.0 / static_cast<double>(code.mu);
  code.diagonalDecoders.clear();
  code.denseDecoders.clear();
  // Uniform priors inside a bin; the junk part 1 − Σ_m Υ_m is split evenly
  // over the μ outcomes so that every bin decoder has exactly μ elements.
  for (std::uint64_t l = 0; l < code.lambda; ++l) {
    if (code.diagonal) {
      std::vector<RealVector> r;
      RealVector sigma = RealVector::Zero(dimBn);
      for (std::uint64_t m = 0; m < code.mu; ++m) {
        r.push_back(sequenceDiagonal(cq, code.f(m, l), code.n));
        sigma += r.back();
      }
      for (std::uint64_t m = 0; m < code.mu; ++m) {
        RealVector u(dimBn);
        for (std::uint64_t y = 0; y < dimBn; ++y) u(y) = sigma(y) > 0.0 ? r[m](y) / sigma(y) : share;
        code.diagonalDecoders.push_back(std::move(u));
      }
    } else {
      std::vector<Matrix> r;
      Matrix sigma = Matrix::Zero(dimBn, dimBn);
      for (std::uint64_t m = 0; m < code.mu; ++m) {
        r.push_back(sequenceState(cq, code.f(m, l), code.n));
        sigma += r.back();
      }
      Matrix s = psdInvSqrt(sigma, kPgmCutoff);
      Matrix junk = Matrix::Identity(dimBn, dimBn);
      std::size_t first = code.denseDecoders.size();
      for (std::uint64_t m = 0; m < code.mu; ++m) {
        Matrix e = s * r[m] * s;
        e = hermitianPart(e);
        junk -= e;
        code.denseDecoders.push_back(std::move(e));
      }
      junk = hermitianPart(junk) * share;
      for (std::uint64_t m = 0; m < code.mu; ++m) code.denseDecoders[first + m] += junk;
    }
  }
  code.minSuccess = coveringMinSuccess(code, cq);
}

double coveringMinSuccess(const CoveringCode& code, const ClassicalQuantumState& cq) {
  double worst = 1.0;
  for (std::uint64_t l = 0; l < code.lambda; ++l) {
    for (std::uint64_t m = 0; m < code.mu; ++m) {
      double success;
      if (code.diagonal) {
        success = sequenceDiagonal(cq, code.f(m, l), code.n).dot(code.diagonalDecoders[l * code.mu + m]);
      } else {
        success = (sequenceState(cq, code.f(m, l), code.n) * code.denseDecoders[l * code.mu + m]).trace().real();
      }
      worst = std::min(worst, success);
    }
  }
  return worst;
}

CoveringCode buildCovering(const ClassicalQuantumState& cq, int n, double epsilon, double delta, std::uint64_t seed) {
  if (n < 1) throw ValidationError("buildCovering: n must be positive");
  if (!(epsilon > 0 && epsilon < 1)) throw ValidationError("buildCovering: epsilon must lie in (0, 1)");
  if (delta < 0) throw ValidationError("buildCovering: delta must be nonnegative");
  const int alphabet = cq.alphabet();
  if (std::pow(static_cast<double>(alphabet), n) > static_cast<double>(kSequenceGuard)) {
    throw GuardExceeded("covering: more than 2^16 X-sequences");
  }
  const std::uint64_t total = ipow(alphabet, n);

  CoveringCode code;
  code.n = n;
  code.alphabet = alphabet;
  code.dimB = cq.dim();
  code.epsilon = epsilon;
  code.delta = delta;
  code.seed = seed;
  code.diagonal = isDiagonalEnsemble(cq);
  code.entropyX = shannonEntropy(cq.probs);
  code.holevo = holevoInformation(cq);
  code.lambdaTarget = std::ceil(std::exp2(n * (code.entropyX - code.holevo + delta)));

  // S: typical sequences, topped up by probability until Pr{S} ≥ 1 − ε, then
  // padded so that |S| divides |X|ⁿ.
  std::vector<double> probs(total), logs(total);
  std::vector<std::uint32_t> typical, rest;
  for (std::uint64_t s = 0; s < total; ++s) {
    probs[s] = sequenceProb(cq, s, n);
    double rate = probs[s] > 0 ? -std::log2(probs[s]) / n : INFINITY;
    bool t = std::abs(rate - code.entropyX) <= delta + 1e-12;
    (t ? typical : rest).push_back(static_cast<std::uint32_t>(s));
  }
  std::stable_sort(rest.begin(), rest.end(), [&](std::uint32_t a, std::uint32_t b) { return probs[a] > probs[b]; });
  std::vector<double> inSet;
  for (std::uint32_t s : typical) inSet.push_back(probs[s]);
  std::size_t used = 0;
  while (sumKahan(inSet) < 1.0 - epsilon && used < rest.size()) {
    typical.push_back(rest[used]);
    inSet.push_back(probs[rest[used++]]);
  }
  std::uint64_t padded = nextDivisor(total, typical.size());
  while (typical.size() < padded) {
    typical.push_back(rest[used]);
    inSet.push_back(probs[rest[used++]]);
  }
  std::sort(typical.begin(), typical.end());
  code.set = typical;
  code.setMass = sumKahan(inSet);
  code.dimBn = ipow(code.dimB, n);
  checkGuards(cq, n, code.set.size(), code.diagonal);

  // One seeded shuffle; every λ slices the same order.
  std::vector<std::uint32_t> order = code.set;
  Rng rng(seed, 0x636f766572ULL);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  code.table = order;

  const std::uint64_t size = code.set.size();
  double floorTarget = std::floor(std::exp2(n * (code.entropyX - code.holevo - delta)));
  std::uint64_t lambda = nextDivisor(size, static_cast<std::uint64_t>(std::min<double>(std::max(floorTarget, 1.0), size)));
  while (true) {
    code.lambda = lambda;
    code.mu = size / lambda;
    attachDecoders(code, cq);
    code.attempts.push_back({lambda, code.minSuccess});
    if (code.minSuccess >= 1.0 - epsilon || lambda == size) break;
    lambda = nextDivisor(size, 2 * lambda);
  }
  return code;
}

CoveringReport verifyCovering(const CoveringCode& code, const ClassicalQuantumState& cq, int n) {
  CoveringReport r;
  if (code.n != n || code.alphabet != cq.alphabet() || code.dimB != cq.dim()) {
    throw ValidationError("verifyCovering: code does not match the ensemble");
  }
  std::vector<double> probs;
  for (std::uint32_t s : code.set) probs.push_back(sequenceProb(cq, s, n));
  r.setMass = sumKahan(probs);
  r.massOk = r.setMass >= 1.0 - code.epsilon - 1e-12;

  std::vector<std::uint32_t> seen = code.table;
  std::sort(seen.begin(), seen.end());
  r.bijective = seen == code.set && std::adjacent_find(seen.begin(), seen.end()) == seen.end();
  r.sizeConsistent = code.mu * code.lambda == code.set.size() && code.table.size() == code.set.size();

  r.povmsValid = r.sizeConsistent;
  for (std::uint64_t l = 0; r.povmsValid && l < code.lambda; ++l) {
    if (code.diagonal) {
      RealVector sum = RealVector::Zero(code.dimBn);
      for (std::uint64_t m = 0; m < code.mu; ++m) {
        const RealVector& u = code.diagonalDecoders.at(l * code.mu + m);
        if (u.size() != static_cast<Eigen::Index>(code.dimBn) || u.minCoeff() < -kEigenClamp) r.povmsValid = false;
        else sum += u;
      }
      if (r.povmsValid && (sum.array() - 1.0).abs().maxCoeff() > kPovmSumTol) r.povmsValid = false;
    } else {
      try {
        code.decoder(l);
      } catch (const ValidationError&) {
        r.povmsValid = false;
      }
    }
  }
  r.minSuccess = r.povmsValid ? coveringMinSuccess(code, cq) : 0.0;
  r.successOk = r.povmsValid && r.minSuccess >= 1.0 - code.epsilon;
  r.lambdaBound = std::exp2(n * (code.entropyX - code.holevo + code.delta));
  r.lambdaWithinBound = static_cast<double>(code.lambda) <= r.lambdaBound;
  r.setBound = std::exp2(n * (code.entropyX + code.delta));
  r.setWithinBound = static_cast<double>(code.set.size()) <= r.setBound;
  return r;
}

nlohmann::json toJson(const CoveringReport& r) {
  return {{"setMass", r.setMass},
          {"massOk", r.massOk},
          {"bijective", r.bijective},
          {"sizeConsistent", r.sizeConsistent},
          {"povmsValid", r.povmsValid},
          {"minSuccess", r.minSuccess},
          {"successOk", r.successOk},
          {"lambdaBound", r.lambdaBound},
          {"lambdaWithinBound", r.lambdaWithinBound},
          {"setBound", r.setBound},
          {"setWithinBound", r.setWithinBound}};
}

nlohmann::json toJson(const CoveringCode& code) {
  nlohmann::json bins = nlohmann::json::array();
  for (std::uint64_t l = 0; l < code.lambda; ++l) {
    nlohmann::json bin = nlohmann::json::array();
    for (std::uint64_t m = 0; m < code.mu; ++m) bin.push_back(code.f(m, l));
    bins.push_back(std::move(bin));
  }
  nlohmann::json attempts = nlohmann::json::array();
  for (const CoveringAttempt& a : code.attempts) attempts.push_back({{"lambda", a.lambda}, {"minSuccess", a.minSuccess}});
  return {{"n", code.n},
          {"mu", code.mu},
          {"lambda", code.lambda},
          {"setSize", code.set.size()},
          {"setMass", code.setMass},
          {"minSuccess", code.minSuccess},
          {"entropyX", code.entropyX},
          {"holevo", code.holevo},
          {"lambdaTarget", code.lambdaTarget},
          {"seed", code.seed},
          {"diagonal", code.diagonal},
          {"attempts", attempts},
          {"bins", bins}};
}

}  // namespace purity
