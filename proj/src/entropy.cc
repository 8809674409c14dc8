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

#include "purity/entropy.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "purity/errors.h"

namespace purity {

double spectrumEntropy(const RealVector& spectrum) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    double l = spectrum(i);
    if (l < -kEigenClamp) throw ValidationError("entropy: spectrum has a negative eigenvalue");
    if (l > 0.0) h -= l * std::log2(l);
  }
  return h;
}

double shannonEntropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw ValidationError("shannonEntropy: negative probability");
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double binaryEntropy(double p) {
  const double probs[2] = {p, 1.0 - p};
  return shannonEntropy(probs);
}

double vonNeumann(const DensityMatrix& rho) {
  double h = spectrumEntropy(hermitianEigenvalues(rho.matrix()));
  return std::clamp(h, 0.0, std::log2(static_cast<double>(rho.dim())));
}

double vonNeumannOf(const Matrix& m) {
  double tr = m.trace().real();
  if (tr <= 0.0) return 0.0;
  return spectrumEntropy(hermitianEigenvalues((m + m.adjoint()) * (0.5 / tr)));
}

EntropyReport entropyReport(const BipartiteState& s) {
  EntropyReport r{};
  r.hA = vonNeumann(partialTrace(s, Subsystem::A));
  r.hB = vonNeumann(partialTrace(s, Subsystem::B));
  r.hAB = vonNeumann(s.rho);
  r.iAB = r.hA + r.hB - r.hAB;
  return r;
}

double mutualInfo(const BipartiteState& s) { return entropyReport(s).iAB; }

double conditionalEntropy(const BipartiteState& s) {
  return vonNeumann(s.rho) - vonNeumann(partialTrace(s, Subsystem::B));
}

TripartiteState::TripartiteState(int a, int b, int x, DensityMatrix r) : dimA(a), dimB(b), dimX(x), rho(std::move(r)) {
  if (a <= 0 || b <= 0 || x <= 0 || rho.dim() != a * b * x) {
    throw ValidationError("TripartiteState: dimension mismatch");
  }
}

double conditionalMutualInfo(const TripartiteState& s) {
  const int dims[3] = {s.dimA, s.dimB, s.dimX};
  auto h = [&](bool a, bool b, bool x) {
    const bool keep[3] = {a, b, x};
    return vonNeumannOf(partialTraceKeep(s.rho.matrix(), dims, keep));
  };
  // I(A;BX) − I(A;X) = H(AX) + H(BX) − H(ABX) − H(X)
  return h(true, false, true) + h(false, true, true) - vonNeumann(s.rho) - h(false, false, true);
}

double cqJointEntropy(const ClassicalQuantumState& cq) {
  double h = shannonEntropy(cq.probs);
  for (int x = 0; x < cq.alphabet(); ++x) h += cq.probs[x] * vonNeumann(cq.states[x]);
  return h;
}

double holevoInformation(const ClassicalQuantumState& cq) {
  Matrix avg = Matrix::Zero(cq.dim(), cq.dim());
  double cond = 0.0;
  for (int x = 0; x < cq.alphabet(); ++x) {
    avg += cq.probs[x] * cq.states[x].matrix();
    cond += cq.probs[x] * vonNeumann(cq.states[x]);
  }
  return vonNeumannOf(avg) - cond;
}

FannesCheck fannesCheck(const DensityMatrix& rho, const DensityMatrix& omega) {
  if (rho.dim() != omega.dim()) throw ValidationError("fannesCheck: dimension mismatch");
  double lhs = std::abs(vonNeumann(rho) - vonNeumann(omega));
  double rhs = 1.0 / std::numbers::e + std::log2(static_cast<double>(rho.dim())) * traceNorm(rho.matrix() - omega.matrix());
  return {lhs, rhs};
}

double subadditivityCheck(const BipartiteState& s) { return mutualInfo(s); }

}  // namespace purity
