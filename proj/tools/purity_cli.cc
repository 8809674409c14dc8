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

// Command-line front end: reads a state file, runs one computation and
// writes a JSON or CSV report.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "purity/covering.h"
#include "purity/entropy.h"
#include "purity/errors.h"
#include "purity/inequalities.h"
#include "purity/povm_opt.h"
#include "purity/protocol.h"
#include "purity/state_io.h"
#include "purity/typicality.h"

namespace {

using nlohmann::json;
using namespace purity;

constexpr int kExitValidation = 2;
constexpr int kExitGuard = 3;
constexpr int kExitMaxIters = 4;

struct Options {
  std::string command;
  std::string state;
  int n = 0;
  double delta = 0.1;
  double epsilon = 0.1;
  std::uint64_t seed = 1;
  int restarts = 32;
  double tol = 1e-9;
  int instances = 1000;
  std::string out;
  std::string format = "json";
  std::string measure = "computational";
  bool noTiming = false;
};

struct Row {
  std::string name;
  double value;
  std::optional<double> bound;
  std::optional<double> tolerance;
};

class Report {
 public:
  void scalar(const std::string& name, double value, std::optional<double> bound = {}, std::optional<double> tol = {}) {
    results_[name] = value;
    rows_.push_back({name, value, bound, tol});
  }
  void extra(const std::string& name, json value) { results_[name] = std::move(value); }

  json results() const { return results_; }
  const std::vector<Row>& rows() const { return rows_; }
  bool maxIters = false;

 private:
  json results_ = json::object();
  std::vector<Row> rows_;
};

std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string readBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open state file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

StateFile requireState(const Options& o) {
  if (o.state.empty()) throw ValidationError(o.command + ": --state is required");
  return readStateFile(o.state);
}

BipartiteState requireBipartite(const Options& o) {
  StateFile f = requireState(o);
  if (!f.bipartite()) throw ValidationError(o.command + ": state must be bipartite (dims [dA, dB])");
  return f.asBipartite();
}

OptimizerConfig optimizerConfig(const Options& o) {
  OptimizerConfig c;
  c.restarts = o.restarts;
  c.gradTol = o.tol;
  c.seed = o.seed;
  return c;
}

int nOr(const Options& o, int fallback) { return o.n > 0 ? o.n : fallback; }

RankOnePovm chooseMeasurement(const Options& o, const BipartiteState& s, Report& r) {
  if (o.measure == "computational") return RankOnePovm::computationalBasis(s.dimA);
  DeficitResult d = oneShotDeficit(s, optimizerConfig(o));
  r.scalar("measurementInfo", d.value, d.ceiling);
  r.maxIters = r.maxIters || !d.converged;
  return d.argmax;
}

void runEntropy(const Options& o, Report& r) {
  StateFile f = requireState(o);
  if (!f.bipartite()) {
    r.scalar("entropy", vonNeumann(f.rho));
    return;
  }
  BipartiteState s = f.asBipartite();
  EntropyReport e = entropyReport(s);
  r.scalar("hA", e.hA);
  r.scalar("hB", e.hB);
  r.scalar("hAB", e.hAB);
  r.scalar("mutualInfo", e.iAB);
  r.scalar("conditionalEntropy", conditionalEntropy(s));
}

void runKappa(const Options& o, Report& r) {
  StateFile f = requireState(o);
  r.scalar("kappa", kappaLocal(f.rho));
  if (f.bipartite()) {
    BipartiteState s = f.asBipartite();
    r.scalar("kappaA", kappaLocal(partialTrace(s, Subsystem::A)));
    r.scalar("kappaB", kappaLocal(partialTrace(s, Subsystem::B)));
  }
}

void runDeficit(const Options& o, Report& r) {
  BipartiteState s = requireBipartite(o);
  DeficitResult d = oneShotDeficit(s, optimizerConfig(o));
  r.scalar("value", d.value, d.ceiling, o.tol);
  r.scalar("ceiling", d.ceiling);
  r.scalar("bestRestart", d.bestRestart);
  r.extra("restartValues", d.trace);
  r.extra("converged", d.converged);
  r.maxIters = !d.converged;
}

void runKappaOneWay(const Options& o, Report& r) {
  BipartiteState s = requireBipartite(o);
  int n = nOr(o, 1);
  DeficitResult d = classicalDeficitResult(s, n, optimizerConfig(o));
  double ka = kappaLocal(partialTrace(s, Subsystem::A));
  double kb = kappaLocal(partialTrace(s, Subsystem::B));
  r.scalar("kappa1way", ka + kb + d.value, ka + kb + d.ceiling);
  r.scalar("kappaA", ka);
  r.scalar("kappaB", kb);
  r.scalar("classicalDeficit", d.value, d.ceiling);
  r.scalar("n", n);
  r.extra("converged", d.converged);
  r.maxIters = !d.converged;
}

void runConcentrate(const Options& o, Report& r) {
  StateFile f = requireState(o);
  int n = nOr(o, 10);
  ConcentrationCode code = buildConcentrationCode(f.rho, n, o.delta);
  ConverseResult c = converseCheck(code, f.rho);
  r.scalar("rate", code.rate, c.bound);
  r.scalar("kappa", kappaLocal(f.rho));
  r.scalar("achievedEpsilon", code.achievedEpsilon);
  r.scalar("typicalMass", code.typicalMass);
  r.scalar("keptMass", code.keptMass);
  r.scalar("typicalSize", static_cast<double>(code.typicalSize));
  r.scalar("d1", static_cast<double>(code.d1));
  r.scalar("d2", static_cast<double>(code.d2));
  r.scalar("converseSlack", c.slack, 0.0);
}

void runCover(const Options& o, Report& r) {
  BipartiteState s = requireBipartite(o);
  int n = nOr(o, 4);
  RankOnePovm lambda = chooseMeasurement(o, s, r);
  ClassicalQuantumState cq = measurementEnsemble(s, lambda);
  CoveringCode code = buildCovering(cq, n, o.epsilon, o.delta, o.seed);
  CoveringReport v = verifyCovering(code, cq, n);
  r.scalar("mu", static_cast<double>(code.mu));
  r.scalar("lambda", static_cast<double>(code.lambda), v.lambdaBound);
  r.scalar("minSuccess", code.minSuccess, 1.0 - o.epsilon);
  r.scalar("setMass", code.setMass, 1.0 - o.epsilon);
  r.extra("verification", toJson(v));
  r.extra("code", toJson(code));
}

void runDistill(const Options& o, Report& r) {
  BipartiteState s = requireBipartite(o);
  DistillationConfig cfg;
  cfg.n = nOr(o, 8);
  cfg.epsilon = o.epsilon;
  cfg.delta = o.delta;
  cfg.seed = o.seed;
  RankOnePovm lambda = chooseMeasurement(o, s, r);
  DistillationResult d = runDistillation(s, lambda, cfg);
  r.scalar("rate", d.ledger.rate);
  r.scalar("finalDistance", d.trace.finalDistance, d.trace.envelope);
  r.scalar("converseMargin", converseMargin(d.ledger, s, d.trace), 0.0);
  r.scalar("catalystRate", d.ledger.catalystRate);
  r.scalar("classicalBitsSent", d.ledger.classicalBitsSent);
  r.extra("ledger", toJson(d.ledger));
  r.extra("trace", toJson(d.trace));
  json boot = json::array();
  for (const BootstrapRow& b : bootstrapSummary(d.ledger, 8)) {
    boot.push_back({{"blocks", b.blocks}, {"catalystRate", b.catalystRate}, {"rate", b.netRate}});
  }
  r.extra("bootstrap", boot);
}

void runExample(const Options&, Report& r) {
  DistillationResult d = runExample1();
  const double probs[4] = {0.5, 0.0, 0.0, 0.5};
  BipartiteState phi(2, 2, DensityMatrix::diagonal(probs));
  r.scalar("rate", d.ledger.rate);
  r.scalar("finalDistance", d.trace.finalDistance);
  r.scalar("converseMargin", converseMargin(d.ledger, phi, d.trace), 0.0);
  r.extra("ledger", toJson(d.ledger));
  r.extra("trace", toJson(d.trace));
}

void runAdditivity(const Options& o, Report& r) {
  BipartiteState s = requireBipartite(o);
  AdditivityResult a = additivityCheck(s, optimizerConfig(o));
  r.scalar("lhs", a.lhs);
  r.scalar("rhs", a.rhs);
  r.scalar("difference", a.lhs - a.rhs, 5e-3);
  r.scalar("sigmaAlone", a.sigmaAlone, 1e-6);
}

void runIneqSuite(const Options& o, Report& r) {
  int violations = 0;
  json tallies = json::array();
  for (const InequalityTally& t : runInequalitySuite(o.instances, o.seed)) {
    violations += t.violations;
    r.scalar(t.name + ".worstExcess", t.worstExcess, 0.0, 1e-9);
    tallies.push_back({{"name", t.name}, {"instances", t.instances}, {"violations", t.violations}});
  }
  r.scalar("violations", violations);
  r.extra("tallies", tallies);
}

std::string csvNumber(std::optional<double> v) {
  if (!v) return "";
  std::ostringstream s;
  s.precision(17);
  s << *v;
  return s.str();
}

std::string render(const Options& o, const Report& r, const json& doc) {
  if (o.format == "json") return doc.dump(2) + "\n";
  std::string out = "name,value,bound,tolerance\n";
  for (const Row& row : r.rows()) {
    out += row.name + "," + csvNumber(row.value) + "," + csvNumber(row.bound) + "," + csvNumber(row.tolerance) + "\n";
  }
  return out;
}

int dispatch(const Options& o) {
  auto start = std::chrono::steady_clock::now();
  Report report;
  if (o.command == "entropy") runEntropy(o, report);
  else if (o.command == "kappa") runKappa(o, report);
  else if (o.command == "deficit") runDeficit(o, report);
  else if (o.command == "kappa1way") runKappaOneWay(o, report);
  else if (o.command == "concentrate") runConcentrate(o, report);
  else if (o.command == "cover") runCover(o, report);
  else if (o.command == "distill") runDistill(o, report);
  else if (o.command == "example1") runExample(o, report);
  else if (o.command == "additivity") runAdditivity(o, report);
  else if (o.command == "ineq-suite") runIneqSuite(o, report);

  json doc;
  doc["command"] = o.command;
  doc["inputDigest"] = o.state.empty() ? "none" : fnv1a(readBytes(o.state));
  doc["seed"] = o.seed;
  doc["results"] = report.results();
  doc["tolerances"] = {{"hermitianSymmetrize", kSymmetrizeTol}, {"trace", kTraceTol},
                       {"eigenClamp", kEigenClamp},            {"povmSum", kPovmSumTol},
                       {"unitary", kUnitaryTol},               {"gradTol", o.tol}};
  doc["status"] = report.maxIters ? "maxIters" : "ok";
  if (!o.noTiming) {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    doc["timing"] = {{"seconds", secs}};
  }
  std::string text = render(o, report, doc);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + o.out + "'");
    f << text;
  }
  return report.maxIters ? kExitMaxIters : 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Purity measures and distillation protocols for finite-dimensional quantum states"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--state", o.state, "State file (JSON)");
  app.add_option("--n", o.n, "Number of copies (default depends on the command)")->check(CLI::PositiveNumber);
  app.add_option("--delta", o.delta, "Typicality slack δ")->capture_default_str();
  app.add_option("--epsilon", o.epsilon, "Error parameter ε")->capture_default_str();
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--restarts", o.restarts, "Random optimizer restarts")->capture_default_str();
  app.add_option("--tol", o.tol, "Optimizer gradient tolerance")->capture_default_str();
  app.add_option("--instances", o.instances, "Instances per inequality (ineq-suite)")->capture_default_str();
  app.add_option("--out", o.out, "Write the report to this file instead of stdout");
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--measure", o.measure, "Measurement for cover/distill")
      ->check(CLI::IsMember({"computational", "optimal"}))
      ->capture_default_str();
  app.add_flag("--no-timing", o.noTiming, "Omit wall-clock timing from the report");

  const std::pair<const char*, const char*> commands[] = {
      {"entropy", "Entropies and mutual information"},
      {"kappa", "Local purity log d − H"},
      {"deficit", "Single-copy one-way deficit (optimizer lower bound)"},
      {"kappa1way", "Finite-copy level of the one-way local purity (default n = 1)"},
      {"concentrate", "Purity concentration code (default n = 10)"},
      {"cover", "Covering code for the measured ensemble (default n = 4)"},
      {"distill", "Full one-way distillation run (default n = 8)"},
      {"example1", "Single-copy distillation of the classically correlated bit"},
      {"additivity", "Deficit of ρ ⊗ maximally mixed against ρ alone"},
      {"ineq-suite", "Randomized distance and entropy inequality checks"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->callback([&o, name = std::string(name)] { o.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    return dispatch(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const GuardExceeded& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
