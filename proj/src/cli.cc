// Copyright 2026 The Authors.
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

#include "matcon/cli.h"

#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "matcon/errors.h"
#include "matcon/frugal.h"
#include "matcon/grades.h"
#include "matcon/io.h"
#include "matcon/sampler.h"
#include "matcon/solver.h"
#include "matcon/upm.h"

namespace matcon {
namespace {

struct Flags {
  std::string file;
  std::optional<std::string> alpha;
  std::optional<std::string> method;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> samples;
  std::optional<std::string> mu;
  std::optional<std::string> epsilon;
  std::optional<std::string> omega;
  std::optional<std::string> psi;
  std::optional<std::string> beta;
  std::optional<int> element;
  std::optional<int> outcome;
  int grid = 10;
  std::optional<std::string> format;
  bool allow_large = false;
  std::optional<std::string> realization;
  bool perturbed = false;
  int workers = 1;
  bool bounded_support = false;
  bool certified = false;
};

Rational Required(const std::optional<std::string>& text,
                  const std::string& flag) {
  if (!text) throw ValidationError("missing required flag " + flag);
  return ParseRational(*text);
}

std::string Str(const Rational& r) { return ToString(r); }

Json Matrix(const std::vector<std::vector<Rational>>& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(Str(v));
    out.push_back(r);
  }
  return out;
}

Json IntList(const std::vector<int>& v) {
  Json out = Json::array();
  for (int x : v) out.push_back(x);
  return out;
}

ExactOptions Exact(const Flags& f) {
  ExactOptions o;
  if (f.allow_large) o.cap = std::numeric_limits<std::uint64_t>::max();
  o.workers = f.workers;
  return o;
}

SampleConfig Sampling(const Flags& f) {
  SampleConfig c;
  c.seed = f.seed;
  c.replications = f.samples;
  if (f.mu) c.mu = ParseRational(*f.mu);
  c.allow_large = f.allow_large;
  c.workers = f.workers;
  return c;
}

bool WantsSampling(const Flags& f) { return f.samples || f.mu; }

OlcpmInstance LoadOlcpm(const Flags& f) {
  Instance inst = LoadInstance(f.file);
  if (auto* o = std::get_if<OlcpmInstance>(&inst)) return std::move(*o);
  throw ValidationError(f.file + ": expected an olcpm instance");
}

UpmInstance LoadUpm(const Flags& f) {
  Instance inst = LoadInstance(f.file);
  if (auto* u = std::get_if<UpmInstance>(&inst)) return std::move(*u);
  throw ValidationError(f.file + ": expected a upm instance");
}

bool Csv(const Flags& f, bool csv_default) {
  if (!f.format) return csv_default;
  if (*f.format == "csv") return true;
  if (*f.format == "json") return false;
  throw ValidationError("--format must be json or csv");
}

void RejectCsv(const Flags& f) {
  if (Csv(f, false)) {
    throw ValidationError("csv output is available for sweep and "
                          "critical-values only");
  }
}

Json SolutionJson(const ContractSolution& sol, const Flags& f) {
  Json out;
  out["alpha"] = Str(sol.alpha_star);
  if (sol.exact_utility) {
    out["utility"] = Str(*sol.exact_utility);
  } else {
    out["utility"] = sol.utility;
  }
  out["method"] = sol.method;
  if (sol.mu) {
    out["mu"] = Str(*sol.mu);
    out["certified_replications"] = sol.certified_replications->get_str();
    out["replications"] = sol.replications;
    out["seed"] = f.seed;
  }
  Json cands = Json::array();
  for (const auto& c : sol.candidates) {
    Json j;
    j["alpha"] = Str(c.alpha);
    if (c.exact_utility) {
      j["utility"] = Str(*c.exact_utility);
    } else {
      j["utility"] = c.utility;
    }
    cands.push_back(j);
  }
  out["candidates"] = cands;
  return out;
}

int Validate(const Flags& f, std::ostream& out) {
  RejectCsv(f);
  Json result;
  try {
    Instance inst = LoadInstance(f.file);
    result["valid"] = true;
    if (auto* o = std::get_if<OlcpmInstance>(&inst)) {
      result["kind"] = "olcpm";
      result["n"] = o->n();
      result["m"] = o->m();
    } else {
      result["kind"] = "upm";
      result["n"] = std::get<UpmInstance>(inst).n();
    }
  } catch (const ValidationError& e) {
    result["valid"] = false;
    Json lines = Json::array();
    std::istringstream in(e.what());
    std::string line;
    while (std::getline(in, line)) {
      const auto start = line.find_first_not_of(' ');
      if (start != std::string::npos && line != "invalid instance:") {
        lines.push_back(line.substr(start));
      }
    }
    result["violations"] = lines;
    out << DumpJson(result) << "\n";
    return static_cast<int>(ExitCode::kValidation);
  }
  out << DumpJson(result) << "\n";
  return 0;
}

int Solve(const Flags& f, std::ostream& out) {
  RejectCsv(f);
  const OlcpmInstance inst = LoadOlcpm(f);
  const std::string method = f.method.value_or("exact");
  ContractSolution sol;
  if (method == "exact") {
    sol = SolveExact(inst, Exact(f));
  } else if (method == "balanced") {
    const Rational eps = Required(f.epsilon, "--epsilon");
    const Rational omega = f.omega ? ParseRational(*f.omega)
                                   : std::max(BalanceRatio(inst), Rational(1));
    sol = SolveFprasBalanced(inst, eps, omega, Sampling(f));
  } else if (method == "bounded-support") {
    sol = SolveFprasBoundedSupport(inst, Required(f.epsilon, "--epsilon"),
                                   Sampling(f));
  } else {
    throw ValidationError("solve --method must be exact, balanced or "
                          "bounded-support");
  }
  out << DumpJson(SolutionJson(sol, f)) << "\n";
  return 0;
}

int Evaluate(const Flags& f, std::ostream& out) {
  RejectCsv(f);
  const OlcpmInstance inst = LoadOlcpm(f);
  const Rational alpha = Required(f.alpha, "--alpha");
  Json result;
  result["alpha"] = Str(alpha);
  if (f.element || f.outcome) {
    if (!f.element || !f.outcome) {
      throw ValidationError("--element and --outcome go together");
    }
    result["element"] = *f.element;
    result["outcome"] = *f.outcome;
    result["acceptance"] = Str(AcceptanceProbExact(
        inst, alpha, *f.element, *f.outcome, Exact(f).cap));
  } else if (WantsSampling(f)) {
    const SampledUtilities s = SampleUtilities(inst, alpha, Sampling(f));
    result["seed"] = s.estimate.seed;
    result["replications"] = s.estimate.replications;
    result["u_principal"] = s.u_principal;
    result["u_agent"] = s.u_agent;
    result["expected_cost"] = s.expected_cost;
    result["rho"] = s.estimate.rho;
  } else {
    const UtilityReport r = ExactUtilities(inst, alpha, Exact(f));
    result["epsilon"] = Str(r.epsilon);
    result["u_principal"] = Str(r.u_principal);
    result["u_agent"] = Str(r.u_agent);
    result["expected_cost"] = Str(r.expected_cost);
    result["expected_reward"] = Str(r.expected_reward);
    if (f.perturbed) {
      result["u_agent_perturbed"] = Str(r.u_agent_perturbed);
      result["expected_cost_perturbed"] = Str(r.expected_cost_perturbed);
    }
    result["acceptance"] = Matrix(r.acceptance);
  }
  out << DumpJson(result) << "\n";
  return 0;
}

int Critical(const Flags& f, std::ostream& out) {
  const OlcpmInstance inst = LoadOlcpm(f);
  const auto values = CriticalValues(inst);
  if (Csv(f, false)) {
    out << "alpha\n";
    for (const auto& v : values) out << Str(v) << "\n";
    return 0;
  }
  Json list = Json::array();
  for (const auto& v : values) list.push_back(Str(v));
  out << DumpJson(list) << "\n";
  return 0;
}

Realization ParseRealization(const std::string& text, const OlcpmInstance& inst) {
  Realization r;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const int k = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      r.push_back(k);
    } catch (const std::exception&) {
      throw ValidationError("--realization: bad outcome index \"" + item + "\"");
    }
  }
  if (static_cast<int>(r.size()) != inst.n()) {
    throw ValidationError("--realization needs one outcome index per element");
  }
  return r;
}

int Trace(const Flags& f, std::ostream& out) {
  RejectCsv(f);
  const OlcpmInstance inst = LoadOlcpm(f);
  const Rational alpha = Required(f.alpha, "--alpha");
  if (!f.realization) throw ValidationError("missing required flag --realization");
  const Realization real = ParseRealization(*f.realization, inst);
  std::vector<Rational> costs;
  Json result;
  result["alpha"] = Str(alpha);
  if (f.perturbed) {
    const Rational eps = PerturbationEpsilon(inst, alpha);
    costs = PerturbedCosts(inst, eps);
    result["epsilon"] = Str(eps);
  } else {
    for (const auto& e : inst.elements) costs.push_back(e.cost);
  }
  const FrugalTrace t = RunFrugal(inst, alpha, real, costs);
  result["probe_order"] = IntList(t.probe_order);
  result["probed"] = IntList(t.probed);
  result["returned"] = IntList(t.returned);
  result["principal_reward"] = Str(t.principal_reward);
  result["agent_payment"] = Str(t.agent_payment);
  result["probing_cost"] = Str(t.probing_cost);
  out << DumpJson(result) << "\n";
  return 0;
}

int SweepCommand(const Flags& f, std::ostream& out) {
  const OlcpmInstance inst = LoadOlcpm(f);
  const auto alphas = SweepAlphas(inst, f.grid);
  std::optional<SampleConfig> sampled;
  if (WantsSampling(f)) sampled = Sampling(f);
  const auto rows = Sweep(inst, alphas, sampled, Exact(f));
  auto cell = [](const std::optional<Rational>& exact, double approx) {
    return exact ? Str(*exact) : FormatDouble(approx);
  };
  if (Csv(f, true)) {
    out << "alpha,u_principal,u_agent,expected_cost\n";
    for (const auto& r : rows) {
      out << Str(r.alpha) << "," << cell(r.exact_u_principal, r.u_principal)
          << "," << cell(r.exact_u_agent, r.u_agent) << ","
          << cell(r.exact_expected_cost, r.expected_cost) << "\n";
    }
    return 0;
  }
  Json list = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["alpha"] = Str(r.alpha);
    if (r.exact_u_principal) {
      j["u_principal"] = Str(*r.exact_u_principal);
      j["u_agent"] = Str(*r.exact_u_agent);
      j["expected_cost"] = Str(*r.exact_expected_cost);
    } else {
      j["u_principal"] = r.u_principal;
      j["u_agent"] = r.u_agent;
      j["expected_cost"] = r.expected_cost;
    }
    list.push_back(j);
  }
  out << DumpJson(list) << "\n";
  return 0;
}

int UpmSolve(const Flags& f, std::ostream& out) {
  RejectCsv(f);
  const UpmInstance inst = LoadUpm(f);
  const std::string method = f.method.value_or("exact");
  Json result;
  result["method"] = method;
  if (method == "exact") {
    result["rho"] = Str(UpmExact(inst, Exact(f).cap));
  } else if (method == "uniform-poly") {
    result["rho"] = Str(UpmUniformPoly(inst));
  } else if (method == "monte-carlo") {
    const SampleConfig c = Sampling(f);
    result["rho"] = UpmMonteCarlo(inst, c);
    result["replications"] = ResolveReplications(c, inst.n(), 1);
    result["seed"] = f.seed;
  } else {
    throw ValidationError("upm solve --method must be exact, uniform-poly or "
                          "monte-carlo");
  }
  out << DumpJson(result) << "\n";
  return 0;
}

int UpmFromOlcpm(const Flags& f, std::ostream& out) {
  RejectCsv(f);
  const OlcpmInstance inst = LoadOlcpm(f);
  const Rational alpha = Required(f.alpha, "--alpha");
  if (!f.element || !f.outcome) {
    throw ValidationError("missing required flags --element and --outcome");
  }
  const OlcpmToUpmResult r =
      OlcpmToUpm(inst, alpha, *f.element, *f.outcome, Exact(f).cap);
  Json result;
  result["acceptance"] = Str(r.acceptance);
  result["instance"] = r.instance ? ToJson(*r.instance) : Json();
  out << DumpJson(result) << "\n";
  return 0;
}

int UpmToOlcpmCommand(const Flags& f, std::ostream& out) {
  RejectCsv(f);
  const UpmInstance inst = LoadUpm(f);
  const Rational beta = Required(f.beta, "--beta");
  const Rational eps = Required(f.epsilon, "--epsilon");
  const ReductionParams params = ChooseReductionParams(inst.n(), beta, eps);
  const Reduction red = f.bounded_support
                            ? UpmToOlcpmBoundedSupport(inst, params)
                            : UpmToOlcpm(inst, params);
  Json result;
  result["params"] = {{"beta", Str(params.beta)},
                      {"eps", Str(params.eps)},
                      {"delta", Str(params.delta)},
                      {"xi", Str(params.xi)}};
  result["ground_of_role"] = IntList(red.ground_of_role);
  result["instance"] = ToJson(red.instance);
  out << DumpJson(result) << "\n";
  return 0;
}

int UpmViaOlcpmCommand(const Flags& f, std::ostream& out) {
  RejectCsv(f);
  const UpmInstance inst = LoadUpm(f);
  DriverOptions options;
  options.certified = f.certified;
  const ExactOptions exact = Exact(f);
  const OlcpmOracle oracle = [exact](const OlcpmInstance& o) {
    return SolveExact(o, exact);
  };
  const DriverResult r = f.psi
                             ? UpmViaOlcpmApprox(inst, ParseRational(*f.psi),
                                                 oracle, options)
                             : UpmViaOlcpm(inst, oracle, options);
  Json result;
  result["rho"] = Str(r.rho);
  result["lambda"] = Str(r.lambda);
  result["eps"] = Str(r.eps);
  result["oracle_calls"] = r.oracle_calls;
  result["zero_check"] = r.zero_check;
  out << DumpJson(result) << "\n";
  return 0;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  Flags f;
  CLI::App app{"Linear contracts and unreliability on matroids", "matcon"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--alpha", f.alpha, "Contract level p/q");
  app.add_option("--method", f.method, "exact|balanced|bounded-support|"
                                       "monte-carlo|uniform-poly");
  app.add_option("--seed", f.seed, "Random seed");
  app.add_option("--samples", f.samples, "Replications");
  app.add_option("--mu", f.mu, "Accuracy parameter p/q");
  app.add_option("--epsilon", f.epsilon, "Epsilon p/q");
  app.add_option("--omega", f.omega, "Balance bound p/q");
  app.add_option("--psi", f.psi, "Approximation grid ratio p/q");
  app.add_option("--beta", f.beta, "Reduction level p/q");
  app.add_option("--element", f.element, "Element index (0-based)");
  app.add_option("--outcome", f.outcome, "Outcome index (0-based)");
  app.add_option("--grid", f.grid, "Sweep grid size");
  app.add_option("--format", f.format, "json|csv");
  app.add_flag("--allow-large", f.allow_large, "Lift budget and enumeration caps");
  app.add_option("--realization", f.realization,
                 "Comma-separated outcome indices");
  app.add_flag("--perturbed", f.perturbed, "Use perturbed costs");
  app.add_option("--workers", f.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_flag("--bounded-support", f.bounded_support,
               "Three-outcome reduction");
  app.add_flag("--certified", f.certified,
               "Clean up probabilities before each reduction");

  auto with_file = [&](CLI::App* sub) {
    sub->add_option("file", f.file, "Instance file")->required();
    return sub;
  };
  auto* validate = with_file(app.add_subcommand("validate", "Check an instance"));
  auto* solve = with_file(app.add_subcommand("solve", "Optimal linear contract"));
  auto* evaluate = with_file(app.add_subcommand("evaluate", "Utilities at alpha"));
  auto* critical =
      with_file(app.add_subcommand("critical-values", "Candidate contracts"));
  auto* trace = with_file(app.add_subcommand("trace", "One FRUGAL run"));
  auto* sweep = with_file(app.add_subcommand("sweep", "Utilities over alpha"));
  auto* upm = app.add_subcommand("upm", "Unreliability problem");
  upm->require_subcommand(1);
  auto* upm_solve = with_file(upm->add_subcommand("solve", "Solve a UPM instance"));
  auto* from = with_file(
      upm->add_subcommand("from-olcpm", "Acceptance probability as UPM"));
  auto* to = with_file(upm->add_subcommand("to-olcpm", "UPM as OLCPM"));
  auto* via = with_file(
      upm->add_subcommand("via-olcpm", "UPM through an OLCPM oracle"));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return static_cast<int>(ExitCode::kValidation);
  }

  try {
    if (validate->parsed()) return Validate(f, out);
    if (solve->parsed()) return Solve(f, out);
    if (evaluate->parsed()) return Evaluate(f, out);
    if (critical->parsed()) return Critical(f, out);
    if (trace->parsed()) return Trace(f, out);
    if (sweep->parsed()) return SweepCommand(f, out);
    if (upm_solve->parsed()) return UpmSolve(f, out);
    if (from->parsed()) return UpmFromOlcpm(f, out);
    if (to->parsed()) return UpmToOlcpmCommand(f, out);
    if (via->parsed()) return UpmViaOlcpmCommand(f, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kValidation);
  }
  err << app.help();
  return static_cast<int>(ExitCode::kValidation);
}

}  // namespace matcon
