#pragma once

// End-to-end check of the reduction on random formulas: the SAT side is
// decided by exhaustive search over assignments, the network side by the
// exact admission solver, and the two must agree (optimum m + 1 exactly
// when satisfiable, m otherwise).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdma/cnf.hpp"
#include "tdma/error.hpp"
#include "tdma/gadget.hpp"
#include "tdma/instance.hpp"
#include "tdma/instance_io.hpp"
#include "tdma/solver.hpp"

namespace tdma {

struct VerifyParams {
  int vars = 4;
  std::size_t clauses = 3;
  int k = 3;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  CapacityPreset capacities{};
  SolveOptions solve{};
  int exhaustive_bound = kDefaultExhaustiveBound;
};

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  Formula formula;
  bool satisfiable = false;
  std::size_t nc_optimum = 0;
  bool nc_optimal = false;
  bool audit_ok = false;
  std::vector<std::string> audit_findings;
  std::size_t max_sat = 0;
  std::size_t max_traversable = 0;
  bool agree = false;
  std::optional<std::string> witness;  // instance JSON, only on disagreement
};

struct VerificationReport {
  VerifyParams params;
  std::vector<TrialRecord> trials;

  std::size_t agreements() const {
    std::size_t n = 0;
    for (const auto& t : trials) n += t.agree;
    return n;
  }
  std::size_t audit_failures() const {
    std::size_t n = 0;
    for (const auto& t : trials) n += !t.audit_ok;
    return n;
  }
  std::size_t satisfiable_count() const {
    std::size_t n = 0;
    for (const auto& t : trials) n += t.satisfiable;
    return n;
  }
  bool passed() const { return agreements() == trials.size() && audit_failures() == 0; }
  int exit_status() const { return passed() ? 0 : 1; }
};

// Per-trial seed; a SplitMix64 step so neighbouring trials are unrelated.
inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Best traversable-clause count over every assignment.
inline std::size_t max_traversable(const NcInstance& inst, int bound = kDefaultExhaustiveBound) {
  const Formula& f = inst.formula.value();
  require_exhaustive(f, bound);
  std::size_t best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.var_count); ++mask) {
    best = std::max(best, traversable_clauses(inst, Assignment::from_mask(f.var_count, mask)));
  }
  return best;
}

inline TrialRecord run_trial(const VerifyParams& p, std::size_t index) {
  TrialRecord t;
  t.index = index;
  t.seed = trial_seed(p.seed, index);
  t.formula = random_formula(p.vars, p.clauses, p.k, t.seed);
  const std::size_t m = t.formula.clause_count();

  const NcInstance inst = compile(t.formula, p.capacities);
  const AuditReport audit_report = audit(inst);
  t.audit_ok = audit_report.ok();
  for (const auto& c : audit_report.clauses) {
    t.audit_findings.insert(t.audit_findings.end(), c.findings.begin(), c.findings.end());
  }

  t.satisfiable = brute_sat(t.formula, p.exhaustive_bound).has_value();
  const SolveResult nc = solve_exact(inst, p.solve);
  t.nc_optimum = nc.accepted_count;
  t.nc_optimal = nc.optimal;
  t.max_sat = max_sat_brute(t.formula, p.exhaustive_bound).count;
  t.max_traversable = max_traversable(inst, p.exhaustive_bound);

  const std::size_t expected = t.satisfiable ? m + 1 : m;
  t.agree = nc.optimal && t.nc_optimum == expected;
  if (!t.agree) t.witness = save_instance(inst);
  return t;
}

inline VerificationReport run_verification(const VerifyParams& p) {
  if (p.vars < 1 || p.vars > p.exhaustive_bound) {
    throw InputError("--vars must lie in [1, " + std::to_string(p.exhaustive_bound) + "]");
  }
  if (p.k < 2 || p.k > p.vars) throw InputError("--k must satisfy 2 <= k <= vars");
  if (p.clauses < 1) throw InputError("--clauses must be positive");
  VerificationReport report;
  report.params = p;
  for (std::size_t i = 0; i < p.trials; ++i) report.trials.push_back(run_trial(p, i));
  return report;
}

namespace detail {

inline std::string clause_text(const Formula& f) {
  std::string out;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    if (i) out += " & ";
    out += "(";
    const auto& lits = f.clauses[i].literals;
    for (std::size_t j = 0; j < lits.size(); ++j) {
      if (j) out += " | ";
      out += std::to_string(lits[j].dimacs());
    }
    out += ")";
  }
  return out;
}

}  // namespace detail

inline std::string render_text(const VerificationReport& r) {
  std::ostringstream out;
  const auto& p = r.params;
  out << "verify vars=" << p.vars << " clauses=" << p.clauses << " k=" << p.k
      << " trials=" << p.trials << " seed=" << p.seed << "\n";
  for (const auto& t : r.trials) {
    out << "trial " << t.index << " seed=" << t.seed << " sat=" << (t.satisfiable ? "yes" : "no")
        << " nc=" << t.nc_optimum << (t.nc_optimal ? "" : "(non-optimal)")
        << " audit=" << (t.audit_ok ? "ok" : "FAIL") << " maxsat=" << t.max_sat
        << " traversable=" << t.max_traversable << " " << (t.agree ? "agree" : "DISAGREE") << "  "
        << detail::clause_text(t.formula) << "\n";
    for (const auto& finding : t.audit_findings) out << "  audit: " << finding << "\n";
  }
  out << "summary: " << r.agreements() << "/" << r.trials.size() << " agree, "
      << r.satisfiable_count() << " satisfiable, " << r.audit_failures() << " audit failures\n";
  return out.str();
}

inline std::string render_json(const VerificationReport& r) {
  nlohmann::ordered_json doc;
  const auto& p = r.params;
  doc["params"] = {{"vars", p.vars}, {"clauses", p.clauses}, {"k", p.k},
                   {"trials", p.trials}, {"seed", p.seed}};
  auto trials = nlohmann::ordered_json::array();
  for (const auto& t : r.trials) {
    nlohmann::ordered_json rec;
    rec["index"] = t.index;
    rec["seed"] = t.seed;
    rec["formula"] = emit_dimacs(t.formula);
    rec["satisfiable"] = t.satisfiable;
    rec["nc_optimum"] = t.nc_optimum;
    rec["nc_optimal"] = t.nc_optimal;
    rec["audit_ok"] = t.audit_ok;
    rec["audit_findings"] = t.audit_findings;
    rec["max_sat"] = t.max_sat;
    rec["max_traversable"] = t.max_traversable;
    rec["agree"] = t.agree;
    trials.push_back(std::move(rec));
  }
  doc["trials"] = std::move(trials);
  doc["summary"] = {{"agree", r.agreements()},
                    {"trials", r.trials.size()},
                    {"satisfiable", r.satisfiable_count()},
                    {"audit_failures", r.audit_failures()},
                    {"passed", r.passed()}};
  return doc.dump(2) + "\n";
}

}  // namespace tdma
