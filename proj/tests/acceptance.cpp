// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace tdma;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;  // keep the first failure
    pass = false;
  }
};

struct CliRun {
  int status;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tdma-reduce");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = tdma::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str() + err.str()};
}

std::vector<std::string> displayed(const NcInstance& inst, const std::vector<NodeId>& nodes) {
  std::vector<std::string> out;
  for (NodeId v : nodes) out.push_back(inst.display(v));
  return out;
}

std::vector<std::string> split(const std::string& csv) { return tdma::cli::split_list(csv); }

const std::vector<std::string> kVerifyArgs{"verify", "--vars", "4", "--clauses", "3", "--k", "3",
                                           "--trials", "200", "--seed", "1", "--witness-dir",
                                           "acceptance-witnesses"};

VerifyParams main_params() {
  VerifyParams p;
  p.vars = 4;
  p.clauses = 3;
  p.k = 3;
  p.trials = 200;
  p.seed = 1;
  return p;
}

// Random 3-literal formulas over at most 4 variables with at most 3 clauses
// are always satisfiable, so the unsatisfiable direction is exercised by
// extra shapes that do produce unsatisfiable formulas.
std::vector<VerifyParams> unsat_battery() {
  std::vector<VerifyParams> out;
  for (auto [n, m, trials] : {std::tuple{2, std::size_t{4}, std::size_t{60}},
                              std::tuple{3, std::size_t{6}, std::size_t{30}}}) {
    VerifyParams p;
    p.vars = n;
    p.clauses = m;
    p.k = 2;
    p.trials = trials;
    p.seed = 7;
    out.push_back(p);
  }
  return out;
}

const VerificationReport& main_report() {
  static const VerificationReport r = run_verification(main_params());
  return r;
}

const std::vector<VerificationReport>& battery_reports() {
  static const std::vector<VerificationReport> r = [] {
    std::vector<VerificationReport> out;
    for (const auto& p : unsat_battery()) out.push_back(run_verification(p));
    return out;
  }();
  return r;
}

// ------------------------------------------------------------- criteria

Verdict worked_example() {
  Verdict v;
  const NcInstance inst = compile(parse_dimacs(testutil::read_fixture("worked_example.cnf")));
  const SubsetSizes s = subset_sizes(inst);
  v.require(s.v1 == 6 && s.v2 == 12 && s.v3 == 24 && s.v4 == 3 && s.v5 == 6, "subset sizes differ");

  const auto g = layout_of(inst);
  const Assignment a1 = testutil::satisfying_example();
  const std::vector<std::vector<std::string>> expected{
      split("n_1^1,n_5^1,n_6^1,n_9^1,n_12^1,n_13^1,n_4^1"),
      split("n_1^2,n_8^2,n_9^2,n_10^2,n_4^2"),
      split("n_1^3,n_14^3,n_15^3,n_16^3,n_4^3")};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto seg = induced_segment(g, *inst.formula, i, a1);
    v.require(seg && displayed(inst, *seg) == expected[i], "clause " + std::to_string(i + 1) + " segment differs");
  }
  const InducedPath induced = assignment_to_path(inst, a1);
  const Path* path = std::get_if<Path>(&induced);
  v.require(path != nullptr, "satisfying assignment produced no path");
  if (path) {
    const auto verdict = check_feasible(inst, with_main_route(g, *path));
    v.require(verdict.ok() && verdict.overloads.empty(), "induced path overloads a node");
  }
  if (v.pass) v.detail = "V1..V5 = 6/12/24/3/6, clause segments match, 0 overloads";
  return v;
}

Verdict negative_example() {
  Verdict v;
  const NcInstance inst = compile(parse_dimacs(testutil::read_fixture("worked_example.cnf")));
  const InducedPath induced = assignment_to_path(inst, testutil::falsifying_example());
  const auto* failure = std::get_if<ClauseFailure>(&induced);
  v.require(failure && failure->first() == 3, "falsifying assignment did not fail at clause 3");

  Path literal_path;
  for (const auto& name :
       split("n_1^1,n_5^1,n_6^1,n_7^1,n_4^1,n_1^2,n_8^2,n_9^2,n_10^2,n_4^2,n_8^3,n_9^3,n_10^3,n_4^3,T")) {
    literal_path.nodes.push_back(inst.resolve_or_throw(name));
  }
  const auto verdict = check_feasible(inst, with_main_route(layout_of(inst), literal_path));
  bool at_hop = false;
  if (!verdict.malformed.empty()) {
    const auto& d = verdict.malformed.front().defect;
    at_hop = d.kind == PathDefect::Kind::NotAdjacent && inst.display(d.from) == "n_4^2" &&
             inst.display(d.to) == "n_8^3";
  }
  v.require(at_hop, "literal path not classified malformed at n_4^2->n_8^3");

  const auto run = cli({"check", "--instance", testutil::fixture("greedy_gap.json"), "--path", "s1,t1"});
  v.require(run.status == 1, "cli check did not reject a missing edge");
  if (v.pass) v.detail = "failure at clause 3; malformed at hop n_4^2->n_8^3";
  return v;
}

Verdict reduction_equivalence() {
  Verdict v;
  const auto run = cli(kVerifyArgs);
  std::filesystem::remove_all("acceptance-witnesses");
  v.require(run.status == 0, "verify exited " + std::to_string(run.status));
  v.require(run.out.find("summary: 200/200 agree") != std::string::npos, "verify summary is not 200/200");

  const auto& r = main_report();
  v.require(r.passed(), "main trial set has disagreements or audit failures");
  std::size_t unsat = 0, trials = r.trials.size();
  for (const auto& b : battery_reports()) {
    v.require(b.passed(), "unsatisfiable battery has disagreements");
    unsat += b.trials.size() - b.satisfiable_count();
    trials += b.trials.size();
  }
  const NcInstance full = compile(parse_dimacs(testutil::read_fixture("all_sign_patterns.cnf")));
  const SolveResult fr = solve_exact(full);
  v.require(fr.optimal && fr.accepted_count == 8, "every-sign-pattern formula did not give m");
  v.require(unsat > 0, "battery produced no unsatisfiable formula");
  if (v.pass) {
    v.detail = "200/200 agree (" + std::to_string(r.satisfiable_count()) + " sat); unsat battery " +
               std::to_string(trials - r.trials.size()) + " trials (" + std::to_string(unsat) +
               " unsat) + sign-pattern fixture agree";
  }
  return v;
}

Verdict max_correspondence() {
  Verdict v;
  std::size_t checked = 0;
  auto scan = [&](const VerificationReport& r) {
    for (const auto& t : r.trials) {
      v.require(t.max_traversable == t.max_sat,
                "trial " + std::to_string(t.index) + ": traversable " + std::to_string(t.max_traversable) +
                    " vs max-sat " + std::to_string(t.max_sat));
      ++checked;
    }
  };
  scan(main_report());
  for (const auto& b : battery_reports()) scan(b);
  if (v.pass) v.detail = std::to_string(checked) + " trials, max traversable == max-sat on each";
  return v;
}

Verdict gadget_audit() {
  Verdict v;
  std::size_t instances = 0;
  struct Perturbation {
    const char* name;
    std::function<void(CapacityPreset&)> apply;
    std::function<bool(const ClauseAudit&, bool touches_conflict)> caught;
  };
  const std::vector<Perturbation> perturbations{
      {"bypass=4", [](CapacityPreset& c) { c.bypass = 4; },
       [](const ClauseAudit& a, bool) { return !a.bypass_blocked; }},
      {"conflict=2", [](CapacityPreset& c) { c.conflict = 2; },
       [](const ClauseAudit& a, bool touches) {
         return !touches || (!a.conflict_blocked && !a.through_route_blocked);
       }},
      {"lit=3", [](CapacityPreset& c) { c.lit = 3; },
       [](const ClauseAudit& a, bool) { return a.margins.lit < 0; }},
      {"pre_post=2", [](CapacityPreset& c) { c.pre_post = 2; },
       [](const ClauseAudit& a, bool) { return a.margins.pre_post < 0; }},
      {"entry_exit=2", [](CapacityPreset& c) { c.entry_exit = 2; },
       [](const ClauseAudit& a, bool) { return a.margins.entry_exit < 0; }},
  };

  auto examine = [&](const Formula& f) {
    ++instances;
    const NcInstance inst = compile(f);
    v.require(audit(inst).ok(), "audit failed on " + emit_dimacs(f));
    const auto g = layout_of(inst);
    for (const auto& p : perturbations) {
      CapacityPreset caps;
      p.apply(caps);
      const AuditReport report = audit(compile(f, caps));
      // a gadget without conflict nodes has nothing for the conflict check to see
      const bool applies = std::string(p.name) != "conflict=2" || !g.conflicts.empty();
      v.require(report.ok() != applies, std::string(p.name) + (applies ? " passed the audit" : " flagged a gadget"));
      for (const auto& c : report.clauses) {
        const bool touches = !g.conflicts_touching(c.clause - 1).empty();
        v.require(p.caught(c, touches), std::string(p.name) + " not caught in clause " + std::to_string(c.clause));
      }
    }
  };
  for (std::size_t i = 0; i < 200; ++i) examine(random_formula(4, 3, 3, trial_seed(1, i)));
  for (const auto& name : {"worked_example.cnf", "all_sign_patterns.cnf"}) {
    examine(parse_dimacs(testutil::read_fixture(name)));
  }
  v.require(main_report().audit_failures() == 0, "verify reported audit failures");
  if (v.pass) v.detail = std::to_string(instances) + " instances pass; 5 perturbations each caught by their check";
  return v;
}

Verdict bound_arithmetic() {
  Verdict v;
  v.require(inapprox_bound(3) == Rational{8, 7}, "k=3 is " + inapprox_bound(3).str());
  v.require(inapprox_bound(2) == Rational{4, 3}, "k=2 is " + inapprox_bound(2).str());
  v.require(cli({"bound", "--k", "3"}).out == "8/7 ≈ 1.142857\n", "cli bound output differs");
  if (v.pass) v.detail = "k=3 -> 8/7, k=2 -> 4/3";
  return v;
}

Verdict model_oracle() {
  Verdict v;
  std::mt19937_64 rng(2024);
  std::size_t hops = 0;
  for (int i = 0; i < 1000 && v.pass; ++i) {
    std::uniform_int_distribution<std::size_t> size(2, 14);
    std::uniform_real_distribution<double> density(0.05, 0.6);
    const Network net = oracle::random_network(rng, size(rng), density(rng), 0, 6);
    const Path p{oracle::random_path(rng, net, 1 + size(rng))};
    hops += p.hop_count();
    const auto expected = oracle::simulate_frame(oracle::EdgeList(net), p.nodes);
    const LoadMap got = path_load(net, p);
    for (NodeId n = 0; n < net.size(); ++n) {
      v.require(got[n] == expected[n], "pair " + std::to_string(i) + " differs at node " + net.name(n));
    }
  }
  if (v.pass) v.detail = "1000 pairs (" + std::to_string(hops) + " hops) node-for-node equal";
  return v;
}

Verdict solver_sanity() {
  Verdict v;
  std::mt19937_64 rng(8);
  std::size_t gaps = 0;
  for (int i = 0; i < 100; ++i) {
    const NcInstance inst = oracle::random_instance(rng, 12, 3);
    const SolveResult exact = solve_exact(inst);
    const SolveResult greedy = solve_greedy(inst);
    const std::size_t truth = oracle::PlanEnumerator(inst, default_unbounded_cap(inst)).optimum();
    v.require(exact.optimal && exact.accepted_count == truth,
              "instance " + std::to_string(i) + ": exact " + std::to_string(exact.accepted_count) + " vs " +
                  std::to_string(truth));
    v.require(greedy.accepted_count <= truth, "instance " + std::to_string(i) + ": greedy exceeds optimum");
    v.require(check_feasible(inst, exact.plan).ok() && check_feasible(inst, greedy.plan).ok(),
              "instance " + std::to_string(i) + ": infeasible plan");
    gaps += greedy.accepted_count < truth;
  }
  const NcInstance gap = load_instance(testutil::read_fixture("greedy_gap.json"));
  const auto e = solve_exact(gap).accepted_count, g = solve_greedy(gap).accepted_count;
  v.require(g < e, "fixture greedy_gap.json shows no gap");
  if (v.pass) {
    v.detail = "100 instances match the enumerator (" + std::to_string(gaps) + " with a greedy gap); fixture " +
               std::to_string(g) + " < " + std::to_string(e);
  }
  return v;
}

Verdict formats() {
  Verdict v;
  std::size_t files = 0;
  for (const auto& name : {"worked_example.cnf", "single_clause.cnf", "contradiction.cnf", "all_sign_patterns.cnf"}) {
    const Formula f = parse_dimacs(testutil::read_fixture(name));
    const std::string text = emit_dimacs(f);
    v.require(parse_dimacs(text) == f && emit_dimacs(parse_dimacs(text)) == text,
              std::string("DIMACS round trip differs for ") + name);
    const std::string json = save_instance(compile(f));
    v.require(save_instance(load_instance(json)) == json, std::string("JSON round trip differs for ") + name);
    ++files;
  }
  const std::string gap = testutil::read_fixture("greedy_gap.json");
  const std::string once = save_instance(load_instance(gap));
  v.require(save_instance(load_instance(once)) == once, "JSON round trip differs for greedy_gap.json");
  v.require(nlohmann::json::parse(once) == nlohmann::json::parse(gap), "greedy_gap.json changed on reload");
  ++files;

  const auto a = cli(kVerifyArgs), b = cli(kVerifyArgs);
  std::filesystem::remove_all("acceptance-witnesses");
  v.require(a.out == b.out, "verify output differs across runs");
  v.require(render_json(main_report()) == render_json(run_verification(main_params())),
            "verify JSON differs across runs");
  if (v.pass) v.detail = std::to_string(files) + " fixtures round-trip; verify output byte-identical";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Verdict (*)()>> criteria{
      {"worked example", worked_example},
      {"negative example", negative_example},
      {"reduction equivalence", reduction_equivalence},
      {"max correspondence", max_correspondence},
      {"gadget audit", gadget_audit},
      {"bound arithmetic", bound_arithmetic},
      {"model oracle", model_oracle},
      {"solver sanity", solver_sanity},
      {"formats", formats},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu (%s): %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.c_str(), secs);
    failures += !v.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
