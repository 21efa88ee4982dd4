#pragma once

// CNF formulas, DIMACS text and exhaustive SAT / MAX-SAT oracles.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tdma/error.hpp"

namespace tdma {

struct Literal {
  int var = 1;  // 1-based
  bool negated = false;

  bool satisfied_by(bool value) const noexcept { return value != negated; }
  int dimacs() const noexcept { return negated ? -var : var; }
  static Literal from_dimacs(int lit) { return Literal{lit < 0 ? -lit : lit, lit < 0}; }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

struct Clause {
  std::vector<Literal> literals;

  std::size_t width() const noexcept { return literals.size(); }
  friend bool operator==(const Clause&, const Clause&) = default;
};

struct Formula {
  int var_count = 1;
  std::vector<Clause> clauses;
  int k_bound = 2;

  std::size_t clause_count() const noexcept { return clauses.size(); }
  friend bool operator==(const Formula&, const Formula&) = default;
};

// Widest clause, but never below 2 (MAX K-SAT fixes k >= 2).
inline int natural_k_bound(const std::vector<Clause>& clauses) {
  std::size_t widest = 2;
  for (const auto& c : clauses) widest = std::max(widest, c.width());
  return static_cast<int>(widest);
}

inline void validate(const Formula& f) {
  if (f.var_count < 1) throw InputError("formula needs at least one variable");
  if (f.k_bound < 2) throw InputError("k bound must be at least 2");
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    const auto& c = f.clauses[i];
    if (c.literals.empty()) throw InputError("clause " + std::to_string(i + 1) + " is empty");
    if (c.width() > static_cast<std::size_t>(f.k_bound)) {
      throw InputError("clause " + std::to_string(i + 1) + " wider than k");
    }
    for (const auto& lit : c.literals) {
      if (lit.var < 1 || lit.var > f.var_count) {
        throw InputError("literal " + std::to_string(lit.dimacs()) + " out of range");
      }
    }
  }
}

inline Formula make_formula(int var_count, std::vector<Clause> clauses) {
  Formula f;
  f.var_count = var_count;
  f.k_bound = natural_k_bound(clauses);
  f.clauses = std::move(clauses);
  validate(f);
  return f;
}

// Non-fatal oddities worth reporting before compiling.
inline std::vector<std::string> lint(const Formula& f) {
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    const auto& lits = f.clauses[i].literals;
    const std::string where = "clause " + std::to_string(i + 1);
    for (std::size_t a = 0; a < lits.size(); ++a) {
      for (std::size_t b = a + 1; b < lits.size(); ++b) {
        if (lits[a] == lits[b]) {
          warnings.push_back(where + ": duplicate literal " + std::to_string(lits[a].dimacs()));
        } else if (lits[a].var == lits[b].var) {
          warnings.push_back(where + ": contains both polarities of variable " +
                             std::to_string(lits[a].var));
        }
      }
    }
    if (lits.size() < 2) warnings.push_back(where + ": width " + std::to_string(lits.size()) +
                                            " below the minimum k of 2");
  }
  return warnings;
}

// ---------------------------------------------------------------- DIMACS

inline Formula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::optional<long long> vars;
  long long declared_clauses = 0;
  std::vector<Clause> clauses;
  Clause pending;
  std::size_t pending_line = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first)) continue;
    if (first == "c") continue;
    if (first == "%") break;  // SATLIB trailer
    if (first == "p") {
      if (vars) throw ParseError(line_no, "duplicate header");
      std::string fmt;
      long long v = -1, c = -1;
      std::string extra;
      if (!(tokens >> fmt >> v >> c) || fmt != "cnf" || v < 1 || c < 0 || (tokens >> extra)) {
        throw ParseError(line_no, "malformed header");
      }
      vars = v;
      declared_clauses = c;
      continue;
    }
    if (!vars) throw ParseError(line_no, "clause before header");

    std::istringstream body(line);
    std::string token;
    while (body >> token) {
      long long lit = 0;
      std::size_t used = 0;
      try {
        lit = std::stoll(token, &used);
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad literal '" + token + "'");
      }
      if (used != token.size()) throw ParseError(line_no, "bad literal '" + token + "'");
      if (lit == 0) {
        if (pending.literals.empty()) throw ParseError(line_no, "empty clause");
        clauses.push_back(std::move(pending));
        pending = Clause{};
        continue;
      }
      if (lit > *vars || -lit > *vars) throw ParseError(line_no, "literal out of range");
      if (pending.literals.empty()) pending_line = line_no;
      pending.literals.push_back(Literal::from_dimacs(static_cast<int>(lit)));
    }
  }
  if (!vars) throw ParseError(std::max<std::size_t>(line_no, 1), "missing header");
  if (!pending.literals.empty()) throw ParseError(pending_line, "missing terminator");
  if (static_cast<long long>(clauses.size()) != declared_clauses) {
    throw ParseError(line_no, "clause count mismatch: header declares " +
                                  std::to_string(declared_clauses) + ", found " +
                                  std::to_string(clauses.size()));
  }
  Formula f;
  f.var_count = static_cast<int>(*vars);
  f.k_bound = natural_k_bound(clauses);
  f.clauses = std::move(clauses);
  return f;
}

inline std::string emit_dimacs(const Formula& f) {
  std::string out = "p cnf " + std::to_string(f.var_count) + " " +
                    std::to_string(f.clauses.size()) + "\n";
  for (const auto& c : f.clauses) {
    for (const auto& lit : c.literals) out += std::to_string(lit.dimacs()) + " ";
    out += "0\n";
  }
  return out;
}

// ------------------------------------------------------------ evaluation

class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<bool> values) : values_(std::move(values)) {}

  // Bit (n - v) of mask is variable v, so ascending masks walk assignments
  // in lexicographic order with u1 most significant and false < true.
  static Assignment from_mask(int var_count, std::uint64_t mask) {
    std::vector<bool> values(static_cast<std::size_t>(var_count));
    for (int v = 1; v <= var_count; ++v) values[v - 1] = (mask >> (var_count - v)) & 1u;
    return Assignment(std::move(values));
  }

  int var_count() const noexcept { return static_cast<int>(values_.size()); }
  bool operator[](int var) const { return values_.at(static_cast<std::size_t>(var - 1)); }
  void set(int var, bool value) { values_.at(static_cast<std::size_t>(var - 1)) = value; }

  bool satisfies(const Literal& lit) const { return lit.satisfied_by((*this)[lit.var]); }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<bool> values_;
};

class PartialAssignment {
 public:
  explicit PartialAssignment(int var_count = 0)
      : values_(static_cast<std::size_t>(var_count)) {}

  int var_count() const noexcept { return static_cast<int>(values_.size()); }
  std::optional<bool> operator[](int var) const {
    return values_.at(static_cast<std::size_t>(var - 1));
  }
  void set(int var, bool value) { values_.at(static_cast<std::size_t>(var - 1)) = value; }

  std::size_t assigned_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [](auto& v) { return v.has_value(); }));
  }

  // True when every assigned variable agrees with the total assignment.
  bool consistent_with(const Assignment& a) const {
    for (int v = 1; v <= var_count(); ++v) {
      if ((*this)[v] && *(*this)[v] != a[v]) return false;
    }
    return true;
  }

  friend bool operator==(const PartialAssignment&, const PartialAssignment&) = default;

 private:
  std::vector<std::optional<bool>> values_;
};

inline bool clause_satisfied(const Clause& c, const Assignment& a) {
  return std::any_of(c.literals.begin(), c.literals.end(),
                     [&](const Literal& lit) { return a.satisfies(lit); });
}

inline std::size_t eval(const Formula& f, const Assignment& a) {
  if (a.var_count() != f.var_count) {
    throw InputError("assignment covers " + std::to_string(a.var_count()) + " of " +
                     std::to_string(f.var_count) + " variables");
  }
  return static_cast<std::size_t>(std::count_if(
      f.clauses.begin(), f.clauses.end(), [&](const Clause& c) { return clause_satisfied(c, a); }));
}

inline constexpr int kDefaultExhaustiveBound = 24;

inline void require_exhaustive(const Formula& f, int bound) {
  if (f.var_count > bound || f.var_count > 62) {
    throw InputError("refusing exhaustive scan over " + std::to_string(f.var_count) +
                     " variables (bound " + std::to_string(bound) + ")");
  }
}

inline std::optional<Assignment> brute_sat(const Formula& f, int bound = kDefaultExhaustiveBound) {
  require_exhaustive(f, bound);
  const std::uint64_t total = std::uint64_t{1} << f.var_count;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Assignment a = Assignment::from_mask(f.var_count, mask);
    if (eval(f, a) == f.clauses.size()) return a;
  }
  return std::nullopt;
}

struct MaxSatResult {
  std::size_t count = 0;
  Assignment witness;
};

inline MaxSatResult max_sat_brute(const Formula& f, int bound = kDefaultExhaustiveBound) {
  require_exhaustive(f, bound);
  const std::uint64_t total = std::uint64_t{1} << f.var_count;
  MaxSatResult best{0, Assignment::from_mask(f.var_count, 0)};
  bool have = false;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Assignment a = Assignment::from_mask(f.var_count, mask);
    const std::size_t count = eval(f, a);
    if (!have || count > best.count) {
      best = {count, std::move(a)};
      have = true;
      if (best.count == f.clauses.size()) break;
    }
  }
  return best;
}

// ------------------------------------------------------------ generation

// Unbiased draw from [0, n) that depends only on the engine's raw output.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = 0;
  do x = rng(); while (x >= limit);
  return x % n;
}

inline Formula random_formula(int n, std::size_t m, int k, std::uint64_t seed) {
  if (k < 2) throw InputError("k must be at least 2");
  if (n < k) throw InputError("need at least k variables (n=" + std::to_string(n) +
                              ", k=" + std::to_string(k) + ")");
  std::mt19937_64 rng(seed);
  std::vector<Clause> clauses;
  clauses.reserve(m);
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < m; ++i) {
    for (int v = 0; v < n; ++v) pool[v] = v + 1;
    Clause c;
    // partial Fisher-Yates: the first k slots become a uniform k-subset
    for (int j = 0; j < k; ++j) {
      const auto pick = static_cast<std::size_t>(j) + uniform_below(rng, static_cast<std::uint64_t>(n - j));
      std::swap(pool[j], pool[pick]);
      c.literals.push_back(Literal{pool[j], uniform_below(rng, 2) == 1});
    }
    clauses.push_back(std::move(c));
  }
  Formula f;
  f.var_count = n;
  f.k_bound = k;
  f.clauses = std::move(clauses);
  return f;
}

}  // namespace tdma
