#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcq/regex.hpp"
#include "fcq/word_index.hpp"

namespace fcq {

struct Term {
  bool terminal = false;
  char letter = 0;
  Var var;

  static Term variable(Var v) { return {false, 0, std::move(v)}; }
  static Term symbol(char c) { return {true, c, {}}; }
  bool operator==(const Term&) const = default;
  auto operator<=>(const Term&) const = default;
};

using Pattern = std::vector<Term>;

Pattern pattern_of(const std::vector<Var>& vars);
std::vector<Var> pattern_vars(const Pattern& p);  // distinct, first-occurrence order
bool terminal_free(const Pattern& p);
bool mentions(const Pattern& p, const Var& v);

struct WordEquation {
  Var lhs;
  Pattern rhs;
  bool operator==(const WordEquation&) const = default;
};

struct RegexConstraint {
  Var var;
  RegexPtr regex;
};

struct FcCq {
  std::vector<Var> head;
  std::vector<WordEquation> equations;
  std::vector<RegexConstraint> constraints;

  // Body variables in first-occurrence order, U excluded.
  std::vector<Var> variables() const;
};

// Concrete syntax:
//   Ans(x,y) :- z = z2.x."ab".y, x in /a*b/
// "U" is the universe variable. Names starting with '$' are reserved for
// variables introduced by rewriting passes; they are accepted so that
// printed queries parse back.
FcCq parse_query(const std::string& text);

std::string to_string(const Pattern& p);
std::string to_string(const WordEquation& e);
std::string to_string(const RegexConstraint& c);
std::string to_string(const FcCq& q);

struct Substitution {
  std::string word;
  std::map<Var, Span> assignment;
};

class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Image of a pattern under a value assignment; throws ContractError on an
// unbound variable. U maps to `universe`.
std::string apply(const Pattern& p, const std::map<Var, std::string>& values, const std::string& universe);

bool satisfies(const Substitution& sigma, const FcCq& q);

using AnswerTuple = std::vector<std::string>;
using AnswerSet = std::set<AnswerTuple>;

// Reference semantics: exhaustive search over factor assignments. Candidate
// values for a variable are narrowed only by direct reading of the
// equations (prefix/suffix of a known left side), never by anything the
// decomposition pipeline computes.
//
// Guard: rejects inputs where |vars| * log2(|factors|) exceeds `budget`.
inline constexpr double kDefaultOracleBudget = 256.0;
AnswerSet oracle_eval(const FcCq& q, const std::string& w, double budget = kDefaultOracleBudget);

}  // namespace fcq
