#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fcq/cq_decomp.hpp"
#include "fcq/query.hpp"
#include "fcq/regex.hpp"

namespace fcq {

struct RegexFormula {
  RegexPtr expr;
  bool functional = false;
  bool synchronized = false;
  std::string diagnostic;  // why it is not functional/synchronized
};

// Regex syntax plus x{...} bindings; see parse_regex.
RegexFormula parse_regex_formula(const std::string& text);
RegexFormula analyze_formula(const RegexPtr& expr);

struct Sercq {
  std::vector<Var> projection;
  std::vector<std::pair<Var, Var>> equalities;
  std::vector<RegexFormula> formulas;

  std::vector<Var> svars() const;  // first-occurrence order
};

// proj[x,y] eq[x1,y1] eq[...] join( F1 ; F2 ; ... )
// proj[...] may be omitted (projects onto every variable); a bare formula
// is read as a single-formula join.
Sercq parse_sercq(const std::string& text);
std::string to_string(const Sercq& p);

using SpanTuple = std::map<Var, Span>;

inline constexpr std::size_t kDefaultSpannerBudget = 1000000;

// All matches of one functional formula against the whole word.
std::set<SpanTuple> formula_matches(const RegexPtr& expr, const std::string& w,
                                    std::size_t budget = kDefaultSpannerBudget);
std::set<SpanTuple> spanner_eval_oracle(const Sercq& p, const std::string& w,
                                        std::size_t budget = kDefaultSpannerBudget);

// Names of the encoding variables.
Var prefix_var(const Var& x);   // x_P
Var content_var(const Var& x);  // x_C
Var suffix_var(const Var& x);   // x_S

// Parse-tree construction; the head lists x_P, x_C for each projected x.
FcCq sercq_to_fccq(const Sercq& p);

Substitution express(const SpanTuple& mu, const std::string& w);
// Inverse of express on the variables it finds (x_P/x_C pairs).
SpanTuple decode(const Substitution& sigma);
// Factor strings of the head variables of sercq_to_fccq(p), for each match.
AnswerSet express_image(const Sercq& p, const std::string& w);

bool is_pseudo_acyclic(const Sercq& p);
QueryDecomposition pseudo_acyclic_to_fccq(const Sercq& p);

}  // namespace fcq
