#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fcq {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Regular expressions, optionally with capture bindings x{...}.
struct Regex;
using RegexPtr = std::shared_ptr<const Regex>;

struct Regex {
  enum class Kind { Empty, Epsilon, Letter, Any, Concat, Union, Star, Plus, Bind };
  Kind kind;
  char letter = 0;
  std::string var;  // Bind only
  RegexPtr left, right;  // right only for Concat/Union

  static RegexPtr empty();
  static RegexPtr epsilon();
  static RegexPtr any();
  static RegexPtr lit(char c);
  static RegexPtr word(std::string_view w);  // concatenation of letters, ε if empty
  static RegexPtr concat(RegexPtr a, RegexPtr b);
  static RegexPtr alt(RegexPtr a, RegexPtr b);
  static RegexPtr star(RegexPtr a);
  static RegexPtr plus(RegexPtr a);
  static RegexPtr bind(std::string var, RegexPtr a);
};

// Syntax: juxtaposition concatenates, '|' union, '*' star, '+' one-or-more,
// '(' ')' grouping, '_' ε, '%' ∅, 'S' any letter, '\c' a literal c.
// With bindings enabled, name{...} captures; a name is the longest
// identifier run directly in front of '{', so separate letters from a
// following binding with whitespace. Whitespace is otherwise ignored.
RegexPtr parse_regex(std::string_view text, bool allow_bindings = false);

std::string to_string(const RegexPtr& r);

bool variable_free(const RegexPtr& r);
std::set<std::string> bound_vars(const RegexPtr& r);

// Thompson automaton for a variable-free expression.
class Nfa {
 public:
  explicit Nfa(const RegexPtr& r);

  bool matches(std::string_view s) const;
  // accepted[k] is set iff text[0,k) is in the language, for k = 0..|text|.
  std::vector<char> accepted_prefixes(std::string_view text) const;

 private:
  struct State {
    enum class Kind { Letter, Any, Split, Accept } kind;
    char letter = 0;
    int out1 = -1, out2 = -1;
  };
  int add(State s);
  std::pair<int, std::vector<std::pair<int, int>>> build(const RegexPtr& r);
  void closure(std::vector<int>& set, std::vector<char>& mark, int s) const;

  std::vector<State> states_;
  int start_ = -1;
};

}  // namespace fcq
