#include <random>
#include <regex>

#include "doctest.h"
#include "fcq/regex.hpp"
#include "oracles.hpp"

using namespace fcq;

namespace {

// Same language in ECMAScript syntax, for std::regex as the reference.
std::string ecma(const RegexPtr& r) {
  using K = Regex::Kind;
  switch (r->kind) {
    case K::Empty: return "(?!)";
    case K::Epsilon: return "(?:)";
    case K::Letter: return std::string(1, r->letter);
    case K::Any: return "[\\s\\S]";
    case K::Concat: return "(?:" + ecma(r->left) + ecma(r->right) + ")";
    case K::Union: return "(?:" + ecma(r->left) + "|" + ecma(r->right) + ")";
    case K::Star: return "(?:" + ecma(r->left) + ")*";
    case K::Plus: return "(?:" + ecma(r->left) + ")+";
    case K::Bind: return ecma(r->left);
  }
  return "";
}

RegexPtr random_regex(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 8);
  switch (pick(rng)) {
    case 0: return Regex::lit('a');
    case 1: return Regex::lit('b');
    case 2: return Regex::any();
    case 3: return Regex::epsilon();
    case 4: case 5: return Regex::concat(random_regex(rng, depth - 1), random_regex(rng, depth - 1));
    case 6: return Regex::alt(random_regex(rng, depth - 1), random_regex(rng, depth - 1));
    case 7: return Regex::star(random_regex(rng, depth - 1));
    default: return Regex::plus(random_regex(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("parse and print") {
  CHECK(to_string(parse_regex("a b*")) == "ab*");
  CHECK(to_string(parse_regex("(a|b)+c")) == "(a|b)+c");
  CHECK(to_string(parse_regex("_|%")) == "_|%");
  CHECK(to_string(parse_regex("\\S\\*")) == "\\S\\*");
  CHECK(to_string(parse_regex("S* x{a|b} S*", true)) == "S* x{a|b}S*");
  CHECK(to_string(parse_regex("a (x{b} c)", true)) == "a x{b}c");
  CHECK(to_string(Regex::concat(Regex::lit('a'), Regex::concat(Regex::bind("x", Regex::lit('b')), Regex::lit('c')))) ==
        "a x{b}c");
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_regex(""), ParseError);
  CHECK_THROWS_AS(parse_regex("a|"), ParseError);
  CHECK_THROWS_AS(parse_regex("(ab"), ParseError);
  CHECK_THROWS_AS(parse_regex("x{a}"), ParseError);
  try {
    parse_regex("ab)");
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
  }
}

TEST_CASE("bindings") {
  auto r = parse_regex("S* x{a y{b}} S*", true);
  CHECK(bound_vars(r) == std::set<std::string>{"x", "y"});
  CHECK_FALSE(variable_free(r));
  CHECK(variable_free(parse_regex("a*b")));
  CHECK_THROWS_AS(Nfa{r}, std::invalid_argument);
}

TEST_CASE("printed regexes parse back to the same language") {
  std::mt19937 rng(7);
  auto words = oracle::words_up_to(5, "abc");
  for (int t = 0; t < 300; ++t) {
    auto r = random_regex(rng, 4);
    auto back = parse_regex(to_string(r));
    CHECK(to_string(back) == to_string(r));
    Nfa a(r), b(back);
    for (const auto& w : words) REQUIRE(a.matches(w) == b.matches(w));
  }
}

TEST_CASE("automaton agrees with std::regex") {
  std::mt19937 rng(11);
  auto words = oracle::words_up_to(5, "abc");
  for (int t = 0; t < 200; ++t) {
    auto r = random_regex(rng, 4);
    std::regex ref(ecma(r));
    Nfa nfa(r);
    for (const auto& w : words) {
      bool expect = std::regex_match(w, ref);
      REQUIRE_MESSAGE(nfa.matches(w) == expect, to_string(r) << " on '" << w << "'");
      auto pre = nfa.accepted_prefixes(w);
      REQUIRE(pre.size() == w.size() + 1);
      CHECK(static_cast<bool>(pre[w.size()]) == expect);
    }
  }
}
