#include <random>

#include "doctest.h"
#include "fcq/query.hpp"
#include "oracles.hpp"

using namespace fcq;

namespace {

// No narrowing at all: every variable ranges over every factor.
AnswerSet naive_eval(const FcCq& q, const std::string& w) {
  auto vars = q.variables();
  auto fset = oracle::factors(w);
  std::vector<std::string> fs(fset.begin(), fset.end());
  AnswerSet out;
  std::map<Var, std::string> val;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == vars.size()) {
      for (const auto& e : q.equations) {
        std::string l = is_universe(e.lhs) ? w : val.at(e.lhs);
        if (apply(e.rhs, val, w) != l) return;
      }
      for (const auto& c : q.constraints)
        if (!Nfa(c.regex).matches(is_universe(c.var) ? w : val.at(c.var))) return;
      AnswerTuple t;
      for (const auto& h : q.head) t.push_back(val.at(h));
      out.insert(t);
      return;
    }
    for (const auto& f : fs) {
      val[vars[k]] = f;
      go(k + 1);
    }
  };
  go(0);
  return out;
}

}  // namespace

TEST_CASE("parse and print queries") {
  auto q = parse_query("Ans(x,y) :- z = z2.x.\"ab\".y, x in /a*b/, U = z.z3");
  CHECK(q.head == std::vector<Var>{"x", "y"});
  REQUIRE(q.equations.size() == 2);
  CHECK(q.equations[0].rhs.size() == 5);
  CHECK(q.equations[0].rhs[2] == Term::symbol('a'));
  CHECK(q.constraints.size() == 1);
  CHECK(q.variables() == std::vector<Var>{"z", "z2", "x", "y", "z3"});
  auto text = to_string(q);
  CHECK(to_string(parse_query(text)) == text);
  CHECK(to_string(parse_query("Ans() :- $n1 = x.y")) == "Ans() :- $n1 = x.y");
}

TEST_CASE("query parse errors") {
  CHECK_THROWS_AS(parse_query("Ans(x) :- y = z.z"), ParseError);   // head var not in body
  CHECK_THROWS_AS(parse_query("Ans(U) :- U = x"), ParseError);
  CHECK_THROWS_AS(parse_query("Ans() :- x = \"\""), ParseError);
  CHECK_THROWS_AS(parse_query("Ans() :- x = y."), ParseError);
  CHECK_THROWS_AS(parse_query("Ans() :- x in /a|/"), ParseError);
  CHECK_THROWS_AS(parse_query("Ans() :- x in /y{a}/"), ParseError);
  CHECK_THROWS_AS(parse_query("Ans(x,x) :- z = x"), ParseError);
}

TEST_CASE("satisfies and apply") {
  auto q = parse_query("Ans() :- U = x.\"b\".x");
  CHECK(satisfies({"aba", {{"x", {1, 2}}}}, q));
  CHECK_FALSE(satisfies({"abb", {{"x", {1, 2}}}}, q));
  CHECK_THROWS_AS(apply(q.equations[0].rhs, {}, "aba"), ContractError);
}

TEST_CASE("oracle: x.y over ab") {
  auto ans = oracle_eval(parse_query("Ans(x,y) :- U = x.y"), "ab");
  CHECK(ans == AnswerSet{{"", "ab"}, {"a", "b"}, {"ab", ""}});
}

TEST_CASE("oracle matches unrestricted search") {
  const std::vector<std::string> queries = {
      "Ans(x,y) :- U = x.y",
      "Ans(x) :- U = y.x.x.z",
      "Ans(x,y) :- z = x.y, z = y.x, x in /a+/",
      "Ans(z) :- z = x.\"a\".x, U = y.z",
      "Ans() :- x = y.y, y = z.z, z in /S+/",
      "Ans(x) :- y = x.x, z = y.x",
  };
  for (const auto& text : queries) {
    auto q = parse_query(text);
    for (const auto& w : oracle::words_up_to(5)) CHECK_MESSAGE(oracle_eval(q, w) == naive_eval(q, w), text << " / " << w);
  }
}

TEST_CASE("oracle budget guard") {
  auto q = parse_query("Ans() :- U = a.b.c.d.e.f.g.h.i.j");
  CHECK_THROWS_AS(oracle_eval(q, std::string(200, 'a'), 10), BudgetExceeded);
}
