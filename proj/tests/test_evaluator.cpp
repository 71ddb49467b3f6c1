#include <random>

#include "doctest.h"
#include "fcq/evaluator.hpp"
#include "oracles.hpp"

using namespace fcq;

TEST_CASE("x.y over ab has three answers in order") {
  auto qd = decompose_query(parse_query("Ans(x,y) :- U = x.y"));
  REQUIRE(qd);
  WordIndex idx("ab");
  auto ev = Evaluation::create(*qd, idx);
  CHECK(ev->model_check());
  auto s = ev->answers();
  std::vector<AnswerTuple> got;
  while (auto t = s.next()) got.push_back(*t);
  CHECK(got == std::vector<AnswerTuple>{{"", "ab"}, {"a", "b"}, {"ab", ""}});
}

TEST_CASE("boolean queries") {
  auto sq = decompose_query(parse_query("Ans() :- U = x.x, x in /S+/"));
  REQUIRE(sq);
  CHECK(model_check(*sq, "abab"));
  CHECK_FALSE(model_check(*sq, "aba"));
  CHECK_FALSE(model_check(*sq, ""));
  CHECK(enumerate_answers(*sq, "abab") == AnswerSet{{}});
  CHECK(enumerate_answers(*sq, "aba").empty());
}

TEST_CASE("materialized relations") {
  WordIndex idx("aab");
  auto r = materialize(BinaryAtom{"z", {"x", "x"}}, idx);
  CHECK(r.columns == std::vector<Var>{"z", "x"});
  CHECK(r.rows() == 2);  // (eps,eps) and (aa,a)
  auto copy = materialize(BinaryAtom{"z", {"x"}}, idx);
  CHECK(copy.rows() == idx.factor_count());
  auto c = materialize(RegexConstraint{"x", parse_regex("a+")}, idx);
  CHECK(c.rows() == 2);
  auto u = materialize(BinaryAtom{"U", {"U"}}, idx);
  CHECK(u.arity() == 0);
  CHECK(u.rows() == 1);
}

TEST_CASE("budget") {
  auto qd = decompose_query(parse_query("Ans(x,y) :- z = x.y"));
  REQUIRE(qd);
  WordIndex idx(std::string(40, 'a') + std::string(40, 'b'));
  CHECK_THROWS_AS(Evaluation::create(*qd, idx, {100}), BudgetExceeded);
}

TEST_CASE("reduced relations have no dangling tuples") {
  auto qd = decompose_query(parse_query("Ans(x) :- U = x.y.x, y in /b+/"));
  REQUIRE(qd);
  WordIndex idx("abbab");
  auto ev = Evaluation::create(*qd, idx);
  for (const auto& rel : ev->reduced()) CHECK(rel.rows() > 0);
  CHECK(enumerate_answers(*qd, "abbab") == AnswerSet{{"ab"}});
}

TEST_CASE("agreement with the oracle on random acyclic queries") {
  std::mt19937 rng(99);
  auto words = oracle::words_up_to(5);
  int checked = 0;
  for (int t = 0; t < 120; ++t) {
    auto q = oracle::random_normalized(rng, 3, 4, 5);
    auto qd = decompose_query(q);
    if (!qd) continue;
    ++checked;
    for (const auto& w : words) {
      auto expect = oracle_eval(q, w);
      REQUIRE_MESSAGE(enumerate_answers(*qd, w) == expect, to_string(q) << " / '" << w << "'");
      CHECK(model_check(*qd, w) == !expect.empty());
    }
  }
  CHECK(checked > 30);
}
