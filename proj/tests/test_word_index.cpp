#include <set>

#include "doctest.h"
#include "fcq/word_index.hpp"
#include "oracles.hpp"

using namespace fcq;

TEST_CASE("papaya factors and lcp") {
  WordIndex idx("papaya");
  CHECK(idx.factor_count() == 18);
  CHECK(idx.lcp(2, 4) == 1);
  CHECK(idx.lcp(4, 1) == 0);
  CHECK(idx.lcp(1, 3) == 2);
  // leaves 2, 4, 1, 3, 5 in that order; leaf 2 also emits the empty word
  const std::vector<std::pair<std::uint32_t, std::string>> expect = {
      {2, ""}, {2, "a"}, {2, "ap"}, {2, "apa"}, {2, "apay"}, {2, "apaya"}, {4, "ay"}, {4, "aya"}, {1, "p"},
      {1, "pa"}, {1, "pap"}, {1, "papa"}, {1, "papay"}, {1, "papaya"}, {3, "pay"}, {3, "paya"}, {5, "y"}, {5, "ya"}};
  std::vector<std::pair<std::uint32_t, std::string>> seen;
  auto cur = idx.enumerate_factors();
  while (auto s = cur.next()) seen.emplace_back(s->start, std::string(idx.factor(*s)));
  CHECK(seen == expect);
  for (FactorId id = 0; id < idx.factor_count(); ++id) CHECK(idx.factor_span(id).start == expect[id].first);
}

TEST_CASE("factor ids follow lexicographic order") {
  for (const auto& w : oracle::words_up_to(6)) {
    WordIndex idx(w);
    auto fs = oracle::factors(w);
    REQUIRE(idx.factor_count() == fs.size());
    FactorId id = 0;
    for (const auto& f : fs) {
      CHECK(idx.factor_string(id) == f);
      ++id;
    }
    for (auto s : oracle::all_spans(w)) {
      auto expect = static_cast<FactorId>(std::distance(fs.begin(), fs.find(oracle::sub(w, s))));
      CHECK(idx.factor_id(s) == expect);
      CHECK(idx.factor(idx.canonical(s)) == oracle::sub(w, s));
    }
  }
}

TEST_CASE("lcp matches naive scan") {
  for (const auto& w : oracle::words_up_to(7, "abc")) {
    if (w.size() < 6) continue;
    WordIndex idx(w);
    for (std::uint32_t i = 1; i <= w.size(); ++i)
      for (std::uint32_t j = 1; j <= w.size(); ++j) CHECK(idx.lcp(i, j) == oracle::naive_lcp(w, i, j));
  }
}

TEST_CASE("factor_eq against substrings") {
  for (const auto& w : oracle::words_up_to(5)) {
    WordIndex idx(w);
    auto spans = oracle::all_spans(w);
    for (auto a : spans)
      for (auto b : spans) CHECK(idx.factor_eq(a, b) == (oracle::sub(w, a) == oracle::sub(w, b)));
  }
}

TEST_CASE("squares") {
  for (const auto& w : oracle::words_up_to(7)) {
    WordIndex idx(w);
    std::set<std::string> got;
    std::size_t n = 0;
    auto cur = idx.enumerate_squares();
    while (auto s = cur.next()) {
      got.insert(std::string(idx.factor(*s)));
      ++n;
    }
    CHECK(n == got.size());
    CHECK(got == oracle::squares(w));
  }
}

TEST_CASE("binary shapes") {
  const std::vector<BinaryShape> shapes = {
      {"z", "x", "y"}, {"z", "x", "x"}, {"x", "x", "y"}, {"x", "y", "x"}, {"x", "x", "x"},
      {"U", "x", "y"}, {"U", "x", "x"}, {"z", "U", "y"}, {"z", "x", "U"}, {"U", "U", "x"}, {"z", "U", "U"},
  };
  for (const auto& w : oracle::words_up_to(5)) {
    WordIndex idx(w);
    for (const auto& sh : shapes) {
      std::set<std::tuple<std::string, std::string, std::string>> got;
      std::size_t n = 0;
      auto cur = idx.enumerate_binary(sh);
      while (auto t = cur.next()) {
        got.emplace(idx.factor(t->lhs), idx.factor(t->rhs1), idx.factor(t->rhs2));
        CHECK(idx.holds_binary(t->lhs, t->rhs1, t->rhs2));
        ++n;
      }
      CHECK_MESSAGE(got == oracle::binary_relation(w, sh), w << " " << sh.lhs << "=" << sh.rhs1 << "." << sh.rhs2);
      CHECK(n == got.size());
    }
  }
}

TEST_CASE("holds_binary with assignment") {
  WordIndex idx("abab");
  BinaryShape s{"z", "x", "x"};
  CHECK(idx.holds_binary(s, {{"z", {1, 5}}, {"x", {1, 3}}}));
  CHECK_FALSE(idx.holds_binary(s, {{"z", {1, 4}}, {"x", {1, 2}}}));
  CHECK(idx.holds_binary(BinaryShape{"U", "x", "y"}, {{"x", {1, 2}}, {"y", {2, 5}}}));
  CHECK_FALSE(idx.holds_binary(BinaryShape{"U", "x", "y"}, {{"x", {1, 2}}, {"y", {2, 4}}}));
}

TEST_CASE("span range errors") {
  WordIndex idx("ab");
  CHECK_THROWS_AS(idx.check_span({0, 1}), RangeError);
  CHECK_THROWS_AS(idx.check_span({2, 1}), RangeError);
  CHECK_THROWS_AS(idx.check_span({1, 4}), RangeError);
  CHECK_NOTHROW(idx.check_span({3, 3}));
  CHECK(to_string(Span{1, 3}) == "[1,3)");
}

TEST_CASE("empty word") {
  WordIndex idx("");
  CHECK(idx.factor_count() == 1);
  auto cur = idx.enumerate_factors();
  auto s = cur.next();
  REQUIRE(s);
  CHECK(s->length() == 0);
  CHECK_FALSE(cur.next());
}
