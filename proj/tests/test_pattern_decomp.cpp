#include "doctest.h"
#include "fcq/pattern_decomp.hpp"
#include "oracles.hpp"

using namespace fcq;

namespace {

std::vector<Var> pat(const std::string& s) {
  std::vector<Var> out;
  for (char c : s) out.push_back(std::string("x") + c);
  return out;
}

// All patterns over x1..x{k} of length n, canonical up to renaming
// (first occurrences appear in order).
std::vector<std::vector<Var>> canonical_patterns(std::size_t n, int k) {
  std::vector<std::vector<Var>> out;
  std::vector<int> cur;
  std::function<void(int)> go = [&](int used) {
    if (cur.size() == n) {
      std::vector<Var> p;
      for (int v : cur) p.push_back("x" + std::to_string(v));
      out.push_back(p);
      return;
    }
    for (int v = 1; v <= std::min(used + 1, k); ++v) {
      cur.push_back(v);
      go(std::max(used, v));
      cur.pop_back();
    }
  };
  go(0);
  return out;
}

bool contains_pair(const Bracketing& b, const ConstraintPair& p) {
  if (b->is_leaf()) return false;
  if (b->left->is_leaf() && b->right->is_leaf() && constraint_pair(b->left->leaf, b->right->leaf) == p) return true;
  return contains_pair(b->left, p) || contains_pair(b->right, p);
}

// Some bracketing is acyclic and, with z as root, puts every pair of c in
// one atom.
bool atom_decompose_brute(const Var& z, const std::vector<Var>& alpha, const ConstraintSet& c) {
  for (const auto& b : oracle::all_bracketings(alpha)) {
    std::vector<std::set<Var>> edges;
    oracle::bracketing_edges(b, z, "#", edges);
    if (!oracle::alpha_acyclic(edges)) continue;
    bool ok = true;
    for (const auto& [x, y] : c) {
      bool hit = false;
      for (const auto& e : edges) hit = hit || (e.count(x) && e.count(y));
      ok = ok && hit;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("small patterns") {
  CHECK_FALSE(pattern_acyclic(pat("12131")));
  CHECK(pattern_acyclic(pat("1231")));
  CHECK(pattern_acyclic(pat("1")));
  CHECK(pattern_acyclic(pat("11")));
  CHECK(pattern_acyclic(pat("1212")));
  CHECK_FALSE(is_acyclic_bracketing(parse_bracketing("((x1.x2).(x3.x1))")));
  CHECK(is_acyclic_bracketing(parse_bracketing("((x1.(x2.x3)).x1)")));
}

TEST_CASE("bracketing syntax") {
  auto b = parse_bracketing("(((x1.x2).x1).(x1.x2))");
  CHECK(to_string(b) == "(((x1.x2).x1).(x1.x2))");
  CHECK(unbracket(b) == pat("12112"));
  CHECK(to_string(parse_bracketing("x1")) == "x1");
  CHECK_THROWS(parse_bracketing("(x1.x2"));
  CHECK_THROWS(parse_bracketing("(x1.x2.x3)"));
}

TEST_CASE("decomposing a bracketing") {
  auto d = decompose_bracketing(parse_bracketing("(((x1.x2).x1).(x1.x2))"), kUniverse);
  REQUIRE(d.atoms.size() == 3);
  CHECK(to_string(d.atoms[0]) == "z1 = x1.x2");
  CHECK(to_string(d.atoms[1]) == "z2 = z1.x1");
  CHECK(to_string(d.atoms[2]) == "U = z2.z1");
  CHECK(d.introduced == std::set<Var>{"z1", "z2"});
  // fresh names avoid variables of the pattern
  auto e = decompose_bracketing(parse_bracketing("((z1.x).z1)"), "y");
  CHECK(to_string(e.atoms[0]) == "z2 = z1.x");
}

TEST_CASE("concatenation trees") {
  auto t1 = concat_tree(decompose_bracketing(parse_bracketing("((x1.x2).(x1.x2))"), kUniverse));
  REQUIRE(t1.nodes.size() == 5);
  CHECK(t1.nodes[0].label == "U");
  CHECK(t1.nodes[1].label == "z1");
  CHECK(t1.nodes[1].children.size() == 2);
  CHECK(t1.nodes[2].children.empty());
  for (const auto* x : {"x1", "x2", "z1"}) CHECK(is_x_localized(t1, x));

  auto t2 = concat_tree(decompose_bracketing(parse_bracketing("(((x1.x2).x1).x2)"), kUniverse));
  REQUIRE(t2.nodes.size() == 7);
  CHECK(t2.nodes[1].label == "z2");
  CHECK(t2.nodes[2].label == "x2");
  CHECK(is_x_localized(t2, "x1"));
  CHECK_FALSE(is_x_localized(t2, "x2"));
  auto dot = t2.to_dot();
  CHECK(dot.find("v_1 (U)") != std::string::npos);
  CHECK(dot.find("v_7 (x2)") != std::string::npos);
}

TEST_CASE("bracketing acyclicity: GYO, locality and the library agree") {
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& alpha : canonical_patterns(n, 3))
      for (const auto& b : oracle::all_bracketings(alpha)) {
        bool g = oracle::bracketing_gyo(b);
        REQUIRE_MESSAGE(is_acyclic_bracketing(b) == g, to_string(b));
        REQUIRE_MESSAGE(oracle::all_localized_brute(b) == g, to_string(b));
      }
}

TEST_CASE("pattern acyclicity against all bracketings") {
  for (std::size_t n = 1; n <= 7; ++n)
    for (const auto& alpha : canonical_patterns(n, 3)) {
      auto b = acyclic_bracketing(alpha);
      REQUIRE(b.has_value() == oracle::pattern_acyclic_brute(alpha));
      if (b) {
        CHECK(unbracket(*b) == alpha);
        CHECK(oracle::bracketing_gyo(*b));
        auto t = pattern_acyclic(alpha);
        REQUIRE(t);
        for (const auto& node : t->nodes) CHECK(is_x_localized(*t, node.label));
      }
    }
}

TEST_CASE("constrained acyclicity against all bracketings") {
  for (std::size_t n = 2; n <= 6; ++n)
    for (const auto& alpha : canonical_patterns(n, 3)) {
      auto vars = std::set<Var>(alpha.begin(), alpha.end());
      std::vector<ConstraintPair> pairs;
      for (const auto& a : vars)
        for (const auto& b : vars)
          if (a < b) pairs.emplace_back(a, b);
      for (unsigned mask = 1; mask < (1u << pairs.size()); ++mask) {
        ConstraintSet c;
        for (std::size_t i = 0; i < pairs.size(); ++i)
          if (mask >> i & 1) c.insert(pairs[i]);
        bool expect = false;
        for (const auto& b : oracle::all_bracketings(alpha)) {
          if (!oracle::bracketing_gyo(b)) continue;
          bool all = true;
          for (const auto& p : c) all = all && contains_pair(b, p);
          if (all) { expect = true; break; }
        }
        auto got = acyclic_bracketing(alpha, c);
        REQUIRE_MESSAGE(got.has_value() == expect, to_string(oracle::all_bracketings(alpha)[0]) << " pairs " << mask);
        if (got) {
          CHECK(oracle::bracketing_gyo(*got));
          for (const auto& p : c) CHECK(contains_pair(*got, p));
        }
        CHECK(constrained_pattern_acyclic(alpha, c).has_value() == expect);
      }
    }
}

TEST_CASE("atom decomposition against all bracketings") {
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& alpha : canonical_patterns(n, 3)) {
      std::set<Var> vars(alpha.begin(), alpha.end());
      vars.insert("z");
      std::vector<ConstraintPair> pairs;
      for (const auto& a : vars)
        for (const auto& b : vars)
          if (a < b) pairs.emplace_back(a, b);
      for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
        ConstraintSet c;
        for (std::size_t i = 0; i < pairs.size(); ++i)
          if (mask >> i & 1) c.insert(pairs[i]);
        bool expect = atom_decompose_brute("z", alpha, c);
        auto d = atom_decompose("z", alpha, c, "$t");
        std::string label;
        for (const auto& v : alpha) label += v;
        REQUIRE_MESSAGE(d.has_value() == expect, label << " pairs " << mask);
        if (d) {
          CHECK(covers(*d, c));
          CHECK(gyo(d->hypergraph()));
        }
      }
    }
}

TEST_CASE("atom decomposition: overlapping pairs can still succeed") {
  // z = c.y.y with {z,y} and {y,c}: ((c.y).y)
  auto d = atom_decompose("z", {"c", "y", "y"}, {constraint_pair("z", "y"), constraint_pair("y", "c")});
  REQUIRE(d);
  CHECK(covers(*d, {constraint_pair("z", "y"), constraint_pair("y", "c")}));
}
