#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fcq/hypergraph.hpp"
#include "fcq/normalizer.hpp"
#include "fcq/pattern_decomp.hpp"
#include "fcq/query.hpp"

namespace fcq {

Hyperedge equation_vars(const WordEquation& e);  // U excluded

struct WeakJoinTree {
  Tree tree;                        // nodes are the equations, in order
  std::vector<std::set<Var>> labels;  // per edge: shared variables
};

std::optional<WeakJoinTree> weak_join_tree(const FcCq& normalized);

struct ConditionReport {
  // [0] weakly cyclic, [1] cyclic rhs pattern, [2] two equations share more
  // than three variables, [3] they share exactly three and one is longer
  // than three symbols.
  std::array<bool, 4> fired{};
  std::vector<std::string> witnesses;

  bool any() const { return fired[0] || fired[1] || fired[2] || fired[3]; }
};

ConditionReport cyclicity_conditions(const FcCq& normalized);

struct QueryDecomposition {
  NormalizedFcCq normalized;
  WeakJoinTree skeleton;
  std::vector<Decomposition> blocks;  // one per normalized equation
  std::vector<BinaryAtom> atoms;      // all blocks, concatenated
  std::vector<std::size_t> block_of;  // atom -> source equation
  Tree tree;                          // join tree over atoms
  std::vector<RegexConstraint> constraints;
  std::vector<Var> head;

  FcCq query2() const;
  std::string join_tree_dot() const;
};

struct DecomposeOptions {
  bool prefactor = false;
};

struct Analysis {
  NormalizedFcCq normalized;
  ConditionReport conditions;
  std::optional<QueryDecomposition> decomposition;
  std::string verdict;  // "acyclic" or "cyclic (...)"
};

Analysis analyze_query(const FcCq& q, const DecomposeOptions& opt = {});
std::optional<QueryDecomposition> decompose_query(const FcCq& q, const DecomposeOptions& opt = {});

// Pulls subpatterns of length >= 2 shared by several equations out into
// their own equations.
FcCq prefactor(const FcCq& q);

bool validate_join_tree(const Tree& t, const std::vector<BinaryAtom>& atoms);

}  // namespace fcq
