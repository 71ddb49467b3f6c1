#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fcq/hypergraph.hpp"
#include "fcq/word_index.hpp"

namespace fcq {

// Fully parenthesized binary pattern over variables.
struct BNode;
using Bracketing = std::shared_ptr<const BNode>;

struct BNode {
  Var leaf;  // set iff left/right are null
  Bracketing left, right;
  bool is_leaf() const { return !left; }
};

Bracketing leaf(Var v);
Bracketing join(Bracketing a, Bracketing b);
std::string to_string(const Bracketing& b);  // "((x1.x2).x1)"
Bracketing parse_bracketing(const std::string& text);
std::vector<Var> unbracket(const Bracketing& b);

// lhs = rhs[0] . rhs[1], or a copy lhs = rhs[0].
struct BinaryAtom {
  Var lhs;
  std::vector<Var> rhs;

  std::set<Var> vars() const;  // U excluded
  bool operator==(const BinaryAtom&) const = default;
};

std::string to_string(const BinaryAtom& a);

struct Decomposition {
  std::vector<BinaryAtom> atoms;
  Var root;
  std::set<Var> introduced;

  Hypergraph hypergraph() const;
};

// One atom per distinct sub-bracketing (post-order, left to right);
// introduced variables are prefix1, prefix2, ... skipping names in use.
Decomposition decompose_bracketing(const Bracketing& b, const Var& root, const std::string& prefix = "z");

struct ConcatTree {
  struct Node {
    Var label;
    int parent = -1;
    std::vector<int> children;  // left to right
  };
  std::vector<Node> nodes;  // breadth-first, left to right; nodes[0] is the root

  std::string to_dot(const std::string& name = "concat") const;
};

// Expands the decomposition from its root, then prunes: among the nodes
// sharing a label, only the deepest one (leftmost on ties) keeps children.
ConcatTree concat_tree(const Decomposition& d);

bool is_x_localized(const ConcatTree& t, const Var& x);
bool is_acyclic_bracketing(const Bracketing& b);

// Unordered pairs stored as (min, max).
using ConstraintPair = std::pair<Var, Var>;
using ConstraintSet = std::set<ConstraintPair>;
ConstraintPair constraint_pair(const Var& a, const Var& b);

// Fixed-point acyclicity test over the subpattern graph; returns a witness
// bracketing read off the fixed point. With constraints, the witness also
// contains (x.y) or (y.x) for each pair.
std::optional<Bracketing> acyclic_bracketing(const std::vector<Var>& alpha, const ConstraintSet& c = {});

std::optional<ConcatTree> pattern_acyclic(const std::vector<Var>& alpha);
std::optional<ConcatTree> constrained_pattern_acyclic(const std::vector<Var>& alpha, const ConstraintSet& c);

// Decomposes z = alpha so that every pair in c shares an atom.
std::optional<Decomposition> atom_decompose(const Var& z, const std::vector<Var>& alpha, const ConstraintSet& c,
                                            const std::string& prefix = "z");

// Does some atom of d contain both variables of every pair?
bool covers(const Decomposition& d, const ConstraintSet& c);

}  // namespace fcq
