#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "fcq/word_index.hpp"

namespace fcq {

// Hyperedges are variable sets; U never belongs to one (it is a constant).
using Hyperedge = std::set<Var>;
using Hypergraph = std::vector<Hyperedge>;

// Undirected tree over node indices 0..size-1.
struct Tree {
  std::size_t size = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::vector<std::vector<std::size_t>> adjacency() const;
  bool is_tree() const;  // connected with size-1 edges (empty counts)
};

// GYO ear removal. Scans nodes in input order and removes the first ear it
// finds; succeeds iff exactly one node is left unmarked.
std::optional<Tree> gyo(const Hypergraph& h);

// Connectedness condition: for every variable, the nodes containing it
// induce a connected subtree. Also requires `t` to be a tree over h.
bool is_join_tree(const Tree& t, const Hypergraph& h);

}  // namespace fcq
