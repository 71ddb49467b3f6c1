#include "fcq/hypergraph.hpp"

#include <algorithm>
#include <map>

namespace fcq {

std::vector<std::vector<std::size_t>> Tree::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(size);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

bool Tree::is_tree() const {
  if (size == 0) return edges.empty();
  if (edges.size() != size - 1) return false;
  for (auto [a, b] : edges)
    if (a >= size || b >= size || a == b) return false;
  auto adj = adjacency();
  std::vector<char> seen(size, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (auto v : adj[u])
      if (!seen[v]) { seen[v] = 1; ++count; stack.push_back(v); }
  }
  return count == size;
}

std::optional<Tree> gyo(const Hypergraph& h) {
  const std::size_t n = h.size();
  Tree t{n, {}};
  if (n == 0) return t;
  std::vector<Hyperedge> rest(h.begin(), h.end());
  for (auto& e : rest) e.erase(kUniverse);
  std::vector<char> marked(n, 0);
  std::size_t alive = n;
  bool changed = true;
  while (changed && alive > 1) {
    changed = false;
    for (std::size_t i = 0; i < n && !changed; ++i) {
      if (marked[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || marked[j]) continue;
        if (std::includes(rest[j].begin(), rest[j].end(), rest[i].begin(), rest[i].end())) {
          marked[i] = 1;
          --alive;
          t.edges.emplace_back(i, j);
          changed = true;
          break;
        }
      }
    }
    if (changed) continue;
    std::map<Var, int> count;
    for (std::size_t i = 0; i < n; ++i)
      if (!marked[i])
        for (const auto& v : rest[i]) ++count[v];
    for (std::size_t i = 0; i < n; ++i) {
      if (marked[i]) continue;
      for (auto it = rest[i].begin(); it != rest[i].end();) {
        if (count[*it] == 1) { it = rest[i].erase(it); changed = true; }
        else ++it;
      }
    }
  }
  if (alive != 1) return std::nullopt;
  return t;
}

bool is_join_tree(const Tree& t, const Hypergraph& h) {
  if (t.size != h.size() || !t.is_tree()) return false;
  auto adj = t.adjacency();
  std::set<Var> vars;
  for (const auto& e : h) vars.insert(e.begin(), e.end());
  vars.erase(kUniverse);
  for (const auto& v : vars) {
    std::vector<std::size_t> holders;
    for (std::size_t i = 0; i < h.size(); ++i)
      if (h[i].count(v)) holders.push_back(i);
    std::vector<char> seen(h.size(), 0);
    std::vector<std::size_t> stack{holders[0]};
    seen[holders[0]] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto w : adj[u])
        if (!seen[w] && h[w].count(v)) { seen[w] = 1; ++reached; stack.push_back(w); }
    }
    if (reached != holders.size()) return false;
  }
  return true;
}

}  // namespace fcq
