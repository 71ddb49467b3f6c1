#include "fcq/pattern_decomp.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

namespace fcq {

Bracketing leaf(Var v) { return std::make_shared<const BNode>(BNode{std::move(v), nullptr, nullptr}); }
Bracketing join(Bracketing a, Bracketing b) {
  return std::make_shared<const BNode>(BNode{{}, std::move(a), std::move(b)});
}

std::string to_string(const Bracketing& b) {
  if (b->is_leaf()) return b->leaf;
  return "(" + to_string(b->left) + "." + to_string(b->right) + ")";
}

Bracketing parse_bracketing(const std::string& text) {
  std::size_t i = 0;
  auto skip = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  std::function<Bracketing()> node = [&]() -> Bracketing {
    skip();
    if (i < text.size() && text[i] == '(') {
      ++i;
      Bracketing a = node();
      skip();
      if (i >= text.size() || text[i] != '.') throw std::invalid_argument("bracketing: expected '.'");
      ++i;
      Bracketing b = node();
      skip();
      if (i >= text.size() || text[i] != ')') throw std::invalid_argument("bracketing: expected ')'");
      ++i;
      return join(a, b);
    }
    std::size_t s = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '$')) ++i;
    if (s == i) throw std::invalid_argument("bracketing: expected variable");
    return leaf(text.substr(s, i - s));
  };
  Bracketing b = node();
  skip();
  if (i != text.size()) throw std::invalid_argument("bracketing: trailing input");
  return b;
}

std::vector<Var> unbracket(const Bracketing& b) {
  if (b->is_leaf()) return {b->leaf};
  auto l = unbracket(b->left);
  auto r = unbracket(b->right);
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

std::set<Var> BinaryAtom::vars() const {
  std::set<Var> out(rhs.begin(), rhs.end());
  out.insert(lhs);
  out.erase(kUniverse);
  return out;
}

std::string to_string(const BinaryAtom& a) {
  std::string out = a.lhs + " = ";
  for (std::size_t i = 0; i < a.rhs.size(); ++i) out += (i ? "." : "") + a.rhs[i];
  return out;
}

Hypergraph Decomposition::hypergraph() const {
  Hypergraph h;
  for (const auto& a : atoms) h.push_back(a.vars());
  return h;
}

Decomposition decompose_bracketing(const Bracketing& b, const Var& root, const std::string& prefix) {
  Decomposition d;
  d.root = root;
  if (b->is_leaf()) {
    d.atoms.push_back({root, {b->leaf}});
    return d;
  }
  std::set<Var> taken;
  for (const auto& v : unbracket(b)) taken.insert(v);
  taken.insert(root);
  std::map<std::string, Var> names;
  int counter = 0;
  std::function<Var(const Bracketing&, bool)> go = [&](const Bracketing& n, bool is_root) -> Var {
    if (n->is_leaf()) return n->leaf;
    Var l = go(n->left, false);
    Var r = go(n->right, false);
    if (is_root) {
      d.atoms.push_back({root, {l, r}});
      return root;
    }
    std::string key = to_string(n);
    auto it = names.find(key);
    if (it != names.end()) return it->second;
    Var z;
    do {
      z = prefix + std::to_string(++counter);
    } while (taken.count(z));
    taken.insert(z);
    names.emplace(key, z);
    d.introduced.insert(z);
    d.atoms.push_back({z, {l, r}});
    return z;
  };
  go(b, true);
  return d;
}

std::string ConcatTree::to_dot(const std::string& name) const {
  std::string out = "digraph " + name + " {\n";
  for (std::size_t i = 0; i < nodes.size(); ++i)
    out += "  n" + std::to_string(i + 1) + " [label=\"v_" + std::to_string(i + 1) + " (" + nodes[i].label + ")\"];\n";
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (int c : nodes[i].children)
      out += "  n" + std::to_string(i + 1) + " -> n" + std::to_string(c + 1) + ";\n";
  out += "}\n";
  return out;
}

ConcatTree concat_tree(const Decomposition& d) {
  std::map<Var, std::vector<Var>> defs;
  for (const auto& a : d.atoms) defs[a.lhs] = a.rhs;

  // full expansion
  struct Full {
    Var label;
    int parent;
    int depth;
    std::vector<int> path;  // child indices from the root
    std::vector<int> children;
  };
  std::vector<Full> full;
  std::function<int(const Var&, int, int, std::vector<int>)> build = [&](const Var& label, int parent, int depth,
                                                                         std::vector<int> path) {
    int id = static_cast<int>(full.size());
    full.push_back({label, parent, depth, path, {}});
    auto it = defs.find(label);
    if (it != defs.end()) {
      for (std::size_t c = 0; c < it->second.size(); ++c) {
        auto p = path;
        p.push_back(static_cast<int>(c));
        int child = build(it->second[c], id, depth + 1, std::move(p));
        full[id].children.push_back(child);
      }
    }
    return id;
  };
  build(d.root, -1, 0, {});

  // deepest wins; at equal depth, leftmost wins
  std::map<Var, int> keep;
  for (int i = 0; i < static_cast<int>(full.size()); ++i) {
    if (full[i].children.empty()) continue;
    auto it = keep.find(full[i].label);
    if (it == keep.end()) { keep[full[i].label] = i; continue; }
    const Full& cur = full[it->second];
    if (full[i].depth > cur.depth || (full[i].depth == cur.depth && full[i].path < cur.path)) it->second = i;
  }

  ConcatTree t;
  std::deque<std::pair<int, int>> queue{{0, -1}};  // (full id, new parent)
  while (!queue.empty()) {
    auto [f, parent] = queue.front();
    queue.pop_front();
    int id = static_cast<int>(t.nodes.size());
    t.nodes.push_back({full[f].label, parent, {}});
    if (parent >= 0) t.nodes[parent].children.push_back(id);
    if (!full[f].children.empty() && keep.at(full[f].label) == f)
      for (int c : full[f].children) queue.emplace_back(c, id);
  }
  return t;
}

bool is_x_localized(const ConcatTree& t, const Var& x) {
  std::vector<char> parent_of_x(t.nodes.size(), 0);
  int count = 0;
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    for (int c : t.nodes[i].children)
      if (t.nodes[c].label == x && !parent_of_x[i]) {
        parent_of_x[i] = 1;
        ++count;
      }
  if (count <= 1) return true;
  int links = 0;
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    if (parent_of_x[i] && t.nodes[i].parent >= 0 && parent_of_x[t.nodes[i].parent]) ++links;
  return links == count - 1;
}

bool is_acyclic_bracketing(const Bracketing& b) {
  ConcatTree t = concat_tree(decompose_bracketing(b, kUniverse));
  std::set<Var> labels;
  for (const auto& n : t.nodes) labels.insert(n.label);
  return std::all_of(labels.begin(), labels.end(), [&](const Var& x) { return is_x_localized(t, x); });
}

ConstraintPair constraint_pair(const Var& a, const Var& b) { return a < b ? ConstraintPair{a, b} : ConstraintPair{b, a}; }

bool covers(const Decomposition& d, const ConstraintSet& c) {
  for (const auto& [x, y] : c) {
    bool found = std::any_of(d.atoms.begin(), d.atoms.end(), [&](const BinaryAtom& a) {
      auto has = [&](const Var& v) { return a.lhs == v || std::find(a.rhs.begin(), a.rhs.end(), v) != a.rhs.end(); };
      return has(x) && has(y);
    });
    if (!found) return false;
  }
  return true;
}

namespace {

// Fixed point over intervals [i,k] of alpha (0-based, inclusive). An edge
// (i,k,j) records that [i,k] has an acyclic bracketing splitting after j.
class SubpatternGraph {
 public:
  SubpatternGraph(const std::vector<Var>& alpha, const std::vector<int>& partner_of_sym, std::vector<int> sym)
      : n_(static_cast<int>(alpha.size())), sym_(std::move(sym)), partner_(partner_of_sym) {
    const int n = n_;
    int nvars = 0;
    for (int s : sym_) nvars = std::max(nvars, s + 1);
    words_ = (nvars + 63) / 64;
    lce_.assign((n + 1) * (n + 1), 0);
    for (int a = n - 1; a >= 0; --a)
      for (int c = n - 1; c >= 0; --c)
        if (sym_[a] == sym_[c]) lce_[a * (n + 1) + c] = lce_[(a + 1) * (n + 1) + c + 1] + 1;
    mask_.assign(n * n * words_, 0);
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k) {
        uint64_t* m = mask(i, k);
        if (k > i) std::copy(mask(i, k - 1), mask(i, k - 1) + words_, m);
        m[sym_[k] / 64] |= uint64_t{1} << (sym_[k] % 64);
      }
    in_v_.assign(n * n, 0);
    edge_.assign(static_cast<std::size_t>(n) * n * n, 0);
  }

  void solve() {
    const int n = n_;
    for (int i = 0; i < n; ++i) in_v_[i * n + i] = 1;
    for (int i = 0; i + 1 < n; ++i) {
      int a = sym_[i], b = sym_[i + 1];
      bool free = partner_[a] < 0 && partner_[b] < 0;
      if (free || partner_[a] == b) {
        edge_[idx(i, i + 1, i)] = 1;
        in_v_[i * n + i + 1] = 1;
      }
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (int len = 3; len <= n; ++len)
        for (int i = 0; i + len - 1 < n; ++i) {
          int k = i + len - 1;
          for (int j = i; j < k; ++j) {
            if (edge_[idx(i, k, j)]) continue;
            if (!in_v_[i * n + j] || !in_v_[(j + 1) * n + k]) continue;
            if (acyclic_join(i, j, k) < 0 || !extra_check(i, j, k)) continue;
            edge_[idx(i, k, j)] = 1;
            in_v_[i * n + k] = 1;
            changed = true;
          }
        }
    }
  }

  bool accepts() const { return in_v_[n_ - 1]; }

  // Bracketing of [i,k] read off the fixed point. Each join reuses the
  // exact sub-bracketing that justified it, so repeated halves are
  // literally the same tree.
  Bracketing witness(const std::vector<Var>& alpha) {
    leaves_.clear();
    for (const auto& v : alpha) leaves_.push_back(leaf(v));
    memo_.assign(edge_.size(), nullptr);
    return any(0, n_ - 1);
  }

  bool same(int a, int c, int len) const { return lce_[a * (n_ + 1) + c] >= len; }

 private:
  Bracketing any(int i, int k) {
    if (i == k) return leaves_[i];
    for (int j = i; j < k; ++j)
      if (edge_[idx(i, k, j)]) return split(i, k, j);
    throw std::logic_error("acyclic pattern: interval without a derivation");
  }

  Bracketing split(int i, int k, int j) {
    Bracketing& m = memo_[idx(i, k, j)];
    if (m) return m;
    Bracketing a, b;
    switch (acyclic_join(i, j, k)) {
      case 0: a = b = any(i, j); break;
      case 1: a = any(i, j); b = any(j + 1, k); break;
      case 2: a = split(i, j, witness_x_); b = a->left; break;
      case 3: a = split(i, j, witness_x_); b = a->right; break;
      case 4: b = split(j + 1, k, witness_x_); a = b->left; break;
      case 5: b = split(j + 1, k, witness_x_); a = b->right; break;
      default: throw std::logic_error("acyclic pattern: edge without a rule");
    }
    return m = join(a, b);
  }

  std::size_t idx(int i, int k, int j) const { return (static_cast<std::size_t>(i) * n_ + k) * n_ + j; }
  uint64_t* mask(int i, int k) { return &mask_[(static_cast<std::size_t>(i) * n_ + k) * words_]; }
  const uint64_t* mask(int i, int k) const { return &mask_[(static_cast<std::size_t>(i) * n_ + k) * words_]; }
  bool has(int i, int k, int j) const { return edge_[idx(i, k, j)] != 0; }

  // Which rule lets [i,j] and [j+1,k] be joined: 0 equal halves, 1 disjoint
  // variables, 2/3 the right half repeats a child of the left half, 4/5 the
  // left half repeats a child of the right half; -1 if none applies.
  int acyclic_join(int i, int j, int k) const {
    const int l1 = j - i + 1, l2 = k - j;
    if (l1 == l2 && same(i, j + 1, l1)) return 0;
    const uint64_t* a = mask(i, j);
    const uint64_t* b = mask(j + 1, k);
    bool disjoint = true;
    for (int w = 0; w < words_; ++w)
      if (a[w] & b[w]) disjoint = false;
    if (disjoint) return 1;
    if (l2 < l1) {
      int x = i + l2 - 1;
      if (has(i, j, x) && same(j + 1, i, l2)) { witness_x_ = x; return 2; }
      x = j - l2;
      if (has(i, j, x) && same(j + 1, x + 1, l2)) { witness_x_ = x; return 3; }
    }
    if (l1 < l2) {
      int x = j + l1;
      if (has(j + 1, k, x) && same(i, j + 1, l1)) { witness_x_ = x; return 4; }
      x = k - l1;
      if (has(j + 1, k, x) && same(i, x + 1, l1)) { witness_x_ = x; return 5; }
    }
    return -1;
  }

  // A constrained variable may only be joined with a part whose variables
  // are exactly its pair.
  bool extra_check(int i, int j, int k) const {
    auto exactly = [&](int lo, int hi, int a, int b) {
      std::vector<uint64_t> want(words_, 0);
      want[a / 64] |= uint64_t{1} << (a % 64);
      want[b / 64] |= uint64_t{1} << (b % 64);
      return std::equal(want.begin(), want.end(), mask(lo, hi));
    };
    if (i == j && partner_[sym_[i]] >= 0) return exactly(j + 1, k, sym_[i], partner_[sym_[i]]);
    if (j + 1 == k && partner_[sym_[k]] >= 0) return exactly(i, j, sym_[k], partner_[sym_[k]]);
    return true;
  }

  int n_;
  int words_ = 1;
  std::vector<int> sym_;
  std::vector<int> partner_;
  std::vector<int> lce_;
  std::vector<uint64_t> mask_;
  std::vector<char> in_v_;
  std::vector<char> edge_;
  mutable int witness_x_ = -1;
  std::vector<Bracketing> leaves_;
  std::vector<Bracketing> memo_;
};

}  // namespace

std::optional<Bracketing> acyclic_bracketing(const std::vector<Var>& alpha, const ConstraintSet& c) {
  if (alpha.empty()) throw std::invalid_argument("acyclic_bracketing: empty pattern");
  std::map<Var, int> ids;
  std::vector<int> sym;
  for (const auto& v : alpha) {
    auto [it, fresh] = ids.emplace(v, static_cast<int>(ids.size()));
    sym.push_back(it->second);
  }
  std::vector<int> partner(ids.size(), -1);
  for (const auto& [x, y] : c) {
    if (!ids.count(x) || !ids.count(y) || x == y) return std::nullopt;
    int a = ids[x], b = ids[y];
    if (partner[a] >= 0 || partner[b] >= 0) return std::nullopt;
    partner[a] = b;
    partner[b] = a;
  }
  if (alpha.size() == 1) return c.empty() ? std::optional(leaf(alpha[0])) : std::nullopt;

  SubpatternGraph g(alpha, partner, sym);
  g.solve();
  if (!g.accepts()) return std::nullopt;
  Bracketing b = g.witness(alpha);
  Decomposition dec = decompose_bracketing(b, kUniverse);
  if (!is_acyclic_bracketing(b) || !covers(dec, c))
    throw std::logic_error("acyclic pattern: derived witness " + to_string(b) + " is not valid");
  return b;
}

std::optional<ConcatTree> pattern_acyclic(const std::vector<Var>& alpha) {
  return constrained_pattern_acyclic(alpha, {});
}

std::optional<ConcatTree> constrained_pattern_acyclic(const std::vector<Var>& alpha, const ConstraintSet& c) {
  auto b = acyclic_bracketing(alpha, c);
  if (!b) return std::nullopt;
  return concat_tree(decompose_bracketing(*b, kUniverse));
}

std::optional<Decomposition> atom_decompose(const Var& z, const std::vector<Var>& alpha, const ConstraintSet& c,
                                            const std::string& prefix) {
  if (alpha.empty() || std::count(alpha.begin(), alpha.end(), z) || std::count(alpha.begin(), alpha.end(), kUniverse))
    throw std::invalid_argument("atom_decompose: equation is not normalized");
  for (const auto& [x, y] : c) {
    for (const Var* v : {&x, &y})
      if (*v != z && !std::count(alpha.begin(), alpha.end(), *v)) return std::nullopt;
    if (x == y) return std::nullopt;
  }

  auto finish = [&](const Bracketing& b) -> std::optional<Decomposition> {
    Decomposition d = decompose_bracketing(b, z, prefix);
    if (!covers(d, c)) return std::nullopt;
    if (!gyo(d.hypergraph())) throw std::logic_error("atom_decompose: built a cyclic decomposition " + to_string(b));
    return d;
  };

  if (alpha.size() <= 2) {
    Bracketing b = alpha.size() == 1 ? leaf(alpha[0]) : join(leaf(alpha[0]), leaf(alpha[1]));
    return finish(b);
  }

  // From three symbols on, a pair of original variables needs a literal
  // (x.y) or (y.x) node, and two such nodes cannot share a variable
  // without breaking its connectedness.
  std::vector<ConstraintPair> root_pairs;
  ConstraintSet inner;
  for (const auto& p : c) (p.first == z || p.second == z ? root_pairs.push_back(p) : (void)inner.insert(p));
  if (root_pairs.size() > 1) return std::nullopt;
  std::map<Var, int> seen;
  for (const auto& [x, y] : inner)
    if (seen[x]++ || seen[y]++) return std::nullopt;

  if (root_pairs.empty()) {
    auto b = acyclic_bracketing(alpha, inner);
    if (!b) return std::nullopt;
    return finish(*b);
  }

  // Root pair {z,y}: alpha = y^i beta y^j with no y in beta; y's are peeled
  // around a bracketing of beta.
  const Var y = root_pairs[0].first == z ? root_pairs[0].second : root_pairs[0].first;
  std::size_t lead = 0, trail = 0;
  while (lead < alpha.size() && alpha[lead] == y) ++lead;
  while (trail < alpha.size() - lead && alpha[alpha.size() - 1 - trail] == y) ++trail;
  std::vector<Var> beta(alpha.begin() + lead, alpha.end() - trail);
  if (std::count(beta.begin(), beta.end(), y)) return std::nullopt;

  ConstraintSet beta_pairs;
  for (const auto& p : inner) {
    if (p.first == y || p.second == y) {
      // y can only meet another variable at the bottom of the peel chain
      const Var& other = p.first == y ? p.second : p.first;
      if (beta != std::vector<Var>{other}) return std::nullopt;
    } else {
      beta_pairs.insert(p);
    }
  }
  Bracketing cur;
  if (beta.empty()) {
    cur = leaf(y);
    if (lead > 0) --lead;
    else --trail;
  } else {
    auto b = acyclic_bracketing(beta, beta_pairs);
    if (!b) return std::nullopt;
    cur = *b;
  }
  for (std::size_t t = 0; t < lead; ++t) cur = join(leaf(y), cur);
  for (std::size_t t = 0; t < trail; ++t) cur = join(cur, leaf(y));
  return finish(cur);
}

}  // namespace fcq
