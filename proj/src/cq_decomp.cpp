#include "fcq/cq_decomp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fcq {

Hyperedge equation_vars(const WordEquation& e) {
  Hyperedge h;
  h.insert(e.lhs);
  for (const auto& t : e.rhs)
    if (!t.terminal) h.insert(t.var);
  h.erase(kUniverse);
  return h;
}

namespace {

std::vector<Var> rhs_vars(const Pattern& p) {
  std::vector<Var> out;
  for (const auto& t : p) out.push_back(t.var);
  return out;
}

std::set<Var> intersect(const std::set<Var>& a, const std::set<Var>& b) {
  std::set<Var> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

std::string join_names(const std::set<Var>& s) {
  std::string out;
  for (const auto& v : s) out += (out.empty() ? "" : ",") + v;
  return "{" + out + "}";
}

}  // namespace

std::optional<WeakJoinTree> weak_join_tree(const FcCq& q) {
  Hypergraph h;
  for (const auto& e : q.equations) h.push_back(equation_vars(e));
  auto t = gyo(h);
  if (!t) return std::nullopt;
  WeakJoinTree w{*t, {}};
  for (auto [a, b] : t->edges) w.labels.push_back(intersect(h[a], h[b]));
  return w;
}

ConditionReport cyclicity_conditions(const FcCq& q) {
  ConditionReport r;
  if (!weak_join_tree(q)) {
    r.fired[0] = true;
    r.witnesses.push_back("condition 1: the equations are not weakly acyclic");
  }
  for (const auto& e : q.equations) {
    if (!acyclic_bracketing(rhs_vars(e.rhs))) {
      r.fired[1] = true;
      r.witnesses.push_back("condition 2: cyclic pattern in " + to_string(e));
    }
  }
  for (std::size_t i = 0; i < q.equations.size(); ++i)
    for (std::size_t j = i + 1; j < q.equations.size(); ++j) {
      const auto& a = q.equations[i];
      const auto& b = q.equations[j];
      auto shared = intersect(equation_vars(a), equation_vars(b));
      if (shared.size() > 3) {
        r.fired[2] = true;
        r.witnesses.push_back("condition 3: " + to_string(a) + " and " + to_string(b) + " share " + join_names(shared));
      } else if (shared.size() == 3 && (a.rhs.size() + 1 > 3 || b.rhs.size() + 1 > 3)) {
        r.fired[3] = true;
        r.witnesses.push_back("condition 4: " + to_string(a) + " and " + to_string(b) + " share " + join_names(shared));
      }
    }
  return r;
}

FcCq QueryDecomposition::query2() const {
  FcCq q;
  q.head = head;
  for (const auto& a : atoms) q.equations.push_back({a.lhs, pattern_of(a.rhs)});
  q.constraints = constraints;
  return q;
}

std::string QueryDecomposition::join_tree_dot() const {
  std::string out = "graph join_tree {\n";
  for (std::size_t i = 0; i < atoms.size(); ++i)
    out += "  a" + std::to_string(i + 1) + " [label=\"" + to_string(atoms[i]) + "\"];\n";
  for (auto [a, b] : tree.edges) {
    auto label = intersect(atoms[a].vars(), atoms[b].vars());
    out += "  a" + std::to_string(a + 1) + " -- a" + std::to_string(b + 1) + " [label=\"" + join_names(label) + "\"];\n";
  }
  out += "}\n";
  return out;
}

FcCq prefactor(const FcCq& in) {
  FcCq q = normalize(in).query;
  std::set<Var> used;
  for (const auto& v : q.variables()) used.insert(v);
  int counter = 0;
  while (true) {
    // longest shared proper subpattern, earliest first
    std::optional<Pattern> best;
    for (std::size_t e = 0; e < q.equations.size(); ++e) {
      const Pattern& p = q.equations[e].rhs;
      for (std::size_t len = p.size() - 1; len >= 2 && len < p.size(); --len) {
        if (best && best->size() >= len) break;
        for (std::size_t s = 0; s + len <= p.size(); ++s) {
          Pattern cand(p.begin() + s, p.begin() + s + len);
          int holders = 0;
          for (const auto& other : q.equations) {
            if (other.rhs.size() <= len) continue;
            if (std::search(other.rhs.begin(), other.rhs.end(), cand.begin(), cand.end()) != other.rhs.end())
              ++holders;
          }
          if (holders >= 2) {
            best = cand;
            break;
          }
        }
        if (best) break;
      }
    }
    if (!best) break;
    Var z;
    do {
      z = "$p" + std::to_string(++counter);
    } while (used.count(z));
    used.insert(z);
    for (auto& e : q.equations) {
      if (e.rhs.size() <= best->size()) continue;
      Pattern out;
      for (std::size_t s = 0; s < e.rhs.size();) {
        if (s + best->size() <= e.rhs.size() && std::equal(best->begin(), best->end(), e.rhs.begin() + s)) {
          out.push_back(Term::variable(z));
          s += best->size();
        } else {
          out.push_back(e.rhs[s++]);
        }
      }
      e.rhs = std::move(out);
    }
    q.equations.push_back({z, *best});
  }
  return q;
}

Analysis analyze_query(const FcCq& input, const DecomposeOptions& opt) {
  Analysis a;
  a.normalized = normalize(opt.prefactor ? prefactor(input) : input);
  if (opt.prefactor) a.normalized.query.head = input.head;
  const FcCq& q = a.normalized.query;
  a.conditions = cyclicity_conditions(q);
  if (a.conditions.any()) {
    std::string list;
    for (int i = 0; i < 4; ++i)
      if (a.conditions.fired[i]) list += (list.empty() ? "" : ", ") + std::string("condition ") + std::to_string(i + 1);
    a.verdict = "cyclic (" + list + ")";
    return a;
  }

  QueryDecomposition d;
  d.normalized = a.normalized;
  d.head = q.head;
  d.constraints = q.constraints;
  d.skeleton = *weak_join_tree(q);
  const std::size_t n = q.equations.size();

  std::vector<ConstraintSet> pairs(n);
  for (std::size_t e = 0; e < d.skeleton.tree.edges.size(); ++e) {
    const auto& label = d.skeleton.labels[e];
    if (label.size() != 2) continue;
    auto p = constraint_pair(*label.begin(), *label.rbegin());
    pairs[d.skeleton.tree.edges[e].first].insert(p);
    pairs[d.skeleton.tree.edges[e].second].insert(p);
  }

  std::vector<std::size_t> offset(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& eq = q.equations[i];
    auto block = atom_decompose(eq.lhs, rhs_vars(eq.rhs), pairs[i], "$d" + std::to_string(i + 1) + "_");
    if (!block) {
      a.verdict = "cyclic (no decomposition of " + to_string(eq) + " keeps the shared variables together)";
      return a;
    }
    offset[i] = d.atoms.size();
    for (const auto& at : block->atoms) {
      d.atoms.push_back(at);
      d.block_of.push_back(i);
    }
    d.blocks.push_back(std::move(*block));
  }

  d.tree.size = d.atoms.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto local = gyo(d.blocks[i].hypergraph());
    if (!local) throw std::logic_error("decompose_query: block is not acyclic");
    for (auto [x, y] : local->edges) d.tree.edges.emplace_back(offset[i] + x, offset[i] + y);
  }
  auto connector = [&](std::size_t i, const std::set<Var>& label) {
    const auto& atoms = d.blocks[i].atoms;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      auto vars = atoms[k].vars();
      if (std::includes(vars.begin(), vars.end(), label.begin(), label.end())) return offset[i] + k;
    }
    throw std::logic_error("decompose_query: no atom carries the shared variables");
  };
  for (std::size_t e = 0; e < d.skeleton.tree.edges.size(); ++e) {
    auto [i, j] = d.skeleton.tree.edges[e];
    const auto& label = d.skeleton.labels[e];
    d.tree.edges.emplace_back(connector(i, label), connector(j, label));
  }
  a.verdict = "acyclic";
  a.decomposition = std::move(d);
  return a;
}

std::optional<QueryDecomposition> decompose_query(const FcCq& q, const DecomposeOptions& opt) {
  return analyze_query(q, opt).decomposition;
}

bool validate_join_tree(const Tree& t, const std::vector<BinaryAtom>& atoms) {
  if (t.size != atoms.size()) throw std::invalid_argument("validate_join_tree: tree and atoms differ in size");
  Hypergraph h;
  for (const auto& a : atoms) h.push_back(a.vars());
  return is_join_tree(t, h);
}

}  // namespace fcq
