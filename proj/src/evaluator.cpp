#include "fcq/evaluator.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace fcq {

std::set<std::vector<FactorId>> AtomRelation::tuples() const {
  std::set<std::vector<FactorId>> out;
  const std::size_t a = arity();
  if (a == 0) {
    if (!data.empty()) out.insert({});
    return out;
  }
  for (std::size_t r = 0; r < rows(); ++r) out.insert(std::vector<FactorId>(data.begin() + r * a, data.begin() + (r + 1) * a));
  return out;
}

AtomRelation materialize(const BinaryAtom& atom, const WordIndex& idx) {
  AtomRelation rel;
  std::vector<Var> slots{atom.lhs};
  slots.insert(slots.end(), atom.rhs.begin(), atom.rhs.end());
  std::vector<int> column_of_slot;
  for (const auto& v : slots) {
    if (is_universe(v)) { column_of_slot.push_back(-1); continue; }
    auto it = std::find(rel.columns.begin(), rel.columns.end(), v);
    if (it == rel.columns.end()) {
      rel.columns.push_back(v);
      column_of_slot.push_back(static_cast<int>(rel.columns.size()) - 1);
    } else {
      column_of_slot.push_back(-2);  // repeated slot, value already recorded
    }
  }

  if (atom.rhs.size() == 1) {
    // copy equation: identity over the distinct factors
    if (rel.columns.empty()) {
      rel.data.push_back(0);  // U = U
    } else if (rel.columns.size() == 1 && (is_universe(atom.lhs) || is_universe(atom.rhs[0]))) {
      rel.data.push_back(idx.factor_id(idx.whole()));
    } else if (rel.columns.size() == 1) {
      for (FactorId f = 0; f < idx.factor_count(); ++f) rel.data.push_back(f);
    } else {
      for (FactorId f = 0; f < idx.factor_count(); ++f) {
        rel.data.push_back(f);
        rel.data.push_back(f);
      }
    }
    return rel;
  }
  if (atom.rhs.size() != 2) throw std::invalid_argument("materialize: atom is not binary");

  auto cursor = idx.enumerate_binary({atom.lhs, atom.rhs[0], atom.rhs[1]});
  std::size_t count = 0;
  while (auto t = cursor.next()) {
    ++count;
    const Span spans[3] = {t->lhs, t->rhs1, t->rhs2};
    for (int s = 0; s < 3; ++s)
      if (column_of_slot[s] >= 0) rel.data.push_back(idx.factor_id(spans[s]));
  }
  if (rel.columns.empty() && count > 0) rel.data.push_back(0);  // all slots are U
  return rel;
}

AtomRelation materialize(const RegexConstraint& c, const WordIndex& idx) {
  AtomRelation rel;
  Nfa nfa(c.regex);
  if (is_universe(c.var)) {
    if (nfa.matches(idx.word())) rel.data.push_back(0);
    return rel;
  }
  rel.columns.push_back(c.var);
  for (FactorId f = 0; f < idx.factor_count(); ++f)
    if (nfa.matches(idx.factor_string(f))) rel.data.push_back(f);
  return rel;
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<FactorId>& k) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : k) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

// Keeps the rows of r that agree with some row of s on shared columns.
void semijoin(AtomRelation& r, const AtomRelation& s) {
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  for (std::size_t i = 0; i < r.arity(); ++i)
    for (std::size_t j = 0; j < s.arity(); ++j)
      if (r.columns[i] == s.columns[j]) shared.emplace_back(i, j);
  if (shared.empty()) {
    if (s.rows() == 0) r.data.clear();
    return;
  }
  std::unordered_set<std::vector<FactorId>, KeyHash> keys;
  std::vector<FactorId> key(shared.size());
  for (std::size_t row = 0; row < s.rows(); ++row) {
    for (std::size_t k = 0; k < shared.size(); ++k) key[k] = s.data[row * s.arity() + shared[k].second];
    keys.insert(key);
  }
  std::vector<FactorId> kept;
  const std::size_t a = r.arity();
  for (std::size_t row = 0; row < r.rows(); ++row) {
    for (std::size_t k = 0; k < shared.size(); ++k) key[k] = r.data[row * a + shared[k].first];
    if (keys.count(key)) kept.insert(kept.end(), r.data.begin() + row * a, r.data.begin() + (row + 1) * a);
  }
  r.data = std::move(kept);
}

void restrict_to(AtomRelation& r, const Var& v, FactorId value) {
  auto it = std::find(r.columns.begin(), r.columns.end(), v);
  if (it == r.columns.end()) return;
  const std::size_t c = it - r.columns.begin(), a = r.arity();
  std::vector<FactorId> kept;
  for (std::size_t row = 0; row < r.rows(); ++row)
    if (r.data[row * a + c] == value) kept.insert(kept.end(), r.data.begin() + row * a, r.data.begin() + (row + 1) * a);
  r.data = std::move(kept);
}

}  // namespace

std::shared_ptr<Evaluation> Evaluation::create(const QueryDecomposition& qd, const WordIndex& idx, EvalOptions opt) {
  return std::shared_ptr<Evaluation>(new Evaluation(qd, idx, opt));
}

Evaluation::Evaluation(const QueryDecomposition& qd, const WordIndex& idx, EvalOptions opt)
    : idx_(&idx), head_(qd.head) {
  const std::size_t nf = idx.factor_count();
  std::map<Var, std::vector<char>> domain;
  auto dom = [&](const Var& v) -> std::vector<char>& {
    auto it = domain.find(v);
    if (it == domain.end()) it = domain.emplace(v, std::vector<char>(nf, 1)).first;
    return it->second;
  };
  bool dead = false;
  for (const auto& c : qd.constraints) {
    AtomRelation r = materialize(c, idx);
    if (is_universe(c.var)) {
      if (r.rows() == 0) dead = true;
      continue;
    }
    std::vector<char> allowed(nf, 0);
    for (auto f : r.data) allowed[f] = 1;
    auto& d = dom(c.var);
    for (std::size_t f = 0; f < nf; ++f) d[f] = d[f] && allowed[f];
  }

  std::set<Var> in_atoms;
  std::size_t total = 0;
  for (const auto& atom : qd.atoms) {
    AtomRelation r = materialize(atom, idx);
    total += r.rows();
    if (opt.budget && total > opt.budget) throw BudgetExceeded("evaluation budget exceeded");
    // domain filters, fused into the materialized relation
    const std::size_t a = r.arity();
    std::vector<const std::vector<char>*> filters;
    for (const auto& v : r.columns) {
      in_atoms.insert(v);
      auto it = domain.find(v);
      filters.push_back(it == domain.end() ? nullptr : &it->second);
    }
    if (a > 0) {
      std::vector<FactorId> kept;
      for (std::size_t row = 0; row < r.rows(); ++row) {
        bool ok = true;
        for (std::size_t c = 0; c < a && ok; ++c)
          if (filters[c] && !(*filters[c])[r.data[row * a + c]]) ok = false;
        if (ok) kept.insert(kept.end(), r.data.begin() + row * a, r.data.begin() + (row + 1) * a);
      }
      r.data = std::move(kept);
    }
    base_.push_back(std::move(r));
  }

  // variables outside every atom live in their own unary relation
  std::vector<Var> loose;
  auto add_loose = [&](const Var& v) {
    if (!is_universe(v) && !in_atoms.count(v) && std::find(loose.begin(), loose.end(), v) == loose.end())
      loose.push_back(v);
  };
  for (const auto& c : qd.constraints) add_loose(c.var);
  for (const auto& h : head_) add_loose(h);
  for (const auto& v : loose) {
    AtomRelation r;
    r.columns.push_back(v);
    auto& d = dom(v);
    for (FactorId f = 0; f < nf; ++f)
      if (d[f]) r.data.push_back(f);
    base_.push_back(std::move(r));
  }

  const std::size_t n = base_.size();
  adj_.assign(n, {});
  for (auto [a, b] : qd.tree.edges) {
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }
  parent_.assign(n, -2);
  for (std::size_t root = 0; root < n; ++root) {
    if (parent_[root] != -2) continue;
    parent_[root] = -1;
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      order_.push_back(u);
      for (auto it = adj_[u].rbegin(); it != adj_[u].rend(); ++it)
        if (parent_[*it] == -2) {
          parent_[*it] = static_cast<long>(u);
          stack.push_back(*it);
        }
    }
  }

  if (dead) {
    for (auto& r : base_) r.data.clear();
    satisfiable_ = false;
    return;
  }
  reduce(base_);
  satisfiable_ = std::all_of(base_.begin(), base_.end(), [](const AtomRelation& r) { return r.rows() > 0; });
}

void Evaluation::reduce(std::vector<AtomRelation>& rels) const {
  for (auto it = order_.rbegin(); it != order_.rend(); ++it)
    if (parent_[*it] >= 0) semijoin(rels[parent_[*it]], rels[*it]);
  for (auto u : order_)
    if (parent_[u] >= 0) semijoin(rels[u], rels[parent_[u]]);
}

std::vector<FactorId> Evaluation::candidates(const std::vector<AtomRelation>& rels, const Var& v) const {
  for (const auto& r : rels) {
    auto it = std::find(r.columns.begin(), r.columns.end(), v);
    if (it == r.columns.end()) continue;
    const std::size_t c = it - r.columns.begin();
    std::vector<FactorId> out;
    for (std::size_t row = 0; row < r.rows(); ++row) out.push_back(r.data[row * r.arity() + c]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  return {};
}

AnswerStream::AnswerStream(std::shared_ptr<const Evaluation> ev) : ev_(std::move(ev)) {
  if (!ev_->satisfiable_) {
    boolean_done_ = true;
    return;
  }
  if (!ev_->head_.empty()) levels_.push_back({ev_->base_, ev_->candidates(ev_->base_, ev_->head_[0]), 0});
}

std::optional<AnswerTuple> AnswerStream::next() {
  const auto& head = ev_->head_;
  if (head.empty()) {
    if (boolean_done_) return std::nullopt;
    boolean_done_ = true;
    return AnswerTuple{};
  }
  while (!levels_.empty()) {
    Level& top = levels_.back();
    if (top.pos >= top.candidates.size()) {
      levels_.pop_back();
      continue;
    }
    FactorId v = top.candidates[top.pos++];
    const std::size_t depth = levels_.size() - 1;
    if (depth + 1 == head.size()) {
      std::vector<FactorId> ids;
      for (const auto& l : levels_) ids.push_back(l.candidates[l.pos - 1]);
      if (!emitted_.insert(ids).second) throw std::logic_error("answer stream: duplicate answer");
      AnswerTuple t;
      for (auto id : ids) t.emplace_back(ev_->idx_->factor_string(id));
      return t;
    }
    std::vector<AtomRelation> rels = top.rels;
    for (auto& r : rels) restrict_to(r, head[depth], v);
    ev_->reduce(rels);
    auto cands = ev_->candidates(rels, head[depth + 1]);
    levels_.push_back({std::move(rels), std::move(cands), 0});
  }
  return std::nullopt;
}

bool model_check(const QueryDecomposition& qd, const std::string& w, EvalOptions opt) {
  WordIndex idx(w);
  return Evaluation::create(qd, idx, opt)->model_check();
}

AnswerSet enumerate_answers(const QueryDecomposition& qd, const std::string& w, EvalOptions opt) {
  WordIndex idx(w);
  auto stream = Evaluation::create(qd, idx, opt)->answers();
  AnswerSet out;
  while (auto t = stream.next()) out.insert(std::move(*t));
  return out;
}

}  // namespace fcq
