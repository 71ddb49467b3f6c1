#include "fcq/normalizer.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fcq {

std::string to_string(Origin o) {
  switch (o) {
    case Origin::TerminalBlock: return "terminal-block";
    case Origin::SelfOccurrence: return "self-occurrence";
    case Origin::UniverseOccurrence: return "universe-occurrence";
    case Origin::Dedup: return "dedup";
  }
  return "?";
}

namespace {

class Normalizer {
 public:
  explicit Normalizer(const FcCq& q) {
    out_.query = q;
    for (const auto& v : q.variables()) used_.insert(v);
  }

  NormalizedFcCq run() {
    terminal_blocks();
    self_occurrences();
    universe_occurrences();
    dedup();
    return std::move(out_);
  }

 private:
  Var fresh(Origin o) {
    Var v;
    do {
      v = "$n" + std::to_string(++counter_);
    } while (used_.count(v));
    used_.insert(v);
    out_.provenance[v] = o;
    return v;
  }

  void epsilon(const Var& v) {
    out_.query.constraints.push_back({v, Regex::epsilon()});
  }

  void terminal_blocks() {
    for (auto& e : out_.query.equations) {
      Pattern rhs;
      for (std::size_t i = 0; i < e.rhs.size();) {
        if (!e.rhs[i].terminal) {
          rhs.push_back(e.rhs[i++]);
          continue;
        }
        std::string block;
        while (i < e.rhs.size() && e.rhs[i].terminal) block += e.rhs[i++].letter;
        Var z = fresh(Origin::TerminalBlock);
        out_.query.constraints.push_back({z, Regex::word(block)});
        rhs.push_back(Term::variable(z));
      }
      e.rhs = std::move(rhs);
    }
  }

  // Drops the first occurrence of `v` from the rhs and forces every
  // remaining variable to be empty: the lengths only add up that way.
  void force_rest_empty(const Pattern& rhs, const Var& v) {
    bool skipped = false;
    std::set<Var> done;
    for (const auto& t : rhs) {
      if (!skipped && t.var == v) { skipped = true; continue; }
      if (done.insert(t.var).second) epsilon(t.var);
    }
  }

  void self_occurrences() {
    for (auto& e : out_.query.equations) {
      if (!mentions(e.rhs, e.lhs)) continue;
      Pattern old = std::move(e.rhs);
      e.rhs = {Term::variable(fresh(Origin::SelfOccurrence))};
      force_rest_empty(old, e.lhs);
    }
  }

  void universe_occurrences() {
    for (auto& e : out_.query.equations) {
      if (!mentions(e.rhs, kUniverse)) continue;
      Pattern old = std::move(e.rhs);
      Var x = e.lhs;
      e.lhs = kUniverse;
      e.rhs = {Term::variable(x)};
      force_rest_empty(old, kUniverse);
    }
  }

  void dedup() {
    auto& eqs = out_.query.equations;
    for (std::size_t guard = 0;; ++guard) {
      if (guard > 100000) throw std::logic_error("normalize: deduplication did not converge");
      bool changed = false;
      for (std::size_t i = 0; i < eqs.size() && !changed; ++i) {
        for (std::size_t j = i + 1; j < eqs.size() && !changed; ++j) {
          if (eqs[i].rhs != eqs[j].rhs) continue;
          changed = true;
          if (eqs[i].lhs == eqs[j].lhs) {
            eqs.erase(eqs.begin() + j);
          } else if (is_universe(eqs[i].lhs)) {
            // keep U out of the rhs: orient the copy the other way
            eqs[j] = {kUniverse, {Term::variable(eqs[j].lhs)}};
          } else {
            eqs[j].rhs = {Term::variable(eqs[i].lhs)};
          }
        }
      }
      if (!changed) break;
    }
  }

  NormalizedFcCq out_;
  std::set<Var> used_;
  int counter_ = 0;
};

}  // namespace

NormalizedFcCq normalize(const FcCq& q) { return Normalizer(q).run(); }

bool is_normalized(const FcCq& q) {
  for (std::size_t i = 0; i < q.equations.size(); ++i) {
    const auto& e = q.equations[i];
    if (e.rhs.empty() || !terminal_free(e.rhs)) return false;
    if (mentions(e.rhs, e.lhs) || mentions(e.rhs, kUniverse)) return false;
    for (std::size_t j = i + 1; j < q.equations.size(); ++j)
      if (q.equations[j].rhs == e.rhs) return false;
  }
  return true;
}

}  // namespace fcq
