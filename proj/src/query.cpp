#include "fcq/query.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_set>

namespace fcq {

Pattern pattern_of(const std::vector<Var>& vars) {
  Pattern p;
  for (const auto& v : vars) p.push_back(Term::variable(v));
  return p;
}

std::vector<Var> pattern_vars(const Pattern& p) {
  std::vector<Var> out;
  for (const auto& t : p)
    if (!t.terminal && std::find(out.begin(), out.end(), t.var) == out.end()) out.push_back(t.var);
  return out;
}

bool terminal_free(const Pattern& p) {
  return std::none_of(p.begin(), p.end(), [](const Term& t) { return t.terminal; });
}

bool mentions(const Pattern& p, const Var& v) {
  return std::any_of(p.begin(), p.end(), [&](const Term& t) { return !t.terminal && t.var == v; });
}

std::vector<Var> FcCq::variables() const {
  std::vector<Var> out;
  auto add = [&](const Var& v) {
    if (!is_universe(v) && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  for (const auto& e : equations) {
    add(e.lhs);
    for (const auto& t : e.rhs)
      if (!t.terminal) add(t.var);
  }
  for (const auto& c : constraints) add(c.var);
  return out;
}

namespace {

class QueryParser {
 public:
  explicit QueryParser(const std::string& text) : t_(text) {}

  FcCq parse() {
    FcCq q;
    expect("Ans");
    expect("(");
    if (peek() != ')') {
      while (true) {
        std::size_t at = pos();
        Var v = identifier();
        if (is_universe(v)) throw ParseError("universe variable U cannot be a head variable", at);
        if (std::find(q.head.begin(), q.head.end(), v) != q.head.end())
          throw ParseError("duplicate head variable '" + v + "'", at);
        q.head.push_back(v);
        if (peek() == ',') { ++i_; continue; }
        break;
      }
    }
    expect(")");
    expect(":-");
    do {
      atom(q);
    } while (peek() == ',' && ++i_);
    skip();
    if (i_ != t_.size()) throw ParseError("unexpected trailing input", i_);
    auto body = q.variables();
    for (const auto& h : q.head)
      if (std::find(body.begin(), body.end(), h) == body.end())
        throw ParseError("head variable '" + h + "' does not occur in the body", 0);
    return q;
  }

 private:
  std::size_t pos() { skip(); return i_; }
  void skip() {
    while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) ++i_;
  }
  char peek() {
    skip();
    return i_ < t_.size() ? t_[i_] : '\0';
  }
  void expect(std::string_view tok) {
    skip();
    if (t_.compare(i_, tok.size(), tok) != 0)
      throw ParseError("expected '" + std::string(tok) + "'", i_);
    i_ += tok.size();
  }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  Var identifier() {
    skip();
    std::size_t s = i_;
    if (i_ < t_.size() && (std::isalpha(static_cast<unsigned char>(t_[i_])) || t_[i_] == '$')) {
      ++i_;
      while (i_ < t_.size() && ident_char(t_[i_])) ++i_;
    }
    if (i_ == s || (t_[s] == '$' && i_ == s + 1)) throw ParseError("expected identifier", s);
    return t_.substr(s, i_ - s);
  }

  void atom(FcCq& q) {
    Var v = identifier();
    skip();
    if (peek() == '=') {
      ++i_;
      WordEquation eq{v, {}};
      do {
        term(eq.rhs);
      } while (peek() == '.' && ++i_);
      q.equations.push_back(std::move(eq));
      return;
    }
    if (t_.compare(i_, 2, "in") == 0 && (i_ + 2 >= t_.size() || !ident_char(t_[i_ + 2]))) {
      i_ += 2;
      expect("/");
      std::size_t start = i_;
      while (i_ < t_.size() && t_[i_] != '/') i_ += t_[i_] == '\\' ? 2 : 1;
      if (i_ >= t_.size()) throw ParseError("unterminated regular expression", start);
      std::string body = t_.substr(start, i_ - start);
      ++i_;
      try {
        q.constraints.push_back({v, parse_regex(body)});
      } catch (const ParseError& e) {
        throw ParseError(std::string("regex syntax error: ") + e.what(), start + e.position());
      }
      return;
    }
    throw ParseError("expected '=' or 'in' after variable", i_);
  }

  void term(Pattern& p) {
    if (peek() == '"') {
      std::size_t start = i_++;
      std::size_t before = p.size();
      while (i_ < t_.size() && t_[i_] != '"') {
        if (t_[i_] == '\\' && i_ + 1 < t_.size()) ++i_;
        p.push_back(Term::symbol(t_[i_++]));
      }
      if (i_ >= t_.size()) throw ParseError("unterminated string", start);
      ++i_;
      if (p.size() == before) throw ParseError("empty terminal string", start);
      return;
    }
    p.push_back(Term::variable(identifier()));
  }

  const std::string& t_;
  std::size_t i_ = 0;
};

}  // namespace

FcCq parse_query(const std::string& text) { return QueryParser(text).parse(); }

std::string to_string(const Pattern& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size();) {
    if (!out.empty()) out += ".";
    if (!p[i].terminal) {
      out += p[i++].var;
      continue;
    }
    out += '"';
    for (; i < p.size() && p[i].terminal; ++i) {
      if (p[i].letter == '"' || p[i].letter == '\\') out += '\\';
      out += p[i].letter;
    }
    out += '"';
  }
  return out;
}

std::string to_string(const WordEquation& e) { return e.lhs + " = " + to_string(e.rhs); }
std::string to_string(const RegexConstraint& c) { return c.var + " in /" + to_string(c.regex) + "/"; }

std::string to_string(const FcCq& q) {
  std::string out = "Ans(";
  for (std::size_t i = 0; i < q.head.size(); ++i) out += (i ? "," : "") + q.head[i];
  out += ") :- ";
  bool first = true;
  for (const auto& e : q.equations) {
    out += (first ? "" : ", ") + to_string(e);
    first = false;
  }
  for (const auto& c : q.constraints) {
    out += (first ? "" : ", ") + to_string(c);
    first = false;
  }
  return out;
}

std::string apply(const Pattern& p, const std::map<Var, std::string>& values, const std::string& universe) {
  std::string out;
  for (const auto& t : p) {
    if (t.terminal) { out += t.letter; continue; }
    if (is_universe(t.var)) { out += universe; continue; }
    auto it = values.find(t.var);
    if (it == values.end()) throw ContractError("unbound variable " + t.var);
    out += it->second;
  }
  return out;
}

bool satisfies(const Substitution& sigma, const FcCq& q) {
  const std::string& w = sigma.word;
  const Span whole{1, static_cast<std::uint32_t>(w.size()) + 1};
  std::map<Var, std::string> values;
  for (const auto& [v, s] : sigma.assignment) {
    if (s.start < 1 || s.start > s.end || s.end > whole.end) return false;
    if (is_universe(v) && w.substr(s.start - 1, s.length()) != w) return false;
    values[v] = w.substr(s.start - 1, s.length());
  }
  for (const auto& v : q.variables())
    if (!values.count(v)) throw ContractError("unbound variable " + v);
  auto value = [&](const Var& v) { return is_universe(v) ? w : values.at(v); };
  for (const auto& e : q.equations)
    if (value(e.lhs) != apply(e.rhs, values, w)) return false;
  for (const auto& c : q.constraints)
    if (!Nfa(c.regex).matches(value(c.var))) return false;
  return true;
}

namespace {

class OracleSearch {
 public:
  OracleSearch(const FcCq& q, const std::string& w) : q_(q), w_(w), vars_(q.variables()) {
    for (std::size_t i = 0; i < vars_.size(); ++i) slot_[vars_[i]] = static_cast<int>(i);
    WordIndex idx(w);
    for (FactorId f = 0; f < idx.factor_count(); ++f) factors_.emplace_back(idx.factor_string(f));
    automata_.resize(vars_.size());
    for (const auto& c : q.constraints) {
      auto nfa = std::make_shared<Nfa>(c.regex);
      if (is_universe(c.var)) {
        if (!nfa->matches(w)) dead_ = true;
      } else {
        automata_[slot_.at(c.var)].push_back(nfa);
      }
    }
    value_.resize(vars_.size());
  }

  std::size_t factor_count() const { return factors_.size(); }
  std::size_t var_count() const { return vars_.size(); }

  AnswerSet run() {
    if (!dead_) search();
    return answers_;
  }

 private:
  const std::string* known(const Var& v) const {
    if (is_universe(v)) return &w_;
    const auto& val = value_[slot_.at(v)];
    return val ? &*val : nullptr;
  }

  // Checks what can be read off an equation with the current partial
  // assignment: the assigned prefix and suffix of the rhs must match the
  // lhs, and the rhs cannot be longer than the lhs.
  bool plausible(const WordEquation& e) const {
    const std::string* lhs = known(e.lhs);
    const auto& rhs = e.rhs;
    std::size_t fixed_len = 0;
    bool complete = true;
    for (const auto& t : rhs) {
      if (t.terminal) { ++fixed_len; continue; }
      if (const std::string* s = known(t.var)) fixed_len += s->size();
      else complete = false;
    }
    if (!lhs) {
      if (!complete) return true;
      std::string image = image_of(rhs);
      return w_.find(image) != std::string::npos;
    }
    if (fixed_len > lhs->size() || (complete && fixed_len != lhs->size())) return false;
    std::size_t p = 0;
    for (const auto& t : rhs) {
      std::string_view piece;
      if (t.terminal) piece = std::string_view(&t.letter, 1);
      else if (const std::string* s = known(t.var)) piece = *s;
      else break;
      if (lhs->compare(p, piece.size(), piece) != 0) return false;
      p += piece.size();
    }
    std::size_t q = lhs->size();
    for (auto it = rhs.rbegin(); it != rhs.rend(); ++it) {
      std::string_view piece;
      if (it->terminal) piece = std::string_view(&it->letter, 1);
      else if (const std::string* s = known(it->var)) piece = *s;
      else break;
      if (piece.size() > q || lhs->compare(q - piece.size(), piece.size(), piece) != 0) return false;
      q -= piece.size();
    }
    return true;
  }

  std::string image_of(const Pattern& p) const {
    std::string out;
    for (const auto& t : p) out += t.terminal ? std::string(1, t.letter) : *known(t.var);
    return out;
  }

  std::vector<std::string> candidates(int v) const {
    const Var& name = vars_[v];
    std::optional<std::vector<std::string>> best;
    auto offer = [&](std::vector<std::string> c) {
      if (!best || c.size() < best->size()) best = std::move(c);
    };
    for (const auto& e : q_.equations) {
      const std::string* lhs = known(e.lhs);
      if (e.lhs == name && !lhs) {
        bool complete = true;
        for (const auto& t : e.rhs)
          if (!t.terminal && !known(t.var)) complete = false;
        if (complete) offer({image_of(e.rhs)});
        continue;
      }
      if (!lhs) continue;
      // walk from the left up to the first unassigned term
      std::size_t p = 0;
      for (const auto& t : e.rhs) {
        if (t.terminal) { ++p; continue; }
        if (const std::string* s = known(t.var)) { p += s->size(); continue; }
        if (t.var == name && p <= lhs->size()) {
          std::vector<std::string> c;
          for (std::size_t len = 0; p + len <= lhs->size(); ++len) c.push_back(lhs->substr(p, len));
          offer(std::move(c));
        }
        break;
      }
      std::size_t q = lhs->size();
      for (auto it = e.rhs.rbegin(); it != e.rhs.rend(); ++it) {
        std::size_t len = it->terminal ? 1 : (known(it->var) ? known(it->var)->size() : 0);
        if (it->terminal || known(it->var)) {
          if (len > q) break;
          q -= len;
          continue;
        }
        if (it->var == name) {
          std::vector<std::string> c;
          for (std::size_t l = 0; l <= q; ++l) c.push_back(lhs->substr(q - l, l));
          offer(std::move(c));
        }
        break;
      }
    }
    if (!best) return factors_;
    return *best;
  }

  bool accepted(int v, const std::string& s) const {
    for (const auto& a : automata_[v])
      if (!a->matches(s)) return false;
    return true;
  }

  void search() {
    int pick = -1;
    std::vector<std::string> cand;
    for (int v = 0; v < static_cast<int>(vars_.size()); ++v) {
      if (value_[v]) continue;
      auto c = candidates(v);
      if (pick < 0 || c.size() < cand.size()) {
        pick = v;
        cand = std::move(c);
      }
    }
    if (pick < 0) {
      record();
      return;
    }
    std::unordered_set<std::string> seen;
    for (auto& c : cand) {
      if (!seen.insert(c).second) continue;
      if (w_.find(c) == std::string::npos || !accepted(pick, c)) continue;
      value_[pick] = c;
      bool ok = std::all_of(q_.equations.begin(), q_.equations.end(),
                            [&](const WordEquation& e) { return plausible(e); });
      if (ok) search();
      value_[pick].reset();
    }
  }

  void record() {
    for (const auto& e : q_.equations)
      if (*known(e.lhs) != image_of(e.rhs)) return;
    AnswerTuple t;
    for (const auto& h : q_.head) t.push_back(*known(h));
    answers_.insert(std::move(t));
  }

  const FcCq& q_;
  const std::string& w_;
  std::vector<Var> vars_;
  std::map<Var, int> slot_;
  std::vector<std::string> factors_;
  std::vector<std::vector<std::shared_ptr<Nfa>>> automata_;
  std::vector<std::optional<std::string>> value_;
  AnswerSet answers_;
  bool dead_ = false;
};

}  // namespace

AnswerSet oracle_eval(const FcCq& q, const std::string& w, double budget) {
  OracleSearch s(q, w);
  double cost = static_cast<double>(s.var_count()) * std::log2(static_cast<double>(s.factor_count()) + 1.0);
  if (cost > budget) throw BudgetExceeded("oracle budget exceeded");
  return s.run();
}

}  // namespace fcq
