#include "fcq/spanner.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace fcq {

namespace {

using K = Regex::Kind;

// Returns the bound variables, recording the first functionality or
// synchronization problem it meets.
std::set<Var> check(const RegexPtr& r, bool under_star, RegexFormula& f) {
  auto fail_functional = [&](const std::string& why) {
    if (f.functional) f.diagnostic = why;
    f.functional = false;
    f.synchronized = false;
  };
  switch (r->kind) {
    case K::Empty: case K::Epsilon: case K::Letter: case K::Any:
      return {};
    case K::Star: case K::Plus: {
      auto v = check(r->left, true, f);
      if (!v.empty()) fail_functional("variable bound under a star");
      return v;
    }
    case K::Concat: {
      auto a = check(r->left, under_star, f);
      auto b = check(r->right, under_star, f);
      for (const auto& x : b)
        if (a.count(x)) fail_functional("variable " + x + " bound twice");
      a.insert(b.begin(), b.end());
      return a;
    }
    case K::Union: {
      auto a = check(r->left, under_star, f);
      auto b = check(r->right, under_star, f);
      if (a != b) fail_functional("union branches bind different variables");
      if (!a.empty() || !b.empty()) {
        if (f.synchronized && f.functional) f.diagnostic = "variable bound under a union";
        f.synchronized = false;
      }
      a.insert(b.begin(), b.end());
      return a;
    }
    case K::Bind: {
      auto v = check(r->left, under_star, f);
      if (v.count(r->var)) fail_functional("variable " + r->var + " bound inside its own binding");
      if (under_star) fail_functional("variable bound under a star");
      v.insert(r->var);
      return v;
    }
  }
  return {};
}

}  // namespace

RegexFormula analyze_formula(const RegexPtr& expr) {
  RegexFormula f{expr, true, true, {}};
  check(expr, false, f);
  return f;
}

RegexFormula parse_regex_formula(const std::string& text) { return analyze_formula(parse_regex(text, true)); }

std::vector<Var> Sercq::svars() const {
  std::vector<Var> out;
  std::function<void(const RegexPtr&)> go = [&](const RegexPtr& r) {
    if (!r) return;
    if (r->kind == K::Bind && std::find(out.begin(), out.end(), r->var) == out.end()) out.push_back(r->var);
    go(r->left);
    go(r->right);
  };
  for (const auto& f : formulas) go(f.expr);
  return out;
}

namespace {

std::vector<Var> var_list(const std::string& body, std::size_t at) {
  std::vector<Var> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw ParseError("empty variable name", at);
    out.push_back(cur);
    cur.clear();
  };
  for (char c : body) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == ',') { flush(); continue; }
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') throw ParseError("bad variable name", at);
    cur += c;
  }
  if (!cur.empty() || !out.empty()) flush();
  return out;
}

}  // namespace

Sercq parse_sercq(const std::string& text) {
  Sercq p;
  std::size_t i = 0;
  auto skip = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  auto starts = [&](const char* kw) {
    std::size_t n = std::char_traits<char>::length(kw);
    return text.compare(i, n, kw) == 0;
  };
  auto bracket = [&]() {
    std::size_t open = text.find('[', i);
    std::size_t close = text.find(']', open);
    if (open == std::string::npos || close == std::string::npos) throw ParseError("expected [...]", i);
    std::string body = text.substr(open + 1, close - open - 1);
    std::size_t at = open + 1;
    i = close + 1;
    return var_list(body, at);
  };
  bool projected = false;
  skip();
  while (true) {
    skip();
    if (starts("proj[")) {
      if (projected) throw ParseError("duplicate proj[...]", i);
      p.projection = bracket();
      projected = true;
    } else if (starts("eq[")) {
      std::size_t at = i;
      auto v = bracket();
      if (v.size() != 2) throw ParseError("eq[...] takes two variables", at);
      p.equalities.emplace_back(v[0], v[1]);
    } else {
      break;
    }
  }
  skip();
  std::vector<std::pair<std::string, std::size_t>> parts;
  if (starts("join")) {
    i += 4;
    skip();
    if (i >= text.size() || text[i] != '(') throw ParseError("expected '(' after join", i);
    ++i;
    int depth = 0;
    std::size_t start = i;
    for (; i < text.size(); ++i) {
      char c = text[i];
      if (c == '\\') { ++i; continue; }
      if (c == '(' || c == '{') ++depth;
      else if ((c == ')' || c == '}') && depth > 0) --depth;
      else if (c == ')' && depth == 0) break;
      else if (c == ';' && depth == 0) {
        parts.emplace_back(text.substr(start, i - start), start);
        start = i + 1;
      }
    }
    if (i >= text.size()) throw ParseError("unterminated join(...)", start);
    parts.emplace_back(text.substr(start, i - start), start);
    ++i;
    skip();
    if (i != text.size()) throw ParseError("unexpected trailing input", i);
  } else {
    parts.emplace_back(text.substr(i), i);
  }
  for (const auto& [src, at] : parts) {
    try {
      p.formulas.push_back(parse_regex_formula(src));
    } catch (const ParseError& e) {
      throw ParseError(std::string("formula: ") + e.what(), at + e.position());
    }
  }
  auto vars = p.svars();
  if (!projected) p.projection = vars;
  auto known = [&](const Var& v) { return std::find(vars.begin(), vars.end(), v) != vars.end(); };
  for (const auto& v : p.projection)
    if (!known(v)) throw ParseError("projected variable '" + v + "' is not bound by any formula", 0);
  for (const auto& [a, b] : p.equalities)
    if (!known(a) || !known(b)) throw ParseError("equality variable is not bound by any formula", 0);
  return p;
}

std::string to_string(const Sercq& p) {
  std::string out = "proj[";
  for (std::size_t i = 0; i < p.projection.size(); ++i) out += (i ? "," : "") + p.projection[i];
  out += "]";
  for (const auto& [a, b] : p.equalities) out += " eq[" + a + "," + b + "]";
  out += " join(";
  for (std::size_t i = 0; i < p.formulas.size(); ++i) out += (i ? " ; " : " ") + to_string(p.formulas[i].expr);
  out += " )";
  return out;
}

namespace {

class Matcher {
 public:
  Matcher(const std::string& w, std::size_t budget) : w_(w), budget_(budget) {}

  using Result = std::set<std::pair<std::uint32_t, SpanTuple>>;

  const Result& at(const Regex* r, std::uint32_t i) {
    auto key = std::make_pair(r, i);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Result res = compute(r, i);
    produced_ += res.size();
    if (produced_ > budget_) throw BudgetExceeded("spanner oracle budget exceeded");
    return memo_.emplace(key, std::move(res)).first->second;
  }

 private:
  static bool merge(const SpanTuple& a, const SpanTuple& b, SpanTuple& out) {
    out = a;
    for (const auto& [v, s] : b)
      if (!out.emplace(v, s).second) throw std::invalid_argument("formula is not functional");
    return true;
  }

  Result compute(const Regex* r, std::uint32_t i) {
    const std::uint32_t end = static_cast<std::uint32_t>(w_.size()) + 1;
    Result out;
    switch (r->kind) {
      case K::Empty:
        break;
      case K::Epsilon:
        out.insert({i, {}});
        break;
      case K::Letter:
        if (i < end && w_[i - 1] == r->letter) out.insert({i + 1, {}});
        break;
      case K::Any:
        if (i < end) out.insert({i + 1, {}});
        break;
      case K::Concat:
        for (const auto& [j, m1] : at(r->left.get(), i))
          for (const auto& [k, m2] : at(r->right.get(), j)) {
            SpanTuple m;
            merge(m1, m2, m);
            out.insert({k, std::move(m)});
          }
        break;
      case K::Union: {
        const auto& a = at(r->left.get(), i);
        const auto& b = at(r->right.get(), i);
        out.insert(a.begin(), a.end());
        out.insert(b.begin(), b.end());
        break;
      }
      case K::Star: case K::Plus: {
        std::set<std::uint32_t> reach;
        std::vector<std::uint32_t> todo;
        auto step = [&](std::uint32_t from) {
          for (const auto& [j, m] : at(r->left.get(), from)) {
            if (!m.empty()) throw std::invalid_argument("formula is not functional");
            if (reach.insert(j).second) todo.push_back(j);
          }
        };
        if (r->kind == K::Star) {
          reach.insert(i);
          todo.push_back(i);
        } else {
          step(i);
        }
        while (!todo.empty()) {
          auto j = todo.back();
          todo.pop_back();
          step(j);
        }
        for (auto j : reach) out.insert({j, {}});
        break;
      }
      case K::Bind:
        for (const auto& [j, m] : at(r->left.get(), i)) {
          if (m.count(r->var)) throw std::invalid_argument("formula is not functional");
          SpanTuple n = m;
          n[r->var] = Span{i, j};
          out.insert({j, std::move(n)});
        }
        break;
    }
    return out;
  }

  const std::string& w_;
  std::size_t budget_;
  std::size_t produced_ = 0;
  std::map<std::pair<const Regex*, std::uint32_t>, Result> memo_;
};

}  // namespace

std::set<SpanTuple> formula_matches(const RegexPtr& expr, const std::string& w, std::size_t budget) {
  Matcher m(w, budget);
  std::set<SpanTuple> out;
  const std::uint32_t end = static_cast<std::uint32_t>(w.size()) + 1;
  for (const auto& [j, mu] : m.at(expr.get(), 1))
    if (j == end) out.insert(mu);
  return out;
}

std::set<SpanTuple> spanner_eval_oracle(const Sercq& p, const std::string& w, std::size_t budget) {
  for (const auto& f : p.formulas)
    if (!f.functional) throw std::invalid_argument("spanner oracle: formula is not functional: " + f.diagnostic);
  std::vector<SpanTuple> acc{SpanTuple{}};
  for (const auto& f : p.formulas) {
    auto matches = formula_matches(f.expr, w, budget);
    std::vector<SpanTuple> next;
    for (const auto& t : acc)
      for (const auto& m : matches) {
        SpanTuple joined = t;
        bool ok = true;
        for (const auto& [v, s] : m) {
          auto [it, fresh] = joined.emplace(v, s);
          if (!fresh && it->second != s) { ok = false; break; }
        }
        if (ok) next.push_back(std::move(joined));
        if (next.size() > budget) throw BudgetExceeded("spanner oracle budget exceeded");
      }
    acc = std::move(next);
  }
  std::set<SpanTuple> out;
  for (const auto& t : acc) {
    bool ok = true;
    for (const auto& [a, b] : p.equalities) {
      const Span sa = t.at(a), sb = t.at(b);
      if (w.compare(sa.start - 1, sa.length(), w, sb.start - 1, sb.length()) != 0) { ok = false; break; }
    }
    if (!ok) continue;
    SpanTuple proj;
    for (const auto& v : p.projection) proj[v] = t.at(v);
    out.insert(std::move(proj));
  }
  return out;
}

Var prefix_var(const Var& x) { return x + "_P"; }
Var content_var(const Var& x) { return x + "_C"; }
Var suffix_var(const Var& x) { return x + "_S"; }

namespace {

class RealizationBuilder {
 public:
  explicit RealizationBuilder(FcCq& q) : q_(q) {}

  void formula(const RegexPtr& root, int index) {
    index_ = index;
    counter_ = 0;
    if (root->kind == K::Bind) {
      // the root variable would otherwise swallow x_C; keep both
      Var c = visit(root, {});
      q_.equations.push_back({kUniverse, {Term::variable(c)}});
    } else {
      visit(root, {}, kUniverse);
    }
  }

 private:
  Var fresh() { return "$s" + std::to_string(index_) + "_" + std::to_string(++counter_); }

  // Returns the variable standing for node r; `prefix` is the pattern of
  // variables covering the part of the word left of r.
  Var visit(const RegexPtr& r, const std::vector<Var>& prefix, const Var& forced = {}) {
    if (r->kind == K::Bind) {
      Var v = forced.empty() ? content_var(r->var) : forced;
      Var child = visit(r->left, prefix);
      q_.equations.push_back({v, {Term::variable(child)}});
      if (prefix.empty()) q_.constraints.push_back({prefix_var(r->var), Regex::epsilon()});
      else q_.equations.push_back({prefix_var(r->var), pattern_of(prefix)});
      return v;
    }
    if (r->kind == K::Concat && !variable_free(r)) {
      Var v = forced.empty() ? fresh() : forced;
      Var l = visit(r->left, prefix);
      auto right_prefix = prefix;
      right_prefix.push_back(l);
      Var rr = visit(r->right, right_prefix);
      q_.equations.push_back({v, {Term::variable(l), Term::variable(rr)}});
      return v;
    }
    Var v = forced.empty() ? fresh() : forced;
    q_.constraints.push_back({v, r});
    return v;
  }

  FcCq& q_;
  int index_ = 0;
  int counter_ = 0;
};

void require_synchronized(const Sercq& p) {
  for (const auto& f : p.formulas)
    if (!f.functional || !f.synchronized)
      throw std::invalid_argument("formula " + to_string(f.expr) + " is not synchronized: " + f.diagnostic);
}

}  // namespace

FcCq sercq_to_fccq(const Sercq& p) {
  require_synchronized(p);
  FcCq q;
  for (const auto& x : p.projection) {
    q.head.push_back(prefix_var(x));
    q.head.push_back(content_var(x));
  }
  for (const auto& [a, b] : p.equalities) q.equations.push_back({content_var(a), {Term::variable(content_var(b))}});
  RealizationBuilder builder(q);
  for (std::size_t i = 0; i < p.formulas.size(); ++i) builder.formula(p.formulas[i].expr, static_cast<int>(i) + 1);
  return q;
}

Substitution express(const SpanTuple& mu, const std::string& w) {
  Substitution s{w, {}};
  for (const auto& [x, span] : mu) {
    s.assignment[prefix_var(x)] = Span{1, span.start};
    s.assignment[content_var(x)] = span;
  }
  return s;
}

SpanTuple decode(const Substitution& sigma) {
  SpanTuple mu;
  for (const auto& [v, span] : sigma.assignment) {
    if (v.size() < 3 || v.compare(v.size() - 2, 2, "_P") != 0) continue;
    Var x = v.substr(0, v.size() - 2);
    auto c = sigma.assignment.find(content_var(x));
    if (c == sigma.assignment.end()) continue;
    std::uint32_t i = span.length() + 1;
    mu[x] = Span{i, i + c->second.length()};
  }
  return mu;
}

AnswerSet express_image(const Sercq& p, const std::string& w) {
  AnswerSet out;
  for (const auto& mu : spanner_eval_oracle(p, w)) {
    Substitution s = express(mu, w);
    AnswerTuple t;
    for (const auto& x : p.projection) {
      for (const Var& v : {prefix_var(x), content_var(x)}) {
        const Span sp = s.assignment.at(v);
        t.push_back(w.substr(sp.start - 1, sp.length()));
      }
    }
    out.insert(std::move(t));
  }
  return out;
}

namespace {

void flatten(const RegexPtr& r, std::vector<RegexPtr>& out) {
  if (r->kind == K::Concat) {
    flatten(r->left, out);
    flatten(r->right, out);
  } else {
    out.push_back(r);
  }
}

RegexPtr concat_all(const std::vector<RegexPtr>& parts, std::size_t from, std::size_t to) {
  RegexPtr r;
  for (std::size_t i = from; i < to; ++i) r = r ? Regex::concat(r, parts[i]) : parts[i];
  return r ? r : Regex::epsilon();
}

struct Shape {
  Var x;
  RegexPtr before, inside, after;
};

std::optional<Shape> pseudo_shape(const RegexPtr& r) {
  std::vector<RegexPtr> parts;
  flatten(r, parts);
  std::optional<std::size_t> at;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (variable_free(parts[i])) continue;
    if (at || parts[i]->kind != K::Bind || !variable_free(parts[i]->left)) return std::nullopt;
    at = i;
  }
  if (!at) return std::nullopt;
  return Shape{parts[*at]->var, concat_all(parts, 0, *at), parts[*at]->left, concat_all(parts, *at + 1, parts.size())};
}

}  // namespace

bool is_pseudo_acyclic(const Sercq& p) {
  return std::all_of(p.formulas.begin(), p.formulas.end(),
                     [](const RegexFormula& f) { return pseudo_shape(f.expr).has_value(); });
}

QueryDecomposition pseudo_acyclic_to_fccq(const Sercq& p) {
  if (!is_pseudo_acyclic(p)) throw ContractError("pseudo_acyclic_to_fccq: SERCQ is not pseudo-acyclic");
  QueryDecomposition d;
  for (const auto& x : p.projection) {
    d.head.push_back(prefix_var(x));
    d.head.push_back(content_var(x));
  }
  const auto vars = p.svars();
  std::map<Var, std::size_t> slot;
  for (std::size_t i = 0; i < vars.size(); ++i) slot[vars[i]] = i;

  // two atoms per variable: U = x_P.z and z = x_C.x_S
  std::vector<std::size_t> outer(vars.size()), inner(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const Var& x = vars[i];
    Var z = "$z_" + x;
    outer[i] = d.atoms.size();
    d.atoms.push_back({kUniverse, {prefix_var(x), z}});
    inner[i] = d.atoms.size();
    d.atoms.push_back({z, {content_var(x), suffix_var(x)}});
    d.tree.edges.emplace_back(outer[i], inner[i]);
  }
  for (const auto& f : p.formulas) {
    auto s = *pseudo_shape(f.expr);
    d.constraints.push_back({prefix_var(s.x), s.before});
    d.constraints.push_back({content_var(s.x), s.inside});
    d.constraints.push_back({suffix_var(s.x), s.after});
  }

  // spanning forest of the equality graph
  std::vector<std::size_t> uf(vars.size());
  std::iota(uf.begin(), uf.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) { return uf[a] == a ? a : uf[a] = find(uf[a]); };
  std::vector<std::vector<std::size_t>> adj(vars.size());
  for (const auto& [a, b] : p.equalities) {
    std::size_t i = slot.at(a), j = slot.at(b);
    if (find(i) == find(j)) continue;
    uf[find(i)] = find(j);
    adj[i].push_back(j);
    adj[j].push_back(i);
  }

  // Copy atoms hang off their parent's content atom; siblings are chained
  // so every x_C stays connected.
  std::vector<char> seen(vars.size(), 0);
  std::vector<std::size_t> roots;
  for (std::size_t r = 0; r < vars.size(); ++r) {
    if (seen[r]) continue;
    seen[r] = 1;
    roots.push_back(r);
    std::vector<std::pair<std::size_t, std::size_t>> stack{{r, inner[r]}};  // (var, atom holding its x_C)
    while (!stack.empty()) {
      auto [v, anchor] = stack.back();
      stack.pop_back();
      std::size_t prev = anchor;
      for (auto c : adj[v]) {
        if (seen[c]) continue;
        seen[c] = 1;
        std::size_t e = d.atoms.size();
        d.atoms.push_back({content_var(vars[v]), {content_var(vars[c])}});
        d.tree.edges.emplace_back(prev, e);
        d.tree.edges.emplace_back(inner[c], e);
        prev = e;
        stack.emplace_back(c, e);
      }
    }
  }
  for (std::size_t k = 1; k < roots.size(); ++k) d.tree.edges.emplace_back(inner[roots[k - 1]], inner[roots[k]]);
  d.tree.size = d.atoms.size();
  for (std::size_t i = 0; i < d.atoms.size(); ++i) d.block_of.push_back(i);
  d.normalized.query = d.query2();
  return d;
}

}  // namespace fcq
