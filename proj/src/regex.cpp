#include "fcq/regex.hpp"

#include <cctype>
#include <functional>

namespace fcq {

namespace {

RegexPtr make(Regex r) { return std::make_shared<const Regex>(std::move(r)); }

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool reserved(char c) {
  switch (c) {
    case '|': case '*': case '+': case '(': case ')': case '{': case '}':
    case '_': case '%': case '\\': case '/': case 'S':
      return true;
    default:
      return false;
  }
}

class RegexParser {
 public:
  RegexParser(std::string_view text, bool bindings) : t_(text), bindings_(bindings) {}

  RegexPtr parse() {
    skip();
    if (at_end()) throw ParseError("empty regular expression", pos_);
    RegexPtr r = alternation();
    skip();
    if (!at_end()) throw ParseError(std::string("unexpected '") + t_[pos_] + "' in regular expression", pos_);
    return r;
  }

 private:
  bool at_end() const { return pos_ >= t_.size(); }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return at_end() ? '\0' : t_[pos_];
  }

  RegexPtr alternation() {
    RegexPtr r = concatenation();
    while (peek() == '|') {
      ++pos_;
      r = Regex::alt(r, concatenation());
    }
    return r;
  }

  RegexPtr concatenation() {
    RegexPtr r;
    while (true) {
      char c = peek();
      if (at_end() || c == '|' || c == ')' || c == '}') break;
      RegexPtr p = postfix();
      r = r ? Regex::concat(r, p) : p;
    }
    if (!r) throw ParseError("empty operand in regular expression", pos_);
    return r;
  }

  RegexPtr postfix() {
    RegexPtr r = atom();
    while (true) {
      char c = peek();
      if (c == '*') { ++pos_; r = Regex::star(r); }
      else if (c == '+') { ++pos_; r = Regex::plus(r); }
      else break;
    }
    return r;
  }

  RegexPtr atom() {
    skip();
    const std::size_t at = pos_;
    char c = t_[pos_];
    if (c == '(') {
      ++pos_;
      RegexPtr r = alternation();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return r;
    }
    if (c == '_') { ++pos_; return Regex::epsilon(); }
    if (c == '%') { ++pos_; return Regex::empty(); }
    if (c == '\\') {
      if (pos_ + 1 >= t_.size()) throw ParseError("dangling escape", pos_);
      pos_ += 2;
      return Regex::lit(t_[pos_ - 1]);
    }
    if (ident_start(c)) {
      std::size_t e = pos_;
      while (e < t_.size() && ident_char(t_[e])) ++e;
      if (e < t_.size() && t_[e] == '{') {
        if (!bindings_) throw ParseError("variable binding not allowed here", at);
        std::string name(t_.substr(pos_, e - pos_));
        pos_ = e + 1;
        RegexPtr body = alternation();
        if (peek() != '}') throw ParseError("expected '}'", pos_);
        ++pos_;
        return Regex::bind(std::move(name), body);
      }
    }
    if (c == 'S') { ++pos_; return Regex::any(); }
    if (reserved(c)) throw ParseError(std::string("unexpected '") + c + "' in regular expression", at);
    ++pos_;
    return Regex::lit(c);
  }

  std::string_view t_;
  bool bindings_;
  std::size_t pos_ = 0;
};

// precedence: 0 union, 1 concat, 2 postfix/atom
std::string print(const RegexPtr& r, int ctx) {
  using K = Regex::Kind;
  auto wrap = [&](std::string s, int prec) { return prec < ctx ? "(" + s + ")" : s; };
  switch (r->kind) {
    case K::Empty: return "%";
    case K::Epsilon: return "_";
    case K::Any: return "S";
    case K::Letter:
      if (reserved(r->letter) || std::isspace(static_cast<unsigned char>(r->letter)))
        return std::string("\\") + r->letter;
      return std::string(1, r->letter);
    case K::Concat: {
      std::string a = print(r->left, 1), b = print(r->right, 1);
      // keep a binding name from gluing onto preceding letters
      const Regex* first = r->right.get();
      while (first->kind == K::Concat || first->kind == K::Star || first->kind == K::Plus) first = first->left.get();
      std::string sep = first->kind == K::Bind ? " " : "";
      return wrap(a + sep + b, 1);
    }
    case K::Union: return wrap(print(r->left, 0) + "|" + print(r->right, 0), 0);
    case K::Star: return print(r->left, 2) + "*";
    case K::Plus: return print(r->left, 2) + "+";
    case K::Bind: return r->var + "{" + print(r->left, 0) + "}";
  }
  return "";
}

}  // namespace

RegexPtr Regex::empty() { return make({Kind::Empty, 0, {}, nullptr, nullptr}); }
RegexPtr Regex::epsilon() { return make({Kind::Epsilon, 0, {}, nullptr, nullptr}); }
RegexPtr Regex::any() { return make({Kind::Any, 0, {}, nullptr, nullptr}); }
RegexPtr Regex::lit(char c) { return make({Kind::Letter, c, {}, nullptr, nullptr}); }
RegexPtr Regex::word(std::string_view w) {
  if (w.empty()) return epsilon();
  RegexPtr r = lit(w[0]);
  for (std::size_t i = 1; i < w.size(); ++i) r = concat(r, lit(w[i]));
  return r;
}
RegexPtr Regex::concat(RegexPtr a, RegexPtr b) { return make({Kind::Concat, 0, {}, std::move(a), std::move(b)}); }
RegexPtr Regex::alt(RegexPtr a, RegexPtr b) { return make({Kind::Union, 0, {}, std::move(a), std::move(b)}); }
RegexPtr Regex::star(RegexPtr a) { return make({Kind::Star, 0, {}, std::move(a), nullptr}); }
RegexPtr Regex::plus(RegexPtr a) { return make({Kind::Plus, 0, {}, std::move(a), nullptr}); }
RegexPtr Regex::bind(std::string var, RegexPtr a) { return make({Kind::Bind, 0, std::move(var), std::move(a), nullptr}); }

RegexPtr parse_regex(std::string_view text, bool allow_bindings) {
  return RegexParser(text, allow_bindings).parse();
}

std::string to_string(const RegexPtr& r) { return print(r, 0); }

bool variable_free(const RegexPtr& r) {
  if (!r) return true;
  if (r->kind == Regex::Kind::Bind) return false;
  return variable_free(r->left) && variable_free(r->right);
}

std::set<std::string> bound_vars(const RegexPtr& r) {
  std::set<std::string> out;
  std::function<void(const RegexPtr&)> go = [&](const RegexPtr& n) {
    if (!n) return;
    if (n->kind == Regex::Kind::Bind) out.insert(n->var);
    go(n->left);
    go(n->right);
  };
  go(r);
  return out;
}

int Nfa::add(State s) {
  states_.push_back(s);
  return static_cast<int>(states_.size()) - 1;
}

// Returns the fragment start and its dangling exits as (state, slot).
std::pair<int, std::vector<std::pair<int, int>>> Nfa::build(const RegexPtr& r) {
  using K = Regex::Kind;
  using SK = State::Kind;
  auto patch = [&](const std::vector<std::pair<int, int>>& exits, int target) {
    for (auto [s, slot] : exits) (slot == 1 ? states_[s].out1 : states_[s].out2) = target;
  };
  switch (r->kind) {
    case K::Empty:
      return {add({SK::Split}), {}};
    case K::Epsilon: {
      int s = add({SK::Split});
      return {s, {{s, 1}}};
    }
    case K::Letter: {
      int s = add({SK::Letter, r->letter});
      return {s, {{s, 1}}};
    }
    case K::Any: {
      int s = add({SK::Any});
      return {s, {{s, 1}}};
    }
    case K::Concat: {
      auto a = build(r->left);
      auto b = build(r->right);
      patch(a.second, b.first);
      return {a.first, b.second};
    }
    case K::Union: {
      auto a = build(r->left);
      auto b = build(r->right);
      int s = add({SK::Split, 0, a.first, b.first});
      auto exits = a.second;
      exits.insert(exits.end(), b.second.begin(), b.second.end());
      return {s, exits};
    }
    case K::Star: {
      auto a = build(r->left);
      int s = add({SK::Split, 0, a.first, -1});
      patch(a.second, s);
      return {s, {{s, 2}}};
    }
    case K::Plus: {
      auto a = build(r->left);
      int s = add({SK::Split, 0, a.first, -1});
      patch(a.second, s);
      return {a.first, {{s, 2}}};
    }
    case K::Bind:
      throw std::invalid_argument("automaton: expression contains a variable binding");
  }
  return {-1, {}};
}

Nfa::Nfa(const RegexPtr& r) {
  auto [s, exits] = build(r);
  int acc = add({State::Kind::Accept});
  for (auto [st, slot] : exits) (slot == 1 ? states_[st].out1 : states_[st].out2) = acc;
  start_ = s;
}

void Nfa::closure(std::vector<int>& set, std::vector<char>& mark, int s) const {
  if (s < 0 || mark[s]) return;
  mark[s] = 1;
  if (states_[s].kind == State::Kind::Split) {
    closure(set, mark, states_[s].out1);
    closure(set, mark, states_[s].out2);
  } else {
    set.push_back(s);
  }
}

std::vector<char> Nfa::accepted_prefixes(std::string_view text) const {
  std::vector<char> out(text.size() + 1, 0);
  std::vector<char> mark(states_.size(), 0);
  std::vector<int> cur, nxt;
  closure(cur, mark, start_);
  for (std::size_t k = 0;; ++k) {
    for (int s : cur)
      if (states_[s].kind == State::Kind::Accept) out[k] = 1;
    if (k == text.size() || cur.empty()) break;
    std::fill(mark.begin(), mark.end(), 0);
    nxt.clear();
    for (int s : cur) {
      const State& st = states_[s];
      if ((st.kind == State::Kind::Letter && st.letter == text[k]) || st.kind == State::Kind::Any)
        closure(nxt, mark, st.out1);
    }
    cur.swap(nxt);
  }
  return out;
}

bool Nfa::matches(std::string_view s) const { return accepted_prefixes(s).back() != 0; }

}  // namespace fcq
