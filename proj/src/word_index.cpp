#include "fcq/word_index.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace fcq {

std::string to_string(const Span& s) {
  return "[" + std::to_string(s.start) + "," + std::to_string(s.end) + ")";
}

namespace {

// Prefix doubling over ranks. Suffix n (0-based) is the empty one and acts
// as the sentinel: it sorts before everything else.
std::vector<std::uint32_t> suffix_array(const std::string& w) {
  const std::size_t n = w.size() + 1;
  std::vector<std::uint32_t> sa(n), rank(n), tmp(n);
  std::iota(sa.begin(), sa.end(), 0u);
  for (std::size_t i = 0; i < n; ++i)
    rank[i] = i + 1 < n ? static_cast<unsigned char>(w[i]) + 1u : 0u;
  for (std::size_t k = 1;; k <<= 1) {
    auto key = [&](std::uint32_t i) {
      std::uint32_t second = i + k < n ? rank[i + k] + 1 : 0;
      return std::pair(rank[i], second);
    };
    std::sort(sa.begin(), sa.end(), [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });
    tmp[sa[0]] = 0;
    for (std::size_t r = 1; r < n; ++r)
      tmp[sa[r]] = tmp[sa[r - 1]] + (key(sa[r - 1]) < key(sa[r]) ? 1 : 0);
    rank.swap(tmp);
    if (rank[sa[n - 1]] == n - 1) break;
  }
  return sa;
}

}  // namespace

WordIndex::WordIndex(std::string word) : word_(std::move(word)) {
  const std::uint32_t n = size();
  auto sa = suffix_array(word_);
  leaves_.resize(n + 1);
  rank_.assign(n + 2, 0);
  for (std::uint32_t r = 0; r <= n; ++r) {
    leaves_[r] = sa[r] + 1;
    rank_[sa[r] + 1] = r;
  }

  // Kasai
  lcp_.assign(n + 1, 0);
  std::uint32_t h = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t r = rank_[i + 1];
    if (r == 0) { h = 0; continue; }
    std::uint32_t j = leaves_[r - 1] - 1;
    while (i + h < n && j + h < n && word_[i + h] == word_[j + h]) ++h;
    lcp_[r] = h;
    if (h > 0) --h;
  }

  sparse_.push_back(lcp_);
  for (std::uint32_t k = 1; (1u << k) <= n + 1; ++k) {
    const auto& prev = sparse_.back();
    std::vector<std::uint32_t> row(n + 2 - (1u << k));
    for (std::size_t i = 0; i < row.size(); ++i)
      row[i] = std::min(prev[i], prev[i + (1u << (k - 1))]);
    sparse_.push_back(std::move(row));
  }

  // A leaf whose whole suffix is a prefix of the next one adds nothing
  // (its incoming suffix-tree edge would carry only the sentinel).
  list_pos_.assign(n + 1, 0);
  std::uint32_t id = 1;  // 0 is the empty word
  std::uint32_t run = 0;
  for (std::uint32_t r = 0; r <= n; ++r) {
    const std::uint32_t len = n + 1 - leaves_[r];
    if (r > 0) run = list_rank_.empty() ? 0 : std::min(run, lcp_[r]);
    if (r < n && lcp_[r + 1] == len) continue;
    const std::uint32_t base = list_rank_.empty() ? 0 : run;
    list_rank_.push_back(r);
    list_base_.push_back(base);
    list_id_.push_back(id);
    id += len - base;
    run = len;
  }
  for (std::uint32_t r = n + 1, p = static_cast<std::uint32_t>(list_rank_.size()); r-- > 0;) {
    if (p > 0 && list_rank_[p - 1] == r) --p;
    list_pos_[r] = p;
  }
  factor_count_ = id;
}

std::uint32_t WordIndex::min_lcp(std::uint32_t lo, std::uint32_t hi) const {
  std::uint32_t k = std::bit_width(hi - lo + 1) - 1;
  return std::min(sparse_[k][lo], sparse_[k][hi + 1 - (1u << k)]);
}

std::uint32_t WordIndex::lcp_rank(std::uint32_t r1, std::uint32_t r2) const {
  return min_lcp(r1 + 1, r2);
}

std::uint32_t WordIndex::lcp(std::uint32_t i, std::uint32_t j) const {
  const std::uint32_t n = size();
  if (i < 1 || j < 1 || i > n || j > n)
    throw RangeError("lcp: position out of range");
  if (i == j) return n - i + 1;
  std::uint32_t a = rank_[i], b = rank_[j];
  if (a > b) std::swap(a, b);
  return lcp_rank(a, b);
}

void WordIndex::check_span(Span s) const {
  if (s.start < 1 || s.start > s.end || s.end > size() + 1)
    throw RangeError("span " + to_string(s) + " out of range");
}

bool WordIndex::factor_eq(Span a, Span b) const {
  check_span(a);
  check_span(b);
  if (a.length() != b.length()) return false;
  if (a.length() == 0 || a.start == b.start) return true;
  return lcp(a.start, b.start) >= a.length();
}

std::string_view WordIndex::factor(Span s) const {
  check_span(s);
  return std::string_view(word_).substr(s.start - 1, s.length());
}

FactorId WordIndex::factor_id(Span s) const {
  check_span(s);
  const std::uint32_t len = s.length();
  if (len == 0) return 0;
  // Leftmost leaf whose suffix still starts with this factor; the listed
  // leaf at or after it emits the factor.
  std::uint32_t r = rank_[s.start];
  std::uint32_t lo = 1, hi = r;
  while (lo < hi) {
    std::uint32_t mid = (lo + hi) / 2;
    if (min_lcp(mid + 1, r) >= len) hi = mid;
    else lo = mid + 1;
  }
  const std::uint32_t p = list_pos_[lo];
  return list_id_[p] + (len - list_base_[p] - 1);
}

Span WordIndex::factor_span(FactorId id) const {
  if (id >= factor_count_) throw RangeError("factor id out of range");
  if (id == 0) {
    const std::uint32_t start = leaves_[list_rank_[0]];
    return {start, start};
  }
  auto it = std::upper_bound(list_id_.begin(), list_id_.end(), id);
  const auto p = static_cast<std::size_t>(it - list_id_.begin()) - 1;
  const std::uint32_t start = leaves_[list_rank_[p]];
  return {start, start + (id - list_id_[p]) + list_base_[p] + 1};
}

std::optional<Span> WordIndex::FactorCursor::next() {
  const auto& list = idx_->list_rank_;
  while (pos_ < list.size()) {
    const std::uint32_t start = idx_->leaves_[list[pos_]];
    if (pos_ == 0 && len_ == 0) {
      len_ = 1;
      return Span{start, start};
    }
    if (len_ == 0) len_ = idx_->list_base_[pos_] + 1;
    if (len_ <= idx_->size() + 1 - start) return Span{start, start + len_++};
    ++pos_;
    len_ = 0;
  }
  return std::nullopt;
}

WordIndex::SquareCursor::SquareCursor(const WordIndex& idx) {
  FactorCursor fc(idx);
  while (auto s = fc.next()) {
    std::uint32_t len = s->length();
    if (len % 2 != 0) continue;
    std::uint32_t half = len / 2;
    if (half == 0 || idx.lcp(s->start, s->start + half) >= half) squares_.push_back(*s);
  }
}

std::optional<Span> WordIndex::SquareCursor::next() {
  if (pos_ >= squares_.size()) return std::nullopt;
  return squares_[pos_++];
}

WordIndex::BinaryCursor::BinaryCursor(const WordIndex& idx, const BinaryShape& shape)
    : idx_(&idx), shape_(shape), factors_(idx) {
  const Span w = idx.whole();
  const std::uint32_t n = idx.size();
  const Span eps{1, 1};
  const bool ul = is_universe(shape.lhs), u1 = is_universe(shape.rhs1), u2 = is_universe(shape.rhs2);
  const bool xy = shape.lhs == shape.rhs1, xz = shape.lhs == shape.rhs2, yz = shape.rhs1 == shape.rhs2;
  if (u1 && u2) {
    fixed_.push_back({w, w, w});  // only survives when w is empty
  } else if (u1) {
    fixed_.push_back({w, w, eps});
  } else if (u2) {
    fixed_.push_back({w, eps, w});
  } else if (ul) {
    if (yz) {
      if (n % 2 == 0) fixed_.push_back({w, {1, 1 + n / 2}, {1 + n / 2, n + 1}});
    } else {
      mode_ = Mode::Splits;
      current_ = w;
    }
  } else if (xy && yz) {
    fixed_.push_back({eps, eps, eps});
  } else if (xy) {
    mode_ = Mode::AllFactorsLeft;
  } else if (xz) {
    mode_ = Mode::AllFactorsRight;
  } else if (yz) {
    mode_ = Mode::Squares;
    squares_.emplace(idx);
  } else {
    mode_ = Mode::FactorSplits;
  }
}

bool WordIndex::BinaryCursor::consistent(const BinaryTuple& t) const {
  const auto& s = shape_;
  const Span w = idx_->whole();
  auto universe_ok = [&](const Var& v, Span sp) { return !is_universe(v) || idx_->factor_eq(sp, w); };
  if (!universe_ok(s.lhs, t.lhs) || !universe_ok(s.rhs1, t.rhs1) || !universe_ok(s.rhs2, t.rhs2)) return false;
  if (s.lhs == s.rhs1 && !idx_->factor_eq(t.lhs, t.rhs1)) return false;
  if (s.lhs == s.rhs2 && !idx_->factor_eq(t.lhs, t.rhs2)) return false;
  if (s.rhs1 == s.rhs2 && !idx_->factor_eq(t.rhs1, t.rhs2)) return false;
  return idx_->holds_binary(t.lhs, t.rhs1, t.rhs2);
}

std::optional<BinaryTuple> WordIndex::BinaryCursor::raw_next() {
  const Span eps{1, 1};
  switch (mode_) {
    case Mode::Fixed:
      if (fixed_pos_ < fixed_.size()) return fixed_[fixed_pos_++];
      return std::nullopt;
    case Mode::Splits: {
      if (split_ > current_->length()) return std::nullopt;
      std::uint32_t k = split_++;
      Span u = *current_;
      return BinaryTuple{u, {u.start, u.start + k}, {u.start + k, u.end}};
    }
    case Mode::AllFactorsLeft:
      if (auto u = factors_.next()) return BinaryTuple{*u, *u, eps};
      return std::nullopt;
    case Mode::AllFactorsRight:
      if (auto u = factors_.next()) return BinaryTuple{*u, eps, *u};
      return std::nullopt;
    case Mode::Squares:
      if (auto u = squares_->next()) {
        std::uint32_t mid = u->start + u->length() / 2;
        return BinaryTuple{*u, {u->start, mid}, {mid, u->end}};
      }
      return std::nullopt;
    case Mode::FactorSplits: {
      if (!current_ || split_ > current_->length()) {
        current_ = factors_.next();
        split_ = 0;
        if (!current_) return std::nullopt;
      }
      std::uint32_t k = split_++;
      Span u = *current_;
      return BinaryTuple{u, {u.start, u.start + k}, {u.start + k, u.end}};
    }
  }
  return std::nullopt;
}

std::optional<BinaryTuple> WordIndex::BinaryCursor::next() {
  while (auto t = raw_next()) {
    if (consistent(*t)) return t;
  }
  return std::nullopt;
}

bool WordIndex::holds_binary(Span lhs, Span rhs1, Span rhs2) const {
  check_span(lhs);
  check_span(rhs1);
  check_span(rhs2);
  const std::uint32_t l1 = rhs1.length(), l2 = rhs2.length();
  if (lhs.length() != l1 + l2) return false;
  if (l1 > 0 && lhs.start != rhs1.start && lcp(lhs.start, rhs1.start) < l1) return false;
  const std::uint32_t mid = lhs.start + l1;
  if (l2 > 0 && mid != rhs2.start && lcp(mid, rhs2.start) < l2) return false;
  return true;
}

bool WordIndex::holds_binary(const BinaryShape& shape, const std::map<Var, Span>& assignment) const {
  auto get = [&](const Var& v) {
    auto it = assignment.find(v);
    if (it != assignment.end()) return it->second;
    if (is_universe(v)) return whole();
    throw std::invalid_argument("holds_binary: unbound variable " + v);
  };
  for (const Var* v : {&shape.lhs, &shape.rhs1, &shape.rhs2})
    if (is_universe(*v) && !factor_eq(get(*v), whole())) return false;
  return holds_binary(get(shape.lhs), get(shape.rhs1), get(shape.rhs2));
}

}  // namespace fcq
