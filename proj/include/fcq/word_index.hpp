#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fcq {

// Variables are plain identifiers. "U" is reserved for the universe variable,
// which always denotes the whole input word.
using Var = std::string;
inline const Var kUniverse = "U";
inline bool is_universe(const Var& v) { return v == kUniverse; }

// Half-open, 1-based span <start,end> over a word.
struct Span {
  std::uint32_t start = 1;
  std::uint32_t end = 1;

  std::uint32_t length() const { return end - start; }
  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

std::string to_string(const Span& s);

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Atom shape lhs = rhs1 . rhs2; any slot may repeat a variable or be U.
struct BinaryShape {
  Var lhs, rhs1, rhs2;
};

// One solution of a binary shape. Slots that share a variable carry equal
// factors; universe slots carry <1,|w|+1>.
struct BinaryTuple {
  Span lhs, rhs1, rhs2;
};

// Distinct factors get dense ids: the id is the factor's rank in
// lexicographic order, so ids compare like the strings they denote.
using FactorId = std::uint32_t;

class WordIndex {
 public:
  explicit WordIndex(std::string word);

  const std::string& word() const { return word_; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(word_.size()); }
  Span whole() const { return {1, size() + 1}; }

  // Longest common prefix of the suffixes starting at 1-based i and j.
  std::uint32_t lcp(std::uint32_t i, std::uint32_t j) const;

  bool factor_eq(Span a, Span b) const;
  std::string_view factor(Span s) const;

  // Number of distinct factors, including the empty word.
  std::uint32_t factor_count() const { return factor_count_; }
  FactorId factor_id(Span s) const;
  // Canonical occurrence of a factor: the leaf of the enumeration list that
  // emits it (see FactorCursor).
  Span factor_span(FactorId id) const;
  std::string_view factor_string(FactorId id) const { return factor(factor_span(id)); }
  Span canonical(Span s) const { return factor_span(factor_id(s)); }

  // Suffix starts (1-based) in lexicographic order, without the sentinel
  // suffix. The empty suffix is represented by |w|+1 and comes first.
  const std::vector<std::uint32_t>& leaves() const { return leaves_; }

  // Cursor over one span per distinct factor, in lexicographic order.
  // Walks the leaves whose suffix is not a prefix of the next suffix; the
  // first of them also emits the empty word, and each one skips the
  // prefixes it shares with the previous listed leaf.
  class FactorCursor {
   public:
    explicit FactorCursor(const WordIndex& idx) : idx_(&idx) {}
    std::optional<Span> next();

   private:
    const WordIndex* idx_;
    std::uint32_t pos_ = 0;  // position in the leaf list
    std::uint32_t len_ = 0;  // next prefix length to emit from this leaf
  };

  // Cursor over one span per distinct square factor u = v.v (includes ε).
  class SquareCursor {
   public:
    explicit SquareCursor(const WordIndex& idx);
    std::optional<Span> next();

   private:
    std::vector<Span> squares_;
    std::size_t pos_ = 0;
  };

  // Cursor over the solutions of a binary shape, each value triple exactly
  // once. Order: by lhs factor (lexicographic), then split point ascending.
  class BinaryCursor {
   public:
    BinaryCursor(const WordIndex& idx, const BinaryShape& shape);
    std::optional<BinaryTuple> next();

   private:
    enum class Mode { Fixed, Splits, AllFactorsLeft, AllFactorsRight, Squares, FactorSplits };
    bool consistent(const BinaryTuple& t) const;
    std::optional<BinaryTuple> raw_next();

    const WordIndex* idx_;
    BinaryShape shape_;
    Mode mode_ = Mode::Fixed;
    std::vector<BinaryTuple> fixed_;
    std::size_t fixed_pos_ = 0;
    FactorCursor factors_;
    std::optional<SquareCursor> squares_;
    std::optional<Span> current_;
    std::uint32_t split_ = 0;
  };

  FactorCursor enumerate_factors() const { return FactorCursor(*this); }
  SquareCursor enumerate_squares() const { return SquareCursor(*this); }
  BinaryCursor enumerate_binary(const BinaryShape& shape) const { return BinaryCursor(*this, shape); }

  bool holds_binary(const BinaryShape& shape, const std::map<Var, Span>& assignment) const;
  bool holds_binary(Span lhs, Span rhs1, Span rhs2) const;

  void check_span(Span s) const;

 private:
  std::uint32_t lcp_rank(std::uint32_t r1, std::uint32_t r2) const;  // r1 < r2
  std::uint32_t min_lcp(std::uint32_t lo, std::uint32_t hi) const;    // min lcp_[lo..hi]

  std::string word_;
  std::vector<std::uint32_t> leaves_;  // 1-based starts; leaves_[0] = |w|+1
  std::vector<std::uint32_t> rank_;    // rank_[start] = position in leaves_
  std::vector<std::uint32_t> lcp_;     // lcp_[r] = LCP(leaves_[r-1], leaves_[r]); lcp_[0] = 0
  std::vector<std::vector<std::uint32_t>> sparse_;
  // Enumeration list: ranks of the leaves that emit factors, the lcp with
  // the previous listed leaf, and the id of the first factor each emits.
  std::vector<std::uint32_t> list_rank_, list_base_, list_id_;
  std::vector<std::uint32_t> list_pos_;  // rank -> first list position at or after it
  std::uint32_t factor_count_ = 0;
};

}  // namespace fcq
