#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fcq/cq_decomp.hpp"
#include "fcq/word_index.hpp"

namespace fcq {

// Relation over factor ids; one column per distinct non-universe variable.
struct AtomRelation {
  std::vector<Var> columns;
  std::vector<FactorId> data;  // row-major

  std::size_t arity() const { return columns.size(); }
  std::size_t rows() const { return columns.empty() ? (data.empty() ? 0 : 1) : data.size() / columns.size(); }
  std::set<std::vector<FactorId>> tuples() const;
};

struct EvalOptions {
  std::size_t budget = 0;  // max materialized tuples over all atoms, 0 = unlimited
};

AtomRelation materialize(const BinaryAtom& atom, const WordIndex& idx);
AtomRelation materialize(const RegexConstraint& c, const WordIndex& idx);

class Evaluation;

// Head tuples in lexicographic order, each exactly once.
class AnswerStream {
 public:
  std::optional<AnswerTuple> next();

 private:
  friend class Evaluation;
  struct Level {
    std::vector<AtomRelation> rels;
    std::vector<FactorId> candidates;
    std::size_t pos = 0;
  };
  AnswerStream(std::shared_ptr<const Evaluation> ev);

  std::shared_ptr<const Evaluation> ev_;
  std::vector<Level> levels_;
  std::set<std::vector<FactorId>> emitted_;
  bool boolean_done_ = false;
};

// Evaluation state for one decomposed query over one word.
class Evaluation : public std::enable_shared_from_this<Evaluation> {
 public:
  static std::shared_ptr<Evaluation> create(const QueryDecomposition& qd, const WordIndex& idx, EvalOptions opt = {});

  bool model_check() const { return satisfiable_; }
  AnswerStream answers() const { return AnswerStream(shared_from_this()); }
  // Relations after the full semi-join reduction, one per atom, then one
  // per variable that occurs in no atom.
  const std::vector<AtomRelation>& reduced() const { return base_; }

 private:
  friend class AnswerStream;
  Evaluation(const QueryDecomposition& qd, const WordIndex& idx, EvalOptions opt);
  void reduce(std::vector<AtomRelation>& rels) const;
  std::vector<FactorId> candidates(const std::vector<AtomRelation>& rels, const Var& v) const;

  const WordIndex* idx_;
  std::vector<Var> head_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> order_;  // preorder over the forest
  std::vector<long> parent_;
  std::vector<AtomRelation> base_;
  bool satisfiable_ = false;
};

bool model_check(const QueryDecomposition& qd, const std::string& w, EvalOptions opt = {});
AnswerSet enumerate_answers(const QueryDecomposition& qd, const std::string& w, EvalOptions opt = {});

}  // namespace fcq
