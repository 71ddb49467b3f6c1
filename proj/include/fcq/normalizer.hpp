#pragma once

#include <map>
#include <string>

#include "fcq/query.hpp"

namespace fcq {

enum class Origin { TerminalBlock, SelfOccurrence, UniverseOccurrence, Dedup };

std::string to_string(Origin o);

struct NormalizedFcCq {
  FcCq query;
  std::map<Var, Origin> provenance;  // introduced variable -> rule that made it
};

// Rewrites q so that every rhs is terminal-free, no lhs occurs in its own
// rhs, U never occurs in a rhs, and no two equations share a rhs. Fresh
// variables are named $n1, $n2, ...
NormalizedFcCq normalize(const FcCq& q);

bool is_normalized(const FcCq& q);

}  // namespace fcq
