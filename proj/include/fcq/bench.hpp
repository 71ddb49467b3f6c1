#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fcq {

struct BenchPoint {
  std::size_t size = 0;
  double seconds = 0;  // per run (acyclicity) or worst delay (enumeration)
  double mean_seconds = 0;
  std::size_t items = 0;
};

// pattern_acyclic on (x1 x2)^n
BenchPoint bench_pattern_acyclic(std::size_t n);
// Answers of Ans(x,y) :- U = x.y over a^n; seconds is the largest gap
// between consecutive answers (including the first).
BenchPoint bench_enumeration_delay(std::size_t n);

// Least-squares slope of log(seconds) against log(size).
double loglog_slope(const std::vector<BenchPoint>& points);

std::string to_csv(const std::string& name, const std::vector<BenchPoint>& points);

}  // namespace fcq
