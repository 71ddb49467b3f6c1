#include "fcq/bench.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fcq/evaluator.hpp"
#include "fcq/pattern_decomp.hpp"

namespace fcq {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

}  // namespace

BenchPoint bench_pattern_acyclic(std::size_t n) {
  std::vector<Var> alpha;
  for (std::size_t i = 0; i < n; ++i) {
    alpha.push_back("x1");
    alpha.push_back("x2");
  }
  BenchPoint p;
  p.size = n;
  // repeat small inputs so the clock resolution does not dominate
  std::size_t runs = 0;
  auto t = Clock::now();
  do {
    if (!pattern_acyclic(alpha)) throw std::logic_error("bench: (x1 x2)^n reported cyclic");
    ++runs;
  } while (since(t) < 0.05);
  p.seconds = p.mean_seconds = since(t) / static_cast<double>(runs);
  p.items = runs;
  return p;
}

BenchPoint bench_enumeration_delay(std::size_t n) {
  auto qd = decompose_query(parse_query("Ans(x,y) :- U = x.y"));
  if (!qd) throw std::logic_error("bench: x.y reported cyclic");
  WordIndex idx(std::string(n, 'a'));
  BenchPoint p;
  p.size = n;
  auto start = Clock::now();
  auto ev = Evaluation::create(*qd, idx);
  auto stream = ev->answers();
  auto last = Clock::now();
  while (stream.next()) {
    double gap = since(last);
    last = Clock::now();
    if (gap > p.seconds) p.seconds = gap;
    ++p.items;
  }
  p.mean_seconds = since(start) / static_cast<double>(std::max<std::size_t>(p.items, 1));
  return p;
}

double loglog_slope(const std::vector<BenchPoint>& points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(points.size());
  for (const auto& p : points) {
    double x = std::log(static_cast<double>(p.size)), y = std::log(std::max(p.seconds, 1e-9));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double den = k * sxx - sx * sx;
  return den == 0 ? 0 : (k * sxy - sx * sy) / den;
}

std::string to_csv(const std::string& name, const std::vector<BenchPoint>& points) {
  std::ostringstream out;
  out << "benchmark,size,seconds,mean_seconds,items\n";
  for (const auto& p : points) out << name << ',' << p.size << ',' << p.seconds << ',' << p.mean_seconds << ',' << p.items << '\n';
  return out.str();
}

}  // namespace fcq
