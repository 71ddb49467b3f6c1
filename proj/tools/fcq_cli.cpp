// fcq: acyclicity checks, decompositions and evaluation of FC[REG]-CQs.
//
// Exit codes: 0 ok (eval: query holds), 1 eval false / query cyclic where a
// decomposition is required, 2 parse or input error, 3 budget exceeded,
// 4 contract violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fcq/bench.hpp"
#include "fcq/cq_decomp.hpp"
#include "fcq/evaluator.hpp"
#include "fcq/regex.hpp"
#include "fcq/spanner.hpp"

using namespace fcq;
using json = nlohmann::json;

namespace {

struct Config {
  std::string query, word, word_file, sercq;
  std::string emit, format = "text";
  std::size_t limit = 0, budget = 0;
  bool prefactor = false, pseudo = false;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string load_word(const Config& c) {
  std::string w = c.word;
  if (!c.word_file.empty()) {
    std::ifstream in(c.word_file, std::ios::binary);
    if (!in) throw InputError("cannot read " + c.word_file);
    std::ostringstream s;
    s << in.rdbuf();
    w = s.str();
    while (!w.empty() && (w.back() == '\n' || w.back() == '\r')) w.pop_back();
  }
  for (unsigned char ch : w)
    if (ch < 0x21 || ch > 0x7e) throw InputError("word contains a character outside printable ASCII");
  return w;
}

FcCq load_query(const Config& c) {
  if (c.query.empty()) throw InputError("missing -q/--query");
  return parse_query(c.query);
}

std::string quoted(const std::string& s) { return json(s).dump(); }

void print_answers(const std::vector<AnswerTuple>& rows, const std::string& format) {
  if (format == "json") {
    std::cout << json(rows).dump() << '\n';
    return;
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) std::cout << (format == "csv" ? ',' : '\t');
      if (format == "csv") {
        std::string f = "\"";
        for (char ch : row[i]) f += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        std::cout << f << '"';
      } else {
        std::cout << quoted(row[i]);
      }
    }
    std::cout << '\n';
  }
}

std::string concat_trees_dot(const QueryDecomposition& qd) {
  std::string out;
  for (std::size_t i = 0; i < qd.blocks.size(); ++i)
    if (!qd.blocks[i].atoms.empty()) out += concat_tree(qd.blocks[i]).to_dot("block" + std::to_string(i + 1));
  return out;
}

int cmd_check(const Config& c) {
  auto a = analyze_query(load_query(c), {c.prefactor});
  if (c.format == "json") {
    json j;
    j["verdict"] = a.verdict;
    j["acyclic"] = a.decomposition.has_value();
    json fired = json::array();
    for (std::size_t i = 0; i < a.conditions.fired.size(); ++i)
      if (a.conditions.fired[i]) fired.push_back(i + 1);
    j["conditions"] = fired;
    j["witnesses"] = a.conditions.witnesses;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << a.verdict << '\n';
  }
  return 0;
}

void emit(const QueryDecomposition& qd, const std::string& what) {
  if (what == "normalized") {
    std::cout << to_string(qd.normalized.query) << '\n';
  } else if (what == "decomposition") {
    std::cout << to_string(qd.query2()) << '\n';
  } else if (what == "join-tree") {
    std::cout << qd.join_tree_dot();
  } else if (what == "concat-tree") {
    std::cout << concat_trees_dot(qd);
  }
}

int cmd_decompose(const Config& c) {
  auto q = load_query(c);
  auto a = analyze_query(q, {c.prefactor});
  if (c.emit == "normalized") {
    std::cout << to_string(a.normalized.query) << '\n';
    return 0;
  }
  if (!a.decomposition) {
    std::cerr << a.verdict << '\n';
    return 1;
  }
  const auto& qd = *a.decomposition;
  if (!c.emit.empty()) {
    emit(qd, c.emit);
  } else if (c.format == "json") {
    json j;
    j["normalized"] = to_string(qd.normalized.query);
    j["decomposition"] = to_string(qd.query2());
    j["join_tree"] = qd.join_tree_dot();
    j["concat_trees"] = concat_trees_dot(qd);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "normalized: " << to_string(qd.normalized.query) << '\n'
              << "decomposition: " << to_string(qd.query2()) << '\n'
              << qd.join_tree_dot();
  }
  return 0;
}

// Cyclic queries fall back to the brute-force oracle.
struct Prepared {
  std::optional<QueryDecomposition> qd;
  FcCq query;
};

Prepared prepare(const Config& c) {
  Prepared p;
  p.query = load_query(c);
  p.qd = decompose_query(p.query, {c.prefactor});
  if (!p.qd) std::cerr << "note: query is cyclic, using the exhaustive evaluator\n";
  return p;
}

double oracle_budget(const Config& c) { return c.budget ? static_cast<double>(c.budget) : kDefaultOracleBudget; }

int cmd_eval(const Config& c) {
  auto p = prepare(c);
  auto w = load_word(c);
  bool holds;
  if (p.qd) {
    WordIndex idx(w);
    holds = Evaluation::create(*p.qd, idx, {c.budget})->model_check();
  } else {
    holds = !oracle_eval(p.query, w, oracle_budget(c)).empty();
  }
  if (c.format == "json")
    std::cout << json(holds).dump() << '\n';
  else
    std::cout << (holds ? "true" : "false") << '\n';
  return holds ? 0 : 1;
}

int cmd_enum(const Config& c) {
  auto p = prepare(c);
  auto w = load_word(c);
  std::vector<AnswerTuple> rows;
  auto full = [&] { return c.limit && rows.size() >= c.limit; };
  if (p.qd) {
    WordIndex idx(w);
    auto ev = Evaluation::create(*p.qd, idx, {c.budget});
    auto s = ev->answers();
    while (!full()) {
      auto t = s.next();
      if (!t) break;
      if (c.format == "text") print_answers({*t}, c.format);  // stream
      rows.push_back(std::move(*t));
    }
  } else {
    for (const auto& t : oracle_eval(p.query, w, oracle_budget(c))) {
      if (full()) break;
      if (c.format == "text") print_answers({t}, c.format);
      rows.push_back(t);
    }
  }
  if (c.format != "text") print_answers(rows, c.format);
  return 0;
}

int cmd_convert(const Config& c) {
  if (c.sercq.empty()) throw InputError("missing -s/--sercq");
  auto s = parse_sercq(c.sercq);
  for (const auto& f : s.formulas)
    if (!f.functional || !f.synchronized) throw ContractError("formula is not functional and synchronized: " + f.diagnostic);
  if (c.pseudo) {
    auto qd = pseudo_acyclic_to_fccq(s);
    if (c.emit.empty() || c.emit == "decomposition" || c.emit == "normalized")
      std::cout << to_string(qd.query2()) << '\n';
    else
      emit(qd, c.emit);
    return 0;
  }
  auto q = sercq_to_fccq(s);
  if (c.emit.empty()) {
    std::cout << to_string(q) << '\n';
    return 0;
  }
  auto a = analyze_query(q, {c.prefactor});
  if (c.emit == "normalized") {
    std::cout << to_string(a.normalized.query) << '\n';
    return 0;
  }
  if (!a.decomposition) {
    std::cerr << a.verdict << '\n';
    return 1;
  }
  emit(*a.decomposition, c.emit);
  return 0;
}

int cmd_bench(const Config& c) {
  std::size_t max_pattern = c.limit ? c.limit : 64;
  std::vector<BenchPoint> pat, del;
  for (std::size_t n = 4; n <= max_pattern; n *= 2) pat.push_back(bench_pattern_acyclic(n));
  for (std::size_t n = 64; n <= 512; n *= 2) del.push_back(bench_enumeration_delay(n));
  std::string a = to_csv("pattern_acyclic", pat), b = to_csv("enumeration_delay", del);
  std::cout << a << b.substr(b.find('\n') + 1);
  double sa = loglog_slope(pat), sb = loglog_slope(del);
  std::cerr << "slope pattern_acyclic " << sa << ", enumeration_delay " << sb << '\n';
  if (sa > 8) std::cerr << "warning: pattern_acyclic slope above 8\n";
  if (sb > 4) std::cerr << "warning: enumeration delay slope above 4\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acyclicity and evaluation of conjunctive queries over word equations"};
  app.require_subcommand(1);
  Config c;

  auto add_query = [&](CLI::App* s) {
    s->add_option("-q,--query", c.query, "query, e.g. \"Ans(x) :- U = x.x\"")->required();
    s->add_flag("--prefactor", c.prefactor, "pull shared subpatterns into their own equations first");
  };
  auto add_word = [&](CLI::App* s) {
    auto* w = s->add_option("-w,--word", c.word, "input word");
    auto* f = s->add_option("--word-file", c.word_file, "read the input word from a file");
    w->excludes(f);
    s->add_option("--budget", c.budget, "max materialized tuples (0 = unlimited); oracle search budget for cyclic queries");
  };
  auto add_format = [&](CLI::App* s, std::vector<std::string> allowed) {
    s->add_option("--format", c.format, "output format")->check(CLI::IsMember(allowed));
  };
  const std::vector<std::string> emits = {"normalized", "decomposition", "join-tree", "concat-tree"};

  auto* check = app.add_subcommand("check", "print the acyclicity verdict");
  add_query(check);
  add_format(check, {"text", "json"});

  auto* decompose = app.add_subcommand("decompose", "print the normalized query, decomposition and join tree");
  add_query(decompose);
  decompose->add_option("--emit", c.emit, "single artifact to print")->check(CLI::IsMember(emits));
  add_format(decompose, {"text", "json", "dot"});

  auto* eval = app.add_subcommand("eval", "model check; exit 0 if the query holds, 1 otherwise");
  add_query(eval);
  add_word(eval);
  add_format(eval, {"text", "json"});

  auto* enumerate = app.add_subcommand("enum", "enumerate answers, one tuple per line");
  add_query(enumerate);
  add_word(enumerate);
  enumerate->add_option("--limit", c.limit, "stop after N answers");
  add_format(enumerate, {"text", "json", "csv"});

  auto* convert = app.add_subcommand("convert", "compile a synchronized SERCQ to an FC[REG]-CQ");
  convert->add_option("-s,--sercq", c.sercq, "SERCQ, e.g. \"proj[x] join( S* x{a} S* )\"")->required();
  convert->add_flag("--pseudo", c.pseudo, "use the direct acyclic construction for pseudo-acyclic SERCQs");
  convert->add_flag("--prefactor", c.prefactor, "pre-factor before decomposing (with --emit)");
  convert->add_option("--emit", c.emit, "artifact to print instead of the query")->check(CLI::IsMember(emits));
  add_format(convert, {"text", "dot"});

  auto* bench = app.add_subcommand("bench", "CSV of running times for the growth checks");
  bench->add_option("--limit", c.limit, "largest n for (x1 x2)^n (default 64)");
  add_format(bench, {"csv", "text"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(c);
    if (*decompose) return cmd_decompose(c);
    if (*eval) return cmd_eval(c);
    if (*enumerate) return cmd_enum(c);
    if (*convert) return cmd_convert(c);
    if (*bench) return cmd_bench(c);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
