#include "sps/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sps/chain.hpp"
#include "sps/families.hpp"

namespace sps {

namespace {

using ojson = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream ss;
  if (path.empty() || path == "-") {
    ss << in.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    ss << f.rdbuf();
  }
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  f << text << '\n';
}

Circuit load_circuit(const std::string& path, std::istream& in) {
  const std::string text = read_input(path, in);
  try {
    return parse_circuit(text);
  } catch (const CircuitError& e) {
    throw IoError(e.what());
  }
}

std::string digest(const Circuit& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(emit_circuit(c))));
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

FormIdeal parse_ideal(const Field& f, std::size_t n, const std::string& text) {
  FormList gens;
  for (const auto& g : split(text, ';')) {
    if (g.find_first_not_of(" \t") == std::string::npos) continue;
    LinearForm l;
    for (const auto& a : split(g, ',')) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(a, &used);
      } catch (const std::exception&) {
        throw CircuitError("bad ideal coefficient \"" + a + "\"");
      }
      if (a.find_first_not_of(" \t", used) != std::string::npos) throw CircuitError("bad ideal coefficient \"" + a + "\"");
      l.push_back(f.from_int(v));
    }
    if (l.size() != n) throw CircuitError("ideal generator needs " + std::to_string(n) + " coefficients");
    gens.push_back(std::move(l));
  }
  if (gens.empty()) return FormIdeal::zero(f, n);
  return FormIdeal(f, n, gens);
}

class Timer {
 public:
  explicit Timer(std::ostream& err) : err_(err), start_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    err_ << "time: " << ms << " ms\n";
  }

 private:
  std::ostream& err_;
  std::chrono::steady_clock::time_point start_;
};

struct Options {
  // gen
  std::size_t r = 0, i = 0, s = 0, d = 0;
  std::uint64_t p = 0;
  std::uint64_t counter_p = 0;
  std::string kind = "both";
  std::string output;
  // check / chain / match / doubling
  std::string file;
  bool exact = false, random = false;
  unsigned trials = 20;
  std::uint64_t seed = 1;
  bool assert_zero = false, assert_simple = false, assert_minimal = false;
  bool trace = false, no_verify = false;
  std::string ideal;
  std::string lists;
  std::size_t k = 0;
};

OracleConfig oracle_from(const Options& o) {
  OracleConfig cfg;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.budget = expansion_budget_from_env();
  if (o.exact) cfg.mode = OracleConfig::Mode::exact;
  if (o.random) cfg.mode = OracleConfig::Mode::randomized;
  return cfg;
}

const char* mode_name(OracleConfig::Mode m) {
  switch (m) {
    case OracleConfig::Mode::exact:
      return "exact";
    case OracleConfig::Mode::randomized:
      return "random";
    default:
      return "auto";
  }
}

int run_check(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const Circuit c = load_circuit(o.file, in);
  const OracleConfig cfg = oracle_from(o);
  Timer t(err);
  const bool zero = is_identity(c, cfg);
  const bool simple = is_simple(c);
  ojson rep = {{"command", "check"}, {"input", digest(c)}, {"mode", mode_name(cfg.mode)}, {"seed", cfg.seed},
               {"trials", cfg.trials}, {"p", c.field.characteristic()}, {"e", c.field.degree()},
               {"k", c.k()}, {"d", c.max_degree()}, {"n", c.n}, {"rank", circuit_rank(c)},
               {"zero", zero}, {"simple", simple}};
  std::optional<bool> minimal;
  if (c.k() <= 16) minimal = is_minimal(c, cfg);
  if (minimal)
    rep["minimal"] = *minimal;
  else
    rep["minimal"] = nullptr;
  out << rep.dump() << '\n';
  err << "zero=" << (zero ? "true" : "false") << " simple=" << (simple ? "true" : "false")
      << " minimal=" << (minimal ? (*minimal ? "true" : "false") : "unknown") << " rank=" << circuit_rank(c) << '\n';
  bool ok = true;
  if (o.assert_zero && !zero) ok = false;
  if (o.assert_simple && !simple) ok = false;
  if (o.assert_minimal && !(minimal && *minimal)) ok = false;
  return ok ? kExitOk : kExitFalse;
}

int run_chain(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const Circuit c = load_circuit(o.file, in);
  ChainOptions opts;
  opts.oracle = oracle_from(o);
  opts.verify_input = !o.no_verify;
  opts.throw_on_violation = false;
  Timer t(err);
  Chain chain = build_chain(c, opts);
  auto lines = chain_trace(c, chain);
  if (o.trace)
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) out << lines[i].dump() << '\n';
  const ChainSummary& s = chain.summary;
  ojson rep = {{"command", "chain"}, {"input", digest(c)}, {"seed", o.seed}, {"k", c.k()}, {"d", c.max_degree()},
               {"m", s.m}, {"rank", s.rank}, {"bound", s.bounds.chain_length},
               {"rank_bound", (c.k() - 2) * s.m}, {"N1", s.n1}, {"N2", s.n2}, {"N3", s.n3},
               {"N1_bound", s.bounds.type1}, {"N2_bound", s.bounds.type2}, {"N3_bound", s.bounds.type3},
               {"external", s.external}, {"internal", s.internal}, {"maximal", s.maximal}, {"ok", s.ok}};
  if (!s.violations.empty()) rep["violations"] = s.violations;
  out << rep.dump() << '\n';
  err << "chain: m=" << s.m << " (bound " << s.bounds.chain_length << "), rank=" << s.rank << " (bound "
      << (c.k() - 2) * s.m << "), N1=" << s.n1 << " N2=" << s.n2 << " N3=" << s.n3 << ", ok="
      << (s.ok ? "true" : "false") << '\n';
  for (const auto& v : s.violations) err << "violation: " << v << '\n';
  for (const auto& n : s.notes) err << "note: " << n << '\n';
  return s.ok ? kExitOk : kExitViolation;
}

int run_match(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const Circuit c = load_circuit(o.file, in);
  const FormIdeal ideal = parse_ideal(c.field, c.n, o.ideal);
  std::size_t found = 0, pairs = 0;
  for (std::size_t a = 0; a < c.k(); ++a) {
    for (std::size_t b = a + 1; b < c.k(); ++b) {
      ++pairs;
      ojson line = {{"terms", {a + 1, b + 1}}};
      auto pi = find_matching(c.terms[a].forms, c.terms[b].forms, ideal);
      line["matched"] = pi.has_value();
      if (pi) {
        ++found;
        line["ordered"] = pi->ordered();
        line["verified"] = pi->verify();
        if (pi->ordered()) line["sc"] = element_to_json(c.field, sc(*pi));
        ojson edges = ojson::array();
        for (std::size_t i = 0; i < pi->edges().size(); ++i) {
          const MatchEdge& e = pi->edges()[i];
          edges.push_back({{"source", i + 1}, {"target", e.target + 1}, {"c", element_to_json(c.field, e.c)},
                           {"level", e.level}});
        }
        line["edges"] = edges;
      }
      out << line.dump() << '\n';
    }
  }
  err << "match: " << found << " of " << pairs << " term pairs matched\n";
  return kExitOk;
}

int run_doubling(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_input(o.lists, in));
  } catch (const nlohmann::json::exception& e) {
    throw CircuitError(std::string("invalid JSON: ") + e.what());
  }
  ListsInput li = [&] {
    try {
      return lists_from_json(j);
    } catch (const nlohmann::json::exception& e) {
      throw CircuitError(std::string("malformed lists: ") + e.what());
    }
  }();
  std::vector<OrderedMatching> ms;
  for (std::size_t i = 0; i < li.ideals.size(); ++i) {
    auto pi = find_matching(li.u, li.v, li.ideals[i]);
    if (!pi) {
      err << "doubling: no matching by ideal " << i + 1 << '\n';
      return kExitFalse;
    }
    ms.push_back(std::move(*pi));
  }
  Timer t(err);
  DoublingReport rep = doubling_check(li.u, li.v, li.ideals, ms);
  ojson rounds = ojson::array();
  for (const auto& r : rep.rounds) {
    ojson line = {{"round", r.round}, {"green_u", r.green_u}, {"green_v", r.green_v}, {"doubled", r.doubled},
                  {"doubling_required", r.doubling_required}};
    if (o.trace) out << line.dump() << '\n';
    rounds.push_back(line);
  }
  ojson js = {{"command", "doubling"}, {"verdict", to_string(rep.verdict)}, {"d", rep.d}, {"d_prime", rep.d_prime},
              {"r", rep.r}, {"i0", rep.i0}, {"initial_green", rep.initial_green}, {"rounds", rounds},
              {"failures", rep.failures}};
  out << js.dump() << '\n';
  err << "doubling: " << to_string(rep.verdict) << " r=" << rep.r << " d'=" << rep.d_prime << '\n';
  for (const auto& f : rep.failures) err << "failure: " << f << '\n';
  return rep.verdict == DoublingVerdict::contradiction ? kExitViolation : kExitOk;
}

int run_bound(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.k < 2 || o.d < 1) throw CircuitError("bound needs k >= 2 and d >= 1");
  const ChainBounds b = chain_bounds(o.k, o.d);
  const std::size_t rank = (o.k - 2) * b.chain_length;
  ojson js = {{"command", "bound"}, {"k", o.k}, {"d", o.d}, {"chain_length", b.chain_length}, {"rank", rank},
              {"N1", b.type1}, {"N2", b.type2}, {"N3", b.type3}};
  out << js.dump() << '\n';
  err << b.chain_length << ' ' << rank << '\n';
  return kExitOk;
}

int run_gen(const std::string& which, const Options& o, std::ostream& out, std::ostream& err) {
  if (which == "ks") {
    write_output(o.output, emit_circuit(gen_ks(o.r)), out);
  } else if (which == "family") {
    write_output(o.output, emit_circuit(gen_family(o.r, o.i)), out);
  } else if (which == "tight") {
    TightLists t = gen_tight_lists(o.s, o.p ? o.p : 5);
    nlohmann::json j = lists_to_json(t.field, t.n, t.u, t.v, t.ideals);
    j["claimed"] = t.claimed.size();
    j["verified"] = t.ideals.size();
    write_output(o.output, j.dump(), out);
    err << "tight lists: " << t.ideals.size() << " of " << t.claimed.size() << " claimed matchings verify\n";
  } else {
    auto [a, b] = gen_intro_counterexamples(o.d, o.counter_p ? o.counter_p : 2);
    if (o.kind == "nonsimple")
      write_output(o.output, emit_circuit(a), out);
    else if (o.kind == "nonminimal")
      write_output(o.output, emit_circuit(b), out);
    else
      write_output(o.output, nlohmann::json{{"nonsimple", circuit_to_json(a)}, {"nonminimal", circuit_to_json(b)}}.dump(),
                   out);
  }
  return kExitOk;
}

}  // namespace

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Depth-3 circuit identities: generation, checking, chains and matchings", "sps"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate circuits and lists");
  gen->require_subcommand(1);
  auto* gks = gen->add_subcommand("ks", "Three-term identity over F_2");
  gks->add_option("--r", o.r, "Number of variables")->required();
  auto* gfam = gen->add_subcommand("family", "Iterated join family");
  gfam->add_option("--r", o.r, "Base number of variables")->required();
  gfam->add_option("--i", o.i, "Number of joins")->required();
  auto* gtight = gen->add_subcommand("tight", "Lists with many orthogonal matchings");
  gtight->add_option("--s", o.s, "Number of variables")->required();
  gtight->add_option("--p", o.p, "Field characteristic (prime >= 5)")->default_val(5);
  auto* gcounter = gen->add_subcommand("counter", "Non-simple and non-minimal identities");
  gcounter->add_option("--d", o.d, "Degree parameter")->required();
  gcounter->add_option("--kind", o.kind, "both, nonsimple or nonminimal")
      ->check(CLI::IsMember({"both", "nonsimple", "nonminimal"}));
  gcounter->add_option("--p", o.counter_p, "Field characteristic")->default_val(2);
  for (auto* g : {gks, gfam, gtight, gcounter}) g->add_option("-o,--output", o.output, "Output file");

  auto add_oracle = [&](CLI::App* sub) {
    sub->add_option("--trials", o.trials, "Random trials")->default_val(20);
    sub->add_option("--seed", o.seed, "Random seed")->default_val(1);
  };
  auto* check = app.add_subcommand("check", "Zero, simplicity, minimality and rank");
  check->add_option("file", o.file, "Circuit JSON (stdin when absent or -)");
  auto* fe = check->add_flag("--exact", o.exact, "Exact expansion");
  auto* fr = check->add_flag("--random", o.random, "Randomized evaluation");
  fe->excludes(fr);
  add_oracle(check);
  check->add_flag("--assert-zero", o.assert_zero, "Exit 1 unless the circuit is zero");
  check->add_flag("--assert-simple", o.assert_simple, "Exit 1 unless the circuit is simple");
  check->add_flag("--assert-minimal", o.assert_minimal, "Exit 1 unless the circuit is minimal");

  auto* chain = app.add_subcommand("chain", "Build a maximal chain and check its bounds");
  chain->add_option("file", o.file, "Circuit JSON (stdin when absent or -)");
  chain->add_flag("--trace", o.trace, "One JSON line per round");
  chain->add_flag("--no-verify", o.no_verify, "Skip the input identity checks");
  add_oracle(chain);

  auto* match = app.add_subcommand("match", "Matchings between term pairs modulo an ideal");
  match->add_option("file", o.file, "Circuit JSON (stdin when absent or -)");
  match->add_option("--ideal", o.ideal, "Generators: semicolon-separated, comma-separated coefficients")->required();

  auto* doubling = app.add_subcommand("doubling", "Doubling check on lists and ideals");
  doubling->add_option("--lists", o.lists, "Lists JSON (- for stdin)")->required();
  doubling->add_flag("--trace", o.trace, "One JSON line per round");

  auto* bound = app.add_subcommand("bound", "Chain length and rank bounds");
  bound->add_option("--k", o.k, "Fanin")->required();
  bound->add_option("--d", o.d, "Degree")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      for (auto* g : {gks, gfam, gtight, gcounter})
        if (g->parsed()) return run_gen(g->get_name(), o, out, err);
    }
    if (check->parsed()) return run_check(o, in, out, err);
    if (chain->parsed()) return run_chain(o, in, out, err);
    if (match->parsed()) return run_match(o, in, out, err);
    if (doubling->parsed()) return run_doubling(o, in, out, err);
    if (bound->parsed()) return run_bound(o, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BoundViolation& e) {
    err << "violation: " << e.what() << '\n';
    return kExitViolation;
  } catch (const ChainError& e) {
    err << "violation: " << e.what() << '\n';
    return kExitViolation;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << " (raise SPS_BUDGET)\n";
    return kExitUsage;
  } catch (const CircuitError& e) {
    err << "error: " << e.what() << '\n';
    return chain->parsed() ? kExitFalse : kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sps
