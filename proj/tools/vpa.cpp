// vpa: command-line front end for the stairvpa library.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>

#include "stairvpa/diff.hpp"
#include "stairvpa/dot.hpp"
#include "stairvpa/errors.hpp"
#include "stairvpa/format.hpp"
#include "stairvpa/lasso.hpp"
#include "stairvpa/priority.hpp"
#include "stairvpa/reducer.hpp"
#include "stairvpa/run.hpp"
#include "stairvpa/stair_removal.hpp"

using namespace stairvpa;

namespace {

enum Exit { kOk = 0, kSyntax = 2, kSemantic = 3, kCap = 4 };

/// Values with spaces or quotes are quoted so the trailer stays one
/// whitespace-separated list of key=value pairs.
std::string value(const std::string& v) {
  if (!v.empty() && v.find_first_of(" \t\"") == std::string::npos) return v;
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + '"';
}

class Result {
 public:
  Result& add(const std::string& key, const std::string& v) {
    line_ += ' ' + key + '=' + value(v);
    return *this;
  }
  Result& add(const std::string& key, std::size_t v) { return add(key, std::to_string(v)); }
  Result& add(const std::string& key, bool v) { return add(key, std::string(v ? "true" : "false")); }
  Result& add(const std::string& key, const char* v) { return add(key, std::string(v)); }
  void print() const { std::cout << "RESULT:" << line_ << std::endl; }

 private:
  std::string line_;
};

Dvpa load(const std::string& path, bool show_warnings = true) {
  Validated v = load_automaton(path);
  if (show_warnings)
    for (const auto& w : v.warnings) std::cerr << path << ": warning: " << w << '\n';
  return std::move(v.dvpa);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

std::string stack_text(const Dvpa& dvpa, const std::vector<StackId>& stack) {
  if (stack.empty()) return "(empty)";
  std::string out;
  // printed top first
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) out += (out.empty() ? "" : " ") + dvpa.stack_name(*it);
  return out;
}

std::string word_text(const Dvpa& dvpa, const Word& w) {
  return w.empty() ? "(empty)" : dvpa.alphabet().format_word(w);
}

void print_witness(const Dvpa& dvpa, const PatternWitness& pw) {
  std::cout << "pattern: q=" << dvpa.state_name(pw.q) << " q'=" << dvpa.state_name(pw.q1)
            << " q''=" << dvpa.state_name(pw.q2) << '\n';
  const std::pair<const char*, const Word*> words[] = {{"u", &pw.u}, {"v", &pw.v}, {"w", &pw.w},
                                                       {"x", &pw.x}, {"y", &pw.y}, {"z", &pw.z}};
  for (const auto& [name, w] : words) std::cout << "  " << name << " = " << word_text(dvpa, *w) << '\n';
  std::cout << "  sigma  = " << stack_text(dvpa, pw.sigma) << '\n';
  std::cout << "  sigma' = " << stack_text(dvpa, pw.sigma_prime) << '\n';
  const auto failures = replay_pattern(dvpa, pw);
  std::cout << "  replay: " << (failures.empty() ? "ok" : failures.front()) << '\n';
}

void require_stair_buchi(const Dvpa& dvpa) {
  if (dvpa.acceptance().kind != AcceptanceKind::stair_buchi)
    throw SemanticError("this command needs a stair-buchi automaton, got " +
                        std::string(to_string(dvpa.acceptance().kind)));
}

int cmd_validate(const std::string& file) {
  Validated v = load_automaton(file);
  for (const auto& w : v.warnings) std::cout << "warning: " << w << '\n';
  const Dvpa& d = v.dvpa;
  std::cout << "ok: " << d.num_states() << " states, " << d.alphabet().size() << " symbols, "
            << d.num_stack_symbols() << " stack symbols, acceptance " << to_string(d.acceptance().kind) << '\n';
  Result()
      .add("valid", true)
      .add("states", d.num_states())
      .add("acceptance", std::string(to_string(d.acceptance().kind)))
      .add("warnings", v.warnings.size())
      .print();
  return kOk;
}

int cmd_run(const std::string& file, const std::string& lasso_text) {
  const Dvpa dvpa = load(file);
  const LassoWord lasso = parse_lasso(dvpa.alphabet(), lasso_text);
  const LassoVerdict v = accepts(dvpa, lasso);
  std::cout << "lasso: " << format_lasso(dvpa.alphabet(), lasso) << '\n';
  std::cout << (v.accepted ? "accepted" : "rejected") << " (" << to_string(v.reason) << ")\n";
  Result r;
  r.add("accepted", v.accepted).add("reason", std::string(to_string(v.reason)));
  if (v.death_pos) r.add("death", *v.death_pos);
  if (v.boundary_pair) {
    std::cout << "boundaries " << v.boundary_pair->first << " and " << v.boundary_pair->second << " repeat\n";
    std::string prios;
    for (unsigned p : v.recurring_priorities) prios += (prios.empty() ? "" : ",") + std::to_string(p);
    std::cout << "recurring priorities: " << (prios.empty() ? "none" : prios) << '\n';
    r.add("recurring", prios.empty() ? std::string("none") : prios);
  }
  r.print();
  return kOk;
}

int cmd_classify(const std::string& file, const std::string& word_text_in) {
  const Dvpa dvpa = load(file);
  const Word word = dvpa.alphabet().parse_word(word_text_in);
  const WordClass c = classify_word(dvpa.alphabet(), word);
  Result r;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, word_class::WellMatched>) {
          r.add("class", "well-matched");
        } else if constexpr (std::is_same_v<K, word_class::MinimallyWellMatched>) {
          r.add("class", "minimally-well-matched");
        } else if constexpr (std::is_same_v<K, word_class::Pending>) {
          r.add("class", "pending").add("open", k.open);
        } else {
          r.add("class", "illegal").add("position", k.position);
        }
      },
      c);
  r.print();
  return kOk;
}

int cmd_graph(const std::string& file, const std::string& out_path) {
  const Dvpa dvpa = load(file);
  if (!dvpa.acceptance().is_stair()) throw SemanticError("graph needs a stair-buchi or stair-parity automaton");
  const StepGraph g = step_graph(dvpa);
  const std::string dot = step_graph_dot(dvpa, g);
  if (out_path.empty()) std::cout << dot;
  else write_file(out_path, dot);
  Result().add("vertices", g.vertices.size()).add("edges", g.edges.size()).print();
  return kOk;
}

int cmd_stair_index(const std::string& file, const std::string& out_path) {
  const Dvpa dvpa = load(file);
  const StairIndexResult res = stair_index(dvpa);
  for (std::size_t i = 0; i < res.graph.vertices.size(); ++i) {
    StateId q = res.graph.vertices[i];
    std::cout << dvpa.state_name(q) << ": " << res.graph.vertex_priority.at(q) << " -> "
              << res.assignment.relabel[i] << '\n';
  }
  if (!out_path.empty()) write_file(out_path, serialize(res.relabeled));
  Result().add("index", static_cast<std::size_t>(res.count)).print();
  return kOk;
}

int cmd_check(const std::string& file, bool witness) {
  const Dvpa dvpa = load(file);
  require_stair_buchi(dvpa);
  const RemovalCheck check = check_removable(dvpa);
  if (check.removable()) {
    std::cout << "no forbidden pattern\n";
  } else {
    std::cout << "forbidden pattern found\n";
    if (witness) print_witness(dvpa, *check.pattern);
  }
  Result().add("removable", check.removable()).print();
  return kOk;
}

int cmd_remove(const std::string& file, const std::string& out_path, std::size_t cap) {
  const Dvpa dvpa = load(file);
  require_stair_buchi(dvpa);
  const RemovalCheck check = check_removable(dvpa);
  if (!check.removable()) {
    std::cerr << "error: forbidden pattern; no equivalent parity automaton exists\n";
    Result().add("removable", false).print();
    return kSemantic;
  }
  const HeightFunction ht = heights(dvpa);
  const ParityConstruction pc = build_parity(dvpa, ht, BuildOptions{cap});
  write_file(out_path, serialize(pc.automaton));
  std::cout << "wrote " << out_path << ": " << pc.automaton.num_states() << " states, "
            << pc.automaton.num_stack_symbols() << " stack symbols (h=" << ht.h << ", m=" << pc.m << ")\n";
  Result()
      .add("removable", true)
      .add("states", pc.automaton.num_states())
      .add("stack", pc.automaton.num_stack_symbols())
      .add("h", static_cast<std::size_t>(ht.h))
      .print();
  return kOk;
}

int cmd_reduce(const std::string& file, const std::string& input) {
  const Dvpa dvpa = load(file);
  require_stair_buchi(dvpa);
  const RemovalCheck check = check_removable(dvpa);
  if (check.removable()) {
    std::cerr << "error: no forbidden pattern, nothing to reduce from\n";
    Result().add("removable", true).print();
    return kSemantic;
  }
  const SuReducer reducer = su_reducer(dvpa, *check.pattern);
  const Transduction t = transduce(dvpa, reducer, parse_su_input(input));
  std::cout << "access: " << word_text(dvpa, t.access) << '\n';
  for (std::size_t i = 0; i < t.moves.size(); ++i) {
    const ReducerState& s = t.trace[i + 1];
    std::cout << "move " << i + 1 << ": " << word_text(dvpa, t.moves[i]) << "  eta=" << (s.eta.empty() ? "-" : s.eta)
              << " accepting-steps=" << t.f_on_step[i + 1] << '\n';
  }
  const ReducerState& last = t.trace.back();
  Result()
      .add("moves", t.moves.size())
      .add("emitted", last.emitted)
      .add("eta", last.eta.empty() ? std::string("-") : last.eta)
      .add("open_calls", last.open_calls)
      .add("zero_count", last.zero_count)
      .add("accepting_steps", t.f_on_step.back())
      .add("k", reducer.k())
      .print();
  return kOk;
}

int cmd_diff(const std::string& f, const std::string& g, std::size_t samples, std::uint64_t seed,
             std::size_t max_len) {
  const Dvpa a = load(f);
  const Dvpa b = load(g);
  const DiffReport report = diff(a, b, DiffOptions{samples, seed, max_len, true});
  const std::size_t shown = std::min<std::size_t>(report.mismatches.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& m = report.mismatches[i];
    std::cout << "mismatch: " << format_lasso(a.alphabet(), m.lasso) << "  " << (m.a.accepted ? "accept" : "reject")
              << " vs " << (m.b.accepted ? "accept" : "reject") << '\n';
  }
  Result r;
  r.add("mismatches", report.mismatches.size())
      .add("samples", report.samples)
      .add("exhaustive", report.exhaustive)
      .add("seed", std::to_string(report.seed));
  if (report.first_mismatch_shrunk) {
    const std::string s = format_lasso(a.alphabet(), *report.first_mismatch_shrunk);
    std::cout << "shrunk: " << s << '\n';
    r.add("shrunk", s);
  }
  r.print();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visibly pushdown automata with stair acceptance conditions"};
  app.require_subcommand(1);

  std::string file, file2, out, lasso, word, input;
  bool dot = false, witness = false, from_check = false;
  std::size_t cap = BuildOptions{}.state_cap, samples = 10000, max_len = 12;
  std::uint64_t seed = 1;

  auto* validate_cmd = app.add_subcommand("validate", "Parse and check an automaton file");
  validate_cmd->add_option("file", file)->required();

  auto* run_cmd = app.add_subcommand("run", "Decide acceptance of a lasso u ; v");
  run_cmd->add_option("file", file)->required();
  run_cmd->add_option("--lasso", lasso, "lasso as 'u ; v'")->required();

  auto* classify_cmd = app.add_subcommand("classify", "Classify a finite word by call/return nesting");
  classify_cmd->add_option("file", file)->required();
  classify_cmd->add_option("--word", word)->required();

  auto* graph_cmd = app.add_subcommand("graph", "Step graph in DOT");
  graph_cmd->add_option("file", file)->required();
  graph_cmd->add_flag("--dot", dot, "DOT output (the only format)");
  graph_cmd->add_option("-o,--output", out);

  auto* index_cmd = app.add_subcommand("stair-index", "Minimal number of stair priorities");
  index_cmd->add_option("file", file)->required();
  index_cmd->add_option("-o,--output", out, "write the relabeled automaton");

  auto* check_cmd = app.add_subcommand("check-stair-removable", "Look for a forbidden pattern");
  check_cmd->add_option("file", file)->required();
  check_cmd->add_flag("--witness", witness, "print the pattern words");

  auto* remove_cmd = app.add_subcommand("remove-stair", "Build an equivalent parity automaton");
  remove_cmd->add_option("file", file)->required();
  remove_cmd->add_option("-o,--output", out)->required();
  remove_cmd->add_option("--cap", cap, "maximal number of product states");

  auto* reduce_cmd = app.add_subcommand("reduce-su", "Translate c/r moves through a forbidden pattern");
  reduce_cmd->add_option("file", file)->required();
  reduce_cmd->add_flag("--witness-from-check", from_check, "use the pattern found by check-stair-removable");
  reduce_cmd->add_option("--input", input)->required();

  auto* diff_cmd = app.add_subcommand("diff", "Compare two automata on random and exhaustive lassos");
  diff_cmd->add_option("file", file)->required();
  diff_cmd->add_option("other", file2)->required();
  diff_cmd->add_option("--samples", samples);
  diff_cmd->add_option("--seed", seed);
  diff_cmd->add_option("--max-len", max_len)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    Result().add("error", "usage").print();
    return kSyntax;
  }

  try {
    if (*validate_cmd) return cmd_validate(file);
    if (*run_cmd) return cmd_run(file, lasso);
    if (*classify_cmd) return cmd_classify(file, word);
    if (*graph_cmd) return cmd_graph(file, out);
    if (*index_cmd) return cmd_stair_index(file, out);
    if (*check_cmd) return cmd_check(file, witness);
    if (*remove_cmd) return cmd_remove(file, out, cap);
    if (*reduce_cmd) return cmd_reduce(file, input);
    if (*diff_cmd) return cmd_diff(file, file2, samples, seed, max_len);
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << '\n';
    Result().add("error", "syntax").print();
    return kSyntax;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << '\n';
    Result().add("error", "semantic").print();
    return kSemantic;
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    Result().add("error", "cap").print();
    return kCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    Result().add("error", "internal").print();
    return 1;
  }
  return kOk;
}
