#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <type_traits>

#include "stairvpa/diff.hpp"
#include "stairvpa/errors.hpp"
#include "stairvpa/format.hpp"
#include "stairvpa/lasso.hpp"
#include "stairvpa/priority.hpp"
#include "stairvpa/run.hpp"
#include "stairvpa/stair_removal.hpp"

namespace py = pybind11;
using namespace stairvpa;

namespace {

py::dict verdict_dict(const LassoVerdict& v) {
  py::dict d;
  d["accepted"] = v.accepted;
  d["reason"] = std::string(to_string(v.reason));
  d["death_pos"] = v.death_pos ? py::cast(*v.death_pos) : py::none();
  d["recurring"] = std::vector<unsigned>(v.recurring_priorities.begin(), v.recurring_priorities.end());
  return d;
}

py::dict class_dict(const WordClass& c) {
  py::dict d;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, word_class::WellMatched>) {
          d["class"] = "well-matched";
        } else if constexpr (std::is_same_v<K, word_class::MinimallyWellMatched>) {
          d["class"] = "minimally-well-matched";
        } else if constexpr (std::is_same_v<K, word_class::Pending>) {
          d["class"] = "pending";
          d["open"] = k.open;
        } else {
          d["class"] = "illegal";
          d["position"] = k.position;
        }
      },
      c);
  return d;
}

py::dict witness_dict(const Dvpa& d, const PatternWitness& w) {
  const auto& a = d.alphabet();
  auto stack = [&](const std::vector<StackId>& s) {
    std::vector<std::string> out;
    for (auto it = s.rbegin(); it != s.rend(); ++it) out.push_back(d.stack_name(*it));
    return out;
  };
  py::dict out;
  out["q"] = d.state_name(w.q);
  out["q1"] = d.state_name(w.q1);
  out["q2"] = d.state_name(w.q2);
  out["u"] = a.format_word(w.u);
  out["v"] = a.format_word(w.v);
  out["w"] = a.format_word(w.w);
  out["x"] = a.format_word(w.x);
  out["y"] = a.format_word(w.y);
  out["z"] = a.format_word(w.z);
  out["sigma"] = stack(w.sigma);  // top first
  out["sigma_prime"] = stack(w.sigma_prime);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Visibly pushdown automata with stair acceptance";

  py::register_exception<SyntaxError>(m, "SyntaxError", PyExc_ValueError);
  py::register_exception<SemanticError>(m, "SemanticError", PyExc_ValueError);
  py::register_exception<ResourceLimitError>(m, "ResourceLimitError", PyExc_RuntimeError);

  py::class_<Dvpa>(m, "Automaton")
      .def_property_readonly("states", &Dvpa::state_names)
      .def_property_readonly("stack_symbols", &Dvpa::stack_names)
      .def_property_readonly("initial", [](const Dvpa& d) { return d.state_name(d.initial()); })
      .def_property_readonly("acceptance", [](const Dvpa& d) { return std::string(to_string(d.acceptance().kind)); })
      .def_property_readonly("calls", [](const Dvpa& d) { return d.alphabet().calls(); })
      .def_property_readonly("returns", [](const Dvpa& d) { return d.alphabet().returns(); })
      .def_property_readonly("internals", [](const Dvpa& d) { return d.alphabet().internals(); })
      .def("priority", [](const Dvpa& d, const std::string& q) {
        auto s = d.find_state(q);
        if (!s) throw py::key_error(q);
        return d.acceptance().priority(*s);
      })
      .def("__len__", &Dvpa::num_states)
      .def("__str__", [](const Dvpa& d) { return serialize(d); })
      .def("__repr__", [](const Dvpa& d) {
        return "<Automaton " + std::string(to_string(d.acceptance().kind)) + " with " +
               std::to_string(d.num_states()) + " states>";
      });

  m.def("parse", [](const std::string& text) { return parse_automaton(text).dvpa; }, py::arg("text"));
  m.def("load", [](const std::string& path) { return load_automaton(path).dvpa; }, py::arg("path"));
  m.def("serialize", &serialize, py::arg("automaton"));

  m.def(
      "accepts",
      [](const Dvpa& d, const std::string& lasso) { return verdict_dict(accepts(d, parse_lasso(d.alphabet(), lasso))); },
      py::arg("automaton"), py::arg("lasso"));
  m.def(
      "classify",
      [](const Dvpa& d, const std::string& word) { return class_dict(classify_word(d.alphabet().parse_word(word))); },
      py::arg("automaton"), py::arg("word"));

  m.def(
      "stair_index",
      [](const Dvpa& d) {
        auto r = stair_index(d);
        return py::make_tuple(r.count, std::move(r.relabeled));
      },
      py::arg("automaton"));

  m.def(
      "check_removable",
      [](const Dvpa& d) -> py::object {
        const auto r = check_removable(d);
        if (!r.pattern) return py::none();
        return witness_dict(d, *r.pattern);
      },
      py::arg("automaton"), "None when removable, otherwise a replay-validated forbidden pattern.");

  m.def(
      "remove_stair",
      [](const Dvpa& d, std::size_t cap) {
        BuildOptions o;
        o.state_cap = cap;
        return build_parity(d, o).automaton;
      },
      py::arg("automaton"), py::arg("cap") = BuildOptions{}.state_cap);

  m.def(
      "diff",
      [](const Dvpa& a, const Dvpa& b, std::size_t samples, std::uint64_t seed, std::size_t max_len) {
        DiffOptions o;
        o.samples = samples;
        o.seed = seed;
        o.max_len = max_len;
        const auto r = diff(a, b, o);
        py::dict out;
        out["samples"] = r.samples;
        out["exhaustive"] = r.exhaustive;
        out["seed"] = r.seed;
        std::vector<std::string> mismatches;
        for (const auto& mm : r.mismatches) mismatches.push_back(format_lasso(a.alphabet(), mm.lasso));
        out["mismatches"] = mismatches;
        out["shrunk"] = r.first_mismatch_shrunk ? py::cast(format_lasso(a.alphabet(), *r.first_mismatch_shrunk))
                                                : py::none();
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("samples") = 10000, py::arg("seed") = 1, py::arg("max_len") = 12);
}
