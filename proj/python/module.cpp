// Python bindings for the core operations: family construction, seeded game
// runs, the exact solver, and the verification helpers.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mbl/adversaries.hpp"
#include "mbl/engine.hpp"
#include "mbl/families.hpp"
#include "mbl/learners.hpp"
#include "mbl/oracle.hpp"
#include "mbl/verify.hpp"

namespace py = pybind11;

namespace {

using namespace mbl;

std::unique_ptr<Learner> build_learner(const std::string& name,
                                       const Protocol& proto,
                                       const FunctionFamily& fam,
                                       std::size_t solver_cap) {
  if (name == "optimal")
    return std::make_unique<OptimalLearner>(proto, fam,
                                            SolveCaps{solver_cap, 64});
  return make_learner(name, proto.r, fam.label_count());
}

Transcript run(const Protocol& proto, const FunctionFamily& fam,
               const std::string& learner, const std::string& adversary,
               std::uint64_t seed, long long max_rounds,
               std::size_t solver_cap) {
  auto lr = build_learner(learner, proto, fam, solver_cap);
  auto adv = make_adversary(adversary);
  RunOptions opt;
  opt.seed = seed;
  opt.max_rounds = max_rounds;
  return run_game(proto, fam, *lr, *adv, opt);
}

std::string transcript_csv(const Transcript& t) {
  std::ostringstream ss;
  write_transcript_csv(ss, t);
  return ss.str();
}

}  // namespace

PYBIND11_MODULE(mbl_lab, m) {
  m.doc() =
      "Mistake-bounded online learning laboratory: finite hypothesis "
      "families, yes/no and revealing feedback games, constructive "
      "adversaries, and an exact small-instance solver.";

  auto base = py::register_exception<mbl_error>(m, "Error");
  py::register_exception<config_error>(m, "ConfigError", base);
  py::register_exception<size_cap_error>(m, "SizeCapError", base);

  py::class_<Protocol>(m, "Protocol")
      .def_readonly("r", &Protocol::r)
      .def_readonly("reveal", &Protocol::reveal)
      .def_property_readonly(
          "model", [](const Protocol& p) { return model_name(p.model); })
      .def("__repr__", [](const Protocol& p) { return protocol_name(p); });

  m.def("protocol", &parse_protocol, py::arg("model"), py::arg("r") = 1,
        py::arg("strong") = false,
        "Model name (cart, amb, order, comparison, selection, relpos, "
        "delayed_relpos) or shorthand (standard, bandit, cart_weak); strong "
        "switches one-shot models to revealing feedback.");

  py::class_<FunctionFamily>(m, "Family")
      .def("__len__", &FunctionFamily::size)
      .def_property_readonly("domain_size", &FunctionFamily::domain_size)
      .def_property_readonly("label_count", &FunctionFamily::label_count)
      .def("eval", &FunctionFamily::eval, py::arg("h"), py::arg("input"),
           "Label of hypothesis h on a 1-based input.")
      .def("row", &FunctionFamily::row, py::arg("h"))
      .def("name", &FunctionFamily::name, py::arg("h"))
      .def("rows_are_permutations", &FunctionFamily::rows_are_permutations)
      .def("__repr__", [](const FunctionFamily& f) {
        return "Family(" + std::to_string(f.size()) + " rows over 1.." +
               std::to_string(f.domain_size()) + ")";
      });

  m.def(
      "threshold_family",
      [](int domain_size, std::vector<int> thresholds) {
        return build_threshold_family(domain_size, std::move(thresholds))
            .materialize();
      },
      py::arg("domain_size"), py::arg("thresholds"),
      "0/1 rows firing at strictly increasing thresholds.");
  m.def(
      "spread_family",
      [](int size) { return spread_threshold_family(size).materialize(); },
      py::arg("size"),
      "size threshold rows at 1,3,..,2*size-1 over a doubled domain.");
  m.def(
      "linear_family",
      [](int modulus, int dimension, bool restricted) {
        return build_linear_family(modulus, dimension, restricted)
            .materialize();
      },
      py::arg("modulus"), py::arg("dimension"), py::arg("restricted") = true,
      "Dot products mod a prime; restricted keeps coefficients nonzero.");
  m.def(
      "permutation_family",
      [](int n) { return build_permutation_family(n).materialize(); },
      py::arg("n"), "All permutations of 1..n.");
  m.def(
      "avoiding_family",
      [](int n, std::vector<int> pattern) {
        return build_avoiding_family(n, std::move(pattern)).materialize();
      },
      py::arg("n"), py::arg("pattern"),
      "Permutations of 1..n containing no copy of the pattern.");

  py::class_<Transcript>(m, "Transcript")
      .def_readonly("seed", &Transcript::seed)
      .def_readonly("mistakes", &Transcript::mistakes)
      .def_readonly("fault", &Transcript::fault)
      .def_readonly("final_version_space_size",
                    &Transcript::final_version_space_size)
      .def_property_readonly(
          "rounds", [](const Transcript& t) { return t.rounds.size(); })
      .def("faulted", &Transcript::faulted)
      .def("csv", &transcript_csv, "The transcript as mbl-csv text.")
      .def("__repr__", [](const Transcript& t) {
        return "Transcript(" + std::to_string(t.rounds.size()) + " rounds, " +
               std::to_string(t.mistakes) + " mistakes)";
      });

  m.def("run", &run, py::arg("protocol"), py::arg("family"),
        py::arg("learner"), py::arg("adversary"), py::arg("seed"),
        py::arg("max_rounds") = 100000, py::arg("solver_cap") = 12,
        "Play one seeded game; learner and adversary are registry names "
        "(learner 'optimal' plays the solver's best response).");

  m.def(
      "exact_opt",
      [](const Protocol& proto, const FunctionFamily& fam,
         std::size_t max_hyps, std::size_t max_queries) {
        return exact_opt(proto, fam, SolveCaps{max_hyps, max_queries});
      },
      py::arg("protocol"), py::arg("family"), py::arg("max_hyps") = 12,
      py::arg("max_queries") = 64,
      "Exact worst-case mistake count under optimal play on both sides.");
  m.def(
      "worst_case",
      [](const Protocol& proto, const FunctionFamily& fam,
         const std::string& learner, std::size_t max_hyps,
         std::size_t max_queries) {
        SolveCaps caps{max_hyps, max_queries};
        auto lr = build_learner(learner, proto, fam, max_hyps);
        return worst_case_vs_learner(proto, fam, *lr, caps);
      },
      py::arg("protocol"), py::arg("family"), py::arg("learner"),
      py::arg("max_hyps") = 12, py::arg("max_queries") = 64,
      "Worst-case mistakes the named learner concedes to any truthful "
      "adversary.");
  m.def(
      "invariance_check",
      [](const FunctionFamily& fam, int r, std::size_t max_hyps,
         std::size_t max_queries) {
        return exact_opt_invariance_check(fam, r,
                                          SolveCaps{max_hyps, max_queries});
      },
      py::arg("family"), py::arg("r"), py::arg("max_hyps") = 12,
      py::arg("max_queries") = 64,
      "True iff bundling r revealed inputs per round keeps the game value.");
  m.def(
      "solve_tree",
      [](const Protocol& proto, const FunctionFamily& fam,
         std::size_t max_hyps, std::size_t max_queries) {
        return solve_tree(proto, fam, SolveCaps{max_hyps, max_queries});
      },
      py::arg("protocol"), py::arg("family"), py::arg("max_hyps") = 12,
      py::arg("max_queries") = 64,
      "Text rendering of one optimal adversary line.");

  m.def("v_floor_log2", &v_floor_log2, py::arg("n"));
  m.def("p_direct", &p_direct, py::arg("n"),
        "Sum of floor(log2 m) for m up to n, by direct summation.");
  m.def("p_closed", &p_closed, py::arg("n"), "The same sum in closed form.");
  m.def(
      "check_uniformity",
      [](int p, int n, int r, const std::vector<int>& s,
         const std::vector<int>& z) {
        Rational x = check_uniformity(p, n, r, s, z);
        return std::make_pair(x.num, x.den);
      },
      py::arg("p"), py::arg("n"), py::arg("r"), py::arg("s"), py::arg("z"),
      "Exact fraction of input tuples hitting the residues z, as (num, den).");
  m.def(
      "check_conditional",
      [](int p, int n, int r, const std::vector<int>& s,
         const std::vector<int>& t, const std::vector<int>& z) {
        Rational x = check_conditional(p, n, r, s, t, z);
        return std::make_pair(x.num, x.den);
      },
      py::arg("p"), py::arg("n"), py::arg("r"), py::arg("s"), py::arg("t"),
      py::arg("z"),
      "The same fraction for t conditioned on s hitting z, as (num, den).");
  m.def(
      "bound_table",
      [](long long family_size, int r, int label_count, long long n,
         long long base_mistakes) {
        BoundParams params{family_size, r, label_count, n, base_mistakes};
        std::vector<std::tuple<std::string, double, long long>> out;
        for (const auto& e : bound_table(params))
          out.emplace_back(e.name, e.value, e.cap);
        return out;
      },
      py::arg("family_size"), py::arg("r") = 1, py::arg("label_count") = 2,
      py::arg("n") = 0, py::arg("base_mistakes") = 0,
      "Upper-bound expressions as (name, value, integer cap) rows; cap -1 "
      "means no integer form.");
  m.def("insertion_window_mistakes", &insertion_window_mistakes, py::arg("n"),
        py::arg("claim_low"),
        "Forced mistakes of the slot-window insertion attack against a "
        "claim_low(lo, hi, mid) guesser.");
}
