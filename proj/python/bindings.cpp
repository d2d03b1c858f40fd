#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "safeasng/errors.hpp"
#include "safeasng/experiment.hpp"
#include "safeasng/oracle.hpp"
#include "safeasng/safe_region.hpp"
#include "safeasng/walsh.hpp"

namespace py = pybind11;
using namespace safeasng;

namespace {

BitString parse(const std::string& s) { return BitString::from_string(s); }

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict result_dict(const RunResult& r) {
  py::dict out;
  py::list records;
  for (const auto& rec : r.records) {
    py::dict row;
    row["iter"] = rec.iter;
    row["evals"] = rec.evals;
    row["best_safe_f"] = rec.best_safe_f;
    row["gap"] = rec.gap;
    row["unsafe"] = rec.unsafe;
    row["delta"] = rec.delta;
    if (!rec.theta.empty()) row["theta"] = rec.theta;
    records.append(row);
  }
  out["records"] = records;
  out["termination"] = std::string(to_string(r.termination));
  out["message"] = r.message;
  out["best_safe_f"] = r.best_safe_f;
  out["unsafe"] = r.unsafe;
  out["evals"] = r.evals;
  out["final_theta"] = r.final_theta;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Safe ASNG core bindings";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InfeasibleSeedError>(m, "InfeasibleSeedError", PyExc_RuntimeError);
  py::register_exception<NoSafeCenterError>(m, "NoSafeCenterError", PyExc_RuntimeError);
  py::register_exception<OracleUnavailableError>(m, "OracleUnavailableError", PyExc_RuntimeError);

  m.def("hamming_distance", [](const std::string& a, const std::string& b) {
    return hamming_distance(parse(a), parse(b));
  });

  m.def(
      "evaluate",
      [](const std::string& problem, const std::string& safety, const std::string& x) {
        const BitString b = parse(x);
        const Problem p = make_problem(problem, safety, b.dim());
        return py::make_tuple(p.objective(b), p.safety_values(b));
      },
      py::arg("problem"), py::arg("safety"), py::arg("x"),
      "Objective and safety values of a bit string such as '0110...'.");

  m.def(
      "known_optimum",
      [](const std::string& problem, const std::string& safety, int d) {
        return *make_problem(problem, safety, d).known_optimum;
      },
      py::arg("problem"), py::arg("safety"), py::arg("d"));

  m.def(
      "fit_walsh",
      [](const std::vector<std::string>& xs, const std::vector<double>& ys, int order) {
        if (xs.empty() || xs.size() != ys.size()) {
          throw std::invalid_argument("fit_walsh: need matching, non-empty xs and ys");
        }
        std::vector<std::pair<BitString, double>> pts;
        for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(parse(xs[i]), ys[i]);
        const auto basis = enumerate_basis(pts.front().first.dim(), order);
        const auto model = fit(pts, basis);
        return std::vector<double>(model.coefficients.data(),
                                   model.coefficients.data() + model.coefficients.size());
      },
      py::arg("xs"), py::arg("ys"), py::arg("order"),
      "Least-squares Walsh coefficients, basis ordered by subset size then members.");

  m.def(
      "project",
      [](const std::string& x, const std::vector<std::tuple<std::string, std::vector<double>>>& centers,
         const std::vector<double>& lipschitz, const std::vector<double>& theta) {
        std::vector<EvaluatedSample> cs;
        std::uint64_t idx = 0;
        for (const auto& [cx, s] : centers) cs.push_back({parse(cx), 0.0, s, idx++});
        const BernoulliParams params{theta, 0.0, 1.0};
        const auto p = project(parse(x), cs, lipschitz, params);
        return py::make_tuple(p.x.to_string(), p.center, p.n_flip);
      },
      py::arg("x"), py::arg("centers"), py::arg("lipschitz"), py::arg("theta"),
      "Projects x onto the union of balls; centers are (bits, safety values), later ones are "
      "more recent. Returns (projected bits, center index, flips).");

  m.def(
      "run",
      [](const std::string& problem, const std::string& safety, const std::string& algo, int d,
         std::uint64_t seed, std::uint64_t max_iterations, std::uint64_t unsafe_budget,
         bool stop_at_optimum, std::uint64_t theta_trace_every) {
        const Problem p = make_problem(problem, safety, d);
        RunConfig c = default_config(parse_algorithm(algo), d);
        c.seed = seed;
        if (max_iterations > 0) c.max_iterations = max_iterations;
        c.unsafe_budget = unsafe_budget;
        c.stop_at_optimum = stop_at_optimum;
        c.theta_trace_every = theta_trace_every;
        std::vector<BitString> seeds;
        if (c.algorithm != Algorithm::kAsng) {
          Rng rng(seed ^ 0x5eed5eed5eed5eedULL);
          seeds = generate_safe_seeds(p, c.n_seed, rng);
        }
        RunResult r;
        {
          py::gil_scoped_release release;
          r = safeasng::run(c, p, seeds);
        }
        return result_dict(r);
      },
      py::arg("problem"), py::arg("safety"), py::arg("algo"), py::arg("d"), py::arg("seed") = 0,
      py::arg("max_iterations") = 0, py::arg("unsafe_budget") = 100,
      py::arg("stop_at_optimum") = false, py::arg("theta_trace_every") = 0,
      "Single run with default hyperparameters; max_iterations = 0 means d^3.");

  m.def(
      "run_experiment",
      [](const std::vector<std::string>& problems, const std::vector<std::string>& safeties,
         const std::vector<std::string>& algos, const std::vector<int>& dims, int trials,
         std::uint64_t base_seed, const std::filesystem::path& out, std::uint64_t max_iterations,
         int workers) {
        harness::ExperimentSpec spec;
        for (const auto& pr : problems)
          for (const auto& sf : safeties)
            for (const auto& al : algos)
              for (int d : dims)
                spec.cells.push_back({parse_objective(pr), parse_safety(sf), parse_algorithm(al), d});
        spec.trials = trials;
        spec.base_seed = base_seed;
        spec.out_dir = out;
        if (max_iterations > 0) spec.max_iterations = max_iterations;
        spec.workers = workers;
        py::gil_scoped_release release;
        return harness::run_experiment(spec);
      },
      py::arg("problems"), py::arg("safeties"), py::arg("algos"), py::arg("dims"),
      py::arg("trials") = 25, py::arg("base_seed") = 0, py::arg("out") = "results",
      py::arg("max_iterations") = 0, py::arg("workers") = 0);

  m.def(
      "summarize",
      [](const std::filesystem::path& cell_dir) {
        return to_python(harness::summarize_directory(cell_dir));
      },
      py::arg("cell_dir"));

  m.def(
      "verify",
      [](std::uint64_t seed) {
        py::list out;
        for (const auto& r : oracle::run_suite(seed)) {
          py::dict d;
          d["check"] = r.check;
          d["instance"] = r.instance;
          d["oracle"] = r.oracle_value;
          d["impl"] = r.impl_value;
          d["abs_error"] = r.abs_error;
          d["tolerance"] = r.tolerance;
          d["passed"] = r.passed;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 1);
}
