#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "perfenv/cmcs.hpp"
#include "perfenv/envelope.hpp"
#include "perfenv/error.hpp"
#include "perfenv/io.hpp"
#include "perfenv/metrics.hpp"
#include "perfenv/racing.hpp"
#include "perfenv/synthetic.hpp"

namespace py = pybind11;
using namespace perfenv;

namespace {

QualityMatrix matrix_from_rows(const std::vector<std::pair<ConfigId, std::vector<double>>>& rows,
                               VirtualTime base_time) {
  if (rows.empty()) throw ValidationError("matrix needs at least one row");
  std::vector<PerformanceProfile> profiles;
  for (const auto& [id, q] : rows) profiles.push_back({id, q});
  return QualityMatrix(CheckpointSchedule(base_time, rows.front().second.size()), std::move(profiles));
}

RacingParams make_params(double pool_fraction, const std::string& margin, std::uint64_t seed,
                         const std::string& order, int passes, std::optional<std::vector<ConfigId>> seed_configs) {
  RacingParams p;
  p.pool_fraction = pool_fraction;
  p.margin = MarginPolicy::parse(margin);
  p.seed = seed;
  if (order == "shuffled") {
    p.candidate_order = CandidateOrder::shuffled;
  } else if (order != "id_order") {
    throw ValidationError("candidate order must be id_order or shuffled");
  }
  p.passes = passes;
  p.seed_configs = std::move(seed_configs);
  p.validate();
  return p;
}

py::dict outcome_dict(const RunOutcome& o) {
  py::dict d;
  d["config_id"] = o.config_id;
  d["pass"] = o.pass_index;
  d["seed"] = o.seed;
  d["status"] = o.status == RunStatus::completed ? "completed" : "terminated";
  d["stop_checkpoint"] = o.stop_checkpoint;
  d["virtual_cost"] = o.virtual_cost;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cutoff-line racing over replayed performance profiles";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<QualityMatrix>(m, "QualityMatrix")
      .def(py::init(&matrix_from_rows), py::arg("rows"), py::arg("base_time") = 1,
           "Rows are (config_id, qualities) pairs; checkpoints double from base_time.")
      .def_property_readonly("times", [](const QualityMatrix& q) { return q.schedule().times(); })
      .def_property_readonly("ids", [](const QualityMatrix& q) {
        std::vector<ConfigId> ids;
        for (const auto& p : q.profiles()) ids.push_back(p.config_id);
        return ids;
      })
      .def("__len__", &QualityMatrix::size)
      .def("profile", [](const QualityMatrix& q, ConfigId id) { return q.profile(id).quality; })
      .def("rows", [](const QualityMatrix& q) {
        std::vector<std::vector<double>> out;
        for (const auto& p : q.profiles()) out.push_back(p.quality);
        return out;
      })
      .def("top_fraction", [](const QualityMatrix& q, double f) { return top_fraction(q, f); })
      .def("cutoff_line", [](const QualityMatrix& q, double f) { return exact_cutoff_line(q, f).value; })
      .def("rank_percentile", [](const QualityMatrix& q, ConfigId id, std::size_t k) {
        return rank_percentile(q, id, k);
      });

  m.def("generate_synthetic",
        [](std::size_t configs, double correlation, double noise, std::uint64_t seed) {
          SyntheticParams sp;
          sp.configs = configs;
          sp.correlation = correlation;
          sp.noise = noise;
          sp.seed = seed;
          return generate_synthetic(sp);
        },
        py::arg("configs"), py::arg("correlation") = 0.85, py::arg("noise") = 0.03, py::arg("seed") = 0);

  m.def("load_matrix", [](const std::filesystem::path& p) { return io::load_matrix(p); });
  m.def("save_matrix", [](const std::filesystem::path& p, const QualityMatrix& q) {
    io::save_matrix(p, q, {{"generator", "python"}});
  });

  py::class_<RacingResult>(m, "RacingResult")
      .def_property_readonly("pool", [](const RacingResult& r) { return r.final_pool.ranked_ids(); })
      .def_readonly("total_virtual_cost", &RacingResult::total_virtual_cost)
      .def_property_readonly("full_evaluation_cost", &RacingResult::full_evaluation_cost)
      .def_property_readonly("outcomes", [](const RacingResult& r) {
        py::list out;
        for (const auto& o : r.outcomes) out.append(outcome_dict(o));
        return out;
      })
      .def("to_json", [](const RacingResult& r) { return io::result_to_json(r).dump(2); });

  m.def("race",
        [](const QualityMatrix& q, double pool_fraction, const std::string& margin, std::uint64_t seed,
           const std::string& order, int passes, std::optional<std::vector<ConfigId>> seed_configs) {
          return run_racing(ReplayEvaluator(q), make_params(pool_fraction, margin, seed, order, passes,
                                                           std::move(seed_configs)));
        },
        py::arg("matrix"), py::arg("pool_fraction") = 0.01, py::arg("margin") = "x1.2", py::arg("seed") = 0,
        py::arg("order") = "id_order", py::arg("passes") = 2, py::arg("seed_configs") = py::none());

  py::class_<TruthTable>(m, "TruthTable")
      .def_readonly("true_best", &TruthTable::true_best)
      .def_readonly("true_top_set", &TruthTable::true_top_set)
      .def_readonly("pool_fraction", &TruthTable::pool_fraction);

  m.def("build_truth", &build_truth, py::arg("matrix"), py::arg("pool_fraction") = 0.01);
  m.def("speedup", &speedup);
  m.def("overlap_top", &overlap_top);
  m.def("overlap_fraction", &overlap_fraction);

  m.def("figure_data",
        [](const QualityMatrix& q, std::vector<double> fractions) {
          std::vector<std::tuple<VirtualTime, std::string, double>> out;
          for (const auto& r : figure_data(q, fractions)) out.emplace_back(r.time, r.series, r.value);
          return out;
        },
        py::arg("matrix"), py::arg("fractions") = std::vector<double>{0.01, 0.05});

  m.def("experiment",
        [](const QualityMatrix& q, int repeats, double pool_fraction, const std::string& margin, std::uint64_t seed,
           const std::string& order) {
          ReplayEvaluator ev(q);
          const auto params = make_params(pool_fraction, margin, seed, order, 2, std::nullopt);
          const auto row = experiment_table(ev, build_truth(q, pool_fraction), params, repeats).row;
          py::dict d;
          d["configs"] = row.configs;
          d["repetitions"] = row.repetitions;
          d["speedup"] = row.mean_speedup;
          d["overlap_top_pct"] = row.overlap_top_percent;
          d["overlap_pool_pct"] = row.mean_overlap_percent;
          return d;
        },
        py::arg("matrix"), py::arg("repeats") = 100, py::arg("pool_fraction") = 0.01, py::arg("margin") = "x1.2",
        py::arg("seed") = 0, py::arg("order") = "id_order");

  py::class_<SplpInstance>(m, "SplpInstance")
      .def_readonly("name", &SplpInstance::name)
      .def_readonly("open_cost", &SplpInstance::open_cost)
      .def_readonly("service_cost", &SplpInstance::service_cost)
      .def("objective", [](const SplpInstance& inst, std::vector<std::size_t> open) {
        return splp_objective(inst, open);
      });
  m.def("generate_splp_instance", [](std::size_t f, std::size_t c, std::uint64_t seed) {
    return generate_splp_instance(f, c, seed);
  });

  m.def("cmcs_configurations", [](std::size_t library) {
    std::vector<std::string> out;
    for (const auto& c : enumerate_cmcs_configurations(library)) out.push_back(c.to_string());
    return out;
  }, py::arg("library") = kDefaultLibrarySize);

  m.def("trace_cmcs",
        [](std::size_t max_configs, std::size_t instances, std::uint64_t seed, std::size_t facilities,
           std::size_t customers) {
          CmcsEvaluator ev(generate_splp_instances(facilities, customers, instances, seed),
                           sample_cmcs_entries(kDefaultLibrarySize, max_configs, seed), CheckpointSchedule{}, seed);
          return ev.matrix();
        },
        py::arg("max_configs"), py::arg("instances") = 10, py::arg("seed") = 0, py::arg("facilities") = 30,
        py::arg("customers") = 60);
}
