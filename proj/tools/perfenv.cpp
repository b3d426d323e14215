// perfenv: command-line front end.
//
// Exit codes: 0 success, 2 usage, 3 validation, 4 runtime.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "perfenv/cmcs.hpp"
#include "perfenv/envelope.hpp"
#include "perfenv/error.hpp"
#include "perfenv/io.hpp"
#include "perfenv/metrics.hpp"
#include "perfenv/racing.hpp"
#include "perfenv/synthetic.hpp"

namespace fs = std::filesystem;
using namespace perfenv;
using io::Json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitRuntime = 4;

struct RaceFlags {
  double pool_fraction = 0.01;
  std::string margin = "x1.2";
  double margin_floor = 0.0;
  int passes = 2;
  std::string order = "id_order";
};

void add_race_flags(CLI::App* cmd, RaceFlags& f) {
  cmd->add_option("--pool-frac", f.pool_fraction, "Pool size as a fraction of all configurations")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--margin", f.margin, "Termination margin: x<factor>, +<offset> or off");
  cmd->add_option("--margin-floor", f.margin_floor, "Absolute epsilon added to the termination threshold");
  cmd->add_option("--passes", f.passes, "Racing passes (the second pass re-races terminated runs)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--order", f.order, "Candidate order")->check(CLI::IsMember({"id_order", "shuffled"}));
}

RacingParams make_params(const RaceFlags& f, std::uint64_t seed) {
  RacingParams p;
  p.pool_fraction = f.pool_fraction;
  const auto margin = MarginPolicy::parse(f.margin);
  switch (margin.mode()) {
    case MarginPolicy::Mode::multiplicative:
      p.margin = MarginPolicy::multiplicative(margin.parameter(), f.margin_floor);
      break;
    case MarginPolicy::Mode::additive:
      p.margin = MarginPolicy::additive(margin.parameter(), f.margin_floor);
      break;
    case MarginPolicy::Mode::disabled:
      p.margin = margin;
      break;
  }
  p.seed = seed;
  p.passes = f.passes;
  p.candidate_order = f.order == "shuffled" ? CandidateOrder::shuffled : CandidateOrder::id_order;
  p.validate();
  return p;
}

std::vector<fs::path> instance_files(const std::vector<std::string>& files, const std::string& dir) {
  std::vector<fs::path> out(files.begin(), files.end());
  if (!dir.empty()) {
    std::vector<fs::path> found;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") found.push_back(entry.path());
    }
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  if (out.empty()) throw ValidationError("no SPLP instance files given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perfenv: cutoff-line racing for algorithm configuration screening"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for every random choice of the command");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic quality matrix");
  SyntheticParams sp;
  std::size_t checkpoints = 11;
  VirtualTime base_time = 1;
  std::string synth_out;
  synth->add_option("--configs", sp.configs, "Number of configurations")->required();
  synth->add_option("--corr", sp.correlation, "Rank correlation of early speed and final quality");
  synth->add_option("--noise", sp.noise, "Per-checkpoint Gaussian noise");
  synth->add_option("--checkpoints", checkpoints, "Number of checkpoints");
  synth->add_option("--base-time", base_time, "First checkpoint time");
  synth->add_option("-o,--output", synth_out, "Matrix CSV path")->required();

  // splp gen / trace
  auto* splp = app.add_subcommand("splp", "SPLP instances and CMCS-lite traces");
  splp->require_subcommand(1);
  auto* gen = splp->add_subcommand("gen", "Generate random SPLP instances");
  std::size_t facilities = 30, customers = 60, n_instances = 10;
  std::string gen_out = ".";
  gen->add_option("--facilities", facilities)->check(CLI::PositiveNumber);
  gen->add_option("--customers", customers)->check(CLI::PositiveNumber);
  gen->add_option("--instances", n_instances)->check(CLI::PositiveNumber);
  gen->add_option("-o,--output", gen_out, "Output directory");

  auto* trace = splp->add_subcommand("trace", "Trace CMCS-lite configurations on SPLP instances");
  std::vector<std::string> trace_files;
  std::string trace_dir, trace_out;
  std::size_t library = kDefaultLibrarySize, max_configs = 1000;
  trace->add_option("--instances", trace_files, "Instance JSON files");
  trace->add_option("--instance-dir", trace_dir, "Directory of instance JSON files");
  trace->add_option("--library", library, "Number of library components to use")->check(CLI::Range(1, 6));
  trace->add_option("--max-configs", max_configs, "Deterministic subsample size (0 = all)");
  trace->add_option("--checkpoints", checkpoints, "Number of checkpoints");
  trace->add_option("-o,--output", trace_out, "Matrix CSV path")->required();

  // race
  auto* race = app.add_subcommand("race", "Race a replayed matrix with early termination");
  RaceFlags race_flags;
  std::string race_matrix, race_out;
  bool history = false;
  race->add_option("--matrix", race_matrix)->required();
  add_race_flags(race, race_flags);
  race->add_flag("--history", history, "Record the cutoff line after every pool change");
  race->add_option("-o,--output", race_out, "Result JSON path")->required();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Build the truth table by full evaluation");
  std::string oracle_matrix, oracle_out;
  double oracle_fraction = 0.01;
  oracle->add_option("--matrix", oracle_matrix)->required();
  oracle->add_option("--pool-frac", oracle_fraction)->check(CLI::Range(0.0, 1.0));
  oracle->add_option("-o,--output", oracle_out)->required();

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Score a racing result against a truth table");
  std::string metrics_result, metrics_truth;
  metrics->add_option("--result", metrics_result)->required();
  metrics->add_option("--truth", metrics_truth)->required();

  // figure
  auto* figure = app.add_subcommand("figure", "Export profile, cutoff and rank series");
  std::string figure_matrix, figure_out;
  std::vector<double> fractions{0.01, 0.05};
  figure->add_option("--matrix", figure_matrix)->required();
  figure->add_option("--fractions", fractions)->delimiter(',');
  figure->add_option("-o,--output", figure_out)->required();

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Repeat racing with derived seeds and summarize");
  RaceFlags exp_flags;
  std::string exp_matrix, exp_out, exp_domain, exp_runs;
  int repeats = 100;
  experiment->add_option("--matrix", exp_matrix)->required();
  add_race_flags(experiment, exp_flags);
  experiment->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  experiment->add_option("--domain", exp_domain, "Row label (default: matrix file stem)");
  experiment->add_option("--runs", exp_runs, "Optional per-repetition CSV");
  experiment->add_option("-o,--output", exp_out, "Summary CSV path (default: stdout)");

  // validate
  auto* validate = app.add_subcommand("validate", "Check a file against its format invariants");
  std::string kind, validate_file;
  validate->add_option("kind", kind)->required()->check(
      CLI::IsMember({"matrix", "result", "truth", "instance", "figure"}));
  validate->add_option("file", validate_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth->parsed()) {
      sp.seed = seed;
      sp.schedule = CheckpointSchedule(base_time, checkpoints);
      const auto matrix = generate_synthetic(sp);
      io::save_matrix(synth_out, matrix,
                      {{"generator", "synthetic"},
                       {"seed", seed},
                       {"correlation", sp.correlation},
                       {"noise", sp.noise},
                       {"rate_min", kSyntheticRateMin},
                       {"rate_span", kSyntheticRateSpan}});
    } else if (gen->parsed()) {
      fs::create_directories(gen_out);
      const auto instances = generate_splp_instances(facilities, customers, n_instances, seed);
      for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& inst = instances[i];
        char name[32];
        std::snprintf(name, sizeof name, "splp_%03zu.json", i);
        io::write_json_file(fs::path(gen_out) / name, io::instance_to_json(inst));
      }
    } else if (trace->parsed()) {
      std::vector<SplpInstance> instances;
      Json sources = Json::array();
      for (const auto& path : instance_files(trace_files, trace_dir)) {
        instances.push_back(io::instance_from_json(io::read_json_file(path)));
        sources.push_back(path.filename().string());
      }
      auto entries = sample_cmcs_entries(library, max_configs, seed);
      Json configs = Json::array();
      for (const auto& e : entries) configs.push_back({{"config_id", e.id}, {"machine", e.config.to_string()}});
      CmcsEvaluator evaluator(std::move(instances), entries, CheckpointSchedule(1, checkpoints), seed);
      io::save_matrix(trace_out, evaluator.matrix(),
                      {{"generator", "cmcs-lite"},
                       {"seed", seed},
                       {"library", library},
                       {"instances", sources},
                       {"configurations", configs}});
    } else if (race->parsed()) {
      ReplayEvaluator evaluator(io::load_matrix(race_matrix));
      auto params = make_params(race_flags, seed);
      params.record_cutoff_history = history;
      const auto result = run_racing(evaluator, params);
      io::write_json_file(race_out, io::result_to_json(result));
    } else if (oracle->parsed()) {
      const auto truth = build_truth(io::load_matrix(oracle_matrix), oracle_fraction);
      io::write_json_file(oracle_out, io::truth_to_json(truth));
    } else if (metrics->parsed()) {
      const auto result = io::result_from_json(io::read_json_file(metrics_result));
      const auto truth = io::truth_from_json(io::read_json_file(metrics_truth));
      try {
        check_compatible(result, truth);
      } catch (const ValidationError& e) {
        throw ValidationError(metrics_result + " vs " + metrics_truth + ": " + e.what());
      }
      std::printf("configs=%zu pool=%zu cost=%lld speedup=%.4f overlap_top=%s overlap_pct=%.2f\n",
                  result.config_count, result.final_pool.size(), static_cast<long long>(result.total_virtual_cost),
                  speedup(result, truth), overlap_top(result, truth) ? "true" : "false",
                  overlap_fraction(result, truth));
    } else if (figure->parsed()) {
      const auto rows = figure_data(io::load_matrix(figure_matrix), fractions);
      std::ostringstream out;
      io::write_figure_csv(out, rows);
      io::write_text_file(figure_out, out.str());
    } else if (experiment->parsed()) {
      const auto matrix = io::load_matrix(exp_matrix);
      const auto params = make_params(exp_flags, seed);
      const auto truth = build_truth(matrix, params.pool_fraction);
      ReplayEvaluator evaluator(matrix);
      const auto domain = exp_domain.empty() ? fs::path(exp_matrix).stem().string() : exp_domain;
      const auto report = experiment_table(evaluator, truth, params, repeats, domain);
      std::ostringstream out;
      io::write_experiment_csv(out, std::span(&report.row, 1));
      if (exp_out.empty()) {
        std::cout << out.str();
      } else {
        io::write_text_file(exp_out, out.str());
      }
      if (!exp_runs.empty()) {
        std::ostringstream runs;
        runs << "repetition,seed,speedup,overlap_top,overlap_pct,virtual_cost\n";
        for (std::size_t i = 0; i < report.runs.size(); ++i) {
          const auto& r = report.runs[i];
          char line[160];
          std::snprintf(line, sizeof line, "%zu,%llu,%.6f,%d,%.4f,%lld\n", i, static_cast<unsigned long long>(r.seed),
                        r.speedup, r.overlap_top ? 1 : 0, r.overlap_fraction,
                        static_cast<long long>(r.total_virtual_cost));
          runs << line;
        }
        io::write_text_file(exp_runs, runs.str());
      }
    } else if (validate->parsed()) {
      if (kind == "matrix") {
        io::load_matrix(validate_file);
      } else if (kind == "result") {
        io::validate_result(io::result_from_json(io::read_json_file(validate_file)));
      } else if (kind == "truth") {
        io::truth_from_json(io::read_json_file(validate_file));
      } else if (kind == "instance") {
        io::instance_from_json(io::read_json_file(validate_file));
      } else {
        std::ifstream in(validate_file, std::ios::binary);
        if (!in) throw ValidationError("cannot open " + validate_file);
        io::validate_figure_csv(in);
      }
      std::printf("ok %s %s\n", kind.c_str(), validate_file.c_str());
    }
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "perfenv: validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "perfenv: error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
