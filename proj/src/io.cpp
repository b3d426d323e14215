#include "perfenv/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "perfenv/error.hpp"

namespace perfenv::io {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

template <typename T>
T parse_cell(const std::string& cell, const std::string& what) {
  T value{};
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw ValidationError("cannot parse " + what + " '" + cell + "'");
  }
  return value;
}

bool getline_lf(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

const char* status_name(RunStatus s) { return s == RunStatus::completed ? "completed" : "terminated"; }

RunStatus status_from(const std::string& s) {
  if (s == "completed") return RunStatus::completed;
  if (s == "terminated") return RunStatus::terminated;
  throw ValidationError("unknown run status '" + s + "'");
}

void expect_format(const Json& j, const char* format) {
  if (!j.is_object() || !j.contains("format") || j.at("format") != format) {
    throw ValidationError(std::string("expected a document with format '") + format + "'");
  }
}

Json profiles_to_json(const QualityMatrix& matrix) {
  Json rows = Json::array();
  for (const auto& p : matrix.profiles()) rows.push_back({{"config_id", p.config_id}, {"quality", p.quality}});
  return rows;
}

}  // namespace

std::string format_quality(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_matrix_csv(std::ostream& out, const QualityMatrix& matrix) {
  out << "config_id";
  for (VirtualTime t : matrix.schedule().times()) out << ",t_" << t;
  out << '\n';
  for (const auto& p : matrix.profiles()) {
    out << p.config_id;
    for (double q : p.quality) out << ',' << format_quality(q);
    out << '\n';
  }
}

QualityMatrix read_matrix_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!getline_lf(in, line)) throw ValidationError(source + ": empty matrix file");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "config_id") {
    throw ValidationError(source + ": header must be config_id,t_<time>,... with at least two checkpoints");
  }
  std::vector<VirtualTime> times;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].rfind("t_", 0) != 0) throw ValidationError(source + ": bad column '" + header[c] + "'");
    times.push_back(parse_cell<VirtualTime>(header[c].substr(2), "checkpoint time"));
  }
  const CheckpointSchedule schedule(times.front(), times.size());
  if (schedule.times() != times) {
    throw ValidationError(source + ": checkpoint columns are not a doubling schedule");
  }

  std::vector<PerformanceProfile> profiles;
  std::size_t line_no = 1;
  while (getline_lf(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " columns, found " + std::to_string(cells.size()));
    }
    PerformanceProfile p;
    p.config_id = parse_cell<ConfigId>(cells[0], "config id");
    for (std::size_t c = 1; c < cells.size(); ++c) p.quality.push_back(parse_cell<double>(cells[c], "quality"));
    if (!profiles.empty() && p.config_id <= profiles.back().config_id) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": rows must be in increasing config id order");
    }
    profiles.push_back(std::move(p));
  }
  if (profiles.empty()) throw ValidationError(source + ": matrix has no rows");
  try {
    return QualityMatrix(schedule, std::move(profiles));
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

std::filesystem::path meta_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".meta.json");
  return p;
}

Json schedule_to_json(const CheckpointSchedule& schedule) {
  return {{"base_time", schedule.base_time()}, {"count", schedule.count()}, {"times", schedule.times()}};
}

CheckpointSchedule schedule_from_json(const Json& j) {
  return CheckpointSchedule(j.at("base_time").get<VirtualTime>(), j.at("count").get<std::size_t>());
}

void save_matrix(const std::filesystem::path& csv_path, const QualityMatrix& matrix, const Json& provenance) {
  std::ostringstream csv;
  write_matrix_csv(csv, matrix);
  write_text_file(csv_path, csv.str());
  Json meta = {{"schedule", schedule_to_json(matrix.schedule())}, {"configs", matrix.size()}};
  for (const auto& [key, value] : provenance.items()) meta[key] = value;
  write_json_file(meta_path(csv_path), meta);
}

QualityMatrix load_matrix(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + csv_path.string());
  return read_matrix_csv(in, csv_path.string());
}

Json result_to_json(const RacingResult& result) {
  const auto& params = result.params;
  Json jp = {{"pool_fraction", params.pool_fraction},
             {"margin", params.margin.to_string()},
             {"margin_floor", params.margin.floor()},
             {"seed", params.seed},
             {"candidate_order", params.candidate_order == CandidateOrder::id_order ? "id_order" : "shuffled"},
             {"passes", params.passes},
             {"seed_configs", params.seed_configs ? Json(*params.seed_configs) : Json(nullptr)}};

  Json pool = Json::array();
  for (ConfigId id : result.final_pool.ranked_ids()) {
    for (const auto& m : result.final_pool.members()) {
      if (m.id() != id) continue;
      pool.push_back({{"config_id", id}, {"final_quality", m.final()}, {"row", m.row}, {"profile", m.profile.quality}});
    }
  }

  Json outcomes = Json::array();
  for (const auto& o : result.outcomes) {
    outcomes.push_back({{"config_id", o.config_id},
                        {"pass", o.pass_index},
                        {"seed", o.seed},
                        {"status", status_name(o.status)},
                        {"stop_checkpoint", o.stop_checkpoint},
                        {"virtual_cost", o.virtual_cost}});
  }

  Json j = {{"format", kResultFormat},
            {"config_count", result.config_count},
            {"schedule", schedule_to_json(result.schedule)},
            {"params", jp},
            {"pool_capacity", result.final_pool.capacity()},
            {"total_virtual_cost", result.total_virtual_cost},
            {"full_evaluation_cost", result.full_evaluation_cost()},
            {"pool", pool},
            {"outcomes", outcomes}};
  if (!result.cutoff_history.empty()) {
    Json history = Json::array();
    for (const auto& e : result.cutoff_history) history.push_back({{"event", e.event}, {"line", e.line.value}});
    j["cutoff_history"] = history;
  }
  return j;
}

RacingResult result_from_json(const Json& j) {
  expect_format(j, kResultFormat);
  try {
    RacingResult r;
    r.config_count = j.at("config_count").get<std::size_t>();
    r.schedule = schedule_from_json(j.at("schedule"));
    const auto& jp = j.at("params");
    r.params.pool_fraction = jp.at("pool_fraction").get<double>();
    const auto margin = MarginPolicy::parse(jp.at("margin").get<std::string>());
    const double floor = jp.value("margin_floor", 0.0);
    switch (margin.mode()) {
      case MarginPolicy::Mode::multiplicative:
        r.params.margin = MarginPolicy::multiplicative(margin.parameter(), floor);
        break;
      case MarginPolicy::Mode::additive:
        r.params.margin = MarginPolicy::additive(margin.parameter(), floor);
        break;
      case MarginPolicy::Mode::disabled:
        r.params.margin = margin;
        break;
    }
    r.params.seed = jp.at("seed").get<std::uint64_t>();
    const auto order = jp.at("candidate_order").get<std::string>();
    if (order != "id_order" && order != "shuffled") throw ValidationError("unknown candidate order '" + order + "'");
    r.params.candidate_order = order == "id_order" ? CandidateOrder::id_order : CandidateOrder::shuffled;
    r.params.passes = jp.at("passes").get<int>();
    if (!jp.at("seed_configs").is_null()) r.params.seed_configs = jp.at("seed_configs").get<std::vector<ConfigId>>();

    r.final_pool = Pool(j.at("pool_capacity").get<std::size_t>());
    for (const auto& m : j.at("pool")) {
      PerformanceProfile p{m.at("config_id").get<ConfigId>(), m.at("profile").get<std::vector<double>>()};
      r.final_pool.seed(PoolMember{m.at("row").get<std::size_t>(), std::move(p)});
    }
    for (const auto& o : j.at("outcomes")) {
      r.outcomes.push_back(RunOutcome{o.at("config_id").get<ConfigId>(), o.at("pass").get<int>(),
                                      o.at("seed").get<bool>(), status_from(o.at("status").get<std::string>()),
                                      o.at("stop_checkpoint").get<std::size_t>(), o.at("virtual_cost").get<VirtualTime>()});
    }
    r.total_virtual_cost = j.at("total_virtual_cost").get<VirtualTime>();
    if (j.contains("cutoff_history")) {
      for (const auto& e : j.at("cutoff_history")) {
        r.cutoff_history.push_back({e.at("event").get<std::string>(), CutoffLine{e.at("line").get<std::vector<double>>()}});
      }
    }
    return r;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed racing result: ") + e.what());
  } catch (const std::logic_error& e) {
    throw ValidationError(std::string("malformed racing result: ") + e.what());
  }
}

Json truth_to_json(const TruthTable& truth) {
  return {{"format", kTruthFormat},
          {"config_count", truth.matrix.size()},
          {"schedule", schedule_to_json(truth.matrix.schedule())},
          {"pool_fraction", truth.pool_fraction},
          {"true_best", truth.true_best},
          {"true_top_set", truth.true_top_set},
          {"profiles", profiles_to_json(truth.matrix)}};
}

TruthTable truth_from_json(const Json& j) {
  expect_format(j, kTruthFormat);
  try {
    const auto schedule = schedule_from_json(j.at("schedule"));
    std::vector<PerformanceProfile> profiles;
    for (const auto& p : j.at("profiles")) {
      profiles.push_back({p.at("config_id").get<ConfigId>(), p.at("quality").get<std::vector<double>>()});
    }
    TruthTable truth = build_truth(QualityMatrix(schedule, std::move(profiles)), j.at("pool_fraction").get<double>());
    if (truth.matrix.size() != j.at("config_count").get<std::size_t>() ||
        truth.true_best != j.at("true_best").get<ConfigId>() ||
        truth.true_top_set != j.at("true_top_set").get<std::vector<ConfigId>>()) {
      throw ValidationError("truth table is inconsistent with its profiles");
    }
    return truth;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed truth table: ") + e.what());
  }
}

Json instance_to_json(const SplpInstance& instance) {
  return {{"format", kInstanceFormat},
          {"name", instance.name},
          {"seed", instance.seed},
          {"facilities", instance.facilities()},
          {"customers", instance.customers()},
          {"open_cost", instance.open_cost},
          {"service_cost", instance.service_cost}};
}

SplpInstance instance_from_json(const Json& j) {
  expect_format(j, kInstanceFormat);
  try {
    SplpInstance inst;
    inst.name = j.at("name").get<std::string>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.open_cost = j.at("open_cost").get<std::vector<double>>();
    inst.service_cost = j.at("service_cost").get<std::vector<std::vector<double>>>();
    inst.validate();
    if (inst.facilities() != j.at("facilities").get<std::size_t>() ||
        inst.customers() != j.at("customers").get<std::size_t>()) {
      throw ValidationError("SPLP instance '" + inst.name + "': size fields disagree with cost arrays");
    }
    return inst;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed SPLP instance: ") + e.what());
  }
}

void write_figure_csv(std::ostream& out, std::span<const FigureRow> rows) {
  out << "time_ms,series,value\n";
  for (const auto& r : rows) out << r.time << ',' << r.series << ',' << format_quality(r.value) << '\n';
}

void write_experiment_csv(std::ostream& out, std::span<const ExperimentRow> rows) {
  out << "domain,configs,speedup,overlap_top_pct,overlap_pool_pct,repetitions\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%.4f,%.2f,%.2f,%d\n", r.domain.c_str(), r.configs, r.mean_speedup,
                  r.overlap_top_percent, r.mean_overlap_percent, r.repetitions);
    out << buf;
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void validate_result(const RacingResult& result) {
  const auto& schedule = result.schedule;
  VirtualTime total = 0;
  std::map<ConfigId, int> first_pass;
  std::map<int, std::vector<ConfigId>> raced;
  std::map<int, std::vector<ConfigId>> terminated;
  std::set<ConfigId> completed;
  for (const auto& o : result.outcomes) {
    if (o.stop_checkpoint >= schedule.count()) throw ValidationError("outcome stops past the final checkpoint");
    if (o.virtual_cost != schedule.time(o.stop_checkpoint)) {
      throw ValidationError("outcome cost for configuration " + std::to_string(o.config_id) +
                            " does not match its stop checkpoint");
    }
    if (o.status == RunStatus::terminated && o.stop_checkpoint == schedule.final_index()) {
      throw ValidationError("terminated outcome at the final checkpoint");
    }
    if (o.status == RunStatus::completed && o.stop_checkpoint != schedule.final_index()) {
      throw ValidationError("completed outcome before the final checkpoint");
    }
    total += o.virtual_cost;
    if (o.pass_index == 1) ++first_pass[o.config_id];
    if (!o.seed) raced[o.pass_index].push_back(o.config_id);
    if (o.status == RunStatus::terminated) terminated[o.pass_index].push_back(o.config_id);
    if (o.status == RunStatus::completed) completed.insert(o.config_id);
  }
  if (total != result.total_virtual_cost) throw ValidationError("total virtual cost does not match the outcome ledger");
  if (first_pass.size() != result.config_count) {
    throw ValidationError("first pass covers " + std::to_string(first_pass.size()) + " of " +
                          std::to_string(result.config_count) + " configurations");
  }
  for (const auto& [id, count] : first_pass) {
    if (count != 1) throw ValidationError("configuration " + std::to_string(id) + " raced twice in the first pass");
  }
  for (const auto& [pass, ids] : raced) {
    if (pass == 1) continue;
    if (ids != terminated[pass - 1]) {
      throw ValidationError("pass " + std::to_string(pass) + " does not race exactly the previous pass's terminations");
    }
  }
  if (result.final_pool.size() != result.final_pool.capacity()) throw ValidationError("pool is not at capacity");
  for (const auto& m : result.final_pool.members()) {
    if (!completed.contains(m.id())) {
      throw ValidationError("pool member " + std::to_string(m.id()) + " never completed a full run");
    }
  }
}

void validate_figure_csv(std::istream& in) {
  std::string line;
  if (!getline_lf(in, line) || line != "time_ms,series,value") throw ValidationError("figure CSV header mismatch");
  std::size_t line_no = 1;
  while (getline_lf(in, line)) {
    ++line_no;
    const auto cells = split_csv_line(line);
    if (cells.size() != 3) throw ValidationError("figure CSV line " + std::to_string(line_no) + ": expected 3 columns");
    parse_cell<VirtualTime>(cells[0], "time");
    const auto& s = cells[1];
    if (s != "top_pp" && s != "rank_top" && s.rfind("cutoff_", 0) != 0 && s.rfind("rank_cutoff_", 0) != 0) {
      throw ValidationError("figure CSV line " + std::to_string(line_no) + ": unknown series '" + s + "'");
    }
    parse_cell<double>(cells[2], "value");
  }
}

}  // namespace perfenv::io
