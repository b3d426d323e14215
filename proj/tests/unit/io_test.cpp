#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "perfenv/error.hpp"
#include "perfenv/io.hpp"
#include "perfenv/synthetic.hpp"

using namespace perfenv;
namespace fs = std::filesystem;

namespace {

RacingResult race_b() {
  ReplayEvaluator ev(fixtures::racing_b());
  RacingParams p;
  p.seed_configs = std::vector<ConfigId>{0, 1};
  p.record_cutoff_history = true;
  return run_racing(ev, p);
}

QualityMatrix read_csv(const std::string& text) {
  std::istringstream in(text);
  return io::read_matrix_csv(in);
}

}  // namespace

TEST_CASE("matrix CSV round-trips exactly") {
  SyntheticParams sp;
  sp.configs = 50;
  const auto m = generate_synthetic(sp);
  std::ostringstream out;
  io::write_matrix_csv(out, m);
  CHECK(out.str().rfind("config_id,t_1,t_2,t_4,t_8,t_16,t_32,t_64,t_128,t_256,t_512,t_1024\n", 0) == 0);
  const auto back = read_csv(out.str());
  CHECK(back.schedule() == m.schedule());
  CHECK(back.profiles() == m.profiles());
}

TEST_CASE("malformed matrix CSV is rejected") {
  CHECK_THROWS_AS(read_csv(""), ValidationError);
  CHECK_THROWS_AS(read_csv("config_id,t_1,t_2\n0,1\n"), ValidationError);
  CHECK_THROWS_AS(read_csv("config_id,t_1,t_3\n0,1,0.5\n"), ValidationError);
  CHECK_THROWS_AS(read_csv("config_id,t_1,t_2\n0,1,abc\n"), ValidationError);
  CHECK_THROWS_AS(read_csv("config_id,t_1,t_2\n0,0.5,0.7\n"), ValidationError);
  CHECK_THROWS_AS(read_csv("config_id,t_1,t_2\n1,1,0.5\n0,1,0.5\n"), ValidationError);
  CHECK_NOTHROW(read_csv("config_id,t_2,t_4\n0,1,0.5\n3,0.9,0.1\n"));
}

TEST_CASE("matrix files carry a sidecar") {
  const auto dir = fs::temp_directory_path() / "perfenv_io_test";
  fs::create_directories(dir);
  const auto path = dir / "m.csv";
  io::save_matrix(path, fixtures::racing_a(), {{"generator", "fixture"}});
  CHECK(io::meta_path(path) == dir / "m.meta.json");
  const auto meta = io::read_json_file(io::meta_path(path));
  CHECK(meta.at("generator") == "fixture");
  CHECK(io::load_matrix(path).profiles() == fixtures::racing_a().profiles());
  fs::remove_all(dir);
}

TEST_CASE("racing result JSON round-trips and validates") {
  const auto r = race_b();
  const auto j = io::result_to_json(r);
  CHECK(j.at("format") == io::kResultFormat);
  const auto back = io::result_from_json(j);
  CHECK(back.outcomes == r.outcomes);
  CHECK(back.final_pool.ranked_ids() == r.final_pool.ranked_ids());
  CHECK(back.total_virtual_cost == r.total_virtual_cost);
  CHECK(back.params.margin == r.params.margin);
  CHECK(back.cutoff_history.size() == r.cutoff_history.size());
  CHECK(io::result_to_json(back).dump() == j.dump());
  CHECK_NOTHROW(io::validate_result(back));
}

TEST_CASE("tampered results fail validation") {
  const auto j = io::result_to_json(race_b());
  SUBCASE("total does not match the ledger") {
    auto bad = j;
    bad["total_virtual_cost"] = 4000;
    CHECK_THROWS_AS(io::validate_result(io::result_from_json(bad)), ValidationError);
  }
  SUBCASE("cost does not match the stop checkpoint") {
    auto bad = j;
    bad["outcomes"][2]["virtual_cost"] = 4;
    bad["total_virtual_cost"] = 4116;
    CHECK_THROWS_AS(io::validate_result(io::result_from_json(bad)), ValidationError);
  }
  SUBCASE("wrong format tag") {
    auto bad = j;
    bad["format"] = "something/1";
    CHECK_THROWS_AS(io::result_from_json(bad), ValidationError);
  }
  SUBCASE("missing field") {
    auto bad = j;
    bad.erase("outcomes");
    CHECK_THROWS_AS(io::result_from_json(bad), ValidationError);
  }
}

TEST_CASE("truth and instance JSON round-trip") {
  const auto truth = build_truth(fixtures::racing_b(), 0.4);
  const auto t = io::truth_from_json(io::truth_to_json(truth));
  CHECK(t.true_best == truth.true_best);
  CHECK(t.true_top_set == truth.true_top_set);
  CHECK(t.matrix.profiles() == truth.matrix.profiles());

  const auto inst = generate_splp_instance(4, 6, 9);
  const auto i = io::instance_from_json(io::instance_to_json(inst));
  CHECK(i.name == inst.name);
  CHECK(i.seed == inst.seed);
  CHECK(i.open_cost == inst.open_cost);
  CHECK(i.service_cost == inst.service_cost);

  auto bad = io::instance_to_json(inst);
  bad["service_cost"][0].erase(0);
  CHECK_THROWS_AS(io::instance_from_json(bad), ValidationError);
}

TEST_CASE("figure CSV validation") {
  std::istringstream good("time_ms,series,value\n1,top_pp,0.5\n2,top_pp,0.4\n");
  CHECK_NOTHROW(io::validate_figure_csv(good));
  std::istringstream bad_header("time,series,value\n1,top_pp,0.5\n");
  CHECK_THROWS_AS(io::validate_figure_csv(bad_header), ValidationError);
  std::istringstream bad_value("time_ms,series,value\n1,top_pp,x\n");
  CHECK_THROWS_AS(io::validate_figure_csv(bad_value), ValidationError);
}
