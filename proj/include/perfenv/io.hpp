#pragma once

// File formats.
//
// Quality matrix CSV (UTF-8, LF):
//   config_id,t_1,t_2,t_4,...,t_1024
//   one row per configuration in id order, qualities in shortest round-trip form
// Sidecar `<stem>.meta.json`: {"schedule": {...}, "generator": ..., "seed": ..., ...}
//
// JSON documents carry a "format" tag; see README.md for the field lists.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "perfenv/metrics.hpp"
#include "perfenv/profiles.hpp"
#include "perfenv/racing.hpp"
#include "perfenv/splp.hpp"

namespace perfenv::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kResultFormat = "perfenv.racing_result/1";
inline constexpr const char* kTruthFormat = "perfenv.truth/1";
inline constexpr const char* kInstanceFormat = "perfenv.splp_instance/1";

/// Shortest decimal that parses back to the same double.
std::string format_quality(double v);

void write_matrix_csv(std::ostream& out, const QualityMatrix& matrix);
QualityMatrix read_matrix_csv(std::istream& in, const std::string& source = "<stream>");

/// `m.csv` -> `m.meta.json`
std::filesystem::path meta_path(const std::filesystem::path& csv_path);

Json schedule_to_json(const CheckpointSchedule& schedule);
CheckpointSchedule schedule_from_json(const Json& j);

/// Writes the CSV and its sidecar. `provenance` is merged into the sidecar.
void save_matrix(const std::filesystem::path& csv_path, const QualityMatrix& matrix, const Json& provenance);
QualityMatrix load_matrix(const std::filesystem::path& csv_path);

Json result_to_json(const RacingResult& result);
RacingResult result_from_json(const Json& j);

Json truth_to_json(const TruthTable& truth);
TruthTable truth_from_json(const Json& j);

Json instance_to_json(const SplpInstance& instance);
SplpInstance instance_from_json(const Json& j);

void write_figure_csv(std::ostream& out, std::span<const FigureRow> rows);
void write_experiment_csv(std::ostream& out, std::span<const ExperimentRow> rows);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Structural checks beyond parsing, e.g. ledger consistency of a result.
void validate_result(const RacingResult& result);
void validate_figure_csv(std::istream& in);

}  // namespace perfenv::io
