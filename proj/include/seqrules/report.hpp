#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqrules/config.hpp"
#include "seqrules/trainer.hpp"

namespace seqrules::report {

/// JSON record with a fixed key order; accuracies carry six decimals.
std::string report_json(const train::Report& report, const std::string& config_hash);
void emit_report(const train::Report& report, const std::string& config_hash, const std::filesystem::path& path);

struct ParsedReport {
  std::string dataset;
  std::string config_hash;
  std::vector<std::size_t> targets;
  double accuracy_neural = 0.0;
  double accuracy_rules = 0.0;
  double seconds = 0.0;
  std::vector<logic::Rule> rules;  // rebuilt from the structured fields
  std::vector<std::string> rule_text;
};

/// Reads a record written by report_json. Throws FormatError on schema violations.
ParsedReport read_report(std::string_view text);

enum class SweepAxis { clusters, regions, window_length };

SweepAxis parse_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

struct SweepRow {
  std::size_t value = 0;
  std::optional<train::Report> report;  // unset when the cell failed
  std::string error;
};

/// `cfg` with one axis overridden. Regions for `window_length` and `clusters` stay as configured.
train::TrainConfig with_axis(const train::TrainConfig& cfg, SweepAxis axis, std::size_t value);

/// One train + evaluate per value under the shared seed; failing cells are
/// recorded and the sweep continues.
std::vector<SweepRow> sweep(const data::Dataset& ds, const train::TrainConfig& cfg, SweepAxis axis,
                            std::span<const std::size_t> values, std::span<const std::size_t> targets);

/// Tab-separated table: axis value, neural accuracy, rule accuracy, rule count, seconds, status.
std::string sweep_table(std::span<const SweepRow> rows, SweepAxis axis);

}  // namespace seqrules::report
