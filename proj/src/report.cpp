#include "seqrules/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "seqrules/error.hpp"

namespace seqrules::report {

namespace {

using json = nlohmann::json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string exact(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string optional_number(const std::optional<double>& v) { return v ? exact(*v) : "null"; }

std::string quoted(const std::string& s) { return json(s).dump(); }

template <typename T, typename F>
std::string list(const std::vector<T>& items, F&& fmt, const std::string& sep = ", ") {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i != 0) out += sep;
    out += fmt(items[i]);
  }
  return out + "]";
}

std::string rule_json(const logic::Rule& r) {
  std::string out = "{\"text\": " + quoted(logic::format_rule(r));
  out += ", \"head\": " + std::to_string(r.head);
  out += ", \"body\": " + list(r.body, [](const logic::BodyPair& p) {
           return "{\"pattern\": " + std::to_string(p.pattern) + ", \"region\": " + std::to_string(p.region) + "}";
         });
  out += ", \"tau\": " + exact(r.tau);
  out += ", \"precision\": " + optional_number(r.precision);
  out += ", \"recall\": " + optional_number(r.recall);
  out += ", \"test_precision\": " + optional_number(r.test_precision);
  out += ", \"test_recall\": " + optional_number(r.test_recall);
  return out + "}";
}

std::string losses_json(const train::LossHistory& h) {
  std::string out = "{\"pretrain\": " + list(h.pretrain, exact);
  out += ", \"joint\": " + list(h.joint, [](const train::EpochLoss& e) {
           return "{\"reconstruction\": " + exact(e.reconstruction) + ", \"clustering\": " + exact(e.clustering) +
                  ", \"rule\": " + exact(e.rule) + ", \"total\": " + exact(e.total) + "}";
         });
  return out + "}";
}

const json& field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(std::string("report is missing '") + key + "'");
  return *it;
}

double number(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number()) throw FormatError(std::string("report field '") + key + "' is not a number");
  return v.get<double>();
}

std::optional<double> optional_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw FormatError(std::string("report field '") + key + "' is not a number");
  return v.get<double>();
}

}  // namespace

std::string report_json(const train::Report& report, const std::string& config_hash) {
  std::string out = "{\n";
  out += "  \"dataset\": " + quoted(report.dataset) + ",\n";
  out += "  \"config_hash\": " + quoted(config_hash) + ",\n";
  out += "  \"targets\": " + list(report.targets, [](std::size_t t) { return std::to_string(t); }) + ",\n";
  out += "  \"accuracy_neural\": " + fixed6(report.accuracy_neural) + ",\n";
  out += "  \"accuracy_rules\": " + fixed6(report.accuracy_rules) + ",\n";
  out += "  \"seconds\": " + fixed6(report.seconds) + ",\n";
  out += "  \"rules\": " + list(report.rules, rule_json, ",\n    ") + ",\n";
  out += "  \"losses\": " + list(report.losses, losses_json, ",\n    ") + "\n";
  return out + "}\n";
}

void emit_report(const train::Report& report, const std::string& config_hash, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write report " + path.string());
  out << report_json(report, config_hash);
  if (!out) throw IoError("write failed for " + path.string());
}

ParsedReport read_report(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
  ParsedReport out;
  try {
    out.dataset = field(root, "dataset").get<std::string>();
    out.config_hash = field(root, "config_hash").get<std::string>();
    out.targets = field(root, "targets").get<std::vector<std::size_t>>();
    out.accuracy_neural = number(root, "accuracy_neural");
    out.accuracy_rules = number(root, "accuracy_rules");
    out.seconds = number(root, "seconds");
    for (const json& r : field(root, "rules")) {
      logic::Rule rule;
      rule.head = field(r, "head").get<std::size_t>();
      for (const json& p : field(r, "body")) {
        rule.body.push_back({field(p, "pattern").get<std::size_t>(), field(p, "region").get<std::size_t>()});
      }
      rule.tau = number(r, "tau");
      rule.precision = optional_field(r, "precision");
      rule.recall = optional_field(r, "recall");
      rule.test_precision = optional_field(r, "test_precision");
      rule.test_recall = optional_field(r, "test_recall");
      out.rule_text.push_back(field(r, "text").get<std::string>());
      out.rules.push_back(std::move(rule));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("report schema violation: ") + e.what());
  }
  return out;
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "clusters") return SweepAxis::clusters;
  if (name == "regions") return SweepAxis::regions;
  if (name == "window_length") return SweepAxis::window_length;
  throw InvalidArgument("unknown sweep axis '" + std::string(name) + "' (clusters, regions, window_length)");
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::clusters: return "clusters";
    case SweepAxis::regions: return "regions";
    case SweepAxis::window_length: return "window_length";
  }
  return "unknown";
}

train::TrainConfig with_axis(const train::TrainConfig& cfg, SweepAxis axis, std::size_t value) {
  train::TrainConfig out = cfg;
  switch (axis) {
    case SweepAxis::clusters: out.symbolizer.clusters = value; break;
    case SweepAxis::regions: out.symbolizer.regions = value; break;
    case SweepAxis::window_length: out.symbolizer.window = value; break;
  }
  return out;
}

std::vector<SweepRow> sweep(const data::Dataset& ds, const train::TrainConfig& cfg, SweepAxis axis,
                            std::span<const std::size_t> values, std::span<const std::size_t> targets) {
  if (values.empty()) throw InvalidArgument("sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (std::size_t v : values) {
    SweepRow row;
    row.value = v;
    try {
      row.report = train::run_experiment(ds, with_axis(cfg, axis, v), targets);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_table(std::span<const SweepRow> rows, SweepAxis axis) {
  std::string out = std::string(to_string(axis)) + "\taccuracy_neural\taccuracy_rules\trules\tseconds\tstatus\n";
  for (const auto& r : rows) {
    out += std::to_string(r.value) + "\t";
    if (r.report) {
      out += fixed6(r.report->accuracy_neural) + "\t" + fixed6(r.report->accuracy_rules) + "\t" +
             std::to_string(r.report->rules.size()) + "\t" + fixed6(r.report->seconds) + "\tok\n";
    } else {
      std::string msg = r.error;
      for (char& c : msg) {
        if (c == '\t' || c == '\n') c = ' ';
      }
      out += "nan\tnan\t0\tnan\tfailed: " + msg + "\n";
    }
  }
  return out;
}

}  // namespace seqrules::report
