#include "seqrules/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "seqrules/error.hpp"

namespace seqrules::config {

namespace {

using json = nlohmann::ordered_json;

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// Typed, strict view of one JSON object.
class Section {
 public:
  Section(const json& obj, std::string path, std::vector<std::string> keys) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError("type mismatch at " + label() + ": expected an object");
    for (const auto& [key, value] : obj_.items()) {
      if (std::find(keys.begin(), keys.end(), key) != keys.end()) continue;
      std::string msg = "unknown key '" + where(key) + "'";
      if (const auto hint = suggest(key, keys); !hint.empty()) msg += "; did you mean '" + hint + "'?";
      throw ConfigError(msg);
    }
  }

  const json* find(const std::string& key) const {
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void get(const std::string& key, std::size_t& out) const {
    if (const json* v = find(key)) out = as_size(*v, where(key));
  }
  void get(const std::string& key, unsigned& out) const {
    if (const json* v = find(key)) {
      const std::size_t n = as_size(*v, where(key));
      if (n > std::numeric_limits<unsigned>::max()) throw ConfigError("value out of range at " + where(key));
      out = static_cast<unsigned>(n);
    }
  }
  void get(const std::string& key, double& out) const {
    if (const json* v = find(key)) out = as_double(*v, where(key));
  }
  void get(const std::string& key, bool& out) const {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError("type mismatch at " + where(key) + ": expected a boolean");
      out = v->get<bool>();
    }
  }
  void get(const std::string& key, std::string& out) const {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError("type mismatch at " + where(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }
  void get(const std::string& key, std::vector<double>& out) const {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw ConfigError("type mismatch at " + where(key) + ": expected an array of numbers");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) out.push_back(as_double((*v)[i], where(key) + "[" + std::to_string(i) + "]"));
    }
  }
  void get(const std::string& key, std::vector<std::size_t>& out) const {
    if (const json* v = find(key)) out = as_sizes(*v, where(key));
  }

  static std::size_t as_size(const json& v, const std::string& at) {
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::size_t>(v.get<std::int64_t>());
    throw ConfigError("type mismatch at " + at + ": expected a non-negative integer");
  }
  static std::vector<std::size_t> as_sizes(const json& v, const std::string& at) {
    if (!v.is_array()) throw ConfigError("type mismatch at " + at + ": expected an array of integers");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_size(v[i], at + "[" + std::to_string(i) + "]"));
    return out;
  }
  static double as_double(const json& v, const std::string& at) {
    if (!v.is_number()) throw ConfigError("type mismatch at " + at + ": expected a number");
    return v.get<double>();
  }

 private:
  std::string label() const { return path_.empty() ? "<root>" : path_; }

  const json& obj_;
  std::string path_;
};

const std::vector<std::pair<DatasetKind, std::string>> kKinds{{DatasetKind::triangular, "triangular"},
                                                              {DatasetKind::trigonometric, "trigonometric"},
                                                              {DatasetKind::ucr, "ucr"},
                                                              {DatasetKind::mnist, "mnist"}};

DatasetKind kind_from(const std::string& name) {
  std::vector<std::string> names;
  for (const auto& [k, n] : kKinds) {
    if (n == name) return k;
    names.push_back(n);
  }
  std::string msg = "unknown dataset kind '" + name + "'";
  if (const auto hint = suggest(name, names); !hint.empty()) msg += "; did you mean '" + hint + "'?";
  throw ConfigError(msg);
}

void read_symbolizer(const Section& s, sym::SymbolizerConfig& c) {
  s.get("window", c.window);
  s.get("regions", c.regions);
  s.get("clusters", c.clusters);
  s.get("embedding", c.embedding);
  s.get("hidden", c.hidden);
  s.get("alpha", c.alpha);
}

void read_rulenet(const Section& s, rules::RuleNetConfig& c) {
  s.get("hidden", c.hidden);
  s.get("rules", c.rules);
  s.get("bias", c.bias);
  s.get("init_scale", c.init_scale);
  s.get("init_anchor", c.init_anchor);
}

const std::vector<std::string> kSymbolizerKeys{"window", "regions", "clusters", "embedding", "hidden", "alpha"};
const std::vector<std::string> kRulenetKeys{"hidden", "rules", "bias", "init_scale", "init_anchor"};
const std::vector<std::string> kTrainingKeys{
    "lambda_cluster", "lambda_rule",   "learning_rate", "rule_learning_rate", "pretrain_epochs",
    "joint_epochs",   "batch_size",    "pretrain_batch", "pretrain_windows",  "kmeans_points",
    "seed",           "pretrain",      "taus",          "min_precision",      "baseline_refresh"};

void read_training(const Section& s, train::TrainConfig& c) {
  s.get("lambda_cluster", c.lambda_cluster);
  s.get("lambda_rule", c.lambda_rule);
  s.get("learning_rate", c.learning_rate);
  s.get("rule_learning_rate", c.rule_learning_rate);
  s.get("pretrain_epochs", c.pretrain_epochs);
  s.get("joint_epochs", c.joint_epochs);
  s.get("batch_size", c.batch_size);
  s.get("pretrain_batch", c.pretrain_batch);
  s.get("pretrain_windows", c.pretrain_windows);
  s.get("kmeans_points", c.kmeans_points);
  if (const json* v = s.find("seed")) c.seed = Section::as_size(*v, s.where("seed"));
  s.get("pretrain", c.pretrain);
  s.get("taus", c.taus);
  s.get("min_precision", c.min_precision);
  s.get("baseline_refresh", c.baseline_refresh);
}

json train_json(const train::TrainConfig& c) {
  json out;
  const auto& s = c.symbolizer;
  out["symbolizer"] = {{"window", s.window},       {"regions", s.regions}, {"clusters", s.clusters},
                       {"embedding", s.embedding}, {"hidden", s.hidden},   {"alpha", s.alpha}};
  const auto& r = c.rulenet;
  out["rulenet"] = {{"hidden", r.hidden}, {"rules", r.rules}, {"bias", r.bias}, {"init_scale", r.init_scale},
                    {"init_anchor", r.init_anchor}};
  out["training"] = {{"lambda_cluster", c.lambda_cluster},
                     {"lambda_rule", c.lambda_rule},
                     {"learning_rate", c.learning_rate},
                     {"rule_learning_rate", c.rule_learning_rate},
                     {"pretrain_epochs", c.pretrain_epochs},
                     {"joint_epochs", c.joint_epochs},
                     {"batch_size", c.batch_size},
                     {"pretrain_batch", c.pretrain_batch},
                     {"pretrain_windows", c.pretrain_windows},
                     {"kmeans_points", c.kmeans_points},
                     {"seed", c.seed},
                     {"pretrain", c.pretrain},
                     {"taus", c.taus},
                     {"min_precision", c.min_precision},
                     {"baseline_refresh", c.baseline_refresh}};
  return out;
}

void read_train_sections(const json& root, train::TrainConfig& c) {
  if (const auto it = root.find("symbolizer"); it != root.end()) read_symbolizer(Section(*it, "symbolizer", kSymbolizerKeys), c.symbolizer);
  if (const auto it = root.find("rulenet"); it != root.end()) read_rulenet(Section(*it, "rulenet", kRulenetKeys), c.rulenet);
  if (const auto it = root.find("training"); it != root.end()) read_training(Section(*it, "training", kTrainingKeys), c);
}

json parse_json(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

void validate_resolved(const RunConfig& cfg) {
  try {
    cfg.train.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

}  // namespace

std::string suggest(std::string_view key, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (const auto& c : candidates) {
    const std::size_t d = edit_distance(key, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best_d <= std::max<std::size_t>(2, key.size() / 3) ? best : std::string();
}

std::string_view to_string(DatasetKind kind) {
  for (const auto& [k, n] : kKinds) {
    if (k == kind) return n;
  }
  return "unknown";
}

RunConfig parse_config_text(std::string_view text) {
  const json root = parse_json(text);
  const Section top(root, "", {"dataset", "symbolizer", "rulenet", "training", "output", "targets"});
  RunConfig cfg;
  if (const json* d = top.find("dataset")) {
    const Section s(*d, "dataset", {"kind", "path", "per_class", "noise_std", "znormalize", "positive", "negative",
                                    "limit_train", "limit_test"});
    std::string kind(to_string(cfg.dataset.kind));
    s.get("kind", kind);
    cfg.dataset.kind = kind_from(kind);
    std::string path = cfg.dataset.path.string();
    s.get("path", path);
    cfg.dataset.path = path;
    s.get("per_class", cfg.dataset.per_class);
    s.get("noise_std", cfg.dataset.noise_std);
    s.get("znormalize", cfg.dataset.znormalize);
    s.get("positive", cfg.dataset.positive);
    s.get("negative", cfg.dataset.negative);
    s.get("limit_train", cfg.dataset.limit_train);
    s.get("limit_test", cfg.dataset.limit_test);
  }
  read_train_sections(root, cfg.train);
  std::string output = cfg.output.string();
  top.get("output", output);
  cfg.output = output;
  top.get("targets", cfg.targets);
  validate_resolved(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  RunConfig cfg = parse_config_text(text.str());
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  if (!cfg.dataset.path.empty() && cfg.dataset.path.is_relative()) {
    cfg.dataset.path = (base / cfg.dataset.path).lexically_normal();
  }
  check_paths(cfg.dataset);
  return cfg;
}

std::string to_json(const RunConfig& cfg) {
  json root;
  root["dataset"] = {{"kind", std::string(to_string(cfg.dataset.kind))},
                     {"path", cfg.dataset.path.string()},
                     {"per_class", cfg.dataset.per_class},
                     {"noise_std", cfg.dataset.noise_std},
                     {"znormalize", cfg.dataset.znormalize},
                     {"positive", cfg.dataset.positive},
                     {"negative", cfg.dataset.negative},
                     {"limit_train", cfg.dataset.limit_train},
                     {"limit_test", cfg.dataset.limit_test}};
  const json train = train_json(cfg.train);
  for (const auto& [k, v] : train.items()) root[k] = v;
  root["output"] = cfg.output.string();
  root["targets"] = cfg.targets;
  return root.dump(2) + "\n";
}

std::string to_json(const train::TrainConfig& cfg) { return train_json(cfg).dump(); }

train::TrainConfig train_config_from_json(std::string_view text) {
  const json root = parse_json(text);
  const Section top(root, "", {"symbolizer", "rulenet", "training"});
  train::TrainConfig cfg;
  read_train_sections(root, cfg);
  return cfg;
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void check_paths(const DatasetConfig& cfg) {
  namespace fs = std::filesystem;
  const auto require = [](const fs::path& p) {
    if (!fs::exists(p)) throw ConfigError("dataset path does not exist: " + p.string());
  };
  if (cfg.kind == DatasetKind::ucr) {
    if (cfg.path.empty()) throw ConfigError("dataset.path is required for ucr data");
    require(cfg.path.string() + "_TRAIN.tsv");
    require(cfg.path.string() + "_TEST.tsv");
  } else if (cfg.kind == DatasetKind::mnist) {
    if (cfg.path.empty()) throw ConfigError("dataset.path is required for mnist data");
    const auto p = data::MnistPaths::in_directory(cfg.path);
    for (const auto& f : {p.train_images, p.train_labels, p.test_images, p.test_labels}) require(f);
  }
}

data::Dataset load_dataset(const DatasetConfig& cfg, std::uint64_t seed) {
  switch (cfg.kind) {
    case DatasetKind::triangular:
    case DatasetKind::trigonometric: {
      data::SyntheticSpec spec;
      spec.kind = cfg.kind == DatasetKind::triangular ? data::SyntheticKind::triangular
                                                      : data::SyntheticKind::trigonometric;
      spec.per_class = cfg.per_class;
      spec.noise_std = cfg.noise_std;
      nn::Rng rng(seed);
      return data::gen_synthetic(spec, rng);
    }
    case DatasetKind::ucr: {
      data::Dataset ds = data::load_ucr(cfg.path);
      if (cfg.znormalize) data::znormalize(ds);
      return ds;
    }
    case DatasetKind::mnist:
      return data::load_mnist(data::MnistPaths::in_directory(cfg.path), cfg.positive, cfg.negative, cfg.limit_train,
                              cfg.limit_test);
  }
  throw ConfigError("unsupported dataset kind");
}

}  // namespace seqrules::config
