#include "seqrules/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include "seqrules/error.hpp"

namespace seqrules::data {

void Dataset::validate() const {
  if (train.empty() || test.empty()) throw InvalidDataset(name + ": both splits must be non-empty");
  const std::size_t len = length();
  if (len == 0) throw InvalidDataset(name + ": zero-length sequences");
  for (const auto* split : {&train, &test}) {
    for (const auto& s : *split) {
      if (s.values.size() != len) throw InvalidDataset(name + ": sequences differ in length");
      if (s.label >= num_classes) throw InvalidDataset(name + ": label out of range");
      if (!all_finite(s.values)) throw InvalidDataset(name + ": non-finite value");
    }
  }
}

std::size_t synthetic_length(SyntheticKind kind) { return kind == SyntheticKind::triangular ? 20 : 30; }

Vector synthetic_template(SyntheticKind kind, std::size_t label) {
  // Both shapes alternate increasing and decreasing runs of five points.
  // The negative class swaps the order of the runs (a half-period shift).
  const std::size_t length = synthetic_length(kind);
  const double shift = label == 1 ? 0.0 : 5.0;
  Vector v(length);
  for (std::size_t t = 0; t < length; ++t) {
    const double u = static_cast<double>(t) + shift;
    if (kind == SyntheticKind::triangular) {
      const double phase = std::fmod(u, 10.0);
      v[t] = phase < 5.0 ? phase : 10.0 - phase;
    } else {
      v[t] = -2.5 * std::cos(std::numbers::pi * (u + 0.5) / 5.0);
    }
  }
  return v;
}

Dataset gen_synthetic(const SyntheticSpec& spec, nn::Rng& rng) {
  Dataset ds;
  ds.name = spec.kind == SyntheticKind::triangular ? "synthetic-triangular" : "synthetic-trigonometric";
  ds.num_classes = 2;
  ds.class_names = {"0", "1"};
  for (auto* split : {&ds.train, &ds.test}) {
    for (std::size_t label : {std::size_t{1}, std::size_t{0}}) {
      const Vector base = synthetic_template(spec.kind, label);
      for (std::size_t i = 0; i < spec.per_class; ++i) {
        LabeledSequence s{base, label};
        for (double& v : s.values) v += rng.normal(0.0, spec.noise_std);
        split->push_back(std::move(s));
      }
    }
  }
  return ds;
}

RawSplit parse_ucr(std::istream& in) {
  RawSplit out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t,") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', '\t');
    std::istringstream fields(line);
    std::string label;
    fields >> label;
    Vector series;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        series.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("not a number: '" + tok + "'", line_no);
      }
    }
    if (series.empty()) throw ParseError("row has a label but no values", line_no);
    if (expected == 0) expected = series.size();
    if (series.size() != expected) {
      throw ParseError("row has " + std::to_string(series.size()) + " values, expected " + std::to_string(expected),
                       line_no);
    }
    out.labels.push_back(label);
    out.series.push_back(std::move(series));
  }
  return out;
}

namespace {

RawSplit read_split(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  RawSplit split = parse_ucr(in);
  if (split.series.empty()) throw InvalidDataset(path.string() + ": no series");
  return split;
}

// Numeric labels sort numerically, others lexicographically.
bool label_less(const std::string& a, const std::string& b) {
  char* ea = nullptr;
  char* eb = nullptr;
  const double da = std::strtod(a.c_str(), &ea);
  const double db = std::strtod(b.c_str(), &eb);
  if (*ea == '\0' && *eb == '\0') return da < db;
  return a < b;
}

}  // namespace

Dataset load_ucr(const std::filesystem::path& train_path, const std::filesystem::path& test_path) {
  RawSplit train = read_split(train_path);
  RawSplit test = read_split(test_path);
  if (train.series.front().size() != test.series.front().size()) {
    throw InvalidDataset("train and test series differ in length");
  }
  std::vector<std::string> names = train.labels;
  names.insert(names.end(), test.labels.begin(), test.labels.end());
  std::sort(names.begin(), names.end(), label_less);
  names.erase(std::unique(names.begin(), names.end(), [](const auto& a, const auto& b) {
                return !label_less(a, b) && !label_less(b, a);
              }),
              names.end());
  const auto id_of = [&](const std::string& label) {
    const auto it = std::lower_bound(names.begin(), names.end(), label, label_less);
    return static_cast<std::size_t>(it - names.begin());
  };

  Dataset ds;
  ds.name = train_path.stem().string();
  if (const auto cut = ds.name.rfind("_TRAIN"); cut != std::string::npos) ds.name.resize(cut);
  ds.num_classes = names.size();
  ds.class_names = names;
  for (std::size_t i = 0; i < train.series.size(); ++i) ds.train.push_back({std::move(train.series[i]), id_of(train.labels[i])});
  for (std::size_t i = 0; i < test.series.size(); ++i) ds.test.push_back({std::move(test.series[i]), id_of(test.labels[i])});
  ds.validate();
  return ds;
}

Dataset load_ucr(const std::filesystem::path& prefix) {
  const std::string p = prefix.string();
  return load_ucr(p + "_TRAIN.tsv", p + "_TEST.tsv");
}

namespace {

std::uint32_t read_be32(std::istream& in, const std::string& what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError(what + ": truncated header");
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

std::ifstream open_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

IdxImages read_idx_images(const std::filesystem::path& path) {
  auto in = open_binary(path);
  const std::string what = path.string();
  if (read_be32(in, what) != 0x00000803) throw FormatError(what + ": bad magic number for IDX images");
  const std::size_t n = read_be32(in, what);
  IdxImages out;
  out.rows = read_be32(in, what);
  out.cols = read_be32(in, what);
  const std::size_t pixels = out.rows * out.cols;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint8_t> img(pixels);
    if (!in.read(reinterpret_cast<char*>(img.data()), static_cast<std::streamsize>(pixels))) {
      throw FormatError(what + ": truncated image payload");
    }
    out.images.push_back(std::move(img));
  }
  return out;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
  auto in = open_binary(path);
  const std::string what = path.string();
  if (read_be32(in, what) != 0x00000801) throw FormatError(what + ": bad magic number for IDX labels");
  const std::size_t n = read_be32(in, what);
  std::vector<std::uint8_t> labels;
  for (std::size_t i = 0; i < n; ++i) {
    char c = 0;
    if (!in.get(c)) throw FormatError(what + ": truncated label payload");
    labels.push_back(static_cast<std::uint8_t>(c));
  }
  return labels;
}

MnistPaths MnistPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte", dir / "t10k-images-idx3-ubyte",
          dir / "t10k-labels-idx1-ubyte"};
}

namespace {

std::vector<LabeledSequence> mnist_split(const std::filesystem::path& images, const std::filesystem::path& labels,
                                         unsigned positive, unsigned negative, std::size_t limit) {
  const IdxImages imgs = read_idx_images(images);
  const auto labs = read_idx_labels(labels);
  if (imgs.images.size() != labs.size()) throw FormatError("MNIST image and label counts differ");
  std::vector<LabeledSequence> out;
  std::size_t kept_pos = 0, kept_neg = 0;
  for (std::size_t i = 0; i < labs.size(); ++i) {
    const bool pos = labs[i] == positive;
    if (!pos && labs[i] != negative) continue;
    std::size_t& kept = pos ? kept_pos : kept_neg;
    if (limit != 0 && kept >= limit) continue;
    ++kept;
    LabeledSequence s;
    s.label = pos ? 1 : 0;
    s.values.reserve(imgs.images[i].size());
    for (std::uint8_t px : imgs.images[i]) s.values.push_back(static_cast<double>(px) / 255.0);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

Dataset load_mnist(const MnistPaths& paths, unsigned positive, unsigned negative, std::size_t limit_train,
                   std::size_t limit_test) {
  if (positive == negative || positive > 9 || negative > 9) throw InvalidArgument("load_mnist: need two distinct digits");
  Dataset ds;
  ds.name = "mnist-" + std::to_string(positive) + "-vs-" + std::to_string(negative);
  ds.num_classes = 2;
  ds.class_names = {std::to_string(negative), std::to_string(positive)};
  ds.train = mnist_split(paths.train_images, paths.train_labels, positive, negative, limit_train);
  ds.test = mnist_split(paths.test_images, paths.test_labels, positive, negative, limit_test);
  ds.validate();
  return ds;
}

Dataset binarize(const Dataset& ds, std::size_t target) {
  if (target >= ds.num_classes) throw InvalidArgument("binarize: target class out of range");
  Dataset out = ds;
  for (auto* split : {&out.train, &out.test}) {
    for (auto& s : *split) s.label = s.label == target ? 1 : 0;
  }
  out.num_classes = 2;
  const std::string name = target < ds.class_names.size() ? ds.class_names[target] : std::to_string(target);
  out.class_names = {"not-" + name, name};
  return out;
}

void znormalize(Dataset& ds) {
  for (auto* split : {&ds.train, &ds.test}) {
    for (auto& s : *split) {
      const double n = static_cast<double>(s.values.size());
      double mean = 0.0;
      for (double v : s.values) mean += v / n;
      double var = 0.0;
      for (double v : s.values) var += (v - mean) * (v - mean) / n;
      const double sd = std::sqrt(var);
      for (double& v : s.values) v = sd > 1e-12 ? (v - mean) / sd : 0.0;
    }
  }
}

void write_ucr(const std::filesystem::path& path, const std::vector<LabeledSequence>& split) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(17);
  for (const auto& s : split) {
    out << s.label;
    for (double v : s.values) out << '\t' << v;
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace seqrules::data
