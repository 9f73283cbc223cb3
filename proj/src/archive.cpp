#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "seqrules/config.hpp"
#include "seqrules/error.hpp"
#include "seqrules/trainer.hpp"

namespace seqrules::train {

namespace {

constexpr char kMagic[8] = {'S', 'E', 'Q', 'R', 'U', 'L', 'E', 'S'};

static_assert(std::endian::native == std::endian::little, "archive I/O assumes a little-endian host");

class Writer {
 public:
  void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u32(std::uint32_t v) { bytes(&v, 4); }
  void u64(std::uint64_t v) { bytes(&v, 8); }
  void f64(double v) { bytes(&v, 8); }
  void str(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  void vec(std::span<const double> v) {
    u64(v.size());
    bytes(v.data(), v.size() * sizeof(double));
  }
  void matrix(const Matrix& m) {
    u64(m.rows());
    u64(m.cols());
    bytes(m.values().data(), m.values().size() * sizeof(double));
  }
  void net(const nn::DenseNet& n) {
    u64(n.layers.size());
    for (const auto& l : n.layers) {
      u8(static_cast<std::uint8_t>(l.activation));
      matrix(l.weights);
      vec(l.bias);
    }
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  void bytes(void* p, std::size_t n) {
    if (n > in_.size() - pos_) throw FormatError("truncated model archive");
    std::memcpy(p, in_.data() + pos_, n);
    pos_ += n;
  }
  std::uint8_t u8() { return read<std::uint8_t>(); }
  std::uint32_t u32() { return read<std::uint32_t>(); }
  std::uint64_t u64() { return read<std::uint64_t>(); }
  double f64() { return read<double>(); }
  std::size_t count(std::size_t elem) {
    const std::uint64_t n = u64();
    if (elem != 0 && n > (in_.size() - pos_) / elem) throw FormatError("truncated model archive");
    return static_cast<std::size_t>(n);
  }
  std::string str() {
    std::string s(count(1), '\0');
    bytes(s.data(), s.size());
    return s;
  }
  Vector vec() {
    Vector v(count(sizeof(double)));
    bytes(v.data(), v.size() * sizeof(double));
    return v;
  }
  Matrix matrix() {
    const std::uint64_t r = u64();
    const std::uint64_t c = u64();
    if (c != 0 && r > (in_.size() - pos_) / sizeof(double) / c) throw FormatError("truncated model archive");
    Matrix m(r, c);
    bytes(m.values().data(), m.values().size() * sizeof(double));
    return m;
  }
  nn::DenseNet net() {
    nn::DenseNet n;
    n.layers.resize(count(1));
    for (auto& l : n.layers) {
      const std::uint8_t act = u8();
      if (act > static_cast<std::uint8_t>(nn::Activation::sigmoid)) throw FormatError("unknown activation tag");
      l.activation = static_cast<nn::Activation>(act);
      l.weights = matrix();
      l.bias = vec();
    }
    return n;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  template <typename T>
  T read() {
    T v;
    bytes(&v, sizeof v);
    return v;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

void write_model(Writer& w, const TrainedModel& m) {
  w.str(config::to_json(m.config));
  w.u64(m.target);
  w.u64(m.train_counts.size());
  for (auto c : m.train_counts) w.u64(c);
  w.u8(m.hard_assignment ? 1 : 0);
  w.net(m.autoencoder.encoder);
  w.net(m.autoencoder.decoder);
  w.matrix(m.bank.centers);
  w.u64(m.rulenet.raw.size());
  for (const auto& r : m.rulenet.raw) w.matrix(r);
  w.f64(m.rulenet.bias);
  w.vec(m.history.pretrain);
  w.u64(m.history.joint.size());
  for (const auto& e : m.history.joint) {
    w.f64(e.reconstruction);
    w.f64(e.clustering);
    w.f64(e.rule);
    w.f64(e.total);
  }
}

TrainedModel read_model(Reader& r) {
  TrainedModel m;
  try {
    m.config = config::train_config_from_json(r.str());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("bad embedded config: ") + e.what());
  }
  m.target = r.u64();
  m.train_counts.resize(r.count(8));
  for (auto& c : m.train_counts) c = r.u64();
  m.hard_assignment = r.u8() != 0;
  m.autoencoder.encoder = r.net();
  m.autoencoder.decoder = r.net();
  m.bank.centers = r.matrix();
  m.rulenet.raw.resize(r.count(16));
  for (auto& raw : m.rulenet.raw) raw = r.matrix();
  m.rulenet.bias = r.f64();
  m.history.pretrain = r.vec();
  m.history.joint.resize(r.count(32));
  for (auto& e : m.history.joint) {
    e.reconstruction = r.f64();
    e.clustering = r.f64();
    e.rule = r.f64();
    e.total = r.f64();
  }
  try {
    m.validate();
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("inconsistent model: ") + e.what());
  }
  return m;
}

}  // namespace

std::string serialize_models(std::span<const TrainedModel> models) {
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kArchiveVersion);
  w.u64(models.size());
  for (const auto& m : models) write_model(w, m);
  return w.take();
}

std::vector<TrainedModel> deserialize_models(std::string_view bytes) {
  Reader r(bytes);
  char magic[sizeof kMagic];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw FormatError("not a model archive");
  if (const auto v = r.u32(); v != kArchiveVersion) {
    throw FormatError("unsupported archive version " + std::to_string(v) + " (expected " +
                      std::to_string(kArchiveVersion) + ")");
  }
  std::vector<TrainedModel> models(r.count(1));
  for (auto& m : models) m = read_model(r);
  if (!r.done()) throw FormatError("trailing bytes after model archive");
  return models;
}

void save_models(std::span<const TrainedModel> models, const std::filesystem::path& path) {
  const std::string bytes = serialize_models(models);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<TrainedModel> load_models(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_models(buf.str());
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  save_models(std::span<const TrainedModel>(&model, 1), path);
}

TrainedModel load_model(const std::filesystem::path& path) {
  auto models = load_models(path);
  if (models.size() != 1) throw FormatError("archive holds " + std::to_string(models.size()) + " models, expected 1");
  return std::move(models.front());
}

}  // namespace seqrules::train
