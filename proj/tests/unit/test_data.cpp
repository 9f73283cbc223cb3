#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "seqrules/data.hpp"
#include "seqrules/error.hpp"

using namespace seqrules;
using namespace seqrules::data;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "seqrules_data_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

}  // namespace

TEST_CASE("synthetic templates") {
  const Vector tri = synthetic_template(SyntheticKind::triangular, 1);
  REQUIRE(tri.size() == 20);
  CHECK(tri[0] == 0.0);
  CHECK(tri[5] == 5.0);
  CHECK(tri[7] == 3.0);
  // The negative class runs the same shape half a period later.
  const Vector neg = synthetic_template(SyntheticKind::triangular, 0);
  for (std::size_t t = 0; t + 5 < 20; ++t) CHECK(neg[t] == tri[t + 5]);
  const Vector trig = synthetic_template(SyntheticKind::trigonometric, 1);
  REQUIRE(trig.size() == 30);
  CHECK(trig[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(trig[7] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("generator is reproducible and draws train and test independently") {
  SyntheticSpec spec;
  spec.per_class = 3;
  nn::Rng a(42), b(42), c(43);
  const Dataset da = gen_synthetic(spec, a);
  CHECK(da == gen_synthetic(spec, b));
  CHECK_FALSE(da == gen_synthetic(spec, c));
  CHECK(da.train.size() == 6);
  CHECK(da.test.size() == 6);
  CHECK(da.train.front().values != da.test.front().values);
  std::size_t positives = 0;
  for (const auto& s : da.train) positives += s.label;
  CHECK(positives == 3);
}

TEST_CASE("generator noise has the requested variance") {
  SyntheticSpec spec;
  spec.per_class = 2000;
  nn::Rng rng(1);
  const Dataset ds = gen_synthetic(spec, rng);
  double sum = 0.0, sq = 0.0;
  std::size_t n = 0;
  for (const auto& s : ds.train) {
    const Vector base = synthetic_template(spec.kind, s.label);
    for (std::size_t t = 0; t < base.size(); ++t) {
      const double e = s.values[t] - base[t];
      sum += e;
      sq += e * e;
      ++n;
    }
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(0.01));
  CHECK(sq / n == doctest::Approx(0.1).epsilon(0.02));
}

TEST_CASE("UCR parsing accepts tabs and commas and reports ragged rows") {
  std::istringstream ok("1\t0.5\t1.5\n-1,2.0,3.0\n\n");
  const RawSplit s = parse_ucr(ok);
  REQUIRE(s.series.size() == 2);
  CHECK(s.labels[1] == "-1");
  CHECK(s.series[1] == Vector{2.0, 3.0});

  std::istringstream ragged("1\t0.5\t1.5\n2\t1.0\n");
  try {
    parse_ucr(ragged);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream junk("1\t0.5\tx\n");
  CHECK_THROWS_AS(parse_ucr(junk), ParseError);
}

TEST_CASE("UCR loading maps labels in numeric order") {
  const fs::path train = scratch("toy_TRAIN.tsv"), test = scratch("toy_TEST.tsv");
  std::ofstream(train) << "1\t0\t1\t2\n-1\t2\t1\t0\n1\t0\t1\t3\n";
  std::ofstream(test) << "-1\t1\t1\t1\n";
  const Dataset ds = load_ucr(train, test);
  CHECK(ds.name == "toy");
  CHECK(ds.num_classes == 2);
  CHECK(ds.class_names == std::vector<std::string>{"-1", "1"});
  CHECK(ds.train[0].label == 1);
  CHECK(ds.train[1].label == 0);
  CHECK(ds.test[0].label == 0);

  std::ofstream(test, std::ios::trunc) << "\n";
  CHECK_THROWS_AS(load_ucr(train, test), InvalidDataset);
  CHECK_THROWS_AS(load_ucr(scratch("missing_TRAIN.tsv"), test), IoError);
}

TEST_CASE("UCR write and reload preserves values bit-exactly") {
  SyntheticSpec spec;
  nn::Rng rng(5);
  const Dataset ds = gen_synthetic(spec, rng);
  write_ucr(scratch("syn_TRAIN.tsv"), ds.train);
  write_ucr(scratch("syn_TEST.tsv"), ds.test);
  const Dataset back = load_ucr(scratch("syn"));
  CHECK(back.train == ds.train);
  CHECK(back.test == ds.test);
}

TEST_CASE("IDX images and labels") {
  std::vector<std::uint8_t> images;
  put_be32(images, 0x803);
  put_be32(images, 2);
  put_be32(images, 2);
  put_be32(images, 2);
  for (std::uint8_t v : {0, 255, 10, 20, 1, 2, 3, 4}) images.push_back(v);
  write_bytes(scratch("img"), images);
  const IdxImages imgs = read_idx_images(scratch("img"));
  REQUIRE(imgs.images.size() == 2);
  CHECK(imgs.rows == 2);
  CHECK(imgs.images[0][1] == 255);

  std::vector<std::uint8_t> labels;
  put_be32(labels, 0x801);
  put_be32(labels, 2);
  labels.push_back(7);
  labels.push_back(1);
  write_bytes(scratch("lab"), labels);
  CHECK(read_idx_labels(scratch("lab")) == std::vector<std::uint8_t>{7, 1});

  CHECK_THROWS_AS(read_idx_images(scratch("lab")), FormatError);  // wrong magic
  images.resize(images.size() - 1);
  write_bytes(scratch("img_short"), images);
  CHECK_THROWS_AS(read_idx_images(scratch("img_short")), FormatError);
  labels.resize(9);
  write_bytes(scratch("lab_short"), labels);
  CHECK_THROWS_AS(read_idx_labels(scratch("lab_short")), FormatError);
}

TEST_CASE("MNIST two-digit task scales pixels and caps each digit") {
  const fs::path dir = scratch("mnist");
  fs::create_directories(dir);
  const auto paths = MnistPaths::in_directory(dir);
  for (const auto& [img_path, lab_path] : {std::pair{paths.train_images, paths.train_labels},
                                           std::pair{paths.test_images, paths.test_labels}}) {
    std::vector<std::uint8_t> img, lab;
    put_be32(img, 0x803);
    put_be32(img, 5);
    put_be32(img, 1);
    put_be32(img, 2);
    put_be32(lab, 0x801);
    put_be32(lab, 5);
    const std::uint8_t digits[] = {1, 0, 7, 1, 1};
    for (std::uint8_t d : digits) {
      img.push_back(255);
      img.push_back(d * 10);
      lab.push_back(d);
    }
    write_bytes(img_path, img);
    write_bytes(lab_path, lab);
  }
  const Dataset ds = load_mnist(paths, 1, 0, 2, 0);
  CHECK(ds.train.size() == 3);  // two ones kept, one zero, the seven dropped
  CHECK(ds.test.size() == 4);
  CHECK(ds.train[0].label == 1);
  CHECK(ds.train[1].label == 0);
  CHECK(ds.train[0].values == Vector{1.0, 10.0 / 255.0});
  CHECK_THROWS_AS(load_mnist(paths, 3, 3), InvalidArgument);
}

TEST_CASE("binarize relabels without touching values") {
  Dataset ds;
  ds.num_classes = 3;
  ds.class_names = {"a", "b", "c"};
  ds.train = {{{0.1, 0.2}, 0}, {{0.3, 0.4}, 2}, {{0.5, 0.6}, 1}};
  ds.test = {{{0.7, 0.8}, 2}};
  const Dataset b = binarize(ds, 2);
  CHECK(b.num_classes == 2);
  CHECK(b.train[0].label == 0);
  CHECK(b.train[1].label == 1);
  CHECK(b.train[2].label == 0);
  for (std::size_t i = 0; i < ds.train.size(); ++i) CHECK(b.train[i].values == ds.train[i].values);
  CHECK_THROWS_AS(binarize(ds, 3), InvalidArgument);
}

TEST_CASE("z-normalization") {
  Dataset ds;
  ds.num_classes = 1;
  ds.train = {{{1.0, 2.0, 3.0, 4.0}, 0}, {{5.0, 5.0, 5.0, 5.0}, 0}};
  ds.test = ds.train;
  znormalize(ds);
  const Vector& v = ds.train[0].values;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / 4.0;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean) / 4.0;
  CHECK(mean == doctest::Approx(0.0));
  CHECK(var == doctest::Approx(1.0));
  CHECK(ds.train[1].values == Vector{0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("dataset validation") {
  Dataset ds;
  ds.num_classes = 2;
  ds.train = {{{1.0, 2.0}, 0}, {{1.0}, 1}};
  ds.test = {{{1.0, 2.0}, 0}};
  CHECK_THROWS_AS(ds.validate(), InvalidDataset);
  ds.train[1].values = {1.0, 2.0};
  ds.train[1].label = 2;
  CHECK_THROWS_AS(ds.validate(), InvalidDataset);
  ds.train[1].label = 1;
  ds.validate();
  ds.test.clear();
  CHECK_THROWS_AS(ds.validate(), InvalidDataset);
}
