#include <doctest.h>

#include "seqrules/error.hpp"
#include "seqrules/plot.hpp"
#include "seqrules/symbolizer.hpp"

using namespace seqrules;
using namespace seqrules::plot;

namespace {

train::TrainedModel trained() {
  data::SyntheticSpec spec;
  nn::Rng rng(1);
  auto ds = data::gen_synthetic(spec, rng);
  train::TrainConfig cfg;
  cfg.symbolizer.window = 5;
  cfg.symbolizer.regions = 4;
  cfg.symbolizer.clusters = 3;
  cfg.rulenet.hidden = {};
  cfg.rulenet.rules = 4;
  cfg.pretrain_epochs = 20;
  cfg.joint_epochs = 5;
  return train::train_joint(ds, cfg);
}

Vector ramp(std::size_t n) {
  Vector v(n);
  for (std::size_t t = 0; t < n; ++t) v[t] = std::sin(0.7 * static_cast<double>(t)) + 0.1 * static_cast<double>(t % 3);
  return v;
}

}  // namespace

TEST_CASE("spans obey the discretized interpretation and region placement") {
  const auto model = trained();
  const Vector x = ramp(20);  // region length 5
  const auto sym = train::symbolize_with(model, x);
  const auto clusters = train::window_clusters(model, x);
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t i = 0; i < 3; ++i) {
      logic::Rule rule;
      rule.head = 1;
      rule.body = {{i, j}};
      const HighlightPlot p = highlight(x, rule, model);
      CHECK_FALSE(p.caption.empty());
      const bool selected = sym.discretized[j * 3 + i] != 0;
      CHECK(p.spans.empty() != selected);
      for (const auto& s : p.spans) {
        CHECK(s.pair == 0);
        CHECK(s.end > s.begin);
        CHECK(s.end <= x.size());
        if (s.end - s.begin == 5 && j != 3) {
          CHECK(s.begin >= 5 * j);
          CHECK(s.begin < 5 * (j + 1));
          CHECK(clusters[s.begin] == i);
        }
      }
    }
  }
}

TEST_CASE("region-1 window spans start inside the region") {
  const auto model = trained();
  const Vector x = ramp(20);
  const auto sym = train::symbolize_with(model, x);
  std::size_t pattern = 0;
  while (pattern < 3 && sym.discretized[3 + pattern] == 0) ++pattern;
  REQUIRE(pattern < 3);
  logic::Rule rule;
  rule.body = {{pattern, 1}};
  for (const auto& s : highlight(x, rule, model).spans) {
    CHECK(s.begin >= 5);
    CHECK(s.begin < 10);
  }
}

TEST_CASE("two satisfied pairs render in two colors") {
  const auto model = trained();
  const Vector x = ramp(20);
  const auto sym = train::symbolize_with(model, x);
  std::vector<logic::BodyPair> chosen;
  for (std::size_t j = 0; j < 4 && chosen.size() < 2; ++j) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (sym.discretized[j * 3 + i]) {
        chosen.push_back({i, j});
        break;
      }
    }
  }
  REQUIRE(chosen.size() == 2);
  logic::Rule rule;
  rule.body = chosen;
  const HighlightPlot p = highlight(x, rule, model);
  bool saw0 = false, saw1 = false;
  for (const auto& s : p.spans) (s.pair == 0 ? saw0 : saw1) = true;
  CHECK(saw0);
  CHECK(saw1);
  const std::string svg = render_svg(p);
  CHECK(svg.find("#d62728") != std::string::npos);
  CHECK(svg.find("#2ca02c") != std::string::npos);
}

TEST_CASE("an unsatisfied rule still gets a captioned plot") {
  const auto model = trained();
  const Vector x = ramp(20);
  const auto sym = train::symbolize_with(model, x);
  std::size_t i = 0;
  while (i < 3 && sym.discretized[i] != 0) ++i;
  REQUIRE(i < 3);
  logic::Rule rule;
  rule.body = {{i, 0}};
  const HighlightPlot p = highlight(x, rule, model);
  CHECK(p.spans.empty());
  const std::string svg = render_svg(p);
  CHECK(svg.find("<text") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("out-of-range pairs are rejected") {
  const auto model = trained();
  const Vector x = ramp(20);
  logic::Rule rule;
  rule.body = {{0, 4}};
  CHECK_THROWS_AS(highlight(x, rule, model), InvalidArgument);
  rule.body = {{3, 0}};
  CHECK_THROWS_AS(highlight(x, rule, model), InvalidArgument);
}
