#include <doctest.h>

#include <set>

#include "seqrules/error.hpp"
#include "seqrules/logic.hpp"
#include "seqrules/rulenet.hpp"
#include "support.hpp"

using namespace seqrules;
using namespace seqrules::logic;

TEST_CASE("program matrix rows hold 1/p on body atoms") {
  const Matrix m = LogicProgramMatrix::from_bodies(4, {{0, 2}, {1, 2, 3}}).weights;
  CHECK(m(0, 0) == 0.5);
  CHECK(m(0, 1) == 0.0);
  CHECK(m(1, 3) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(LogicProgramMatrix::from_bodies(4, {{}}), InvalidArgument);
  CHECK_THROWS_AS(LogicProgramMatrix::from_bodies(2, {{5}}), InvalidArgument);
}

// Set semantics: a rule fires iff its body is a subset of the true atoms.
TEST_CASE("tp_step equals set-based immediate consequence for all programs with n <= 6, m <= 3") {
  std::size_t checks = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    const std::size_t subsets = (std::size_t{1} << n) - 1;
    for (std::size_t m = 1; m <= 3; ++m) {
      std::size_t total = 1;
      for (std::size_t i = 0; i < m; ++i) total *= subsets;
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::size_t> masks;
        std::vector<std::vector<std::size_t>> bodies;
        std::size_t c = code;
        for (std::size_t r = 0; r < m; ++r, c /= subsets) {
          masks.push_back(c % subsets + 1);
          bodies.emplace_back();
          for (std::size_t a = 0; a < n; ++a) {
            if (masks.back() >> a & 1) bodies.back().push_back(a);
          }
        }
        const Matrix mp = LogicProgramMatrix::from_bodies(n, bodies).weights;
        std::vector<std::uint8_t> v(n);
        for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
          for (std::size_t a = 0; a < n; ++a) v[a] = bits >> a & 1;
          const TpResult tp = tp_step(mp, v);
          bool head = false;
          for (std::size_t r = 0; r < m; ++r) {
            const bool fires = (masks[r] & bits) == masks[r];
            head = head || fires;
            if ((tp.fired[r] != 0) != fires) FAIL("tp_step disagrees with set semantics");
          }
          if (tp.head != head) FAIL("tp_step head disagrees with set semantics");
          ++checks;
        }
      }
    }
  }
  CHECK(checks > 16'000'000);
}

TEST_CASE("pair_of and atom_index are inverse in the region-major layout") {
  for (std::size_t k = 1; k <= 5; ++k) {
    for (std::size_t a = 0; a < 40; ++a) CHECK(atom_index(pair_of(a, k), k) == a);
  }
  CHECK(pair_of(4, 3) == BodyPair{1, 1});
  CHECK(pair_of(3, 3) == BodyPair{0, 1});
}

TEST_CASE("extraction thresholds rows of the program tensor") {
  const Matrix mp = Matrix::from_rows({{0.05, 0.6, 0.05, 0.3, 0.0, 0.0}, {0.05, 0.6, 0.05, 0.3, 0.0, 0.0}});
  const auto r = extract_rules(mp, 3, 0.2, 1);
  REQUIRE(r.size() == 1);  // duplicate rows collapse
  CHECK(r[0].head == 1);
  CHECK(r[0].body == std::vector<BodyPair>{{1, 0}, {0, 1}});
  CHECK(extract_rules(mp, 3, 0.7, 1).empty());
  CHECK_THROWS_AS(extract_rules(mp, 3, 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS(extract_rules(mp, 4, 0.2, 1), InvalidArgument);
}

TEST_CASE("raising tau only shrinks rule bodies") {
  nn::Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 1 + rng.index(4);
    const std::size_t n = k * (1 + rng.index(5));
    Matrix raw(1 + rng.index(4), n);
    for (double& v : raw.values()) v = rng.uniform(-3, 3);
    const Matrix mp = nn::softmax_rows(raw);
    for (std::size_t r = 0; r < mp.rows(); ++r) {
      Matrix row(1, n);
      std::copy(mp.row(r).begin(), mp.row(r).end(), row.row(0).begin());
      std::set<BodyPair> previous;
      bool first = true;
      for (double tau = 0.05; tau < 1.0; tau += 0.05) {
        const auto rules = extract_rules(row, k, tau, 1);
        const std::set<BodyPair> body = rules.empty() ? std::set<BodyPair>{}
                                                      : std::set<BodyPair>(rules[0].body.begin(), rules[0].body.end());
        if (!first) CHECK(std::includes(previous.begin(), previous.end(), body.begin(), body.end()));
        previous = body;
        first = false;
      }
    }
  }
}

TEST_CASE("rule satisfaction and metrics") {
  Rule rule;
  rule.head = 1;
  rule.body = {{0, 1}};  // pattern_0 in region 1, atom 2 with K = 2
  const std::vector<LabeledInterpretation> data{
      {{1, 0, 1, 0}, 1}, {{0, 1, 1, 0}, 1}, {{1, 0, 0, 1}, 1}, {{1, 0, 1, 0}, 0}, {{0, 1, 0, 1}, 0}};
  const RuleMetrics m = rule_metrics(rule, data, 2);
  CHECK(m.body == 3);
  CHECK(m.head == 3);
  CHECK(m.both == 2);
  CHECK(*m.precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.recall == doctest::Approx(2.0 / 3.0));

  Rule never = rule;
  never.body = {{1, 0}, {0, 1}};
  const std::vector<LabeledInterpretation> none{{{1, 0, 1, 0}, 1}};
  CHECK_FALSE(rule_metrics(never, none, 2).precision.has_value());
  const std::vector<LabeledInterpretation> negatives{{{1, 0, 1, 0}, 0}};
  CHECK_THROWS_AS(rule_metrics(rule, negatives, 2), InvalidDataset);
  CHECK_THROWS_AS(rule_metrics(rule, {}, 2), InvalidDataset);
  Rule empty;
  CHECK_THROWS_AS(rule_satisfied(empty, data[0].atoms, 2), InvalidArgument);
}

TEST_CASE("firing resolution prefers precision, then training frequency, else the fallback") {
  Rule a, b, c;
  a.head = 0;
  a.precision = 0.9;
  b.head = 1;
  b.precision = 0.95;
  c.head = 2;
  c.precision = 0.95;
  const ClassPrior prior{2, {10, 5, 7}};
  const Rule* ab[] = {&a, &b};
  CHECK(resolve_firing(ab, prior) == 1);
  const Rule* bc[] = {&b, &c};
  CHECK(resolve_firing(bc, prior) == 2);
  CHECK(resolve_firing({}, prior) == 2);
}

TEST_CASE("format and parse round trip") {
  Rule r;
  r.head = 1;
  r.body = {{0, 1}, {2, 3}};
  r.tau = 0.3;
  r.precision = 1.0;
  r.recall = 0.5;
  const std::string text = format_rule(r);
  CHECK(text == "class_1 :- pattern_0(X0), region_1(X0), pattern_2(X1), region_3(X1). % p=1.00 r=0.50 tau=0.30");
  const Rule back = parse_rule(text);
  CHECK(back.same_clause(r));
  CHECK(*back.precision == 1.0);
  CHECK(back.tau == doctest::Approx(0.3));

  Rule unscored = r;
  unscored.precision.reset();
  CHECK(format_rule(unscored).find("p=n/a") != std::string::npos);
  CHECK_FALSE(parse_rule(format_rule(unscored)).precision.has_value());
}

TEST_CASE("parse errors carry the line") {
  CHECK_THROWS_WITH_AS(parse_rule("class_1 :- ."), doctest::Contains("line 1"), ParseError);
  CHECK_THROWS_AS(parse_rule("pattern_0(X0)."), ParseError);
  CHECK_THROWS_AS(parse_rule("class_1 :- pattern_0(X0), region_1(X1)."), ParseError);
}

TEST_CASE("rule atoms share one variable per pair") {
  Rule r;
  r.head = 3;
  r.body = {{0, 1}, {2, 3}};
  const auto atoms = r.atoms();
  REQUIRE(atoms.size() == 5);
  CHECK(atoms[0].kind == AtomKind::head);
  CHECK(atoms[3] == Atom{AtomKind::pattern, 2, 1});
  CHECK(atoms[4] == Atom{AtomKind::region, 3, 1});
}
