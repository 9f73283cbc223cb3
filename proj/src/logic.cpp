#include "seqrules/logic.hpp"

#include <algorithm>
#include <cstdio>
#include <regex>
#include <set>

#include "seqrules/error.hpp"

namespace seqrules::logic {

std::vector<Atom> Rule::atoms() const {
  std::vector<Atom> out{{AtomKind::head, head, 0}};
  for (std::size_t i = 0; i < body.size(); ++i) {
    out.push_back({AtomKind::pattern, body[i].pattern, i});
    out.push_back({AtomKind::region, body[i].region, i});
  }
  return out;
}

LogicProgramMatrix LogicProgramMatrix::from_bodies(std::size_t atoms,
                                                   const std::vector<std::vector<std::size_t>>& bodies) {
  LogicProgramMatrix p{Matrix(bodies.size(), atoms)};
  for (std::size_t k = 0; k < bodies.size(); ++k) {
    std::set<std::size_t> unique(bodies[k].begin(), bodies[k].end());
    if (unique.empty()) throw InvalidArgument("LogicProgramMatrix: rule with empty body");
    for (std::size_t a : unique) {
      if (a >= atoms) throw InvalidArgument("LogicProgramMatrix: atom index out of range");
      p.weights(k, a) = 1.0 / static_cast<double>(unique.size());
    }
  }
  return p;
}

TpResult tp_step(const Matrix& program, std::span<const std::uint8_t> v) {
  if (v.size() != program.cols()) throw InvalidArgument("tp_step: dimension mismatch");
  TpResult out;
  out.fired.assign(program.rows(), 0);
  for (std::size_t k = 0; k < program.rows(); ++k) {
    double s = 0.0;
    const auto row = program.row(k);
    for (std::size_t j = 0; j < v.size(); ++j) s += row[j] * static_cast<double>(v[j]);
    out.fired[k] = s >= 1.0 - kThetaSlack ? 1 : 0;
    out.head = out.head || out.fired[k] != 0;
  }
  return out;
}

BodyPair pair_of(std::size_t atom, std::size_t clusters) { return {atom % clusters, atom / clusters}; }

std::size_t atom_index(BodyPair pair, std::size_t clusters) { return pair.region * clusters + pair.pattern; }

std::vector<Rule> extract_rules(const Matrix& program, std::size_t clusters, double tau, std::size_t target) {
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidArgument("extract_rules: tau must lie in (0, 1)");
  if (clusters == 0 || program.cols() % clusters != 0) {
    throw InvalidArgument("extract_rules: atom count is not a multiple of the cluster count");
  }
  std::vector<Rule> out;
  for (std::size_t r = 0; r < program.rows(); ++r) {
    Rule rule;
    rule.head = target;
    rule.tau = tau;
    const auto row = program.row(r);
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (row[a] > tau) rule.body.push_back(pair_of(a, clusters));
    }
    if (rule.body.empty()) continue;
    std::sort(rule.body.begin(), rule.body.end(),
              [](BodyPair x, BodyPair y) { return std::tie(x.region, x.pattern) < std::tie(y.region, y.pattern); });
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Rule& o) { return o.same_clause(rule); });
    if (!seen) out.push_back(std::move(rule));
  }
  return out;
}

bool rule_satisfied(const Rule& rule, std::span<const std::uint8_t> discretized, std::size_t clusters) {
  if (rule.body.empty()) throw InvalidArgument("rule_satisfied: rule has an empty body");
  for (const auto& pair : rule.body) {
    if (pair.pattern >= clusters) throw InvalidArgument("rule_satisfied: pattern index out of range");
    const std::size_t idx = atom_index(pair, clusters);
    if (idx >= discretized.size()) throw InvalidArgument("rule_satisfied: region index out of range");
    if (discretized[idx] != 1) return false;
  }
  return true;
}

RuleMetrics rule_metrics(const Rule& rule, std::span<const LabeledInterpretation> data, std::size_t clusters) {
  if (data.empty()) throw InvalidDataset("rule_metrics: empty dataset");
  RuleMetrics m;
  for (const auto& item : data) {
    const bool body = rule_satisfied(rule, item.atoms, clusters);
    const bool head = item.label == rule.head;
    m.body += body ? 1 : 0;
    m.head += head ? 1 : 0;
    m.both += (body && head) ? 1 : 0;
  }
  if (m.head == 0) throw InvalidDataset("rule_metrics: no instance of class " + std::to_string(rule.head));
  if (m.body > 0) m.precision = static_cast<double>(m.both) / static_cast<double>(m.body);
  m.recall = static_cast<double>(m.both) / static_cast<double>(m.head);
  return m;
}

std::size_t resolve_firing(std::span<const Rule* const> firing, const ClassPrior& prior) {
  double best = -1.0;
  for (const Rule* r : firing) best = std::max(best, r->precision.value_or(0.0));
  if (firing.empty()) return prior.fallback;
  std::size_t choice = 0;
  bool have = false;
  for (const Rule* r : firing) {
    if (r->precision.value_or(0.0) != best) continue;
    const auto count = [&](std::size_t c) { return c < prior.train_counts.size() ? prior.train_counts[c] : 0; };
    if (!have || count(r->head) > count(choice) || (count(r->head) == count(choice) && r->head < choice)) {
      choice = r->head;
      have = true;
    }
  }
  return choice;
}

std::size_t classify_with_rules(std::span<const Rule> rules, std::span<const std::uint8_t> discretized,
                                std::size_t clusters, const ClassPrior& prior) {
  std::vector<const Rule*> firing;
  for (const auto& r : rules) {
    if (rule_satisfied(r, discretized, clusters)) firing.push_back(&r);
  }
  return resolve_firing(firing, prior);
}

namespace {

std::string metric_text(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

}  // namespace

std::string format_rule(const Rule& rule) {
  std::string out = "class_" + std::to_string(rule.head) + " :- ";
  for (std::size_t i = 0; i < rule.body.size(); ++i) {
    if (i > 0) out += ", ";
    const std::string var = "X" + std::to_string(i);
    out += "pattern_" + std::to_string(rule.body[i].pattern) + "(" + var + "), region_" +
           std::to_string(rule.body[i].region) + "(" + var + ")";
  }
  char tau[32];
  std::snprintf(tau, sizeof tau, "%.2f", rule.tau);
  out += ". % p=" + metric_text(rule.precision) + " r=" + metric_text(rule.recall) + " tau=" + tau;
  return out;
}

Rule parse_rule(std::string_view text) {
  static const std::regex head_re(R"(^\s*class_(\d+)\s*:-\s*(.*?)\.\s*(?:%\s*(.*))?$)");
  static const std::regex pair_re(R"(^\s*pattern_(\d+)\((X\d+)\)\s*,\s*region_(\d+)\((X\d+)\)\s*(?:,|$))");
  static const std::regex meta_re(R"(^p=(\S+)\s+r=(\S+)\s+tau=(\S+)\s*$)");
  const std::string s(text);
  std::smatch m;
  if (!std::regex_match(s, m, head_re)) throw ParseError("not a rule: '" + s + "'", 1);
  Rule rule;
  rule.head = std::stoul(m[1].str());
  std::string body = m[2].str();
  const std::string meta = m[3].str();
  std::size_t expect = 0;
  while (!body.empty() && body.find_first_not_of(" \t") != std::string::npos) {
    std::smatch pm;
    if (!std::regex_search(body, pm, pair_re)) throw ParseError("malformed body near '" + body + "'", 1);
    if (pm[2].str() != pm[4].str()) throw ParseError("pattern and region atoms must share a variable", 1);
    if (pm[2].str() != "X" + std::to_string(expect)) throw ParseError("variables must be numbered in order", 1);
    rule.body.push_back({std::stoul(pm[1].str()), std::stoul(pm[3].str())});
    body = pm.suffix().str();
    ++expect;
  }
  if (rule.body.empty()) throw ParseError("rule body is empty", 1);
  if (!meta.empty()) {
    std::smatch mm;
    if (!std::regex_match(meta, mm, meta_re)) throw ParseError("malformed metadata '" + meta + "'", 1);
    const auto value = [](const std::string& v) -> std::optional<double> {
      if (v == "n/a") return std::nullopt;
      return std::stod(v);
    };
    rule.precision = value(mm[1].str());
    rule.recall = value(mm[2].str());
    rule.tau = std::stod(mm[3].str());
  }
  return rule;
}

bool better_rule(const Rule& a, const Rule& b) {
  const double pa = a.precision.value_or(-1.0), pb = b.precision.value_or(-1.0);
  if (pa != pb) return pa > pb;
  const double ra = a.recall.value_or(-1.0), rb = b.recall.value_or(-1.0);
  if (ra != rb) return ra > rb;
  if (a.body.size() != b.body.size()) return a.body.size() < b.body.size();
  if (a.tau != b.tau) return a.tau < b.tau;
  if (a.head != b.head) return a.head < b.head;
  return a.body < b.body;
}

}  // namespace seqrules::logic
