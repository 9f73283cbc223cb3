#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqrules/matrix.hpp"

namespace seqrules::logic {

enum class AtomKind { pattern, region, head };

struct Atom {
  AtomKind kind = AtomKind::pattern;
  std::size_t index = 0;     // cluster, region, or class id
  std::size_t variable = 0;  // shared-variable tag; unused for the head
  bool operator==(const Atom&) const = default;
};

/// pattern_i(X) ∧ region_j(X) over one shared variable.
struct BodyPair {
  std::size_t pattern = 0;
  std::size_t region = 0;
  auto operator<=>(const BodyPair&) const = default;
};

struct Rule {
  std::size_t head = 0;         // target class id
  std::vector<BodyPair> body;   // sorted by (region, pattern), no duplicates
  double tau = 0.0;             // extraction threshold that produced this body
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> test_precision;
  std::optional<double> test_recall;

  /// Head atom followed by the body atoms; pair i uses variable i.
  std::vector<Atom> atoms() const;
  bool same_clause(const Rule& other) const { return head == other.head && body == other.body; }
  bool operator==(const Rule&) const = default;
};

/// Same-head program: row k holds 1/p at each of rule k's p body atoms.
struct LogicProgramMatrix {
  Matrix weights;

  static LogicProgramMatrix from_bodies(std::size_t atoms, const std::vector<std::vector<std::size_t>>& bodies);
};

using BoolVector = std::vector<std::uint8_t>;

struct TpResult {
  BoolVector fired;  // θ(M_P v) per rule
  bool head = false;
};

inline constexpr double kThetaSlack = 1e-9;

/// θ(M_P · v) with θ(x) = 1 iff x ≥ 1 − 1e−9; head is the disjunction.
TpResult tp_step(const Matrix& program, std::span<const std::uint8_t> v);

/// Body pair of flat atom index `atom` in the region-major layout.
BodyPair pair_of(std::size_t atom, std::size_t clusters);
std::size_t atom_index(BodyPair pair, std::size_t clusters);

/// Rows of M_P become bodies of all atoms whose weight exceeds tau;
/// empty bodies are dropped and duplicates collapsed.
std::vector<Rule> extract_rules(const Matrix& program, std::size_t clusters, double tau, std::size_t target);

/// True iff every body pair's atom is set in the discretized interpretation.
/// Throws InvalidArgument on an empty body.
bool rule_satisfied(const Rule& rule, std::span<const std::uint8_t> discretized, std::size_t clusters);

struct LabeledInterpretation {
  BoolVector atoms;
  std::size_t label = 0;
};

struct RuleMetrics {
  std::optional<double> precision;  // unset when the body never fires
  double recall = 0.0;
  std::size_t body = 0;
  std::size_t head = 0;
  std::size_t both = 0;

  bool never_fires() const noexcept { return body == 0; }
};

/// Precision and recall of `rule` over the dataset; an instance is a head
/// instance when its label equals rule.head. Throws InvalidDataset when no
/// instance carries the head class or the dataset is empty.
RuleMetrics rule_metrics(const Rule& rule, std::span<const LabeledInterpretation> data, std::size_t clusters);

struct ClassPrior {
  std::size_t fallback = 0;
  std::vector<std::size_t> train_counts;  // per class
};

/// Head class of the highest-precision firing rule; ties go to the most
/// frequent training class; no firing rule yields the fallback.
std::size_t resolve_firing(std::span<const Rule* const> firing, const ClassPrior& prior);

std::size_t classify_with_rules(std::span<const Rule> rules, std::span<const std::uint8_t> discretized,
                                std::size_t clusters, const ClassPrior& prior);

/// `class_1 :- pattern_0(X0), region_1(X0). % p=1.00 r=1.00 tau=0.30`
std::string format_rule(const Rule& rule);
/// Inverse of format_rule. Throws ParseError (line 1) on malformed text.
Rule parse_rule(std::string_view text);

/// Orders rules best-first: training precision, recall, shorter body, lower tau.
bool better_rule(const Rule& a, const Rule& b);

}  // namespace seqrules::logic
