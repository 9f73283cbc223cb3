#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "seqrules/logic.hpp"
#include "seqrules/trainer.hpp"

namespace seqrules::plot {

/// Half-open time span [begin, end) shaded for body pair `pair`.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t pair = 0;
  bool operator==(const Span&) const = default;
};

struct HighlightPlot {
  Vector values;
  std::vector<Span> spans;
  std::string caption;
  std::size_t image_side = 0;  // 28 for MNIST-shaped inputs, 0 for plain sequences
};

/// Spans of every body pair the sequence satisfies. Pair (i, j) contributes
/// the windows of region j whose nearest center is i when the discretized
/// interpretation selects pattern i in region j, and nothing otherwise. If the
/// selection holds but no window is hard-assigned to i (possible under soft
/// memberships or for a region no window starts in), the region's time extent
/// is used instead. Throws InvalidArgument for out-of-range pairs.
HighlightPlot highlight(std::span<const double> x, const logic::Rule& rule, const train::TrainedModel& model);

std::string render_svg(const HighlightPlot& plot);

/// highlight + render_svg written to `path`.
HighlightPlot render_highlights(std::span<const double> x, const logic::Rule& rule, const train::TrainedModel& model,
                                const std::filesystem::path& path);

}  // namespace seqrules::plot
