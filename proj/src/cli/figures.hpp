#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace seqdisc::cli {

inline constexpr int kDefaultResolution = 401;

/// fig1 ... fig9 plus figff (optimal two-party flip-flop information).
const std::vector<std::string>& figure_ids();

/// Writes the dataset behind one figure as CSV. Throws Error(UnknownFigure)
/// for an unrecognized id and Error(OutOfRange) for resolution < 2.
void write_figure(std::string_view id, int resolution, std::ostream& out);

/// Uniform s-grid used by the s-axis figures: [0.001, 0.999].
std::vector<double> figure_overlap_grid(int resolution);

}  // namespace seqdisc::cli
