#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rxfeat/cluster.hpp"

namespace rxfeat {

/// Colours for the first 20 labels (sorted); later labels share kOtherColor.
extern const std::vector<std::string> kPalette;
inline constexpr const char* kOtherColor = "#4d4d4d";

/// One <circle> per point, coloured by label, axes fit to the data
/// bounding box plus a 5% margin. Throws Error(InvalidArgument) when empty.
std::string render_scatter_svg(const Embedding2D& embedding,
                               const std::vector<std::optional<std::string>>& labels = {},
                               const std::string& title = "");

}  // namespace rxfeat
