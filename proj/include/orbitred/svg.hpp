#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbitred/region.hpp"

namespace orbitred {

// SVG 1.1 drawing of 2-D partitions over a window. Each rect carries its exact
// bounds in data-lo / data-hi so a drawing can be audited after parsing it
// back. Half-open rects are drawn with their closed (left and lower) edges
// solid and their open (right and upper) edges dashed; y grows upward.
// Later layers are stroked in contrasting colours (overlay mode).
std::string svg_document(const Window& window, const std::vector<RegionPartition>& layers,
                         const std::optional<MarkerSet>& markers = std::nullopt);

// Raises UnsupportedDimension unless the partition is 2-D. A partition with
// no rects and no window gives an empty canvas.
std::string svg_partition(const RegionPartition& p);
void render_svg(const RegionPartition& p, const std::string& path);
void render_svg_overlay(const RegionPartition& base, const RegionPartition& top, const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace orbitred
