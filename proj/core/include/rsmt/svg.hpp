#pragma once

#include <iosfwd>
#include <span>

#include "rsmt/abvh.hpp"
#include "rsmt/geometry.hpp"
#include "rsmt/pipeline.hpp"

namespace rsmt {

/// Static SVG 1.1 figures. Coordinates are scaled to fit an 800 px canvas with
/// y pointing up.

/// Leaf regions (outlined), interior segments (blue) and points.
void write_partition_svg(const Abvh& abvh, std::ostream& out);

/// Block regions, block subtrees, connectors (dashed red) and terminals.
void write_pipeline_svg(const PipelineResult& result, std::ostream& out);

/// A single tree with its terminals and Steiner points.
void write_tree_svg(const RectilinearTree& tree, std::ostream& out);

}  // namespace rsmt
