#pragma once

// Divide-and-conquer RSMT: partition the net with the augmented BVH, solve
// each block independently, then join the block subtrees with a minimum
// spanning tree over blocks, where blocks are only linked to the blocks they
// share a boundary segment with.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rsmt/abvh.hpp"
#include "rsmt/geometry.hpp"
#include "rsmt/solvers.hpp"

namespace rsmt {

struct PipelineConfig {
  std::size_t block_size = 100;
  SolverSpec solver;
  bool fallback_on_external_error = true;
  bool parallel_blocks = true;
  /// Worker cap for block solving; 0 reads RSMT_BLOCK_WORKERS, then falls
  /// back to the hardware concurrency.
  std::size_t max_workers = 0;
};

struct InterBlockDistance {
  double distance = 0.0;
  Point from;  // vertex of the first tree
  Point to;    // vertex of the second tree
};

/// Minimum L1 distance between any vertex (terminal or Steiner) of `a` and
/// any vertex of `b`. Ties go to the lexicographically smallest (from, to).
/// Throws InvalidInput if either tree has no vertices.
InterBlockDistance inter_block_distance(const RectilinearTree& a, const RectilinearTree& b);

struct BlockEdge {
  std::uint32_t a = 0;  // a < b
  std::uint32_t b = 0;
  InterBlockDistance link;  // link.from in block a, link.to in block b
};

struct BlockGraph {
  std::size_t block_count = 0;
  std::vector<BlockEdge> edges;
};

/// Block graph restricted to segment neighbours.
BlockGraph neighbor_block_graph(std::span<const RectilinearTree> blocks,
                                const NeighborList& neighbors);
/// Complete block graph.
BlockGraph dense_block_graph(std::span<const RectilinearTree> blocks);
bool is_connected(const BlockGraph& graph);

struct StitchResult {
  std::vector<RectEdge> connectors;    // L-path pieces, in attachment order
  std::vector<std::uint32_t> order;    // blocks in attachment order, starting at 0
  std::vector<BlockEdge> chosen;       // one per attached block after the first
  double weight = 0.0;                 // sum of chosen link distances
};

/// Prim over the block graph from block 0. Equal weights are resolved by the
/// lower (a, b) pair. Each chosen link becomes an L-path that bends at
/// (attached.x, new.y). Throws InvalidInput if the graph is disconnected.
StitchResult stitch(std::span<const RectilinearTree> blocks, const BlockGraph& graph);

struct PipelineReport {
  std::size_t point_count = 0;  // after deduplication
  std::size_t duplicate_count = 0;
  std::size_t block_count = 0;
  std::size_t segment_count = 0;
  std::size_t neighbor_pairs = 0;
  std::size_t height = 0;
  double build_seconds = 0.0;
  double solve_seconds = 0.0;
  double stitch_seconds = 0.0;
  std::vector<double> block_lengths;
  std::size_t connector_count = 0;
  double connector_length = 0.0;
  double final_length = 0.0;
  bool dense_fallback = false;       // neighbour graph was disconnected
  std::size_t external_fallbacks = 0;  // blocks re-solved with rmst
  std::size_t workers = 1;
};

struct BlockSolution {
  RegionBox region;
  std::vector<Point> points;
  RectilinearTree tree;
};

struct PipelineResult {
  RectilinearTree tree;
  PipelineReport report;
  std::vector<BlockSolution> blocks;
  std::vector<RectEdge> connectors;
};

/// Full procedure: dedupe, build the hierarchy, solve blocks, stitch.
/// Throws InvalidInput on empty input or block_size < 1; solver errors
/// propagate unless the external fallback applies.
PipelineResult run_pipeline(std::span<const Point> points, const PipelineConfig& config);

/// Worker count used for `block_count` blocks under `config`.
std::size_t block_worker_count(const PipelineConfig& config, std::size_t block_count);

}  // namespace rsmt
