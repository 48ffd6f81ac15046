#pragma once

// Augmented bounding volume hierarchy.
//
// A median-split BVH over a point set whose nodes additionally keep the
// boundary *segments* around them. A segment is a maximal straight piece of a
// region boundary that touches exactly two regions; it points at both of them
// through `back` / `front`. Regions outside the root are represented by the
// sentinel node NIL. Segments are maintained while the recursion descends, so
// when construction finishes every leaf knows its neighbours without any
// pairwise search. All segments end up stored in leaves and in NIL.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rsmt/geometry.hpp"

namespace rsmt {

/// Handle to a node of an Abvh. The default value is the NIL sentinel.
class NodeRef {
 public:
  constexpr NodeRef() noexcept = default;
  constexpr explicit NodeRef(std::uint32_t index) noexcept : index_(index) {}

  static constexpr NodeRef nil() noexcept { return NodeRef{}; }
  constexpr bool is_nil() const noexcept { return index_ == 0; }
  constexpr std::uint32_t index() const noexcept { return index_; }

  friend constexpr auto operator<=>(NodeRef, NodeRef) noexcept = default;

 private:
  std::uint32_t index_ = 0;
};

/// Which line a segment lies on: horizontal segments lie on y = c and span x,
/// vertical segments lie on x = c and span y.
enum class Axis : std::uint8_t { horizontal, vertical };

enum class Side : std::uint8_t { back = 0, front = 1 };

constexpr Side opposite(Side s) noexcept { return s == Side::back ? Side::front : Side::back; }

/// Position of one side of a segment inside a node's segment list:
/// segment index * 2 + side.
using SegmentHandle = std::uint32_t;
inline constexpr SegmentHandle kNoSegment = ~SegmentHandle{0};

struct Segment {
  Axis axis = Axis::horizontal;
  double c = 0.0;  // fixed coordinate
  double a = 0.0;  // span start, a < b
  double b = 0.0;
  std::array<NodeRef, 2> refs{};  // indexed by Side

  // Intrusive list anchors, one pair per side.
  std::array<SegmentHandle, 2> next{kNoSegment, kNoSegment};
  std::array<SegmentHandle, 2> prev{kNoSegment, kNoSegment};

  NodeRef back() const noexcept { return refs[0]; }
  NodeRef front() const noexcept { return refs[1]; }
  NodeRef ref(Side s) const noexcept { return refs[static_cast<int>(s)]; }
  double length() const noexcept { return b - a; }
};

struct AbvhNode {
  RegionBox region;       // tiling region, not the tight box of the points
  std::uint32_t lo = 0;   // [lo, hi) into Abvh::points()
  std::uint32_t hi = 0;
  NodeRef left;           // both NIL for a leaf
  NodeRef right;
  std::int32_t block_id = -1;
  std::uint32_t depth = 0;  // root is 1
  SegmentHandle segments = kNoSegment;  // list head

  bool is_leaf() const noexcept { return left.is_nil() && right.is_nil(); }
  std::uint32_t size() const noexcept { return hi - lo; }
};

struct AbvhStats {
  std::size_t leaf_count = 0;
  std::size_t segment_count = 0;           // all stored segments, NIL-sided included
  std::size_t interior_segment_count = 0;  // both sides are leaves
  std::size_t height = 0;                  // number of levels
};

class Abvh {
 public:
  /// Builds the hierarchy, splitting until every leaf holds at most
  /// `max_block` points. Throws InvalidInput on empty input, max_block < 1 or
  /// non-finite coordinates.
  static Abvh build(std::span<const Point> points, std::size_t max_block);

  NodeRef root() const noexcept { return NodeRef{1}; }
  std::size_t max_block() const noexcept { return max_block_; }

  /// `node(NodeRef::nil())` is the sentinel; its region is the root region.
  const AbvhNode& node(NodeRef ref) const { return nodes_.at(ref.index()); }
  std::size_t node_count() const noexcept { return nodes_.size() - 1; }

  /// The shared point sequence, reordered so each node owns a contiguous range.
  std::span<const Point> points() const noexcept { return points_; }
  std::span<const Point> points_of(NodeRef ref) const;

  /// Leaves in block_id order.
  std::span<const NodeRef> leaves() const noexcept { return leaves_; }
  const AbvhNode& leaf(std::size_t block_id) const { return node(leaves_.at(block_id)); }

  std::span<const Segment> segments() const noexcept { return segments_; }

  /// Indices of the segments in `ref`'s list, in list order.
  std::vector<std::uint32_t> segments_of(NodeRef ref) const;

  const AbvhStats& stats() const noexcept { return stats_; }

 private:
  struct Cut {
    bool along_x = true;  // cut line is x = c (vertical)
    std::uint32_t k = 0;  // points going left
    double c = 0.0;
  };

  Abvh() = default;

  void build_recursive(NodeRef ref);
  void split(NodeRef ref);
  Cut choose_cut(const AbvhNode& node);
  void update_segments(NodeRef parent, const Cut& cut, NodeRef low, NodeRef high);
  std::uint32_t add_segment(Axis axis, double c, double a, double b, NodeRef back, NodeRef front);

  void push_front(NodeRef ref, SegmentHandle h);
  void insert_after(SegmentHandle pos, SegmentHandle h);

  AbvhNode& mut(NodeRef ref) { return nodes_[ref.index()]; }

  std::size_t max_block_ = 1;
  std::vector<Point> points_;
  std::vector<AbvhNode> nodes_;  // [0] is NIL
  std::vector<Segment> segments_;
  std::vector<NodeRef> leaves_;
  AbvhStats stats_;
};

/// One shared boundary between two leaf blocks.
struct Adjacency {
  std::int32_t back_block = -1;
  std::int32_t front_block = -1;
  std::uint32_t segment = 0;  // index into Abvh::segments()
};

struct NeighborList {
  std::vector<Adjacency> pairs;
  bool connected = true;  // block graph induced by `pairs`
};

/// Block adjacency read off the segments: one entry per segment whose two
/// sides are both leaves.
NeighborList neighbors(const Abvh& abvh);

struct LeafRegion {
  std::int32_t block_id = -1;
  RegionBox region;
};

std::vector<LeafRegion> leaf_regions(const Abvh& abvh);

/// O(L^2) reference adjacency: pairs (lower id first) whose regions share a
/// boundary piece of positive length. Corner contacts do not count.
std::vector<std::pair<std::int32_t, std::int32_t>> brute_force_adjacency(
    std::span<const LeafRegion> leaves);

/// Structural checks on a built hierarchy; each returns human-readable
/// problems, empty when the property holds.
std::vector<std::string> check_tiling(const Abvh& abvh, double area_rel_tol = 1e-6);
std::vector<std::string> check_segments(const Abvh& abvh);
std::vector<std::string> check_ranges(const Abvh& abvh);

/// Text listing of leaves and segments, one record per line:
///   leaf <block_id> <lo.x> <lo.y> <hi.x> <hi.y> <point_count>
///   segment <H|V> <c> <a> <b> <back> <front>
/// where back/front are block ids or NIL.
void write_debug_dump(const Abvh& abvh, std::ostream& out);

}  // namespace rsmt
