#include "rsmt/abvh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "disjoint_sets.hpp"
#include "rsmt/error.hpp"
#include "text.hpp"

namespace rsmt {

namespace {

constexpr std::uint32_t segment_of(SegmentHandle h) noexcept { return h >> 1; }
constexpr int side_of(SegmentHandle h) noexcept { return static_cast<int>(h & 1u); }
constexpr SegmentHandle handle(std::uint32_t segment, int side) noexcept {
  return (segment << 1) | static_cast<std::uint32_t>(side);
}

double axis_lo(const RegionBox& r, bool along_x) noexcept { return along_x ? r.lo.x : r.lo.y; }
double axis_hi(const RegionBox& r, bool along_x) noexcept { return along_x ? r.hi.x : r.hi.y; }

// True if the segment lies on the boundary of `r`.
bool on_boundary(const Segment& s, const RegionBox& r) noexcept {
  if (s.axis == Axis::vertical) {
    return (s.c == r.lo.x || s.c == r.hi.x) && s.a >= r.lo.y && s.b <= r.hi.y;
  }
  return (s.c == r.lo.y || s.c == r.hi.y) && s.a >= r.lo.x && s.b <= r.hi.x;
}

}  // namespace

Abvh Abvh::build(std::span<const Point> points, std::size_t max_block) {
  if (points.empty()) throw InvalidInput("abvh: empty point set");
  if (max_block < 1) throw InvalidInput("abvh: block size must be at least 1");
  if (points.size() >= std::size_t{1} << 31) throw InvalidInput("abvh: too many points");
  for (const Point& p : points) {
    if (!is_finite(p)) throw InvalidInput("abvh: non-finite coordinate " + to_string(p));
  }

  Abvh h;
  h.max_block_ = max_block;
  h.points_.assign(points.begin(), points.end());
  const std::size_t expected_leaves = (points.size() + max_block - 1) / max_block;
  h.nodes_.reserve(4 * expected_leaves + 2);
  h.segments_.reserve(8 * expected_leaves + 4);

  const RegionBox root_region = bounding_box(points);
  AbvhNode nil;
  nil.region = root_region;
  h.nodes_.push_back(nil);

  AbvhNode root;
  root.region = root_region;
  root.lo = 0;
  root.hi = static_cast<std::uint32_t>(points.size());
  root.depth = 1;
  h.nodes_.push_back(root);

  // Root box edges, NIL behind and root in front.
  const RegionBox& r = root_region;
  const NodeRef nil_ref = NodeRef::nil();
  const NodeRef root_ref = h.root();
  h.add_segment(Axis::horizontal, r.lo.y, r.lo.x, r.hi.x, nil_ref, root_ref);
  h.add_segment(Axis::vertical, r.lo.x, r.lo.y, r.hi.y, nil_ref, root_ref);
  h.add_segment(Axis::horizontal, r.hi.y, r.lo.x, r.hi.x, nil_ref, root_ref);
  h.add_segment(Axis::vertical, r.hi.x, r.lo.y, r.hi.y, nil_ref, root_ref);

  h.build_recursive(root_ref);

  h.stats_.leaf_count = h.leaves_.size();
  h.stats_.segment_count = h.segments_.size();
  for (const Segment& s : h.segments_) {
    if (!s.back().is_nil() && !s.front().is_nil()) ++h.stats_.interior_segment_count;
  }
  return h;
}

std::span<const Point> Abvh::points_of(NodeRef ref) const {
  const AbvhNode& n = node(ref);
  if (ref.is_nil()) return {};
  return std::span<const Point>(points_).subspan(n.lo, n.size());
}

std::vector<std::uint32_t> Abvh::segments_of(NodeRef ref) const {
  std::vector<std::uint32_t> out;
  for (SegmentHandle h = node(ref).segments; h != kNoSegment;
       h = segments_[segment_of(h)].next[side_of(h)]) {
    out.push_back(segment_of(h));
  }
  return out;
}

void Abvh::build_recursive(NodeRef ref) {
  AbvhNode& n = mut(ref);
  stats_.height = std::max<std::size_t>(stats_.height, n.depth);
  if (n.size() <= max_block_) {
    n.block_id = static_cast<std::int32_t>(leaves_.size());
    leaves_.push_back(ref);
    return;
  }
  split(ref);
  const AbvhNode& parent = node(ref);
  const NodeRef left = parent.left;
  const NodeRef right = parent.right;
  build_recursive(left);
  build_recursive(right);
}

Abvh::Cut Abvh::choose_cut(const AbvhNode& n) {
  const std::uint32_t count = n.size();
  const auto first = points_.begin() + n.lo;
  const auto last = points_.begin() + n.hi;

  auto sort_on = [&](bool along_x) {
    if (along_x) {
      std::stable_sort(first, last, [](const Point& p, const Point& q) { return p.x < q.x; });
    } else {
      std::stable_sort(first, last, [](const Point& p, const Point& q) { return p.y < q.y; });
    }
  };
  auto cut_value = [&](bool along_x, std::uint32_t k) {
    const Point& below = points_[n.lo + k - 1];
    const Point& above = points_[n.lo + k];
    return along_x ? std::midpoint(below.x, above.x) : std::midpoint(below.y, above.y);
  };
  auto interior = [&](bool along_x, double c) {
    return axis_lo(n.region, along_x) < c && c < axis_hi(n.region, along_x);
  };

  const std::uint32_t median = (count + 1) / 2;
  const bool primary = n.region.width() >= n.region.height();

  // A cut landing on the region boundary would leave a zero-extent child, which
  // only happens when duplicate coordinates sit on that boundary. Shift the
  // count split to the nearest interior cut, then try the other axis.
  auto try_axis = [&](bool along_x, Cut& out) {
    sort_on(along_x);
    double c = cut_value(along_x, median);
    if (interior(along_x, c)) {
      out = {along_x, median, c};
      return true;
    }
    for (std::uint32_t d = 1; d < count; ++d) {
      if (median > d) {
        const std::uint32_t k = median - d;
        c = cut_value(along_x, k);
        if (interior(along_x, c)) {
          out = {along_x, k, c};
          return true;
        }
      }
      if (median + d < count) {
        const std::uint32_t k = median + d;
        c = cut_value(along_x, k);
        if (interior(along_x, c)) {
          out = {along_x, k, c};
          return true;
        }
      }
      if (median <= d && median + d >= count) break;
    }
    return false;
  };

  Cut cut;
  if (try_axis(primary, cut)) return cut;
  const double other_extent = primary ? n.region.height() : n.region.width();
  if (other_extent > 0.0 && try_axis(!primary, cut)) return cut;

  // Every point shares one boundary coordinate: accept the degenerate cut.
  sort_on(primary);
  return {primary, median, cut_value(primary, median)};
}

void Abvh::split(NodeRef ref) {
  const Cut cut = choose_cut(node(ref));

  const AbvhNode parent = node(ref);
  AbvhNode low;
  AbvhNode high;
  low.region = parent.region;
  high.region = parent.region;
  if (cut.along_x) {
    low.region.hi.x = cut.c;
    high.region.lo.x = cut.c;
  } else {
    low.region.hi.y = cut.c;
    high.region.lo.y = cut.c;
  }
  low.lo = parent.lo;
  low.hi = parent.lo + cut.k;
  high.lo = low.hi;
  high.hi = parent.hi;
  low.depth = high.depth = parent.depth + 1;

  const NodeRef low_ref{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(low);
  const NodeRef high_ref{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(high);
  mut(ref).left = low_ref;
  mut(ref).right = high_ref;

  update_segments(ref, cut, low_ref, high_ref);

  // The cut line itself, spanning the parent region across the other axis.
  const double span_lo = axis_lo(parent.region, !cut.along_x);
  const double span_hi = axis_hi(parent.region, !cut.along_x);
  if (span_lo < span_hi) {
    add_segment(cut.along_x ? Axis::vertical : Axis::horizontal, cut.c, span_lo, span_hi, low_ref,
                high_ref);
  }
}

void Abvh::update_segments(NodeRef parent, const Cut& cut, NodeRef low, NodeRef high) {
  const RegionBox region = node(parent).region;
  const Axis parallel = cut.along_x ? Axis::vertical : Axis::horizontal;

  SegmentHandle h = node(parent).segments;
  while (h != kNoSegment) {
    const std::uint32_t e = segment_of(h);
    const int s = side_of(h);
    const SegmentHandle next = segments_[e].next[s];
    const Segment seg = segments_[e];

    NodeRef target;
    bool crosses = false;
    if (seg.axis == parallel) {
      target = seg.c == axis_lo(region, cut.along_x) ? low : high;
    } else if (seg.b <= cut.c) {
      target = low;
    } else if (seg.a >= cut.c) {
      target = high;
    } else {
      crosses = true;
    }

    if (!crosses) {
      segments_[e].refs[s] = target;
      push_front(target, h);
    } else {
      // The segment is reused as the low piece; the high piece is new. On the
      // far side the low piece keeps its list position and the high piece is
      // linked right after it.
      const NodeRef far = seg.refs[1 - s];
      segments_[e].b = cut.c;
      segments_[e].refs[s] = low;
      push_front(low, h);

      Segment piece;
      piece.axis = seg.axis;
      piece.c = seg.c;
      piece.a = cut.c;
      piece.b = seg.b;
      piece.refs[s] = high;
      piece.refs[1 - s] = far;
      const auto e2 = static_cast<std::uint32_t>(segments_.size());
      segments_.push_back(piece);
      push_front(high, handle(e2, s));
      insert_after(handle(e, 1 - s), handle(e2, 1 - s));
    }
    h = next;
  }
  mut(parent).segments = kNoSegment;
}

std::uint32_t Abvh::add_segment(Axis axis, double c, double a, double b, NodeRef back,
                                NodeRef front) {
  if (!(a < b)) return kNoSegment;
  Segment s;
  s.axis = axis;
  s.c = c;
  s.a = a;
  s.b = b;
  s.refs = {back, front};
  const auto index = static_cast<std::uint32_t>(segments_.size());
  segments_.push_back(s);
  push_front(back, handle(index, 0));
  push_front(front, handle(index, 1));
  return index;
}

void Abvh::push_front(NodeRef ref, SegmentHandle h) {
  AbvhNode& n = mut(ref);
  Segment& s = segments_[segment_of(h)];
  const int side = side_of(h);
  s.prev[side] = kNoSegment;
  s.next[side] = n.segments;
  if (n.segments != kNoSegment) segments_[segment_of(n.segments)].prev[side_of(n.segments)] = h;
  n.segments = h;
}

void Abvh::insert_after(SegmentHandle pos, SegmentHandle h) {
  Segment& at = segments_[segment_of(pos)];
  const int pos_side = side_of(pos);
  const SegmentHandle after = at.next[pos_side];
  Segment& s = segments_[segment_of(h)];
  const int side = side_of(h);
  s.prev[side] = pos;
  s.next[side] = after;
  at.next[pos_side] = h;
  if (after != kNoSegment) segments_[segment_of(after)].prev[side_of(after)] = h;
}

NeighborList neighbors(const Abvh& abvh) {
  NeighborList out;
  const auto segments = abvh.segments();
  for (std::uint32_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    if (s.back().is_nil() || s.front().is_nil()) continue;
    out.pairs.push_back({abvh.node(s.back()).block_id, abvh.node(s.front()).block_id, i});
  }
  detail::DisjointSets sets(abvh.leaves().size());
  for (const Adjacency& adj : out.pairs) {
    sets.unite(static_cast<std::size_t>(adj.back_block), static_cast<std::size_t>(adj.front_block));
  }
  out.connected = sets.components() <= 1;
  return out;
}

std::vector<LeafRegion> leaf_regions(const Abvh& abvh) {
  std::vector<LeafRegion> out;
  out.reserve(abvh.leaves().size());
  for (NodeRef ref : abvh.leaves()) {
    const AbvhNode& n = abvh.node(ref);
    out.push_back({n.block_id, n.region});
  }
  return out;
}

std::vector<std::pair<std::int32_t, std::int32_t>> brute_force_adjacency(
    std::span<const LeafRegion> leaves) {
  std::vector<std::pair<std::int32_t, std::int32_t>> out;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const RegionBox& p = leaves[i].region;
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      const RegionBox& q = leaves[j].region;
      const double wx = std::min(p.hi.x, q.hi.x) - std::max(p.lo.x, q.lo.x);
      const double wy = std::min(p.hi.y, q.hi.y) - std::max(p.lo.y, q.lo.y);
      if (wx < 0.0 || wy < 0.0) continue;
      const bool shares_edge = (wx > 0.0 && wy == 0.0) || (wx == 0.0 && wy > 0.0);
      if (!shares_edge) continue;
      auto a = leaves[i].block_id;
      auto b = leaves[j].block_id;
      if (a > b) std::swap(a, b);
      out.emplace_back(a, b);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> check_tiling(const Abvh& abvh, double area_rel_tol) {
  std::vector<std::string> problems;
  const RegionBox root = abvh.node(abvh.root()).region;
  const auto leaves = leaf_regions(abvh);

  double area = 0.0;
  for (const LeafRegion& leaf : leaves) {
    const RegionBox& r = leaf.region;
    area += r.area();
    if (r.lo.x > r.hi.x || r.lo.y > r.hi.y) {
      problems.push_back("leaf " + std::to_string(leaf.block_id) + " has an inverted region");
    }
    if (r.lo.x < root.lo.x || r.lo.y < root.lo.y || r.hi.x > root.hi.x || r.hi.y > root.hi.y) {
      problems.push_back("leaf " + std::to_string(leaf.block_id) + " leaves the root region");
    }
    for (const Point& p : abvh.points_of(abvh.leaves()[static_cast<std::size_t>(leaf.block_id)])) {
      if (!r.contains(p)) {
        problems.push_back("leaf " + std::to_string(leaf.block_id) + " does not contain " +
                           to_string(p));
      }
    }
  }
  if (std::abs(area - root.area()) > area_rel_tol * root.area()) {
    problems.push_back("leaf areas sum to " + detail::format_double(area) + ", root area is " +
                       detail::format_double(root.area()));
  }

  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const RegionBox& p = leaves[i].region;
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      const RegionBox& q = leaves[j].region;
      const double wx = std::min(p.hi.x, q.hi.x) - std::max(p.lo.x, q.lo.x);
      const double wy = std::min(p.hi.y, q.hi.y) - std::max(p.lo.y, q.lo.y);
      if (wx > 0.0 && wy > 0.0) {
        problems.push_back("leaves " + std::to_string(leaves[i].block_id) + " and " +
                           std::to_string(leaves[j].block_id) + " overlap");
      }
    }
  }
  return problems;
}

std::vector<std::string> check_segments(const Abvh& abvh) {
  std::vector<std::string> problems;
  const auto segments = abvh.segments();
  std::vector<int> seen(segments.size() * 2, 0);

  auto walk = [&](NodeRef ref) {
    SegmentHandle prev = kNoSegment;
    for (SegmentHandle h = abvh.node(ref).segments; h != kNoSegment;
         h = segments[segment_of(h)].next[side_of(h)]) {
      const Segment& s = segments[segment_of(h)];
      if (s.refs[side_of(h)] != ref) {
        problems.push_back("segment " + std::to_string(segment_of(h)) +
                           " listed under a node it does not reference");
      }
      if (s.prev[side_of(h)] != prev) {
        problems.push_back("segment " + std::to_string(segment_of(h)) + " has a broken back link");
      }
      ++seen[h];
      prev = h;
    }
  };

  walk(NodeRef::nil());
  for (std::uint32_t i = 1; i <= abvh.node_count(); ++i) {
    const NodeRef ref{i};
    if (abvh.node(ref).is_leaf()) {
      walk(ref);
    } else if (abvh.node(ref).segments != kNoSegment) {
      problems.push_back("internal node " + std::to_string(i) + " still holds segments");
    }
  }

  const RegionBox root = abvh.node(abvh.root()).region;
  for (std::uint32_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    const std::string name = "segment " + std::to_string(i);
    if (!(s.a < s.b)) problems.push_back(name + " has an empty span");
    if (s.back() == s.front()) problems.push_back(name + " has the same node on both sides");
    for (int side = 0; side < 2; ++side) {
      const NodeRef ref = s.refs[side];
      if (!ref.is_nil() && !abvh.node(ref).is_leaf()) {
        problems.push_back(name + " references an internal node");
      }
      const RegionBox& region = ref.is_nil() ? root : abvh.node(ref).region;
      if (!on_boundary(s, region)) {
        problems.push_back(name + " is not on the boundary of its " +
                           (side == 0 ? "back" : "front") + " node");
      }
      if (seen[handle(i, side)] != 1) {
        problems.push_back(name + " side " + std::to_string(side) + " registered " +
                           std::to_string(seen[handle(i, side)]) + " times");
      }
    }
  }
  return problems;
}

std::vector<std::string> check_ranges(const Abvh& abvh) {
  std::vector<std::string> problems;
  std::uint32_t expected_lo = 0;
  for (NodeRef ref : abvh.leaves()) {
    const AbvhNode& n = abvh.node(ref);
    if (n.lo != expected_lo) problems.push_back("leaf ranges are not contiguous");
    if (n.size() < 1) problems.push_back("empty leaf " + std::to_string(n.block_id));
    if (n.size() > abvh.max_block()) problems.push_back("oversized leaf " + std::to_string(n.block_id));
    expected_lo = n.hi;
  }
  if (expected_lo != abvh.points().size()) problems.push_back("leaf ranges do not cover all points");
  for (std::uint32_t i = 1; i <= abvh.node_count(); ++i) {
    const AbvhNode& n = abvh.node(NodeRef{i});
    if (n.is_leaf()) continue;
    const AbvhNode& l = abvh.node(n.left);
    const AbvhNode& r = abvh.node(n.right);
    if (l.lo != n.lo || l.hi != r.lo || r.hi != n.hi) {
      problems.push_back("children of node " + std::to_string(i) + " do not partition its range");
    }
  }
  return problems;
}

void write_debug_dump(const Abvh& abvh, std::ostream& out) {
  using detail::append_double;
  const AbvhStats& st = abvh.stats();
  out << "abvh leaves=" << st.leaf_count << " segments=" << st.segment_count
      << " interior=" << st.interior_segment_count << " height=" << st.height << '\n';

  std::string line;
  for (NodeRef ref : abvh.leaves()) {
    const AbvhNode& n = abvh.node(ref);
    line = "leaf " + std::to_string(n.block_id);
    for (double v : {n.region.lo.x, n.region.lo.y, n.region.hi.x, n.region.hi.y}) {
      line += ' ';
      append_double(line, v);
    }
    line += ' ' + std::to_string(n.size());
    out << line << '\n';
  }
  auto side_name = [&abvh](NodeRef ref) {
    return ref.is_nil() ? std::string("NIL") : std::to_string(abvh.node(ref).block_id);
  };
  for (const Segment& s : abvh.segments()) {
    line = "segment ";
    line += s.axis == Axis::horizontal ? 'H' : 'V';
    for (double v : {s.c, s.a, s.b}) {
      line += ' ';
      append_double(line, v);
    }
    line += ' ' + side_name(s.back()) + ' ' + side_name(s.front());
    out << line << '\n';
  }
}

}  // namespace rsmt
