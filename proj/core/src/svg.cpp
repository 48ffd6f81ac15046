#include "rsmt/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

namespace rsmt {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 20.0;

// Maps world coordinates into the canvas, y up.
class Canvas {
 public:
  Canvas(const RegionBox& world, std::ostream& out) : world_(world), out_(out) {
    const double span = std::max({world.width(), world.height(), 1e-12});
    scale_ = (kCanvas - 2 * kMargin) / span;
    width_ = world.width() * scale_ + 2 * kMargin;
    height_ = world.height() * scale_ + 2 * kMargin;
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width_)
         << "\" height=\"" << num(height_) << "\" viewBox=\"0 0 " << num(width_) << ' '
         << num(height_) << "\">\n"
         << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }
  ~Canvas() { out_ << "</svg>\n"; }
  Canvas(const Canvas&) = delete;
  Canvas& operator=(const Canvas&) = delete;

  double sx(double x) const { return kMargin + (x - world_.lo.x) * scale_; }
  double sy(double y) const { return height_ - kMargin - (y - world_.lo.y) * scale_; }

  void open_group(const std::string& id, const std::string& style) {
    out_ << "<g id=\"" << id << "\" " << style << ">\n";
  }
  void close_group() { out_ << "</g>\n"; }

  void rect(const RegionBox& r) {
    out_ << "<rect x=\"" << num(sx(r.lo.x)) << "\" y=\"" << num(sy(r.hi.y)) << "\" width=\""
         << num(r.width() * scale_) << "\" height=\"" << num(r.height() * scale_) << "\"/>\n";
  }
  void line(const Point& a, const Point& b) {
    out_ << "<line x1=\"" << num(sx(a.x)) << "\" y1=\"" << num(sy(a.y)) << "\" x2=\""
         << num(sx(b.x)) << "\" y2=\"" << num(sy(b.y)) << "\"/>\n";
  }
  void dot(const Point& p, double r) {
    out_ << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y)) << "\" r=\"" << num(r)
         << "\"/>\n";
  }
  void label(const Point& p, const std::string& text) {
    out_ << "<text x=\"" << num(sx(p.x)) << "\" y=\"" << num(sy(p.y))
         << "\" font-size=\"10\" text-anchor=\"middle\">" << text << "</text>\n";
  }

 private:
  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }

  RegionBox world_;
  std::ostream& out_;
  double scale_ = 1.0;
  double width_ = kCanvas;
  double height_ = kCanvas;
};

void draw_points(Canvas& canvas, std::span<const Point> points, const char* id, const char* style,
                 double r) {
  canvas.open_group(id, style);
  for (const Point& p : points) canvas.dot(p, r);
  canvas.close_group();
}

}  // namespace

void write_partition_svg(const Abvh& abvh, std::ostream& out) {
  Canvas canvas(abvh.node(abvh.root()).region, out);
  canvas.open_group("blocks", "fill=\"#f4f4f4\" stroke=\"#888888\" stroke-width=\"0.5\"");
  for (NodeRef ref : abvh.leaves()) canvas.rect(abvh.node(ref).region);
  canvas.close_group();

  canvas.open_group("segments", "stroke=\"#1f5fbf\" stroke-width=\"1.5\"");
  for (const Segment& s : abvh.segments()) {
    if (s.back().is_nil() || s.front().is_nil()) continue;
    if (s.axis == Axis::vertical) {
      canvas.line({s.c, s.a}, {s.c, s.b});
    } else {
      canvas.line({s.a, s.c}, {s.b, s.c});
    }
  }
  canvas.close_group();

  canvas.open_group("block-ids", "fill=\"#555555\"");
  for (NodeRef ref : abvh.leaves()) {
    const AbvhNode& n = abvh.node(ref);
    const Point centre{(n.region.lo.x + n.region.hi.x) / 2, (n.region.lo.y + n.region.hi.y) / 2};
    canvas.label(centre, std::to_string(n.block_id));
  }
  canvas.close_group();
  draw_points(canvas, abvh.points(), "points", "fill=\"black\"", 2.0);
}

void write_pipeline_svg(const PipelineResult& result, std::ostream& out) {
  Canvas canvas(bounding_box(result.tree.terminals), out);
  canvas.open_group("blocks", "fill=\"none\" stroke=\"#aaaaaa\" stroke-width=\"0.5\"");
  for (const BlockSolution& b : result.blocks) canvas.rect(b.region);
  canvas.close_group();

  canvas.open_group("subtrees", "stroke=\"#222222\" stroke-width=\"1.2\"");
  for (const BlockSolution& b : result.blocks)
    for (const RectEdge& e : b.tree.edges) canvas.line(e.a, e.b);
  canvas.close_group();

  canvas.open_group("connectors",
                    "stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"4 2\"");
  for (const RectEdge& e : result.connectors) canvas.line(e.a, e.b);
  canvas.close_group();

  draw_points(canvas, result.tree.steiner, "steiner", "fill=\"#2ca02c\"", 1.8);
  draw_points(canvas, result.tree.terminals, "terminals", "fill=\"black\"", 2.2);
}

void write_tree_svg(const RectilinearTree& tree, std::ostream& out) {
  Canvas canvas(bounding_box(tree.terminals), out);
  canvas.open_group("edges", "stroke=\"#222222\" stroke-width=\"1.2\"");
  for (const RectEdge& e : tree.edges) canvas.line(e.a, e.b);
  canvas.close_group();
  draw_points(canvas, tree.steiner, "steiner", "fill=\"#2ca02c\"", 1.8);
  draw_points(canvas, tree.terminals, "terminals", "fill=\"black\"", 2.2);
}

}  // namespace rsmt
