#include <sstream>

#include "doctest.h"
#include "rsmt/bench.hpp"
#include "rsmt/svg.hpp"

using namespace rsmt;

namespace {

std::size_t occurrences(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (auto pos = text.find(what); pos != std::string::npos; pos = text.find(what, pos + 1)) ++n;
  return n;
}

void check_document(const std::string& svg) {
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(svg.size() > 7);
  CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
  CHECK(occurrences(svg, "<g ") == occurrences(svg, "</g>"));
}

}  // namespace

TEST_SUITE("svg") {

TEST_CASE("partition figure") {
  const auto pts = generate_net(200, 1);
  const Abvh h = Abvh::build(pts, 25);
  std::ostringstream out;
  write_partition_svg(h, out);
  const std::string svg = out.str();
  check_document(svg);
  CHECK(occurrences(svg, "<rect ") == h.stats().leaf_count + 1);  // plus the background
  CHECK(occurrences(svg, "<line ") == h.stats().interior_segment_count);
  CHECK(occurrences(svg, "<circle ") == pts.size());
}

TEST_CASE("pipeline figure") {
  const auto pts = generate_net(300, 2);
  PipelineConfig config;
  config.block_size = 40;
  config.solver.kind = SolverKind::iterated_one_steiner;
  const auto result = run_pipeline(pts, config);
  std::ostringstream out;
  write_pipeline_svg(result, out);
  const std::string svg = out.str();
  check_document(svg);
  CHECK(svg.find("id=\"connectors\"") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(occurrences(svg, "<line ") == result.tree.edges.size());
  CHECK(occurrences(svg, "<circle ") == result.tree.terminals.size() + result.tree.steiner.size());
}

TEST_CASE("tree figure") {
  const auto pts = generate_net(20, 3);
  const auto tree = rmst(pts);
  std::ostringstream out;
  write_tree_svg(tree, out);
  check_document(out.str());
  CHECK(occurrences(out.str(), "<line ") == tree.edges.size());
}

}  // TEST_SUITE
