#include "rsmt/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "rsmt/error.hpp"
#include "text.hpp"

namespace rsmt {

namespace {

class LineReader {
 public:
  LineReader(std::istream& in, bool allow_comments) : in_(in), allow_comments_(allow_comments) {}

  // Next line with content; false at end of input.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      if (allow_comments_ && line[first] == '#') continue;
      return true;
    }
    return false;
  }

  std::size_t number() const noexcept { return number_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidInput("line " + std::to_string(number_) + ": " + what);
  }

 private:
  std::istream& in_;
  bool allow_comments_;
  std::size_t number_ = 0;
};

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_coordinate(std::string_view field, const LineReader& reader) {
  double v = 0.0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    reader.fail("bad number '" + std::string(field) + "'");
  }
  if (!std::isfinite(v)) reader.fail("non-finite coordinate '" + std::string(field) + "'");
  return v;
}

std::size_t parse_count(LineReader& reader, std::string& line, const char* what) {
  if (!reader.next(line)) throw InvalidInput(std::string("missing ") + what + " count");
  const auto fields = split_fields(line);
  std::size_t n = 0;
  if (fields.size() != 1) reader.fail(std::string("expected a single ") + what + " count");
  const auto res = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), n);
  if (res.ec != std::errc{} || res.ptr != fields[0].data() + fields[0].size()) {
    reader.fail(std::string("bad ") + what + " count '" + std::string(fields[0]) + "'");
  }
  return n;
}

void expect_end(LineReader& reader, std::string& line) {
  if (reader.next(line)) reader.fail("unexpected trailing data");
}

}  // namespace

std::vector<Point> read_net(std::istream& in) {
  LineReader reader(in, true);
  std::string line;
  const std::size_t n = parse_count(reader, line, "point");
  std::vector<Point> points;
  points.reserve(std::min<std::size_t>(n, 1u << 20));
  for (std::size_t i = 0; i < n; ++i) {
    if (!reader.next(line)) {
      throw InvalidInput("expected " + std::to_string(n) + " points, found " + std::to_string(i));
    }
    const auto fields = split_fields(line);
    if (fields.size() != 2) reader.fail("expected 'x y'");
    points.push_back({parse_coordinate(fields[0], reader), parse_coordinate(fields[1], reader)});
  }
  expect_end(reader, line);
  return points;
}

std::vector<Point> read_net_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open net file '" + path.string() + "'");
  try {
    return read_net(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_net(std::span<const Point> points, std::ostream& out) {
  std::string buf = std::to_string(points.size()) + '\n';
  for (const Point& p : points) {
    detail::append_double(buf, p.x);
    buf += ' ';
    detail::append_double(buf, p.y);
    buf += '\n';
  }
  out << buf;
}

std::vector<RectEdge> read_edge_list(std::istream& in) {
  LineReader reader(in, false);
  std::string line;
  const std::size_t m = parse_count(reader, line, "edge");
  std::vector<RectEdge> edges;
  edges.reserve(std::min<std::size_t>(m, 1u << 20));
  for (std::size_t i = 0; i < m; ++i) {
    if (!reader.next(line)) {
      throw InvalidInput("expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    }
    const auto f = split_fields(line);
    if (f.size() != 4) reader.fail("expected 'x1 y1 x2 y2'");
    RectEdge e{{parse_coordinate(f[0], reader), parse_coordinate(f[1], reader)},
               {parse_coordinate(f[2], reader), parse_coordinate(f[3], reader)}};
    if (e.a.x != e.b.x && e.a.y != e.b.y) reader.fail("edge is not axis-aligned");
    edges.push_back(e);
  }
  expect_end(reader, line);
  return edges;
}

void write_edge_list(std::span<const RectEdge> edges, std::ostream& out) {
  std::string buf = std::to_string(edges.size()) + '\n';
  for (const RectEdge& e : edges) {
    detail::append_double(buf, e.a.x);
    buf += ' ';
    detail::append_double(buf, e.a.y);
    buf += ' ';
    detail::append_double(buf, e.b.x);
    buf += ' ';
    detail::append_double(buf, e.b.y);
    buf += '\n';
  }
  out << buf;
}

void write_tree_file(const RectilinearTree& tree, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write tree file '" + path.string() + "'");
  write_edge_list(tree.edges, out);
  if (!out) throw InvalidInput("failed writing tree file '" + path.string() + "'");
}

std::vector<RectEdge> read_tree_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open tree file '" + path.string() + "'");
  try {
    return read_edge_list(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

RectilinearTree tree_from_edges(std::span<const Point> terminals, std::vector<RectEdge> edges) {
  RectilinearTree t;
  t.terminals = canonical_points(terminals);
  std::vector<Point> endpoints;
  endpoints.reserve(edges.size() * 2);
  for (const RectEdge& e : edges) {
    endpoints.push_back(e.a);
    endpoints.push_back(e.b);
  }
  endpoints = canonical_points(endpoints);
  std::set_difference(endpoints.begin(), endpoints.end(), t.terminals.begin(), t.terminals.end(),
                      std::back_inserter(t.steiner));
  t.edges = std::move(edges);
  t.length = tree_length(t);
  return t;
}

}  // namespace rsmt
