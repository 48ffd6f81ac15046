#include "rsmt/solvers.hpp"

#include <algorithm>
#include <array>
#include <iterator>
#include <limits>
#include <tuple>

#include "disjoint_sets.hpp"
#include "rsmt/error.hpp"

namespace rsmt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinGain = 1e-12;

std::vector<Point> steiner_candidates(std::span<const Point> sorted_terminals) {
  const auto grid = hanan_grid(sorted_terminals);
  std::vector<Point> out;
  out.reserve(grid.size());
  std::set_difference(grid.begin(), grid.end(), sorted_terminals.begin(), sorted_terminals.end(),
                      std::back_inserter(out));
  return out;
}

// Prim over a subset of a precomputed distance matrix; indices are at most
// a dozen, so a flat scan beats anything clever.
class SubsetMst {
 public:
  explicit SubsetMst(std::span<const Point> points) : n_(points.size()), dist_(n_ * n_) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) dist_[i * n_ + j] = l1(points[i], points[j]);
  }

  double weight(std::span<const std::uint32_t> ids) const {
    constexpr std::size_t kMax = 64;
    const std::size_t m = ids.size();
    if (m < 2) return 0.0;
    std::array<double, kMax> best{};
    std::array<bool, kMax> done{};
    for (std::size_t i = 0; i < m; ++i) best[i] = dist_[ids[0] * n_ + ids[i]];
    done[0] = true;
    double total = 0.0;
    for (std::size_t step = 1; step < m; ++step) {
      std::size_t pick = 0;
      double w = kInf;
      for (std::size_t i = 1; i < m; ++i) {
        if (!done[i] && best[i] < w) {
          w = best[i];
          pick = i;
        }
      }
      done[pick] = true;
      total += w;
      const double* row = &dist_[ids[pick] * n_];
      for (std::size_t i = 1; i < m; ++i) {
        if (!done[i]) best[i] = std::min(best[i], row[ids[i]]);
      }
    }
    return total;
  }

 private:
  std::size_t n_;
  std::vector<double> dist_;
};

struct WeightedEdge {
  double w;
  std::uint32_t u;
  std::uint32_t v;
};

bool edge_less(const WeightedEdge& a, const WeightedEdge& b) {
  return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
}

std::vector<WeightedEdge> sorted_mst_edges(std::span<const Point> vertices) {
  std::vector<WeightedEdge> out;
  for (const MstEdge& e : prim_mst(vertices)) {
    out.push_back({l1(vertices[e.from], vertices[e.to]), e.from, e.to});
  }
  std::sort(out.begin(), out.end(), edge_less);
  return out;
}

double sum_weights(std::span<const WeightedEdge> edges) {
  double total = 0.0;
  for (const WeightedEdge& e : edges) total += e.w;
  return total;
}

// MST weight of vertices + {extra}: the new MST uses only old MST edges and
// edges incident to `extra`, so Kruskal over those 2m-1 edges suffices.
double mst_weight_with(std::span<const Point> vertices, std::span<const WeightedEdge> tree_edges,
                       const Point& extra, std::vector<WeightedEdge>& scratch) {
  const auto m = static_cast<std::uint32_t>(vertices.size());
  scratch.clear();
  for (std::uint32_t i = 0; i < m; ++i) scratch.push_back({l1(extra, vertices[i]), i, m});
  std::sort(scratch.begin(), scratch.end(), edge_less);

  detail::DisjointSets sets(m + 1);
  double total = 0.0;
  std::size_t taken = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (taken < m && (i < tree_edges.size() || j < scratch.size())) {
    const bool use_tree =
        j == scratch.size() || (i < tree_edges.size() && tree_edges[i].w <= scratch[j].w);
    const WeightedEdge& e = use_tree ? tree_edges[i++] : scratch[j++];
    if (sets.unite(e.u, e.v)) {
      total += e.w;
      ++taken;
    }
  }
  return total;
}

RectilinearTree lone_vertex_tree(std::vector<Point> terminals) {
  RectilinearTree t;
  t.terminals = std::move(terminals);
  return t;
}

}  // namespace

std::string_view to_string(SolverKind kind) noexcept {
  switch (kind) {
    case SolverKind::exact: return "exact";
    case SolverKind::rmst: return "rmst";
    case SolverKind::iterated_one_steiner: return "i1s";
    case SolverKind::external: return "external";
  }
  return "unknown";
}

std::optional<SolverKind> parse_solver_kind(std::string_view name) noexcept {
  if (name == "exact") return SolverKind::exact;
  if (name == "rmst") return SolverKind::rmst;
  if (name == "i1s" || name == "iterated_one_steiner") return SolverKind::iterated_one_steiner;
  if (name == "external") return SolverKind::external;
  return std::nullopt;
}

std::vector<MstEdge> prim_mst(std::span<const Point> points) {
  const std::size_t n = points.size();
  std::vector<MstEdge> edges;
  if (n < 2) return edges;
  edges.reserve(n - 1);

  std::vector<double> dist(n);
  std::vector<std::uint32_t> parent(n, 0);
  std::vector<bool> in_tree(n, false);
  in_tree[0] = true;
  for (std::size_t v = 1; v < n; ++v) dist[v] = l1(points[0], points[v]);

  for (std::size_t step = 1; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 1; v < n; ++v) {
      if (in_tree[v]) continue;
      if (pick == n || dist[v] < dist[pick]) {
        pick = v;
      } else if (dist[v] == dist[pick]) {
        // Lower (min, max) vertex pair wins.
        const auto key_v = std::minmax<std::uint32_t>(parent[v], static_cast<std::uint32_t>(v));
        const auto key_p =
            std::minmax<std::uint32_t>(parent[pick], static_cast<std::uint32_t>(pick));
        if (key_v < key_p) pick = v;
      }
    }
    in_tree[pick] = true;
    edges.push_back({parent[pick], static_cast<std::uint32_t>(pick)});
    for (std::size_t v = 1; v < n; ++v) {
      if (in_tree[v]) continue;
      const double d = l1(points[pick], points[v]);
      if (d < dist[v] || (d == dist[v] && pick < parent[v])) {
        dist[v] = d;
        parent[v] = static_cast<std::uint32_t>(pick);
      }
    }
  }
  return edges;
}

double mst_weight(std::span<const Point> points) {
  double total = 0.0;
  for (const MstEdge& e : prim_mst(points)) total += l1(points[e.from], points[e.to]);
  return total;
}

RectilinearTree mst_tree(std::span<const Point> terminals, std::span<const Point> steiner) {
  RectilinearTree t;
  t.terminals.assign(terminals.begin(), terminals.end());
  t.steiner.assign(steiner.begin(), steiner.end());
  const auto vertices = t.vertices();
  for (const MstEdge& e : prim_mst(vertices)) {
    append_l_path(vertices[e.from], vertices[e.to], t.edges);
  }
  // L bends are vertices too.
  std::vector<Point> ends(steiner.begin(), steiner.end());
  for (const RectEdge& e : t.edges) {
    ends.push_back(e.a);
    ends.push_back(e.b);
  }
  ends = canonical_points(ends);
  const auto sorted_terminals = canonical_points(terminals);
  t.steiner.clear();
  std::set_difference(ends.begin(), ends.end(), sorted_terminals.begin(), sorted_terminals.end(),
                      std::back_inserter(t.steiner));
  t.length = tree_length(t);
  return t;
}

RectilinearTree rmst(std::span<const Point> points) {
  const auto terminals = canonical_points(points);
  return mst_tree(terminals, {});
}

RectilinearTree exact_rsmt(std::span<const Point> points, std::size_t cap) {
  auto terminals = canonical_points(points);
  const std::size_t n = terminals.size();
  if (n == 0) throw InvalidInput("exact_rsmt: empty point set");
  if (n > cap) {
    throw SolverError("exact_rsmt: " + std::to_string(n) + " points exceed the exact cap of " +
                      std::to_string(cap));
  }
  if (n > 24) throw SolverError("exact_rsmt: cap above 24 is not supported");
  if (n <= 2) return mst_tree(terminals, {});

  const auto candidates = steiner_candidates(terminals);
  std::vector<Point> all = terminals;
  all.insert(all.end(), candidates.begin(), candidates.end());
  const SubsetMst mst(all);

  std::vector<std::uint32_t> ids(n);
  for (std::uint32_t i = 0; i < n; ++i) ids[i] = i;
  double best = mst.weight(ids);
  std::vector<std::uint32_t> best_set;
  const double lower_bound = half_perimeter(terminals);
  auto reached_bound = [&] { return best <= lower_bound * (1.0 + 1e-12); };

  // Enumerate candidate subsets by increasing size, so the optimum found uses
  // the fewest Steiner points (then lexicographically first).
  const std::size_t c = candidates.size();
  for (std::size_t k = 1; k <= n - 2 && k <= c && !reached_bound(); ++k) {
    std::vector<std::uint32_t> pick(k);
    for (std::uint32_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      ids.resize(n);
      for (std::uint32_t p : pick) ids.push_back(static_cast<std::uint32_t>(n + p));
      const double w = mst.weight(ids);
      if (w < best * (1.0 - 1e-12)) {
        best = w;
        best_set = pick;
        if (reached_bound()) break;
      }
      // Next combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == c - k + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }

  std::vector<Point> steiner;
  for (std::uint32_t p : best_set) steiner.push_back(candidates[p]);
  return mst_tree(terminals, steiner);
}

RectilinearTree iterated_one_steiner(std::span<const Point> points) {
  const auto terminals = canonical_points(points);
  if (terminals.size() < 3) return mst_tree(terminals, {});

  const auto candidates = steiner_candidates(terminals);
  std::vector<bool> used(candidates.size(), false);
  std::vector<Point> vertices = terminals;
  std::vector<Point> chosen;
  std::vector<WeightedEdge> scratch;

  while (true) {
    const auto tree_edges = sorted_mst_edges(vertices);
    const double base = sum_weights(tree_edges);
    double best_gain = kMinGain;
    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (used[i]) continue;
      const double gain = base - mst_weight_with(vertices, tree_edges, candidates[i], scratch);
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best == candidates.size()) break;
    used[best] = true;
    vertices.push_back(candidates[best]);
    chosen.push_back(candidates[best]);
  }

  if (chosen.empty()) return mst_tree(terminals, {});

  // Single cleanup pass: drop added points that ended with degree <= 2.
  std::vector<int> degree(vertices.size(), 0);
  for (const MstEdge& e : prim_mst(vertices)) {
    ++degree[e.from];
    ++degree[e.to];
  }
  std::vector<Point> kept;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (degree[terminals.size() + i] > 2) kept.push_back(chosen[i]);
  }
  std::sort(kept.begin(), kept.end());
  return mst_tree(terminals, kept);
}

RectilinearTree solve_rsmt(const SolverSpec& spec, std::span<const Point> points) {
  for (const Point& p : points) {
    if (!is_finite(p)) throw InvalidInput("solve_rsmt: non-finite coordinate " + to_string(p));
  }
  auto terminals = canonical_points(points);
  if (terminals.size() < 2) return lone_vertex_tree(std::move(terminals));
  switch (spec.kind) {
    case SolverKind::exact: return exact_rsmt(terminals, spec.exact_cap);
    case SolverKind::rmst: return rmst(terminals);
    case SolverKind::iterated_one_steiner: return iterated_one_steiner(terminals);
    case SolverKind::external:
      return external_solve(spec.external_command, terminals, spec.external_timeout);
  }
  throw InvalidInput("solve_rsmt: unknown solver kind");
}

}  // namespace rsmt
