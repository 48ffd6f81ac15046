#include <sstream>

#include "rsmt/error.hpp"
#include "rsmt/io.hpp"
#include "rsmt/solvers.hpp"
#include "subprocess.hpp"

namespace rsmt {

namespace {

std::string describe(const detail::ProcessResult& r) {
  std::string out;
  if (r.exited) {
    out = "exit status " + std::to_string(r.exit_code);
  } else if (r.signal != 0) {
    out = "killed by signal " + std::to_string(r.signal);
  }
  if (!r.err.empty()) {
    if (!out.empty()) out += "; ";
    out += "stderr: " + r.err;
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  }
  return out;
}

}  // namespace

RectilinearTree external_solve(const std::string& command, std::span<const Point> points,
                               std::chrono::duration<double> timeout) {
  using Reason = ExternalSolverError::Reason;
  if (command.empty()) {
    throw ExternalSolverError(Reason::launch, "external solver: empty command");
  }
  const auto terminals = canonical_points(points);

  std::ostringstream request;
  write_net(terminals, request);
  const auto result = detail::run_shell(command, request.str(), timeout);
  const std::string prefix = "external solver '" + command + "': ";

  if (!result.launched) {
    throw ExternalSolverError(Reason::launch, prefix + "could not start", result.err);
  }
  if (result.timed_out) {
    throw ExternalSolverError(Reason::timeout,
                              prefix + "timed out after " + std::to_string(timeout.count()) + " s",
                              describe(result));
  }
  if (!result.exited || result.exit_code != 0) {
    throw ExternalSolverError(Reason::exit_status, prefix + "failed (" + describe(result) + ")",
                              describe(result));
  }

  std::vector<RectEdge> edges;
  try {
    std::istringstream reply(result.out);
    edges = read_edge_list(reply);
  } catch (const InvalidInput& e) {
    throw ExternalSolverError(Reason::malformed_reply, prefix + "malformed reply: " + e.what(),
                              describe(result));
  }

  RectilinearTree tree = tree_from_edges(terminals, std::move(edges));
  const ValidationReport report = validate_tree(tree, terminals);
  if (!report.ok()) {
    throw ExternalSolverError(Reason::invalid_tree, prefix + "invalid tree: " + report.summary(),
                              describe(result));
  }
  return tree;
}

}  // namespace rsmt
