#pragma once

#include "jetex/extenders.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace jetex::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInfeasible = 2,
  kNoConvergence = 3,
};

/// Accepts condition names (w11, cw11, cw1omega, cw1alpha) and class names
/// (c11, c11_conv, c1omega_conv, c1alpha_conv_lp). Throws ParseError.
ExtensionClass parse_class(const std::string& name);

/// Axis-aligned box; lo.size() == hi.size() == dimension.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Builds a box from "lo0 hi0 lo1 hi1 ..."; ParseError if degenerate.
Box parse_box(const std::vector<double>& flat, int dim);

/// Grid nodes in row-major order (first axis slowest).
std::vector<Eigen::VectorXd> grid_nodes(const Box& box, int resolution);

struct OracleCheckResult {
  bool pass = true;
  double max_gap = 0.0;
  double bound = 0.0;
  /// Largest solver allowance tol * (1 + |F|) over the queries.
  double solver_slack = 0.0;
  std::size_t queries = 0;
  std::size_t nonconverged = 0;
  double max_residual = 0.0;
  Eigen::VectorXd worst_point;
  Box sample_box;
  int resolution = 0;
};

/**
 * Compares the envelope with the lower hull of g sampled on a grid.
 *
 * The sample grid has `resolution` nodes per axis over the query box joined
 * with the bounding box of the jet, widened on each side by the larger of a
 * quarter of its width and the jet diameter. Queries are the sample nodes in
 * the query box. The pass criterion is |F - hull| <= K(spacing) + tol (1+|F|).
 * Dimensions 1 and 2 only.
 */
OracleCheckResult oracle_check(const Extension& ext, const Box& query, int resolution);

/// Entry point of the `jetex` executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace jetex::cli
