#pragma once

#include "jetex/jet_core.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace jetex {

/**
 * Jet file (JSON):
 *   {"dimension": n,
 *    "norm": "euclidean" | {"kind": "euclidean"} | {"kind": "lp", "p": 1.5},
 *    "points": [{"x": [...], "f": v, "g": [...]}, ...]}
 *
 * An l_p norm may carry "C" (smoothness constant); otherwise it is estimated
 * with `seed`. Throws ParseError on malformed input; validation errors from
 * validate_jet propagate unchanged.
 */
RawJet parse_jet_json(const std::string& text, unsigned long long seed = 0);
JetSet read_jet_file(const std::string& path, unsigned long long seed = 0);

/// Numbers written with 17 significant digits so parsing is bit-exact.
std::string serialize_jet_json(const JetSet& jet);

/// One point per line; comma or whitespace separated; '#' starts a comment.
std::vector<Eigen::VectorXd> parse_points(const std::string& text, int dim);
std::vector<Eigen::VectorXd> read_points_file(const std::string& path, int dim);

/// Whole file as a string; ParseError if unreadable.
std::string read_text_file(const std::string& path);

/// printf("%.17g").
std::string format_number(double v);

} // namespace jetex
