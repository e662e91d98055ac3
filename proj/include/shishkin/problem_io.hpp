#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "shishkin/problem.hpp"

namespace shishkin {

/// Name -> replacement text for identifiers in coefficient expressions.
using Definitions = std::map<std::string, std::string, std::less<>>;

/// Replaces every whole identifier token equal to a defined name by
/// "(replacement)". Other text is copied verbatim.
std::string substitute_identifiers(std::string_view source, const Definitions& defs);

/**
 * Builds a ProblemSpec from a problem document:
 *
 *   { "n": 2,
 *     "eps": [1e-6, 1e-2],
 *     "A": [["2", "-1"], ["-1", "2"]],
 *     "f": ["1", "1"],
 *     "u_left": [0, 0],
 *     "u_right": [0, 0],
 *     "alpha": 0.5 }            // optional
 *
 * Errors (ProblemError, ParseError) are prefixed with the JSON pointer of the
 * offending value, e.g. "/A/1/0: ...".
 */
ProblemSpec problem_from_json(const nlohmann::json& doc, const Definitions& defs = {});

/// Inverse of problem_from_json, using the original expression sources.
nlohmann::json problem_to_json(const ProblemSpec& spec);

/// Reads and parses a problem file. Unreadable files and invalid JSON raise
/// IoError; schema and content errors raise ProblemError / ParseError.
ProblemSpec load_problem(const std::filesystem::path& path, const Definitions& defs = {});

/// Machine-readable validation report (indices one-based).
nlohmann::json report_to_json(const ValidationReport& report);

}  // namespace shishkin
