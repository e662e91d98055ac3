#include "shishkin/problem_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "shishkin/error.hpp"

namespace shishkin {

using nlohmann::json;

std::string substitute_identifiers(std::string_view source, const Definitions& defs) {
  std::string out;
  out.reserve(source.size());
  std::size_t i = 0;
  while (i < source.size()) {
    const char c = source[i];
    const bool ident_start = std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    // An identifier directly after a digit is part of a number ("1e5").
    const bool after_digit =
        i > 0 && (std::isdigit(static_cast<unsigned char>(source[i - 1])) ||
                  source[i - 1] == '.');
    if (!ident_start || after_digit) {
      out += c;
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < source.size() &&
           (std::isalnum(static_cast<unsigned char>(source[end])) ||
            source[end] == '_')) {
      ++end;
    }
    const std::string_view name = source.substr(i, end - i);
    if (auto it = defs.find(name); it != defs.end()) {
      out += '(';
      out += it->second;
      out += ')';
    } else {
      out += name;
    }
    i = end;
  }
  return out;
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ProblemError(path + ": " + what);
}

const json& member(const json& doc, const char* key) {
  if (!doc.contains(key)) schema_error("/" + std::string(key), "missing required key");
  return doc.at(key);
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected a number");
  return v.get<double>();
}

std::vector<double> vector_at(const json& v, const std::string& path, std::size_t n) {
  if (!v.is_array()) schema_error(path, "expected an array");
  if (v.size() != n) {
    schema_error(path, "expected " + std::to_string(n) + " entries, got " +
                           std::to_string(v.size()));
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(number_at(v[i], path + "/" + std::to_string(i)));
  }
  return out;
}

std::string expression_at(const json& v, const std::string& path, const Definitions& defs) {
  std::string source;
  if (v.is_string()) {
    source = v.get<std::string>();
  } else if (v.is_number()) {
    std::ostringstream s;
    s.precision(17);
    s << v.get<double>();
    source = s.str();
  } else {
    schema_error(path, "expected an expression string or a number");
  }
  source = substitute_identifiers(source, defs);
  try {
    (void)parse(source);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.offset(), e.expected());
  }
  return source;
}

}  // namespace

ProblemSpec problem_from_json(const json& doc, const Definitions& defs) {
  if (!doc.is_object()) schema_error("", "expected a JSON object");
  const json& n_json = member(doc, "n");
  if (!n_json.is_number_integer() || n_json.get<long long>() < 1) {
    schema_error("/n", "expected a positive integer");
  }
  const auto n = static_cast<std::size_t>(n_json.get<long long>());

  std::vector<double> eps = vector_at(member(doc, "eps"), "/eps", n);
  try {
    check_eps_vector(eps);
  } catch (const CoincidentEpsError& e) {
    throw CoincidentEpsError(std::string("/eps: ") + e.what());
  } catch (const ProblemError& e) {
    schema_error("/eps", e.what());
  }

  const json& a = member(doc, "A");
  if (!a.is_array() || a.size() != n) {
    schema_error("/A", "expected an array of " + std::to_string(n) + " rows");
  }
  std::vector<std::string> a_sources;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row_path = "/A/" + std::to_string(i);
    if (!a[i].is_array() || a[i].size() != n) {
      schema_error(row_path, "expected an array of " + std::to_string(n) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      a_sources.push_back(expression_at(a[i][j], row_path + "/" + std::to_string(j), defs));
    }
  }

  const json& f = member(doc, "f");
  if (!f.is_array() || f.size() != n) {
    schema_error("/f", "expected an array of " + std::to_string(n) + " entries");
  }
  std::vector<std::string> f_sources;
  for (std::size_t i = 0; i < n; ++i) {
    f_sources.push_back(expression_at(f[i], "/f/" + std::to_string(i), defs));
  }

  std::vector<double> u_left = vector_at(member(doc, "u_left"), "/u_left", n);
  std::vector<double> u_right = vector_at(member(doc, "u_right"), "/u_right", n);

  std::optional<double> alpha;
  if (doc.contains("alpha") && !doc.at("alpha").is_null()) {
    alpha = number_at(doc.at("alpha"), "/alpha");
    if (!(*alpha > 0.0)) schema_error("/alpha", "alpha override must be positive");
  }

  return ProblemSpec::create(std::move(eps), std::move(a_sources),
                             std::move(f_sources), std::move(u_left),
                             std::move(u_right), alpha);
}

json problem_to_json(const ProblemSpec& spec) {
  const std::size_t n = spec.n();
  json doc;
  doc["n"] = n;
  doc["eps"] = spec.eps();
  json a = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(spec.a_source(i, j));
    a.push_back(std::move(row));
  }
  doc["A"] = std::move(a);
  json f = json::array();
  for (std::size_t i = 0; i < n; ++i) f.push_back(spec.f_source(i));
  doc["f"] = std::move(f);
  doc["u_left"] = spec.u_left();
  doc["u_right"] = spec.u_right();
  if (spec.alpha_override()) doc["alpha"] = *spec.alpha_override();
  return doc;
}

ProblemSpec load_problem(const std::filesystem::path& path, const Definitions& defs) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open problem file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return problem_from_json(doc, defs);
}

json report_to_json(const ValidationReport& report) {
  json doc;
  doc["ok"] = report.ok();
  doc["a1_holds"] = report.a1_holds;
  doc["a2_alpha"] = report.a2_alpha;
  doc["a3_holds"] = report.a3_holds;
  doc["worst_row_margin"] = report.worst_row_margin;
  json violations = json::array();
  for (const Violation& v : report.violations) {
    json item;
    item["condition"] = v.condition;
    item["x"] = v.x;
    item["row"] = v.row + 1;
    item["col"] = v.col ? json(*v.col + 1) : json(nullptr);
    violations.push_back(std::move(item));
  }
  doc["violations"] = std::move(violations);
  return doc;
}

}  // namespace shishkin
