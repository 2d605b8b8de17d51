#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "perturbkit/rational.hpp"

namespace perturbkit::cli {

using Json = nlohmann::ordered_json;

/// Serialized with fixed key order and %.17g floats; non-finite numbers become
/// the strings "inf", "-inf" and "nan".
std::string dump_json(const Json& value);

Json complex_json(Complex z);
Json real_json(double x);
/// Inverse of complex_json / real_json.
Complex complex_from_json(const Json& value);
double real_from_json(const Json& value);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  bool empty() const { return header.empty(); }
};

std::string format_double(double x);
std::string render_csv(const Table& table);

/// Writes to `path.tmp` then renames over `path`.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace perturbkit::cli
