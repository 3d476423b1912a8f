#pragma once

#include <string>
#include <vector>

#include "report.hpp"
#include "twistleaf/grid.hpp"

namespace twistleaf::cli {

/// Everything one command produces: {meta, grid, samples[], reports[]}.
struct Document {
  Json meta = Json::object();
  Json grid = nullptr;
  std::vector<Json> samples;
  std::vector<ResidualReport> reports;

  bool all_pass() const;
};

Json grid_json(const GridSpec& spec);
Json complex_json(Complex z);
Json point_json(const Point3& x);

std::string to_json_text(const Document& doc);
/// One row per sample, nested fields flattened to a.b / a_0 columns, floats
/// with 17 significant digits. Header comes from the first sample.
std::string to_csv_text(const Document& doc);
/// Human-readable report table.
std::string summary_text(const Document& doc);

}  // namespace twistleaf::cli
