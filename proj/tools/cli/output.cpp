#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace twistleaf::cli {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "_" + std::to_string(k), out);
  } else if (j.is_number_float()) {
    out.emplace_back(prefix, format_double(j.get<double>()));
  } else if (j.is_number()) {
    out.emplace_back(prefix, j.dump());
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else if (j.is_boolean()) {
    out.emplace_back(prefix, j.get<bool>() ? "true" : "false");
  } else {
    out.emplace_back(prefix, "nan");
  }
}

}  // namespace

bool Document::all_pass() const {
  return std::all_of(reports.begin(), reports.end(), [](const ResidualReport& r) { return r.pass; });
}

Json grid_json(const GridSpec& spec) {
  Json g;
  const char* names[3] = {"q", "r", "s"};
  for (int k = 0; k < 3; ++k) {
    const Axis& a = spec.axes[static_cast<std::size_t>(k)];
    g[names[k]] = {{"min", a.min}, {"max", a.max}, {"count", a.count}};
  }
  return g;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json point_json(const Point3& x) { return Json::array({x[0], x[1], x[2]}); }

std::string to_json_text(const Document& doc) {
  Json j;
  j["meta"] = doc.meta;
  j["grid"] = doc.grid;
  j["samples"] = Json::array();
  for (const Json& s : doc.samples) j["samples"].push_back(s);
  j["reports"] = Json::array();
  for (const ResidualReport& r : doc.reports) j["reports"].push_back(to_json(r));
  return j.dump(2) + "\n";
}

std::string to_csv_text(const Document& doc) {
  std::ostringstream out;
  if (doc.samples.empty()) return "";
  std::vector<std::pair<std::string, std::string>> cells;
  flatten(doc.samples.front(), "", cells);
  for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k].first;
  out << "\n";
  for (const Json& s : doc.samples) {
    cells.clear();
    flatten(s, "", cells);
    for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k].second;
    out << "\n";
  }
  return out.str();
}

std::string summary_text(const Document& doc) {
  std::ostringstream out;
  for (const ResidualReport& r : doc.reports) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-32s max %.3e  mean %.3e  n=%zu  (< %.1e)\n",
                  r.pass ? "ok" : "FAIL", r.name.c_str(), r.max, r.mean, r.count, r.threshold);
    out << line;
  }
  return out.str();
}

}  // namespace twistleaf::cli
