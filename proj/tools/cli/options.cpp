#include "options.hpp"

#include <charconv>
#include <cmath>

namespace twistleaf::cli {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view raw, std::string_view what) {
  const std::string_view s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ValidationError("invalid number '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

int to_int(std::string_view raw, std::string_view what) {
  const std::string_view s = trim(raw);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("invalid integer '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

}  // namespace

GridSpec parse_grid(std::string_view text) {
  GridSpec spec;
  bool seen[3] = {false, false, false};
  for (std::string_view part : split(text, ',')) {
    const auto f = split(trim(part), ':');
    if (f.size() != 4) throw ValidationError("grid axis must be name:min:max:count, got '" + std::string(part) + "'");
    const std::string_view name = trim(f[0]);
    int k = -1;
    if (name == "q") k = 0;
    if (name == "r") k = 1;
    if (name == "s") k = 2;
    if (k < 0) throw ValidationError("unknown grid axis '" + std::string(name) + "'");
    if (seen[k]) throw ValidationError("grid axis '" + std::string(name) + "' given twice");
    seen[k] = true;
    Axis& a = spec.axes[static_cast<std::size_t>(k)];
    a.min = to_double(f[1], "grid");
    a.max = to_double(f[2], "grid");
    a.count = to_int(f[3], "grid");
    if (a.count < 1) throw ValidationError("grid count must be positive");
    if (a.max < a.min) throw ValidationError("grid axis '" + std::string(name) + "' has max < min");
    if (a.count > 1 && a.max == a.min) throw ValidationError("grid axis '" + std::string(name) + "' is degenerate");
  }
  for (bool b : seen) {
    if (!b) throw ValidationError("grid must specify all of q, r and s");
  }
  return spec;
}

Point3 parse_point(std::string_view text) {
  const auto f = split(text, ',');
  if (f.size() != 3) throw ValidationError("point must be q,r,s");
  return {to_double(f[0], "point"), to_double(f[1], "point"), to_double(f[2], "point")};
}

Complex parse_complex(std::string_view text) {
  const auto f = split(text, ',');
  if (f.size() == 1) return {to_double(f[0], "complex value"), 0.0};
  if (f.size() != 2) throw ValidationError("complex value must be re,im");
  return {to_double(f[0], "complex value"), to_double(f[1], "complex value")};
}

Profile parse_profile(std::string_view text) {
  const auto f = split(text, ':');
  const std::string_view kind = trim(f[0]);
  std::vector<double> p;
  for (std::size_t k = 1; k < f.size(); ++k) p.push_back(to_double(f[k], "profile"));
  if (kind == "bump") {
    if (p.size() != 2 || !(p[1] > 0.0)) throw ValidationError("bump profile is bump:amplitude:radius with radius > 0");
    return Profile::bump(p[0], p[1]);
  }
  if (kind == "sine") {
    if (p.size() != 2 && p.size() != 3) throw ValidationError("sine profile is sine:amplitude:frequency[:phase]");
    return Profile::sine(p[0], p[1], p.size() == 3 ? p[2] : 0.0);
  }
  if (kind == "poly") {
    if (p.empty()) throw ValidationError("poly profile needs at least one coefficient");
    return Profile::polynomial(p);
  }
  throw ValidationError("unknown profile kind '" + std::string(kind) + "'");
}

std::vector<RealVec6> parse_basis(std::string_view text) {
  std::vector<RealVec6> out;
  for (std::string_view vec : split(text, ';')) {
    const auto f = split(vec, ',');
    if (f.size() != 6) throw ValidationError("basis vectors need six components");
    RealVec6 v{};
    for (std::size_t k = 0; k < 6; ++k) v[k] = to_double(f[k], "basis");
    out.push_back(v);
  }
  return out;
}

void require_min_count(const GridSpec& spec, int min_count) {
  for (const Axis& a : spec.axes) {
    if (a.count < min_count) {
      throw ValidationError("residual checks need at least " + std::to_string(min_count) +
                            " nodes per grid axis");
    }
  }
}

}  // namespace twistleaf::cli
