#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twistleaf/types.hpp"

namespace twistleaf::cli {

using Json = nlohmann::ordered_json;

/// Summary of one residual test over a set of points. pass iff max < threshold.
struct ResidualReport {
  std::string name;
  double max = 0.0;
  double mean = 0.0;
  Point3 worst{};
  std::size_t count = 0;
  double threshold = 0.0;
  bool pass = true;
};

/// Accumulates values in call order; non-finite values count as +infinity.
class ReportBuilder {
 public:
  ReportBuilder(std::string name, double threshold) : name_(std::move(name)), threshold_(threshold) {}
  void add(double value, const Point3& at);
  /// Forces failure, e.g. when a required point could not be evaluated.
  void fail(const Point3& at);
  ResidualReport finish() const;

 private:
  std::string name_;
  double threshold_;
  double max_ = 0.0;
  double sum_ = 0.0;
  Point3 worst_{};
  std::size_t count_ = 0;
  bool forced_fail_ = false;
};

Json to_json(const ResidualReport& r);

}  // namespace twistleaf::cli
