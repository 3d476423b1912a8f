#include "report.hpp"

#include <cmath>
#include <limits>

namespace twistleaf::cli {

void ReportBuilder::add(double value, const Point3& at) {
  const double v = std::isfinite(value) ? std::abs(value) : std::numeric_limits<double>::infinity();
  if (count_ == 0 || v > max_) {
    max_ = v;
    worst_ = at;
  }
  sum_ += v;
  ++count_;
}

void ReportBuilder::fail(const Point3& at) {
  add(std::numeric_limits<double>::infinity(), at);
  forced_fail_ = true;
}

ResidualReport ReportBuilder::finish() const {
  ResidualReport r;
  r.name = name_;
  r.threshold = threshold_;
  r.count = count_;
  r.max = max_;
  r.mean = count_ ? sum_ / static_cast<double>(count_) : 0.0;
  r.worst = worst_;
  r.pass = !forced_fail_ && max_ < threshold_;
  return r;
}

Json to_json(const ResidualReport& r) {
  Json j;
  j["name"] = r.name;
  j["max"] = r.max;
  j["mean"] = r.mean;
  j["worst_point"] = {r.worst[0], r.worst[1], r.worst[2]};
  j["count"] = r.count;
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  return j;
}

}  // namespace twistleaf::cli
