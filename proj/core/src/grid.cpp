#include "twistleaf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "twistleaf/parallel.hpp"

namespace twistleaf {

void GridSpec::validate() const {
  for (const Axis& a : axes) {
    if (a.count < 1) throw std::invalid_argument("grid axis count must be positive");
    if (!(a.max >= a.min) || !std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw std::invalid_argument("grid axis must satisfy min <= max with finite bounds");
    }
  }
}

bool GridSpec::interior(std::size_t index) const {
  const auto ijk = unflatten(index);
  for (int k = 0; k < 3; ++k) {
    if (axes[k].count > 1 && (ijk[k] == 0 || ijk[k] == axes[k].count - 1)) return false;
  }
  return true;
}

std::size_t GridSpec::nearest(const Point3& x) const {
  std::array<int, 3> ijk{};
  for (int k = 0; k < 3; ++k) {
    const Axis& a = axes[k];
    if (a.count <= 1 || a.max == a.min) continue;
    const double t = (x[k] - a.min) / a.spacing();
    ijk[k] = std::clamp(static_cast<int>(std::lround(t)), 0, a.count - 1);
  }
  return flatten(ijk);
}

std::vector<std::size_t> GridSpec::neighbours(std::size_t index) const {
  std::vector<std::size_t> out;
  const auto ijk = unflatten(index);
  for (int k = 0; k < 3; ++k) {
    for (int dir : {-1, 1}) {
      auto n = ijk;
      n[k] += dir;
      if (n[k] >= 0 && n[k] < axes[k].count) out.push_back(flatten(n));
    }
  }
  return out;
}

std::vector<std::size_t> bfs_continuation(
    const GridSpec& spec, std::size_t seed,
    const std::function<bool(std::size_t index, std::size_t parent)>& solve) {
  std::vector<char> visited(spec.size(), 0);
  std::vector<char> ok(spec.size(), 0);
  visited[seed] = 1;
  ok[seed] = 1;
  std::vector<std::size_t> order{seed};
  std::vector<std::size_t> layer{seed};
  while (!layer.empty()) {
    std::map<std::size_t, std::size_t> next;  // index -> parent
    for (std::size_t p : layer) {
      if (!ok[p]) continue;
      for (std::size_t nb : spec.neighbours(p)) {
        if (!visited[nb]) next.emplace(nb, p);
      }
    }
    const std::vector<std::pair<std::size_t, std::size_t>> work(next.begin(), next.end());
    for (const auto& item : work) visited[item.first] = 1;
    parallel_for(work.size(), [&](std::size_t k) {
      ok[work[k].first] = solve(work[k].first, work[k].second) ? 1 : 0;
    });
    layer.clear();
    for (const auto& item : work) {
      order.push_back(item.first);
      layer.push_back(item.first);
    }
  }
  return order;
}

}  // namespace twistleaf
