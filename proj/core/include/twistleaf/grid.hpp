#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "twistleaf/types.hpp"

namespace twistleaf {

/// Uniform axis with `count` nodes from min to max inclusive.
struct Axis {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  double at(int i) const {
    if (count <= 1) return min;
    // Endpoints are hit exactly.
    return i == count - 1 ? max : min + (max - min) * static_cast<double>(i) / (count - 1);
  }
  double spacing() const { return count <= 1 ? 0.0 : (max - min) / (count - 1); }
};

/// Box grid over (q, r, s), flattened row-major with s fastest.
struct GridSpec {
  std::array<Axis, 3> axes{};

  /// Throws std::invalid_argument on non-positive counts or inverted axes.
  void validate() const;

  std::size_t size() const {
    return static_cast<std::size_t>(axes[0].count) * axes[1].count * axes[2].count;
  }
  std::size_t flatten(const std::array<int, 3>& ijk) const {
    return (static_cast<std::size_t>(ijk[0]) * axes[1].count + ijk[1]) * axes[2].count + ijk[2];
  }
  std::array<int, 3> unflatten(std::size_t index) const {
    const auto ns = static_cast<std::size_t>(axes[2].count);
    const auto nr = static_cast<std::size_t>(axes[1].count);
    return {static_cast<int>(index / (nr * ns)), static_cast<int>((index / ns) % nr),
            static_cast<int>(index % ns)};
  }
  Point3 point(std::size_t index) const {
    const auto ijk = unflatten(index);
    return {axes[0].at(ijk[0]), axes[1].at(ijk[1]), axes[2].at(ijk[2])};
  }
  /// Strictly inside along every axis that has more than one node.
  bool interior(std::size_t index) const;
  /// Grid index whose point is closest to x.
  std::size_t nearest(const Point3& x) const;
  /// Face neighbours in the fixed order -q, +q, -r, +r, -s, +s.
  std::vector<std::size_t> neighbours(std::size_t index) const;
};

/// Breadth-first continuation from an already solved `seed`. Each layer holds
/// the unvisited neighbours of the previous layer's successful points; a new
/// point's parent is its lowest-index successful neighbour in that layer.
/// `solve(index, parent)` runs concurrently within a layer and returns
/// whether the point succeeded (failures are not expanded). Returns all
/// visited indices in solve order, seed first.
std::vector<std::size_t> bfs_continuation(
    const GridSpec& spec, std::size_t seed,
    const std::function<bool(std::size_t index, std::size_t parent)>& solve);

}  // namespace twistleaf
