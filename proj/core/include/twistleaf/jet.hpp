#pragma once

// Second-order forward-mode jets of holomorphic functions in up to three
// complex variables.

#include <array>
#include <cstddef>
#include <functional>
#include <utility>

#include "twistleaf/types.hpp"

namespace twistleaf {

inline constexpr std::size_t kMaxVars = 3;

/// Value, gradient and Hessian of a holomorphic function at a point.
///
/// Second partials are stored once per unordered variable pair, so
/// d2(i, j) == d2(j, i) holds exactly.
struct Jet2 {
  Complex value{};
  std::array<Complex, kMaxVars> d{};

  static Jet2 constant(Complex c) {
    Jet2 j;
    j.value = c;
    return j;
  }
  static Jet2 variable(Complex at, std::size_t index) {
    Jet2 j;
    j.value = at;
    j.d[index] = 1.0;
    return j;
  }

  Complex d2(std::size_t i, std::size_t j) const { return packed_[slot(i, j)]; }
  void set_d2(std::size_t i, std::size_t j, Complex c) { packed_[slot(i, j)] = c; }

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);

 private:
  static constexpr std::size_t slot(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    // (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
    return i == 0 ? j : (i == 1 ? 2 + j : 5);
  }
  std::array<Complex, kMaxVars*(kMaxVars + 1) / 2> packed_{};
};

Jet2 operator+(Jet2 a, const Jet2& b);
Jet2 operator-(Jet2 a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);

/// Chain rule for a scalar holomorphic g: given g(a0), g'(a0), g''(a0).
Jet2 compose(const Jet2& a, Complex g, Complex dg, Complex d2g);

/// Holomorphic function of two complex variables, returning its jet.
using HoloFn2 = std::function<Jet2(Complex, Complex)>;

}  // namespace twistleaf
