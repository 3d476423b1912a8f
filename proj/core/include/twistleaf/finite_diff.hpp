#pragma once

// Central finite differences with step base * (1 + |x_k|).

#include <array>
#include <cmath>
#include <cstddef>
#include <complex>
#include <type_traits>

namespace twistleaf {

inline constexpr double kDefaultFdStep = 1e-5;

namespace detail {

template <class T>
T fd_quotient(const T& plus, const T& minus, double width) {
  if constexpr (std::is_arithmetic_v<T> || std::is_same_v<T, std::complex<double>>) {
    return (plus - minus) / width;
  } else {
    T out{};
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = (plus[m] - minus[m]) / width;
    return out;
  }
}

}  // namespace detail

/// Step actually used along coordinate `coord`.
inline double fd_step_for(double base, double coord) { return base * (1.0 + std::abs(coord)); }

/// Partial derivative of f along axis `k` at x.
template <std::size_t D, class F>
auto central_partial(F&& f, const std::array<double, D>& x, std::size_t k, double base) {
  const double h = fd_step_for(base, x[k]);
  auto xp = x;
  auto xm = x;
  xp[k] += h;
  xm[k] -= h;
  return detail::fd_quotient(f(xp), f(xm), xp[k] - xm[k]);
}

/// All D partials of f at x; entry k is the derivative along axis k.
template <std::size_t D, class F>
auto central_partials(F&& f, const std::array<double, D>& x, double base) {
  using R = std::decay_t<decltype(f(x))>;
  std::array<R, D> out{};
  for (std::size_t k = 0; k < D; ++k) out[k] = central_partial(f, x, k, base);
  return out;
}

}  // namespace twistleaf
