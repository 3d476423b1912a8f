#include "twistleaf/jet.hpp"

#include "twistleaf/error.hpp"

namespace twistleaf {

Jet2& Jet2::operator+=(const Jet2& o) {
  value += o.value;
  for (std::size_t i = 0; i < kMaxVars; ++i) d[i] += o.d[i];
  for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] += o.packed_[k];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  value -= o.value;
  for (std::size_t i = 0; i < kMaxVars; ++i) d[i] -= o.d[i];
  for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] -= o.packed_[k];
  return *this;
}

Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }

Jet2 operator-(const Jet2& a) {
  Jet2 r;
  return r -= a;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value * b.value;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.d[i] = a.d[i] * b.value + a.value * b.d[i];
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    for (std::size_t j = i; j < kMaxVars; ++j) {
      r.set_d2(i, j, a.d2(i, j) * b.value + a.d[i] * b.d[j] + a.d[j] * b.d[i] +
                         a.value * b.d2(i, j));
    }
  }
  return r;
}

Jet2 compose(const Jet2& a, Complex g, Complex dg, Complex d2g) {
  Jet2 r;
  r.value = g;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.d[i] = dg * a.d[i];
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    for (std::size_t j = i; j < kMaxVars; ++j) {
      r.set_d2(i, j, d2g * a.d[i] * a.d[j] + dg * a.d2(i, j));
    }
  }
  return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  const Complex x = b.value;
  if (x == Complex(0.0)) throw DomainError("division by zero");
  const Complex inv = 1.0 / x;
  const Jet2 recip = compose(b, inv, -inv * inv, 2.0 * inv * inv * inv);
  return a * recip;
}

}  // namespace twistleaf
