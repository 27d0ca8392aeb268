#pragma once

#include "disclab/real.hpp"

namespace disclab {

/// Minimal complex arithmetic over an arbitrary real scalar. std::complex is
/// only specified for the builtin floating types, so extended-precision
/// values use this instead.
template <class T>
struct Complex {
  T re{};
  T im{};

  Complex() = default;
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}
  explicit Complex(T r) : re(std::move(r)), im(0) {}

  static Complex polar(const T& modulus, const T& angle) {
    using std::cos;
    using std::sin;
    return {modulus * cos(angle), modulus * sin(angle)};
  }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const T& s, const Complex& a) { return {s * a.re, s * a.im}; }

  T norm_sq() const { return re * re + im * im; }
  T modulus() const {
    using std::sqrt;
    return sqrt(norm_sq());
  }
};

using ComplexReal = Complex<Real>;

}  // namespace disclab
