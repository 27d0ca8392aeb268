#pragma once

// Analytic functions on the unit disc given by Taylor coefficients: dense
// polynomials, sparse lacunary sums with big-integer exponents, and the
// mixed form (polynomial head + lacunary tail) produced by ball sampling.
//
// Radii are always carried as gaps delta = 1 - r. Powers r^n are computed as
// exp(n * log1p(-delta)) so that delta ~ 1e-20 and n ~ 1e20 keep full
// relative accuracy.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

#include "disclab/complex.hpp"
#include "disclab/errors.hpp"
#include "disclab/real.hpp"

namespace disclab {

/// A point z = (1 - gap) e^{i angle} of the disc.
struct DiscPoint {
  Real gap;
  Real angle;

  DiscPoint(Real g, Real a) : gap(std::move(g)), angle(std::move(a)) {
    if (!(gap > 0) || gap > 1) {
      throw DomainError("disc point gap must lie in (0, 1]");
    }
  }
  Real radius() const { return Real(1) - gap; }
};

/// Finite Taylor polynomial sum a_n z^n. The coefficient list may be empty
/// (the zero polynomial) and its last entry may vanish.
struct PowerSeries {
  std::vector<std::complex<double>> coefficients;
  unsigned precision = working_precision();

  PowerSeries() = default;
  explicit PowerSeries(std::vector<std::complex<double>> coeffs,
                       unsigned bits = working_precision())
      : coefficients(std::move(coeffs)), precision(bits) {}

  static PowerSeries monomial(std::size_t n, std::complex<double> c = 1.0) {
    std::vector<std::complex<double>> a(n + 1, 0.0);
    a[n] = c;
    return PowerSeries(std::move(a));
  }
  static PowerSeries constant(std::complex<double> c) { return PowerSeries({c}); }

  /// Upper bound on the degree (coefficient count minus one); 0 when empty.
  std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
  bool is_zero() const {
    return std::all_of(coefficients.begin(), coefficients.end(),
                       [](const auto& a) { return a == std::complex<double>(0.0); });
  }
  std::complex<double> at(std::size_t n) const {
    return n < coefficients.size() ? coefficients[n] : std::complex<double>(0.0);
  }

  friend PowerSeries operator+(const PowerSeries& f, const PowerSeries& g) {
    std::vector<std::complex<double>> a(std::max(f.coefficients.size(), g.coefficients.size()));
    for (std::size_t n = 0; n < a.size(); ++n) a[n] = f.at(n) + g.at(n);
    return PowerSeries(std::move(a), std::max(f.precision, g.precision));
  }
  friend PowerSeries operator-(const PowerSeries& f, const PowerSeries& g) {
    return f + g * std::complex<double>(-1.0);
  }
  friend PowerSeries operator*(const PowerSeries& f, std::complex<double> s) {
    PowerSeries out = f;
    for (auto& a : out.coefficients) a *= s;
    return out;
  }
};

struct LacunaryTerm {
  Real coefficient;
  BigInt exponent;
};

/// Sparse sum c_k z^{n_k} with positive c_k and strictly increasing n_k.
struct LacunarySeries {
  std::vector<LacunaryTerm> terms;

  LacunarySeries() = default;
  explicit LacunarySeries(std::vector<LacunaryTerm> t) : terms(std::move(t)) { validate(); }

  void validate() const {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      if (!(terms[k].coefficient > 0)) throw DomainError("lacunary coefficients must be positive");
      if (terms[k].exponent < 0) throw DomainError("lacunary exponents must be nonnegative");
      if (k > 0 && !(terms[k].exponent > terms[k - 1].exponent)) {
        throw DomainError("lacunary exponents must strictly increase");
      }
    }
  }

  /// The series multiplied by a positive scalar.
  LacunarySeries scaled(const Real& s) const {
    LacunarySeries out = *this;
    for (auto& t : out.terms) t.coefficient = t.coefficient * s;
    return out;
  }
};

/// head(z) + tail(z): a dense polynomial plus a lacunary sum.
struct MixedSeries {
  PowerSeries head;
  LacunarySeries tail;
};

/// r^n = (1 - gap)^n for 0 < gap <= 1, via exp(n log1p(-gap)).
inline Real pow_from_gap(const Real& gap, const BigInt& n) {
  if (n == 0) return Real(1);
  if (gap == 1) return Real(0);
  return exp(Real(n) * log1p(-gap));
}

/// Horner evaluation, generic over the complex type.
template <class C>
C horner(std::span<const C> coeffs, const C& z) {
  C acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

/// Double-precision evaluation used by the quadrature routines.
/// Double-precision evaluation used by the quadrature routines.
inline std::complex<double> eval_fast(const PowerSeries& f, std::complex<double> z) {
  return horner<std::complex<double>>(f.coefficients, z);
}

namespace detail {

inline ComplexReal to_complex_real(std::complex<double> a) { return {Real(a.real()), Real(a.imag())}; }

inline ComplexReal horner_real(const PowerSeries& f, const ComplexReal& z) {
  ComplexReal acc{Real(0), Real(0)};
  for (auto it = f.coefficients.rbegin(); it != f.coefficients.rend(); ++it) {
    acc = acc * z + to_complex_real(*it);
  }
  return acc;
}

// exp(i n theta) with the product n*theta formed at enough extra precision
// that the reduction modulo 2 pi loses nothing.
inline ComplexReal unit_phase(const BigInt& n, const Real& angle) {
  const unsigned base = working_precision();
  Real s, c;
  {
    PrecisionScope wide(base + static_cast<unsigned>(bit_length(n)) + 32);
    Real t = Real(n) * angle;
    sin_cos(t, s, c);
  }
  PrecisionScope back(base);
  return {Real(0) + c, Real(0) + s};
}

}  // namespace detail

/// f(z) at the series' precision. Relative rounding error is of order
/// 2^-precision * (degree + 2) when no cancellation occurs.
inline ComplexReal eval(const PowerSeries& f, const DiscPoint& z) {
  PrecisionScope scope(std::max(f.precision, kMinPrecisionBits));
  Real r = Real(1) - z.gap;
  return detail::horner_real(f, ComplexReal::polar(r, z.angle));
}

/// Sum c_k z^{n_k} at the working precision.
inline ComplexReal eval_lacunary(const LacunarySeries& f, const DiscPoint& z) {
  ComplexReal acc{Real(0), Real(0)};
  for (const auto& t : f.terms) {
    Real m = t.coefficient * pow_from_gap(z.gap, t.exponent);
    if (m.is_zero()) continue;
    acc += m * detail::unit_phase(t.exponent, z.angle);
  }
  return acc;
}

inline ComplexReal eval_mixed(const MixedSeries& f, const DiscPoint& z) {
  PrecisionScope scope(std::max(f.head.precision, working_precision()));
  return detail::horner_real(f.head, ComplexReal::polar(Real(1) - z.gap, z.angle)) +
         eval_lacunary(f.tail, z);
}

/// f' as a power series: coefficient n is (n+1) a_{n+1}.
inline PowerSeries derivative(const PowerSeries& f) {
  std::vector<std::complex<double>> d;
  if (f.coefficients.size() > 1) {
    d.resize(f.coefficients.size() - 1);
    for (std::size_t n = 0; n < d.size(); ++n) {
      d[n] = static_cast<double>(n + 1) * f.coefficients[n + 1];
    }
  }
  return PowerSeries(std::move(d), f.precision);
}

namespace detail {

// cos/sin of 2 pi t / G for t = 0..G-1.
inline std::vector<ComplexReal> roots_of_unity(std::size_t grid) {
  std::vector<ComplexReal> w;
  w.reserve(grid);
  Real two_pi = Real(2) * Real::pi();
  for (std::size_t t = 0; t < grid; ++t) {
    Real s, c;
    sin_cos(two_pi * Real(static_cast<unsigned long>(t)) / Real(static_cast<unsigned long>(grid)), s, c);
    w.push_back({c, s});
  }
  return w;
}

inline std::uint64_t residue(const BigInt& n, std::size_t grid) {
  BigInt r = n % static_cast<unsigned long>(grid);
  return r.get_ui();
}

}  // namespace detail

/// |f(r e^{i theta_j})| for theta_j = 2 pi j / G, r = 1 - gap. Lacunary phases
/// are reduced exactly through n_k mod G.
inline std::vector<Real> circle_profile(const MixedSeries& f, const Real& gap, std::size_t grid) {
  if (grid == 0) throw DomainError("circle_profile needs at least one angle");
  if (!(gap > 0) || gap > 1) throw DomainError("gap must lie in (0, 1]");
  PrecisionScope scope(std::max(f.head.precision, working_precision()));
  const auto roots = detail::roots_of_unity(grid);
  const Real r = Real(1) - gap;

  struct Prepared {
    Real modulus;
    std::uint64_t step;
  };
  std::vector<Prepared> lac;
  lac.reserve(f.tail.terms.size());
  for (const auto& t : f.tail.terms) {
    lac.push_back({t.coefficient * pow_from_gap(gap, t.exponent), detail::residue(t.exponent, grid)});
  }

  std::vector<Real> out;
  out.reserve(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    ComplexReal acc{Real(0), Real(0)};
    if (!f.head.coefficients.empty()) acc = detail::horner_real(f.head, r * roots[j]);
    for (const auto& term : lac) {
      acc += term.modulus * roots[(j * term.step) % grid];
    }
    out.push_back(acc.modulus());
  }
  return out;
}

inline std::vector<Real> circle_profile(const PowerSeries& f, const Real& gap, std::size_t grid) {
  return circle_profile(MixedSeries{f, {}}, gap, grid);
}

inline std::vector<Real> circle_profile(const LacunarySeries& f, const Real& gap, std::size_t grid) {
  return circle_profile(MixedSeries{PowerSeries({}, working_precision()), f}, gap, grid);
}

/// Long-double variant of circle_profile for measure experiments on large
/// grids. Lacunary moduli are formed in extended precision first.
inline std::vector<long double> circle_profile_fast(const MixedSeries& f, const Real& gap,
                                                    std::size_t grid) {
  if (grid == 0) throw DomainError("circle_profile needs at least one angle");
  std::vector<std::complex<long double>> roots(grid);
  for (std::size_t t = 0; t < grid; ++t) {
    long double a = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(t) /
                    static_cast<long double>(grid);
    roots[t] = {std::cos(a), std::sin(a)};
  }
  const long double r = (Real(1) - gap).to_long_double();

  std::vector<std::pair<long double, std::uint64_t>> lac;
  for (const auto& t : f.tail.terms) {
    lac.emplace_back((t.coefficient * pow_from_gap(gap, t.exponent)).to_long_double(),
                     detail::residue(t.exponent, grid));
  }
  std::vector<std::complex<long double>> head(f.head.coefficients.begin(),
                                              f.head.coefficients.end());

  std::vector<long double> out(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    std::complex<long double> acc =
        horner<std::complex<long double>>(head, r * roots[j]);
    for (const auto& [m, step] : lac) acc += m * roots[(j * step) % grid];
    out[j] = std::abs(acc);
  }
  return out;
}

/// CSV rows "theta,modulus" at the digit count implied by the precision.
inline void write_profile_csv(std::ostream& os, const std::vector<Real>& profile) {
  const std::size_t digits = decimal_digits(working_precision());
  const std::size_t grid = profile.size();
  os << "theta,modulus\n";
  Real two_pi = Real(2) * Real::pi();
  for (std::size_t j = 0; j < grid; ++j) {
    Real theta = two_pi * Real(static_cast<unsigned long>(j)) / Real(static_cast<unsigned long>(grid));
    os << theta.to_string(digits) << ',' << profile[j].to_string(digits) << '\n';
  }
}

}  // namespace disclab
