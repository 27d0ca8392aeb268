#pragma once

// Extended-precision real numbers backed by MPFR, and exact decimal/rational
// numerals that can be re-read at any precision.
//
// Every Real carries its own MPFR precision. Newly created values and the
// results of arithmetic use the thread's working precision, which is changed
// with PrecisionScope. Copies keep the precision of their source.

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>

#include "disclab/errors.hpp"

namespace disclab {

using BigInt = mpz_class;

inline constexpr unsigned kDefaultPrecisionBits = 256;
inline constexpr unsigned kMinPrecisionBits = 53;

namespace detail {

inline mpfr_prec_t& working_precision_ref() {
  thread_local mpfr_prec_t bits = kDefaultPrecisionBits;
  return bits;
}

// Construction gaps reach 1e-100 and powers r^n reach exp(-1e30); the default
// MPFR exponent range is too narrow for the latter.
inline void widen_exponent_range() {
  thread_local bool done = false;
  if (!done) {
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
    done = true;
  }
}

}  // namespace detail

inline unsigned working_precision() {
  return static_cast<unsigned>(detail::working_precision_ref());
}

/// Sets the working precision (bits) for the current thread until destroyed.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits) : saved_(detail::working_precision_ref()) {
    if (bits < kMinPrecisionBits) {
      throw DomainError("precision must be at least 53 bits");
    }
    detail::working_precision_ref() = static_cast<mpfr_prec_t>(bits);
  }
  ~PrecisionScope() { detail::working_precision_ref() = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

/// Decimal digit count used when rendering a value of the given precision.
inline std::size_t decimal_digits(unsigned bits) {
  return static_cast<std::size_t>(std::ceil(bits * 0.302));
}

class Real {
 public:
  Real() {
    init(detail::working_precision_ref());
    mpfr_set_zero(v_, 1);
  }
  Real(double d) {  // NOLINT(google-explicit-constructor)
    init(detail::working_precision_ref());
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  Real(int i) : Real(static_cast<long>(i)) {}  // NOLINT(google-explicit-constructor)
  Real(long i) {                               // NOLINT(google-explicit-constructor)
    init(detail::working_precision_ref());
    mpfr_set_si(v_, i, MPFR_RNDN);
  }
  Real(unsigned long i) {  // NOLINT(google-explicit-constructor)
    init(detail::working_precision_ref());
    mpfr_set_ui(v_, i, MPFR_RNDN);
  }
  Real(unsigned i) : Real(static_cast<unsigned long>(i)) {}  // NOLINT
  Real(long long i) : Real(static_cast<long>(i)) {}          // NOLINT
  Real(unsigned long long i) : Real(static_cast<unsigned long>(i)) {}  // NOLINT
  explicit Real(const BigInt& z) {
    init(detail::working_precision_ref());
    mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
  }
  template <class T, class U>
  explicit Real(const __gmp_expr<T, U>& e) : Real(BigInt(e)) {}
  explicit Real(const mpq_class& q) {
    init(detail::working_precision_ref());
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }

  Real(const Real& o) {
    init(mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    init(kMinPrecisionBits);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  /// Parses a decimal or scientific literal, correctly rounded to the
  /// working precision.
  static Real parse(std::string_view text) {
    Real r;
    std::string s(text);
    if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
      throw DomainError("not a decimal number: '" + s + "'");
    }
    return r;
  }

  static Real pi() {
    Real r;
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  static Real infinity() {
    Real r;
    mpfr_set_inf(r.v_, 1);
    return r;
  }

  unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  /// Binary exponent e with 0.5 <= |x| / 2^e < 1 (x nonzero, finite).
  long exponent2() const { return static_cast<long>(mpfr_get_exp(v_)); }

  /// Rounds toward minus infinity to an integer.
  BigInt floor_to_int() const {
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
    return z;
  }

  /// Decimal rendering with `digits` significant digits ("d.ddde-12").
  std::string to_string(std::size_t digits, mpfr_rnd_t rnd = MPFR_RNDN) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e = 0;
    char* raw = mpfr_get_str(nullptr, &e, 10, digits, v_, rnd);
    std::string m(raw);
    mpfr_free_str(raw);
    std::string out;
    std::size_t i = 0;
    if (m[0] == '-') {
      out.push_back('-');
      i = 1;
    }
    std::string mant = m.substr(i);
    while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
    out.push_back(mant[0]);
    if (mant.size() > 1) {
      out.push_back('.');
      out.append(mant, 1, std::string::npos);
    }
    long exp10 = static_cast<long>(e) - 1;
    if (exp10 != 0) out += "e" + std::to_string(exp10);
    return out;
  }
  /// Rendering at the digit count implied by this value's precision.
  std::string to_string() const { return to_string(decimal_digits(precision())); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  Real& operator+=(const Real& o) { return apply(mpfr_add, o); }
  Real& operator-=(const Real& o) { return apply(mpfr_sub, o); }
  Real& operator*=(const Real& o) { return apply(mpfr_mul, o); }
  Real& operator/=(const Real& o) { return apply(mpfr_div, o); }

  friend Real operator+(const Real& a, const Real& b) { return binary(mpfr_add, a, b); }
  friend Real operator-(const Real& a, const Real& b) { return binary(mpfr_sub, a, b); }
  friend Real operator*(const Real& a, const Real& b) { return binary(mpfr_mul, a, b); }
  friend Real operator/(const Real& a, const Real& b) { return binary(mpfr_div, a, b); }
  friend Real operator-(const Real& a) {
    Real r;
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) {
    return mpfr_greaterequal_p(a.v_, b.v_) != 0;
  }

  // Elementary functions, rounded to the working precision.
  friend Real abs(const Real& x) { return unary(mpfr_abs, x); }
  friend Real sqrt(const Real& x) { return unary(mpfr_sqrt, x); }
  friend Real exp(const Real& x) { return unary(mpfr_exp, x); }
  friend Real expm1(const Real& x) { return unary(mpfr_expm1, x); }
  friend Real log(const Real& x) { return unary(mpfr_log, x); }
  friend Real log1p(const Real& x) { return unary(mpfr_log1p, x); }
  friend Real sin(const Real& x) { return unary(mpfr_sin, x); }
  friend Real cos(const Real& x) { return unary(mpfr_cos, x); }
  friend Real floor(const Real& x) {
    Real r;
    mpfr_floor(r.v_, x.v_);
    return r;
  }
  friend Real pow(const Real& x, const Real& y) { return binary(mpfr_pow, x, y); }
  friend Real min(const Real& a, const Real& b) { return a <= b ? a : b; }
  friend Real max(const Real& a, const Real& b) { return a >= b ? a : b; }
  friend void sin_cos(const Real& x, Real& s, Real& c) {
    s = Real();
    c = Real();
    mpfr_sin_cos(s.v_, c.v_, x.v_, MPFR_RNDN);
  }

 private:
  void init(mpfr_prec_t bits) {
    detail::widen_exponent_range();
    mpfr_init2(v_, bits);
  }

  template <class Fn>
  Real& apply(Fn fn, const Real& o) {
    Real r;
    fn(r.v_, v_, o.v_, MPFR_RNDN);
    mpfr_swap(v_, r.v_);
    return *this;
  }
  template <class Fn>
  static Real binary(Fn fn, const Real& a, const Real& b) {
    Real r;
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  template <class Fn>
  static Real unary(Fn fn, const Real& a) {
    Real r;
    fn(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

/// Parses a nonnegative or signed integer in decimal.
inline BigInt parse_bigint(std::string_view text) {
  BigInt z;
  std::string s(text);
  if (s.empty() || z.set_str(s, 10) != 0) {
    throw DomainError("not a decimal integer: '" + s + "'");
  }
  return z;
}

/// Number of bits needed to represent |z|.
inline std::size_t bit_length(const BigInt& z) {
  return z == 0 ? 0 : mpz_sizeinbase(z.get_mpz_t(), 2);
}

/// An exact number written as text: a decimal/scientific literal or a
/// rational "a/b" of integers. Converting to Real rounds correctly at the
/// working precision, so the same numeral can be evaluated at several
/// precisions without drifting.
class Numeral {
 public:
  Numeral() : text_("0") {}
  explicit Numeral(std::string text) : text_(std::move(text)) {
    // Validate eagerly so malformed values fail at the boundary.
    PrecisionScope scope(64);
    if (!to_real().is_finite()) throw DomainError("numeral must be finite: '" + text_ + "'");
  }
  explicit Numeral(const BigInt& z) : text_(z.get_str()) {}
  explicit Numeral(long i) : text_(std::to_string(i)) {}

  /// Exact decimal of a Real truncated to `digits` significant digits,
  /// rounded in direction `rnd`.
  static Numeral from_real(const Real& x, std::size_t digits, mpfr_rnd_t rnd) {
    Numeral n;
    n.text_ = x.to_string(digits, rnd);
    return n;
  }

  const std::string& text() const { return text_; }
  bool is_rational_form() const { return text_.find('/') != std::string::npos; }

  Real to_real() const {
    if (is_rational_form()) {
      auto slash = text_.find('/');
      BigInt num = parse_bigint(text_.substr(0, slash));
      BigInt den = parse_bigint(text_.substr(slash + 1));
      if (den == 0) throw DomainError("zero denominator in '" + text_ + "'");
      mpq_class q(num, den);
      q.canonicalize();
      return Real(q);
    }
    return Real::parse(text_);
  }

  friend bool operator==(const Numeral& a, const Numeral& b) { return a.text_ == b.text_; }

 private:
  std::string text_;
};

}  // namespace disclab
