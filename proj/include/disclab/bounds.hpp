#pragma once

// Point-evaluation constants: reproducing-kernel norms on S_nu and the
// L^1-average constant C(r) on D^p_{p-1}.

#include <cmath>
#include <numbers>
#include <variant>

#include <json.hpp>

#include "disclab/errors.hpp"
#include "disclab/real.hpp"
#include "disclab/series.hpp"
#include "disclab/spaces.hpp"

namespace disclab {

inline constexpr std::size_t kKernelTruncationCap = 10'000'000;
inline constexpr double kDefaultKernelTolerance = 1e-12;

struct KernelComponents {
  std::size_t truncation = 0;  // last summed index N; 0 for the majorant
  double tail_bound = 0.0;     // bound on the omitted squared tail
  bool analytic_majorant = false;
};

struct L1Components {
  double l_of_r = 0.0;
  double q = 0.0;
};

/// A point-evaluation constant at radius 1 - gap.
struct EvalBound {
  enum class Kind { Kernel, L1Average };
  Kind kind = Kind::Kernel;
  double parameter = 0.0;  // nu for Kernel, p for L1Average
  Real gap;
  Real value;
  std::variant<KernelComponents, L1Components> components;
};

inline nlohmann::json to_json(const EvalBound& b) {
  nlohmann::json j;
  const bool kernel = b.kind == EvalBound::Kind::Kernel;
  j["kind"] = kernel ? "kernel" : "l1_average";
  j[kernel ? "nu" : "p"] = b.parameter;
  j["r"] = {{"gap", b.gap.to_string()}};
  j["value"] = b.value.to_string();
  if (kernel) {
    const auto& c = std::get<KernelComponents>(b.components);
    j["components"] = {{"tail_bound", c.tail_bound},
                       {"method", c.analytic_majorant ? "majorant" : "summation"}};
    j["truncation"] = c.truncation;
  } else {
    const auto& c = std::get<L1Components>(b.components);
    j["components"] = {{"L", c.l_of_r}, {"q", c.q}};
    j["truncation"] = nullptr;
  }
  return j;
}

struct KernelNorm {
  double value = 0.0;
  std::size_t truncation = 0;
  double tail_bound = 0.0;
};

/// Norm of f -> f(z) on S_nu at |z| = 1 - gap:
/// (sum_n (n+1)^{-2 nu} r^{2n})^{1/2}. Summation stops once the tail bound
/// term_{N+1} / (1 - rho) with rho = ((N+3)/(N+2))^{-2 nu} r^2 drops below
/// tolerance^2; the tail bound is included, so the value is an upper bound.
inline KernelNorm kernel_norm(double nu, const Real& gap, double tolerance = kDefaultKernelTolerance,
                              std::size_t cap = kKernelTruncationCap) {
  if (!(gap > 0) || gap > 1) throw DomainError("kernel_norm needs gap in (0, 1]");
  if (!(tolerance > 0)) throw DomainError("kernel_norm needs tolerance > 0");
  if (gap == 1) return {1.0, 0, 0.0};
  const long double lambda = (Real(-2) * log1p(-gap)).to_long_double();  // -log r^2
  const long double s = -2.0L * nu;
  const long double tol2 = static_cast<long double>(tolerance) * tolerance;

  auto term = [&](std::size_t n) {
    return std::exp(s * std::log(static_cast<long double>(n + 1)) -
                    lambda * static_cast<long double>(n));
  };
  long double sum = 0.0L, comp = 0.0L;  // Neumaier summation
  for (std::size_t n = 0;; ++n) {
    long double t = term(n);
    long double y = sum + t;
    comp += std::abs(sum) >= std::abs(t) ? (sum - y) + t : (t - y) + sum;
    sum = y;
    long double growth = s > 0 ? std::pow(static_cast<long double>(n + 3) / (n + 2), s) : 1.0L;
    long double rho = growth * std::exp(-lambda);
    if (rho < 1.0L) {
      long double tail = term(n + 1) / (1.0L - rho);
      if (tail <= tol2 * (sum + comp)) {
        return {static_cast<double>(std::sqrt(sum + comp + tail)), n, static_cast<double>(tail)};
      }
    }
    if (n >= cap) {
      throw RangeError("kernel truncation index exceeds the cap",
                       static_cast<double>(std::sqrt(sum + comp)));
    }
  }
}

/// Closed-form upper bound for the kernel norm, valid for every gap.
/// With x = r^2 = e^{-lambda} and s = -2 nu:
///   s >= 0: sum (n+1)^s x^n <= e^lambda (Gamma(s+1) lambda^{-s-1} + max_t t^s e^{-lambda t})
///   s <  0: sum (n+1)^s x^n <= 1 + 1/lambda
/// (a unimodal sum is at most its integral plus its maximum term).
inline Real kernel_majorant(double nu, const Real& gap) {
  if (!(gap > 0) || gap > 1) throw DomainError("kernel_majorant needs gap in (0, 1]");
  if (gap == 1) return Real(1);
  const Real lambda = Real(-2) * log1p(-gap);
  const double s = -2.0 * nu;
  Real sq;
  if (s >= 0) {
    Real integral = Real(std::tgamma(s + 1)) * exp(-Real(s + 1) * log(lambda));
    Real peak = s == 0 ? Real(1) : exp(Real(s) * log(Real(s) / (lambda * exp(Real(1)))));
    sq = exp(lambda) * (integral + peak);
  } else {
    sq = Real(1) + Real(1) / lambda;
  }
  return sqrt(sq);
}

/// Kernel constant as an EvalBound: exact summation when the truncation fits
/// under the cap, otherwise the analytic majorant.
inline EvalBound kernel_bound(double nu, const Real& gap, double tolerance = kDefaultKernelTolerance) {
  EvalBound b{EvalBound::Kind::Kernel, nu, gap, Real(0), KernelComponents{}};
  // Terms decay like r^{2n}; when even the exponential factor alone needs more
  // than the cap to reach the tolerance, go straight to the majorant.
  const double lambda = gap == 1 ? 1.0 : (Real(-2) * log1p(-gap)).to_double();
  if (-2.0 * std::log(tolerance) / lambda > static_cast<double>(kKernelTruncationCap)) {
    b.value = kernel_majorant(nu, gap);
    b.components = KernelComponents{0, 0.0, true};
    return b;
  }
  try {
    KernelNorm k = kernel_norm(nu, gap, tolerance);
    b.value = Real(k.value);
    b.components = KernelComponents{k.truncation, k.tail_bound, false};
  } catch (const RangeError&) {
    b.value = kernel_majorant(nu, gap);
    b.components = KernelComponents{0, 0.0, true};
  }
  return b;
}

/// Sharp C_K for S_nu on the closed disc of radius 1 - gap_K: the kernel norm
/// at the boundary of K (kernel norms increase with r).
inline double c_k_over_disc(double nu, const Real& gap_k) {
  return kernel_norm(nu, gap_k, kDefaultKernelTolerance).value;
}

namespace detail {
inline void require_p_above_two(double p) {
  if (!(p > 2)) throw DomainError("the L1-average bound needs p > 2");
}
inline void require_radius(const Real& gap) {
  if (!(gap > 0) || gap > 1) throw DomainError("gap must lie in (0, 1]");
}
}  // namespace detail

/// Hoelder exponent q = p / (p - 1).
inline double conjugate_exponent(double p) { return p / (p - 1.0); }

/// L(r) = (int_0^{2pi} int_0^r s^{-q/p} ds dtheta)^{1/q}
///      = (2 pi r^{1-q/p} / (1 - q/p))^{1/q}.
inline double l_of_r(double p, const Real& gap) {
  detail::require_p_above_two(p);
  detail::require_radius(gap);
  const double q = conjugate_exponent(p);
  const double a = 1.0 - q / p;
  const double r = (Real(1) - gap).to_double();
  return std::pow(2.0 * std::numbers::pi * std::pow(r, a) / a, 1.0 / q);
}

/// C(r) = 2 pi + L(r) (1/(1-r^2))^{1/q} (pi/p)^{1/p}; bounds the unnormalized
/// circle integral int_0^{2pi} |f(r e^{i theta})| dtheta by C(r) ||f||_{D^p_{p-1}}.
inline double c_of_r(double p, const Real& gap) {
  const double l = l_of_r(p, gap);
  const double q = conjugate_exponent(p);
  const double one_minus_r2 = (gap * (Real(2) - gap)).to_double();
  return 2.0 * std::numbers::pi +
         l * std::pow(1.0 / one_minus_r2, 1.0 / q) * std::pow(std::numbers::pi / p, 1.0 / p);
}

/// C(r) for the normalized measure dm = dtheta / 2 pi.
inline double c_of_r_normalized(double p, const Real& gap) {
  return c_of_r(p, gap) / (2.0 * std::numbers::pi);
}

inline EvalBound l1_average_bound(double p, const Real& gap) {
  return {EvalBound::Kind::L1Average, p, gap, Real(c_of_r(p, gap)),
          L1Components{l_of_r(p, gap), conjugate_exponent(p)}};
}

struct L1Report {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double c_of_r = 0.0;
  double dirichlet_norm = 0.0;
  double norm_error = 0.0;
};

inline nlohmann::json to_json(const L1Report& r) {
  return {{"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}, {"c_of_r", r.c_of_r},
          {"dirichlet_norm", r.dirichlet_norm}, {"norm_error", r.norm_error}};
}

/// Checks int_0^{2pi} |f(r e^{i theta})| dtheta <= C(r) ||f||_{D^p_{p-1}}.
inline L1Report verify_l1_bound(const PowerSeries& f, double p, const Real& gap, std::size_t grid,
                                const QuadratureConfig& cfg = {}) {
  detail::require_p_above_two(p);
  L1Report r;
  r.lhs = 2.0 * std::numbers::pi * circle_mean(f, 1.0, gap.to_double(), grid);
  r.c_of_r = c_of_r(p, gap);
  NormReport n = dirichlet_norm(f, p, p - 1.0, cfg);
  r.dirichlet_norm = n.value;
  r.norm_error = n.error_estimate;
  r.rhs = r.c_of_r * n.value;
  r.margin = r.rhs - r.lhs;
  return r;
}

}  // namespace disclab
