#pragma once

// Norms of the weighted Hardy spaces S_nu, the weighted Bergman spaces
// A^p_alpha, the Dirichlet-type spaces D^p_alpha, and H^p circle means.

#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "disclab/errors.hpp"
#include "disclab/real.hpp"
#include "disclab/series.hpp"

namespace disclab {

struct WeightedHardy {
  double nu = 0.0;
};
struct Hardy {
  double p = 2.0;
};
struct WeightedBergman {
  double p = 2.0;
  double alpha = 0.0;
};
struct DirichletType {
  double p = 2.0;
  double alpha = 0.0;
};

using SpaceSpec = std::variant<WeightedHardy, Hardy, WeightedBergman, DirichletType>;

inline void validate(const SpaceSpec& space) {
  std::visit(
      [](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, WeightedHardy>) {
          if (!std::isfinite(s.nu)) throw DomainError("nu must be finite");
        } else if constexpr (std::is_same_v<S, Hardy>) {
          if (!(s.p >= 1)) throw DomainError("Hardy space needs p >= 1");
        } else {
          if (!(s.p >= 1)) throw DomainError("p must be >= 1");
          if (!(s.alpha > -1)) throw DomainError("alpha must be > -1");
          if constexpr (std::is_same_v<S, DirichletType>) {
            if (!(s.alpha <= s.p + 1)) throw DomainError("Dirichlet type needs alpha <= p + 1");
          }
        }
      },
      space);
}

inline nlohmann::json to_json(const SpaceSpec& space) {
  return std::visit(
      [](const auto& s) -> nlohmann::json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, WeightedHardy>) {
          return {{"kind", "weighted_hardy"}, {"nu", s.nu}};
        } else if constexpr (std::is_same_v<S, Hardy>) {
          return {{"kind", "hardy"}, {"p", s.p}};
        } else if constexpr (std::is_same_v<S, WeightedBergman>) {
          return {{"kind", "bergman"}, {"p", s.p}, {"alpha", s.alpha}};
        } else {
          return {{"kind", "dirichlet"}, {"p", s.p}, {"alpha", s.alpha}};
        }
      },
      space);
}

inline SpaceSpec space_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  SpaceSpec out;
  if (kind == "weighted_hardy" || kind == "s-nu") {
    out = WeightedHardy{j.at("nu").get<double>()};
  } else if (kind == "hardy") {
    out = Hardy{j.at("p").get<double>()};
  } else if (kind == "bergman") {
    out = WeightedBergman{j.at("p").get<double>(), j.value("alpha", 0.0)};
  } else if (kind == "dirichlet") {
    out = DirichletType{j.at("p").get<double>(), j.value("alpha", 0.0)};
  } else {
    throw DomainError("unknown space kind '" + kind + "'");
  }
  validate(out);
  return out;
}

struct QuadratureConfig {
  std::size_t radial_nodes = 16;     // Gauss-Legendre order per radial panel
  std::size_t angular_nodes = 64;    // starting trapezoid count
  std::size_t refinement_limit = 8;  // radial refinement passes
  double tolerance = 1e-10;          // relative, on the p-th power of the norm

  void validate() const {
    if (radial_nodes < 1 || angular_nodes < 1 || refinement_limit < 1) {
      throw DomainError("quadrature node counts must be >= 1");
    }
    if (!(tolerance > 0)) throw DomainError("quadrature tolerance must be > 0");
  }
};

struct NormReport {
  SpaceSpec space;
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t nodes = 0;
  std::size_t refinements = 0;
};

inline nlohmann::json to_json(const NormReport& r) {
  nlohmann::json spec = to_json(r.space);
  nlohmann::json params = spec;
  params.erase("kind");
  return {{"space", spec.at("kind")},
          {"parameters", params},
          {"value", r.value},
          {"error_estimate", r.error_estimate},
          {"quadrature", {{"nodes", r.nodes}, {"refinements", r.refinements}}}};
}

/// (sum |a_n|^2 (n+1)^{2 nu})^{1/2}.
inline double s_nu_norm(const PowerSeries& f, double nu) {
  long double acc = 0.0L;
  for (std::size_t n = 0; n < f.coefficients.size(); ++n) {
    long double w = std::pow(static_cast<long double>(n + 1), 2.0L * nu);
    acc += w * std::norm(std::complex<long double>(f.coefficients[n]));
  }
  return static_cast<double>(std::sqrt(acc));
}

/// (sum c_j^2 (n_j+1)^{2 nu})^{1/2} for signed nu, in extended precision.
inline Real s_nu_norm_lacunary(const LacunarySeries& f, const Real& nu) {
  Real acc(0);
  for (const auto& t : f.terms) {
    Real w = exp(Real(2) * nu * log(Real(t.exponent + 1)));
    if (!w.is_finite()) {
      throw RangeError("(n+1)^(2 nu) overflows the working range", acc.to_double());
    }
    acc += t.coefficient * t.coefficient * w;
  }
  if (!acc.is_finite()) throw RangeError("lacunary norm overflows the working range", 0.0);
  return sqrt(acc);
}

/// (1/G sum_j |f(r e^{i theta_j})|^p)^{1/p}, trapezoid on the uniform grid.
inline double circle_mean(const PowerSeries& f, double p, double gap, std::size_t grid) {
  if (grid < 2) throw DomainError("circle_mean needs at least two angles");
  if (!(p >= 1)) throw DomainError("circle_mean needs p >= 1");
  if (!(gap > 0) || gap > 1) throw DomainError("gap must lie in (0, 1]");
  const double r = 1.0 - gap;
  long double acc = 0.0L;
  for (std::size_t j = 0; j < grid; ++j) {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid);
    double m = std::abs(eval_fast(f, std::polar(r, theta)));
    acc += std::pow(static_cast<long double>(m), static_cast<long double>(p));
  }
  return static_cast<double>(std::pow(acc / static_cast<long double>(grid), 1.0L / p));
}

namespace detail {

struct GaussRule {
  std::vector<double> x;  // on [-1, 1]
  std::vector<double> w;
};

inline GaussRule gauss_legendre(std::size_t n) {
  GaussRule rule;
  auto zeros = boost::math::legendre_p_zeros<double>(static_cast<int>(n));
  for (double z : zeros) {
    double dp = boost::math::legendre_p_prime(static_cast<int>(n), z);
    double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.x.push_back(z);
    rule.w.push_back(w);
    if (z != 0.0) {
      rule.x.push_back(-z);
      rule.w.push_back(w);
    }
  }
  return rule;
}

// Mean of |f(rho e^{i theta})|^p over the circle, by trapezoid doubling until
// successive values agree.
inline double angular_mean(const PowerSeries& f, double p, double rho, std::size_t start,
                           double tol) {
  constexpr std::size_t kMaxAngles = std::size_t{1} << 18;
  std::size_t grid = 1;
  while (grid < std::max<std::size_t>(start, 2 * f.coefficients.size() + 2)) grid <<= 1;
  auto sample = [&](std::size_t j, std::size_t g) {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(g);
    double m = std::abs(eval_fast(f, std::polar(rho, theta)));
    return p == 2.0 ? m * m : std::pow(m, p);
  };
  long double sum = 0.0L;
  for (std::size_t j = 0; j < grid; ++j) sum += sample(j, grid);
  double mean = static_cast<double>(sum / grid);
  while (grid < kMaxAngles) {
    long double odd = 0.0L;
    for (std::size_t j = 1; j < 2 * grid; j += 2) odd += sample(j, 2 * grid);
    sum += odd;
    grid *= 2;
    double next = static_cast<double>(sum / grid);
    bool done = std::abs(next - mean) <= 0.1 * tol * std::abs(next) + 1e-300;
    mean = next;
    if (done) break;
  }
  return mean;
}

// (alpha+1) int_0^1 (1-u)^alpha m(u) du with m(u) the angular mean of |f|^p at
// radius sqrt(u). Panels are graded geometrically toward both endpoints;
// the panel touching u = 1 absorbs the weight through v = (1-u)^{alpha+1}.
inline double radial_integral(const PowerSeries& f, double p, double alpha, std::size_t levels,
                              std::size_t subdivisions, const GaussRule& rule,
                              const QuadratureConfig& cfg, std::size_t& nodes) {
  auto m = [&](double u) {
    return angular_mean(f, p, std::sqrt(std::max(u, 0.0)), cfg.angular_nodes, cfg.tolerance);
  };
  auto gauss_panel = [&](double a, double b, auto&& integrand) {
    double half = 0.5 * (b - a), mid = 0.5 * (a + b), acc = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      acc += rule.w[i] * integrand(mid + half * rule.x[i]);
    }
    nodes += rule.x.size();
    return half * acc;
  };
  auto weighted = [&](double u) { return (alpha + 1.0) * std::pow(1.0 - u, alpha) * m(u); };

  std::vector<double> edges;
  edges.push_back(0.0);
  for (std::size_t l = levels; l >= 1; --l) edges.push_back(std::ldexp(1.0, -static_cast<int>(l)));
  for (std::size_t l = 2; l <= levels; ++l) edges.push_back(1.0 - std::ldexp(1.0, -static_cast<int>(l)));
  const double last = edges.back();

  double total = 0.0;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    double a = edges[e], b = edges[e + 1];
    for (std::size_t s = 0; s < subdivisions; ++s) {
      double lo = a + (b - a) * static_cast<double>(s) / static_cast<double>(subdivisions);
      double hi = a + (b - a) * static_cast<double>(s + 1) / static_cast<double>(subdivisions);
      total += gauss_panel(lo, hi, weighted);
    }
  }
  // int_last^1 (alpha+1)(1-u)^alpha m(u) du = int_0^{h^{alpha+1}} m(1 - v^{1/(alpha+1)}) dv
  const double vmax = std::pow(1.0 - last, alpha + 1.0);
  auto substituted = [&](double v) { return m(1.0 - std::pow(v, 1.0 / (alpha + 1.0))); };
  for (std::size_t s = 0; s < subdivisions; ++s) {
    double lo = vmax * static_cast<double>(s) / static_cast<double>(subdivisions);
    double hi = vmax * static_cast<double>(s + 1) / static_cast<double>(subdivisions);
    total += gauss_panel(lo, hi, substituted);
  }
  return total;
}

}  // namespace detail

/// ((alpha+1) int_D (1-|z|^2)^alpha |f|^p dA)^{1/p} with dA = r dr dtheta / pi.
/// Throws ToleranceNotMet when successive refinements still disagree after
/// the configured number of passes.
inline NormReport bergman_norm(const PowerSeries& f, double p, double alpha,
                               const QuadratureConfig& cfg = {}) {
  if (!(p >= 1)) throw DomainError("bergman_norm needs p >= 1");
  if (!(alpha > -1)) throw DomainError("bergman_norm needs alpha > -1");
  cfg.validate();
  NormReport report{WeightedBergman{p, alpha}};
  if (f.is_zero()) return report;

  const auto rule = detail::gauss_legendre(cfg.radial_nodes);
  double previous = 0.0;
  for (std::size_t pass = 0; pass <= cfg.refinement_limit; ++pass) {
    std::size_t nodes = 0;
    const std::size_t levels = 8 + 3 * pass;
    const std::size_t subdivisions = pass + 1;
    double integral =
        detail::radial_integral(f, p, alpha, levels, subdivisions, rule, cfg, nodes);
    report.nodes = nodes;
    report.refinements = pass;
    if (pass > 0) {
      double diff = std::abs(integral - previous);
      double value = std::pow(integral, 1.0 / p);
      report.value = value;
      // d(I^{1/p}) = I^{1/p - 1} dI / p
      report.error_estimate = value * diff / (p * integral);
      if (diff <= cfg.tolerance * std::abs(integral)) return report;
    }
    previous = integral;
  }
  throw ToleranceNotMet("bergman_norm did not converge", report.value, report.error_estimate);
}

/// |f(0)| + ||f'||_{A^p_alpha}.
inline NormReport dirichlet_norm(const PowerSeries& f, double p, double alpha,
                                 const QuadratureConfig& cfg = {}) {
  NormReport inner = bergman_norm(derivative(f), p, alpha, cfg);
  NormReport report = inner;
  report.space = DirichletType{p, alpha};
  report.value = std::abs(f.at(0)) + inner.value;
  return report;
}

/// Dispatches on the space. Hardy norms exist only as circle means at an
/// explicit radius, which must be supplied as `hardy_gap`.
inline NormReport norm(const PowerSeries& f, const SpaceSpec& space,
                       const QuadratureConfig& cfg = {},
                       std::optional<double> hardy_gap = std::nullopt,
                       std::size_t hardy_grid = 4096) {
  validate(space);
  return std::visit(
      [&](const auto& s) -> NormReport {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, WeightedHardy>) {
          return {space, s_nu_norm(f, s.nu), 0.0, f.coefficients.size(), 0};
        } else if constexpr (std::is_same_v<S, Hardy>) {
          if (!hardy_gap) throw DomainError("Hardy norms need an explicit radius (gap)");
          return {space, circle_mean(f, s.p, *hardy_gap, hardy_grid), 0.0, hardy_grid, 0};
        } else if constexpr (std::is_same_v<S, WeightedBergman>) {
          return bergman_norm(f, s.p, s.alpha, cfg);
        } else {
          return dirichlet_norm(f, s.p, s.alpha, cfg);
        }
      },
      space);
}

}  // namespace disclab
