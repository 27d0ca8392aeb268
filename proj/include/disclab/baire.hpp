#pragma once

// Finite-grid versions of the set-measure arguments behind the residuality
// theorems: balls B(n,k) around P_n + f/k, sampled members g, and the
// fractions of boundary angles where g is large along the witness radii.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "disclab/bounds.hpp"
#include "disclab/construction.hpp"
#include "disclab/errors.hpp"
#include "disclab/real.hpp"
#include "disclab/series.hpp"
#include "disclab/spaces.hpp"
#include "disclab/weight.hpp"

namespace disclab {

/// G boundary angles 2 pi j / G and a radius schedule of strictly
/// decreasing gaps.
struct BoundaryGrid {
  std::size_t angles = 8192;
  std::vector<Real> gaps;

  void validate() const {
    if (angles < 2) throw DomainError("boundary grid needs at least two angles");
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      if (!(gaps[i] > 0) || gaps[i] > 1) throw DomainError("grid gaps must lie in (0, 1]");
      if (i > 0 && !(gaps[i] < gaps[i - 1])) throw DomainError("grid gaps must strictly decrease");
    }
  }

  /// The witness radii r_1 .. r_K.
  static BoundaryGrid from_witness(const LacunaryWitness& w, std::size_t angles) {
    BoundaryGrid g{angles, {}};
    for (std::size_t k = 1; k <= w.size(); ++k) g.gaps.push_back(w.gap(k));
    g.validate();
    return g;
  }
};

struct MeasureEstimate {
  enum class Set { FM, A, H };
  Set set = Set::A;
  std::size_t angles = 0;
  std::size_t radii = 0;
  double fraction = 0.0;
  double threshold = 0.0;  // M for F_M and H, k for A
  double bound = 0.0;      // 1 - 1/M or 1/M
  std::vector<std::uint8_t> members;  // per angle, 1 when in the set
};

inline const char* set_name(MeasureEstimate::Set s) {
  switch (s) {
    case MeasureEstimate::Set::FM: return "F_M";
    case MeasureEstimate::Set::A: return "A";
    case MeasureEstimate::Set::H: return "H";
  }
  return "?";
}

inline nlohmann::json to_json(const MeasureEstimate& m) {
  return {{"set", set_name(m.set)},
          {"angles", m.angles},
          {"radii", m.radii},
          {"fraction", m.fraction},
          {"threshold", m.threshold},
          {"bound", m.bound}};
}

// ---- dense polynomial family ---------------------------------------------

/// Polynomials with dyadic coefficients. Block (d, h) holds the polynomials
/// of degree <= d whose coefficient real and imaginary parts lie in
/// D_h = {a / 2^h : |a| <= h 2^h}. Blocks are visited by d + h, then d; inside
/// a block the digits run 0, +1/2^h, -1/2^h, +2/2^h, ... with Re a_0 varying
/// fastest. Index 0 is the zero polynomial and all-zero block entries are
/// skipped, so the family starts 0, 1/2, -1/2, 1, -1, ...
class PolynomialFamily {
 public:
  PowerSeries operator()(std::uint64_t n) const {
    if (n == 0) return PowerSeries({0.0});
    BigInt remaining = static_cast<unsigned long>(n - 1);
    for (std::size_t total = 1;; ++total) {
      for (std::size_t d = 0; d + 1 <= total; ++d) {
        const std::size_t h = total - d;
        const BigInt base = digit_base(h);
        BigInt count;
        mpz_pow_ui(count.get_mpz_t(), base.get_mpz_t(), 2 * (d + 1));
        count -= 1;  // the all-zero entry
        if (remaining < count) return decode(remaining + 1, d, h, base);
        remaining -= count;
      }
    }
  }

 private:
  static BigInt digit_base(std::size_t h) {
    BigInt scale = 1;
    scale <<= h;
    return 2 * BigInt(static_cast<unsigned long>(h)) * scale + 1;
  }

  static PowerSeries decode(BigInt index, std::size_t d, std::size_t h, const BigInt& base) {
    std::vector<std::complex<double>> a(d + 1);
    const double unit = std::ldexp(1.0, -static_cast<int>(h));
    auto digit_value = [&](unsigned long t) {
      if (t == 0) return 0.0;
      const double m = static_cast<double>((t + 1) / 2);
      return (t % 2 == 1 ? m : -m) * unit;
    };
    for (std::size_t i = 0; i <= d; ++i) {
      BigInt re = index % base;
      index /= base;
      BigInt im = index % base;
      index /= base;
      a[i] = {digit_value(re.get_ui()), digit_value(im.get_ui())};
    }
    return PowerSeries(std::move(a));
  }
};

inline constexpr double kSupInflation = 1.01;

/// Grid maximum of |P| on the unit circle over max(64, 8 (deg + 1)) angles,
/// inflated by 1.01 to serve as an upper bound for the sup norm.
inline double sup_norm(const PowerSeries& p) {
  const std::size_t grid = std::max<std::size_t>(64, 8 * (p.degree() + 1));
  double best = 0.0;
  for (std::size_t j = 0; j < grid; ++j) {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid);
    best = std::max(best, std::abs(eval_fast(p, std::polar(1.0, theta))));
  }
  return kSupInflation * best;
}

// ---- balls ----------------------------------------------------------------

enum class BallMode { Kernel, L1Average };

/// Kernel mode: the smallest integer M with M/k > k + ||P|| + 1.
/// L1 mode: M = ||P|| + k.
inline Real required_m(const PowerSeries& p, std::size_t k, BallMode mode) {
  if (k < 1) throw DomainError("ball index k must be >= 1");
  const Real kk(static_cast<unsigned long>(k));
  const Real sup(sup_norm(p));
  if (mode == BallMode::L1Average) return sup + kk;
  Real rhs = kk * (kk + sup + Real(1));
  return floor(rhs) + Real(1);
}

struct BaireBall {
  PowerSeries center;    // P_n
  std::size_t k = 1;     // the witness enters with scale 1/k
  Real radius;           // epsilon(n,k)
  EvalBound bound;       // C_M or C(r_p)
  Real m;                // M(n,k)
  double sup = 0.0;      // inflated sup norm of P_n
  BallMode mode = BallMode::Kernel;
};

/// Ball centered at P + f/k with radius min(1/k, 1/C), C = bound.value.
inline BaireBall make_ball(const PowerSeries& p, std::size_t k, const EvalBound& bound) {
  BaireBall b;
  b.mode = bound.kind == EvalBound::Kind::Kernel ? BallMode::Kernel : BallMode::L1Average;
  b.center = p;
  b.k = k;
  b.m = required_m(p, k, b.mode);
  b.sup = sup_norm(p);
  b.bound = bound;
  if (!(bound.value > 0)) throw DomainError("ball bound constant must be positive");
  b.radius = min(Real(1) / Real(static_cast<unsigned long>(k)), Real(1) / bound.value);
  return b;
}

inline nlohmann::json to_json(const BaireBall& b) {
  return {{"M", b.m.to_double()},
          {"k", b.k},
          {"epsilon", b.radius.to_string()},
          {"sup_norm", b.sup},
          {"bound", to_json(b.bound)}};
}

/// P + f/k with the witness truncated to its built prefix.
inline MixedSeries ball_center(const BaireBall& b, const LacunaryWitness& w) {
  return {b.center, w.series().scaled(Real(1) / Real(static_cast<unsigned long>(b.k)))};
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

// Uniform in [0, 1) from the top 53 bits, identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Random polynomial of degree max(2 deg P, 4) rescaled to space norm
/// (1 - 1e-6) eps u with u uniform in (0, 1).
inline PowerSeries sample_perturbation(const BaireBall& ball, const SpaceSpec& space, std::uint64_t seed,
                                       const QuadratureConfig& cfg = {}) {
  std::mt19937_64 rng(seed);
  const std::size_t degree = std::max<std::size_t>(2 * ball.center.degree(), 4);
  std::vector<std::complex<double>> a(degree + 1);
  for (auto& c : a) {
    double re = 2.0 * detail::unit_uniform(rng) - 1.0;
    double im = 2.0 * detail::unit_uniform(rng) - 1.0;
    c = {re, im};
  }
  double u = detail::unit_uniform(rng);
  while (u == 0.0) u = detail::unit_uniform(rng);
  PowerSeries pert(std::move(a));
  const double n = norm(pert, space, cfg).value;
  const double target = (1.0 - 1e-6) * ball.radius.to_double() * u;
  return pert * std::complex<double>(target / n);
}

/// `count` members P + f/k + perturbation; sample i uses seed derive(seed, i).
inline std::vector<MixedSeries> sample_ball(const BaireBall& ball, const LacunaryWitness& w,
                                            const SpaceSpec& space, std::size_t count, std::uint64_t seed,
                                            const QuadratureConfig& cfg = {}) {
  validate(space);
  const MixedSeries center = ball_center(ball, w);
  std::vector<MixedSeries> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    PowerSeries pert = sample_perturbation(ball, space, detail::derive_seed(seed, i), cfg);
    out.push_back({center.head + pert, center.tail});
  }
  return out;
}

// ---- measures -------------------------------------------------------------

namespace detail {

// Per-angle maximum of |g| over the schedule radii with gap >= min_gap.
inline std::vector<long double> radial_max(const MixedSeries& g, const BoundaryGrid& grid,
                                           const Real& min_gap, std::size_t& radii) {
  std::vector<long double> best(grid.angles, 0.0L);
  radii = 0;
  for (const auto& gap : grid.gaps) {
    if (gap < min_gap) break;
    ++radii;
    auto prof = circle_profile_fast(g, gap, grid.angles);
    for (std::size_t j = 0; j < grid.angles; ++j) best[j] = std::max(best[j], prof[j]);
  }
  return best;
}

inline void fill_fraction(MeasureEstimate& m) {
  std::size_t in = 0;
  for (auto b : m.members) in += b;
  m.fraction = static_cast<double>(in) / static_cast<double>(m.angles);
}

}  // namespace detail

struct RadiusChoice {
  Real gap;  // delta_M
  std::size_t index = 0;  // 1-based position in the schedule
  MeasureEstimate estimate;
};

/// Largest schedule gap delta_M for which the angles where max_{r <= 1 - delta_M}
/// |f| >= M make up at least `target` of the grid (default 1 - 1/M).
inline RadiusChoice find_r_M(const MixedSeries& f, double m, const BoundaryGrid& grid,
                             std::optional<double> target = std::nullopt) {
  grid.validate();
  if (!(m > 0)) throw DomainError("threshold M must be positive");
  const double want = target.value_or(1.0 - 1.0 / m);
  std::vector<long double> best(grid.angles, 0.0L);
  for (std::size_t i = 0; i < grid.gaps.size(); ++i) {
    auto prof = circle_profile_fast(f, grid.gaps[i], grid.angles);
    MeasureEstimate e{MeasureEstimate::Set::FM, grid.angles, i + 1, 0.0, m, 1.0 - 1.0 / m, {}};
    e.members.resize(grid.angles);
    for (std::size_t j = 0; j < grid.angles; ++j) {
      best[j] = std::max(best[j], prof[j]);
      e.members[j] = best[j] >= static_cast<long double>(m);
    }
    detail::fill_fraction(e);
    if (e.fraction >= want) return {grid.gaps[i], i + 1, std::move(e)};
  }
  throw NotFound("no schedule radius reaches the F_M target");
}

inline RadiusChoice find_r_M(const LacunaryWitness& w, double m, std::size_t angles,
                             std::optional<double> target = std::nullopt) {
  return find_r_M(MixedSeries{PowerSeries(), w.series()}, m, BoundaryGrid::from_witness(w, angles), target);
}

/// Fraction of angles where max over schedule radii r <= 1 - delta_M of |g| is >= k.
inline MeasureEstimate a_set_measure(const MixedSeries& g, double k, const Real& gap_m,
                                     const BoundaryGrid& grid, double m = 0.0) {
  grid.validate();
  MeasureEstimate e{MeasureEstimate::Set::A, grid.angles, 0, 0.0, k, m > 0 ? 1.0 - 1.0 / m : 0.0, {}};
  auto best = detail::radial_max(g, grid, gap_m, e.radii);
  e.members.resize(grid.angles);
  for (std::size_t j = 0; j < grid.angles; ++j) e.members[j] = best[j] >= static_cast<long double>(k);
  detail::fill_fraction(e);
  return e;
}

struct HypothesisRatio {
  std::size_t p = 0;
  Real lhs;  // 2 k M^2
  Real rhs;  // min_modulus_lower_bound(p) / phi(r_p)
  bool holds = false;
};

inline HypothesisRatio hypothesis_ratio(const LacunaryWitness& w, std::size_t p, std::size_t k,
                                        const Real& m, const WeightFunction& phi) {
  HypothesisRatio h;
  h.p = p;
  h.lhs = Real(2) * Real(static_cast<unsigned long>(k)) * m * m;
  h.rhs = min_modulus_lower_bound(w, p) / phi(w.gap(p));
  h.holds = h.lhs < h.rhs;
  return h;
}

inline nlohmann::json to_json(const HypothesisRatio& h) {
  return {{"p", h.p}, {"lhs", h.lhs.to_string(20)}, {"rhs", h.rhs.to_string(20)}, {"holds", h.holds}};
}

/// Fraction of angles with |g(r_p e^{i theta})| / phi(r_p) < M.
inline MeasureEstimate h_set_measure(const MixedSeries& g, double m, const WeightFunction& phi,
                                     const Real& gap, std::size_t angles, const HypothesisRatio& hyp) {
  if (angles < 2) throw DomainError("boundary grid needs at least two angles");
  if (!hyp.holds) {
    throw PreconditionError("hypothesis ratio 2kM^2 < min|f|/phi(r_p) fails",
                            (hyp.lhs - hyp.rhs).to_double());
  }
  const Real weight = phi(gap);
  if (!(weight > 2)) {
    throw PreconditionError("phi(r_p) must exceed 2", (Real(2) - weight).to_double());
  }
  MeasureEstimate e{MeasureEstimate::Set::H, angles, 1, 0.0, m, 1.0 / m, {}};
  const long double cutoff = static_cast<long double>(m) * weight.to_long_double();
  auto prof = circle_profile_fast(g, gap, angles);
  e.members.resize(angles);
  for (std::size_t j = 0; j < angles; ++j) e.members[j] = prof[j] < cutoff;
  detail::fill_fraction(e);
  return e;
}

// ---- experiments ----------------------------------------------------------

struct Experiment {
  BallMode mode = BallMode::Kernel;
  SpaceSpec space = WeightedHardy{-0.5};
  std::uint64_t n_first = 0, n_last = 4;
  std::size_t k_first = 2, k_last = 4;
  std::size_t samples = 20;
  std::size_t angles = 8192;
  std::uint64_t seed = 1;
  WeightFunction phi;
  QuadratureConfig quadrature;

  void validate() const {
    disclab::validate(space);
    if (n_last < n_first || k_last < k_first || k_first < 1) throw DomainError("empty cell range");
    if (angles < 2) throw DomainError("boundary grid needs at least two angles");
    if (mode == BallMode::Kernel && !std::holds_alternative<WeightedHardy>(space)) {
      throw DomainError("kernel mode needs a weighted Hardy space S_nu");
    }
    if (mode == BallMode::L1Average) {
      const auto* d = std::get_if<DirichletType>(&space);
      if (d == nullptr || d->alpha != d->p - 1 || !(d->p > 2)) {
        throw DomainError("L1-average mode needs a Dirichlet-type space D^p_{p-1} with p > 2");
      }
    }
  }
};

inline Experiment experiment_from_json(const nlohmann::json& j) {
  try {
    Experiment e;
    const std::string mode = j.value("mode", "kernel");
    if (mode == "kernel") {
      e.mode = BallMode::Kernel;
    } else if (mode == "l1-average") {
      e.mode = BallMode::L1Average;
      e.space = DirichletType{3.0, 2.0};
    } else {
      throw DomainError("unknown experiment mode '" + mode + "'");
    }
    if (j.contains("space")) e.space = space_from_json(j.at("space"));
    if (j.contains("n_range")) {
      e.n_first = j.at("n_range").at(0).get<std::uint64_t>();
      e.n_last = j.at("n_range").at(1).get<std::uint64_t>();
    }
    if (j.contains("k_range")) {
      e.k_first = j.at("k_range").at(0).get<std::size_t>();
      e.k_last = j.at("k_range").at(1).get<std::size_t>();
    }
    e.samples = j.value("samples", e.samples);
    e.angles = j.value("grid", e.angles);
    e.seed = j.value("seed", e.seed);
    if (j.contains("phi")) e.phi = WeightFunction::parse(j.at("phi").get<std::string>());
    e.validate();
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw DomainError(std::string("malformed experiment descriptor: ") + ex.what());
  }
}

inline nlohmann::json to_json(const Experiment& e) {
  return {{"mode", e.mode == BallMode::Kernel ? "kernel" : "l1-average"},
          {"space", to_json(e.space)},
          {"n_range", {e.n_first, e.n_last}},
          {"k_range", {e.k_first, e.k_last}},
          {"samples", e.samples},
          {"grid", e.angles},
          {"seed", e.seed},
          {"phi", e.phi.name()}};
}

struct CellResult {
  std::uint64_t n = 0;
  std::size_t k = 0;
  BaireBall ball;
  std::size_t samples = 0;
  std::size_t p = 0;         // schedule index of r_M or r_{p(n,k)}
  Real gap;                  // delta_M or delta_p
  double fm_fraction = 0.0;  // kernel mode
  double min_fraction_a = 1.0;
  bool containment = true;   // F_M inside every sampled A(n,k)
  double max_fraction_h = 0.0;
  std::optional<HypothesisRatio> hypothesis;
  bool pass = false;
};

inline nlohmann::json to_json(const CellResult& c, BallMode mode) {
  nlohmann::json j = {{"n", c.n},
                      {"k", c.k},
                      {"M", c.ball.m.to_double()},
                      {"epsilon", c.ball.radius.to_string()},
                      {"constant", c.ball.bound.value.to_string()},
                      {"samples", c.samples},
                      {"p", c.p},
                      {"gap", c.gap.to_string()},
                      {"pass", c.pass}};
  if (mode == BallMode::Kernel) {
    j["fraction_F_M"] = c.fm_fraction;
    j["min_fraction_A"] = c.min_fraction_a;
    j["bound_A"] = 1.0 - 1.0 / c.ball.m.to_double();
    j["containment"] = c.containment;
  } else {
    j["max_fraction_H"] = c.max_fraction_h;
    j["bound_H"] = 1.0 / c.ball.m.to_double();
    if (c.hypothesis) j["hypothesis"] = to_json(*c.hypothesis);
  }
  return j;
}

namespace detail {

inline std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t n, std::size_t k) {
  return derive_seed(derive_seed(seed, n), k);
}

inline CellResult run_kernel_cell(const Experiment& e, const LacunaryWitness& w, std::uint64_t n,
                                  std::size_t k) {
  const PowerSeries poly = PolynomialFamily{}(n);
  const Real m = required_m(poly, k, BallMode::Kernel);
  const BoundaryGrid grid = BoundaryGrid::from_witness(w, e.angles);
  RadiusChoice rm = find_r_M(MixedSeries{PowerSeries(), w.series()}, m.to_double(), grid);
  const double nu = std::get<WeightedHardy>(e.space).nu;
  CellResult c;
  c.n = n;
  c.k = k;
  c.ball = make_ball(poly, k, kernel_bound(nu, rm.gap));
  c.samples = e.samples;
  c.p = rm.index;
  c.gap = rm.gap;
  c.fm_fraction = rm.estimate.fraction;
  const double bound = 1.0 - 1.0 / m.to_double();
  for (const auto& g : sample_ball(c.ball, w, e.space, e.samples, cell_seed(e.seed, n, k), e.quadrature)) {
    MeasureEstimate a = a_set_measure(g, static_cast<double>(k), rm.gap, grid, m.to_double());
    c.min_fraction_a = std::min(c.min_fraction_a, a.fraction);
    for (std::size_t j = 0; j < grid.angles; ++j) {
      if (rm.estimate.members[j] && !a.members[j]) c.containment = false;
    }
  }
  c.pass = c.containment && c.min_fraction_a >= bound;
  return c;
}

inline CellResult run_l1_cell(const Experiment& e, const LacunaryWitness& w, std::uint64_t n,
                              std::size_t k) {
  const PowerSeries poly = PolynomialFamily{}(n);
  const Real m = required_m(poly, k, BallMode::L1Average);
  const double p_space = std::get<DirichletType>(e.space).p;
  CellResult c;
  c.n = n;
  c.k = k;
  for (std::size_t p = 1; p <= w.size(); ++p) {
    HypothesisRatio h = hypothesis_ratio(w, p, k, m, e.phi);
    if (h.holds && e.phi(w.gap(p)) > 2) {
      c.p = p;
      c.hypothesis = h;
      break;
    }
  }
  if (!c.hypothesis) throw NotFound("no witness radius satisfies the hypothesis ratio for this cell");
  c.gap = w.gap(c.p);
  c.ball = make_ball(poly, k, l1_average_bound(p_space, c.gap));
  c.samples = e.samples;
  for (const auto& g : sample_ball(c.ball, w, e.space, e.samples, cell_seed(e.seed, n, k), e.quadrature)) {
    MeasureEstimate h = h_set_measure(g, m.to_double(), e.phi, c.gap, e.angles, *c.hypothesis);
    c.max_fraction_h = std::max(c.max_fraction_h, h.fraction);
  }
  c.pass = c.max_fraction_h <= 1.0 / m.to_double() + 2.0 / static_cast<double>(e.angles);
  return c;
}

}  // namespace detail

struct ExperimentResult {
  Experiment experiment;
  std::vector<CellResult> cells;
  bool pass = true;
};

inline ExperimentResult run_experiment(const Experiment& e, const LacunaryWitness& w) {
  e.validate();
  if (e.mode == BallMode::L1Average && w.growth.kind != Growth::Kind::Weighted) {
    throw DomainError("L1-average experiments need a weighted (phi-mode) witness");
  }
  ExperimentResult r{e, {}, true};
  for (std::uint64_t n = e.n_first; n <= e.n_last; ++n) {
    for (std::size_t k = e.k_first; k <= e.k_last; ++k) {
      CellResult c = e.mode == BallMode::Kernel ? detail::run_kernel_cell(e, w, n, k)
                                                : detail::run_l1_cell(e, w, n, k);
      r.pass = r.pass && c.pass;
      r.cells.push_back(std::move(c));
    }
  }
  return r;
}

inline nlohmann::json to_json(const ExperimentResult& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.cells) cells.push_back(to_json(c, r.experiment.mode));
  return {{"experiment", to_json(r.experiment)}, {"cells", cells}, {"pass", r.pass}};
}

}  // namespace disclab
