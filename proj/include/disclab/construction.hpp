#pragma once

// Greedy construction of a lacunary series f(z) = sum c_k z^{n_k} together
// with radii r_k = 1 - gap_k such that the minimum of |f| on |z| = r_k exceeds
// a growth target t_k, while c_k / (n_k+1)^{nu_k} < 2^{-k/2} keeps f in every
// S_{-nu}, nu > 0. Witnesses are exact objects (integer c_k and n_k, decimal
// gaps, rational or decimal nu_k), so they can be re-verified at any
// precision. A margin is certified when it has the same sign at the working
// precision and at twice that precision.
//
// The inequalities, for a witness with K steps:
//   (1) c_1 > 1,  c_k - sum_{j<k} c_j > k
//   (2) c_j / (n_j+1)^{nu_j} < 2^{-j/2}
//   (3) c_1 r_1^{n_1} - sum_{1<j<=K} c_j r_1^{n_j} > t_1
//   (4) 1 < p < K:  c_p r_p^{n_p} - sum_{j<p} c_j - sum_{p<j<=K} c_j r_p^{n_j} > t_p
//   (5) c_K r_K^{n_K} - sum_{j<K} c_j > t_K
// with t_k = k by default, or t_k = k phi(r_k) in weighted mode.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "disclab/errors.hpp"
#include "disclab/real.hpp"
#include "disclab/series.hpp"
#include "disclab/weight.hpp"

namespace disclab {

enum class NuMode { AllNu, SingleNu };

/// nu_k = 1/k (AllNu) or a fixed nu (SingleNu).
struct NuSchedule {
  NuMode mode = NuMode::AllNu;
  Numeral constant{std::string("1")};

  static NuSchedule reciprocal() { return {}; }
  static NuSchedule single(Numeral nu) {
    if (!(nu.to_real() > 0)) throw DomainError("nu must be positive");
    return {NuMode::SingleNu, std::move(nu)};
  }
  /// "1/k", or "const:<nu>".
  static NuSchedule parse(const std::string& text) {
    if (text == "1/k") return reciprocal();
    if (text.rfind("const:", 0) == 0) return single(Numeral(text.substr(6)));
    throw DomainError("unknown nu schedule '" + text + "' (expected 1/k or const:<nu>)");
  }
  Numeral at(std::size_t k) const {
    return mode == NuMode::AllNu ? Numeral("1/" + std::to_string(k)) : constant;
  }
};

/// Growth targets t_k.
struct Growth {
  enum class Kind { Linear, Weighted, Explicit };
  Kind kind = Kind::Linear;
  WeightFunction phi;
  std::vector<Numeral> targets;

  static Growth linear() { return {}; }
  static Growth weighted(WeightFunction w) { return {Kind::Weighted, w, {}}; }
  static Growth explicit_targets(std::vector<Numeral> t) { return {Kind::Explicit, {}, std::move(t)}; }

  Real target(std::size_t k, const Real& gap) const {
    switch (kind) {
      case Kind::Linear:
        return Real(static_cast<unsigned long>(k));
      case Kind::Weighted:
        return Real(static_cast<unsigned long>(k)) * phi(gap);
      case Kind::Explicit:
        if (k > targets.size()) throw DomainError("no growth target for step " + std::to_string(k));
        return targets[k - 1].to_real();
    }
    return Real(0);
  }
};

struct WitnessStep {
  Numeral coefficient;  // c_k
  BigInt exponent;      // n_k
  Numeral gap;          // 1 - r_k
  Numeral nu;           // nu_k
};

struct LacunaryWitness {
  std::vector<WitnessStep> steps;
  NuMode mode = NuMode::AllNu;
  Growth growth;
  unsigned precision = kDefaultPrecisionBits;

  std::size_t size() const { return steps.size(); }

  /// The built prefix sum c_k z^{n_k} at the working precision.
  LacunarySeries series() const {
    std::vector<LacunaryTerm> t;
    for (const auto& s : steps) t.push_back({s.coefficient.to_real(), s.exponent});
    return LacunarySeries(std::move(t));
  }
  Real gap(std::size_t k) const { return steps.at(k - 1).gap.to_real(); }
  Real target(std::size_t k) const { return growth.target(k, gap(k)); }
};

struct BuildConfig {
  std::size_t steps = 6;
  NuSchedule nu;
  Growth growth;
  std::size_t escalation_limit = 64;   // doublings of c_k per step
  std::size_t gap_resolution = 16;     // log-grid points per decade
  std::size_t gap_digits = 4;          // significant digits of a grid gap
  long gap_floor_exp10 = -400;         // no gap below 10^floor
  std::size_t exponent_cap_bits = 16384;
  unsigned precision = kDefaultPrecisionBits;

  void validate() const {
    if (steps < 1) throw DomainError("construction needs at least one step");
    if (precision < 128) throw DomainError("construction precision must be >= 128 bits");
    if (gap_resolution < 1 || gap_digits < 1) throw DomainError("gap grid must be nonempty");
  }
};

/// Certified inequalities, with t_k the growth target and B_p the blow-up margin
/// c_p r_p^{n_p} - sum_{j<p} c_j - sum_{p<j<=K} c_j r_p^{n_j}:
///   1: c_k - sum_{j<k} c_j > k
///   2: c_j / (n_j+1)^{nu_j} < 2^{-j/2}
///   3: B_1 > t_1
///   4: B_p > t_p for 1 < p < K
///   5: B_K > t_K
enum class Check { Ineq1, Ineq2, Ineq3, Ineq4, Ineq5, ExponentOrder, GapOrder, NuOrder, NuPositive };

inline const char* check_name(Check c) {
  switch (c) {
    case Check::Ineq1: return "1";
    case Check::Ineq2: return "2";
    case Check::Ineq3: return "3";
    case Check::Ineq4: return "4";
    case Check::Ineq5: return "5";
    case Check::ExponentOrder: return "exponent_order";
    case Check::GapOrder: return "gap_order";
    case Check::NuOrder: return "nu_order";
    case Check::NuPositive: return "nu_positive";
  }
  return "?";
}

struct Margin {
  Check check;
  std::size_t step;  // the step (or p) the inequality is about
  Real value;
  bool strict = true;  // margin > 0 required; otherwise >= 0
};

struct MarginEntry {
  Check check;
  std::size_t step;
  Real margin;        // at the working precision
  Real margin_check;  // at twice the working precision
  bool certified;
};

struct VerificationReport {
  unsigned precision = 0;
  unsigned check_precision = 0;
  std::vector<MarginEntry> entries;
  bool pass = false;

  const MarginEntry* first_failure() const {
    for (const auto& e : entries) {
      if (!e.certified) return &e;
    }
    return nullptr;
  }
};

namespace detail {

struct StepValues {
  std::vector<Real> c, gap, nu, target;
  std::vector<BigInt> n;
};

inline StepValues evaluate_steps(const LacunaryWitness& w) {
  StepValues v;
  for (std::size_t k = 1; k <= w.size(); ++k) {
    const auto& s = w.steps[k - 1];
    v.c.push_back(s.coefficient.to_real());
    v.n.push_back(s.exponent);
    v.gap.push_back(s.gap.to_real());
    v.nu.push_back(s.nu.to_real());
    v.target.push_back(w.growth.target(k, v.gap.back()));
  }
  return v;
}

// 2^{-j/2} - c / (n+1)^nu
inline Real margin2(std::size_t j, const Real& c, const BigInt& n, const Real& nu) {
  return exp(Real(-0.5) * Real(static_cast<unsigned long>(j)) * log(Real(2))) -
         c * exp(-nu * log(Real(n + 1)));
}

// c_p r_p^{n_p} - sum_{j<p} c_j - sum_{p<j<=K} c_j r_p^{n_j} - t_p, 1-based p.
inline Real blowup_margin(const StepValues& v, std::size_t p, std::size_t upto) {
  const Real& gap = v.gap[p - 1];
  Real m = v.c[p - 1] * pow_from_gap(gap, v.n[p - 1]);
  for (std::size_t j = 1; j < p; ++j) m -= v.c[j - 1];
  for (std::size_t j = p + 1; j <= upto; ++j) m -= v.c[j - 1] * pow_from_gap(gap, v.n[j - 1]);
  return m;
}

inline std::vector<Margin> all_margins(const LacunaryWitness& w) {
  std::vector<Margin> out;
  const std::size_t K = w.size();
  if (K == 0) return out;
  const StepValues v = evaluate_steps(w);

  Real prefix(0);
  for (std::size_t k = 1; k <= K; ++k) {
    Real threshold = k == 1 ? Real(1) : Real(static_cast<unsigned long>(k));
    out.push_back({Check::Ineq1, k, v.c[k - 1] - prefix - threshold});
    prefix += v.c[k - 1];
  }
  for (std::size_t j = 1; j <= K; ++j) {
    out.push_back({Check::Ineq2, j, margin2(j, v.c[j - 1], v.n[j - 1], v.nu[j - 1])});
  }
  out.push_back({Check::Ineq3, 1, blowup_margin(v, 1, K) - v.target[0]});
  for (std::size_t p = 2; p < K; ++p) {
    out.push_back({Check::Ineq4, p, blowup_margin(v, p, K) - v.target[p - 1]});
  }
  out.push_back({Check::Ineq5, K, blowup_margin(v, K, K) - v.target[K - 1]});

  for (std::size_t k = 1; k <= K; ++k) {
    out.push_back({Check::NuPositive, k, v.nu[k - 1]});
    if (k == 1) {
      out.push_back({Check::GapOrder, 1, Real(1) - v.gap[0], false});
      out.push_back({Check::ExponentOrder, 1, Real(v.n[0]), false});
    } else {
      out.push_back({Check::GapOrder, k, v.gap[k - 2] - v.gap[k - 1]});
      out.push_back({Check::ExponentOrder, k, Real(v.n[k - 1] - v.n[k - 2])});
      out.push_back({Check::NuOrder, k, v.nu[k - 2] - v.nu[k - 1], false});
    }
  }
  return out;
}

inline bool sign_ok(const Real& m, bool strict) { return strict ? m > 0 : m >= 0; }

}  // namespace detail

/// Evaluates every inequality at `bits` and at 2 * bits.
inline VerificationReport verify(const LacunaryWitness& w, unsigned bits = 0) {
  if (bits == 0) bits = w.precision;
  VerificationReport report;
  report.precision = bits;
  report.check_precision = 2 * bits;
  std::vector<Margin> lo, hi;
  {
    PrecisionScope scope(bits);
    lo = detail::all_margins(w);
  }
  {
    PrecisionScope scope(2 * bits);
    hi = detail::all_margins(w);
  }
  report.pass = !lo.empty();
  for (std::size_t i = 0; i < lo.size(); ++i) {
    bool ok = detail::sign_ok(lo[i].value, lo[i].strict) && detail::sign_ok(hi[i].value, hi[i].strict);
    report.entries.push_back({lo[i].check, lo[i].step, lo[i].value, hi[i].value, ok});
    report.pass = report.pass && ok;
  }
  return report;
}

/// c_p r_p^{n_p} - sum_{j<p} c_j - sum_{p<j<=K} c_j r_p^{n_j}: a lower bound
/// for |f| on the circle |z| = r_p (triangle inequality over the prefix).
inline Real min_modulus_lower_bound(const LacunaryWitness& w, std::size_t p) {
  if (p < 1 || p > w.size()) throw DomainError("step index out of range");
  return detail::blowup_margin(detail::evaluate_steps(w), p, w.size());
}

struct MembershipTail {
  std::size_t k = 0;  // first step whose terms are bounded through (2)
  Real partial;       // sum_{j<k} (c_j (n_j+1)^{-nu})^2
  Real tail;          // sum_{j>=k} 2^{-j} = 2^{1-k}
  Real total;
};

/// Certified upper bound on the squared S_{-nu} norm of any continuation of
/// the witness that keeps inequality (2).
inline MembershipTail membership_tail(const LacunaryWitness& w, const Real& nu) {
  std::size_t k = 0;
  if (w.mode == NuMode::AllNu) {
    for (std::size_t j = 1; j <= w.size(); ++j) {
      if (w.steps[j - 1].nu.to_real() < nu) {
        k = j;
        break;
      }
    }
    if (k == 0) throw NotApplicable("no built step has nu_k < nu");
  } else {
    if (w.size() == 0 || nu < w.steps[0].nu.to_real()) {
      throw NotApplicable("single-nu witness needs nu >= its fixed nu");
    }
    k = 1;
  }
  MembershipTail m;
  m.k = k;
  m.partial = Real(0);
  for (std::size_t j = 1; j < k; ++j) {
    const auto& s = w.steps[j - 1];
    Real t = s.coefficient.to_real() * exp(-nu * log(Real(s.exponent + 1)));
    m.partial += t * t;
  }
  m.tail = exp(Real(1 - static_cast<long>(k)) * log(Real(2)));
  m.total = m.partial + m.tail;
  return m;
}

namespace detail {

class Builder {
 public:
  explicit Builder(const BuildConfig& cfg) : cfg_(cfg) {
    w_.mode = cfg.nu.mode;
    w_.growth = cfg.growth;
    w_.precision = cfg.precision;
  }

  LacunaryWitness run() {
    PrecisionScope scope(cfg_.precision);
    guard_scale_ = exp(-Real(static_cast<unsigned long>(cfg_.precision / 2)) * log(Real(2)));
    for (std::size_t k = 1; k <= cfg_.steps; ++k) step(k);
    return w_;
  }

 private:
  void step(std::size_t k) {
    BigInt prefix = 0;
    for (const auto& s : w_.steps) prefix += parse_bigint(s.coefficient.text());
    BigInt c = prefix + static_cast<unsigned long>(k) + 1;
    const Numeral nu = cfg_.nu.at(k);
    for (std::size_t attempt = 0; attempt <= cfg_.escalation_limit; ++attempt) {
      BigInt n = find_exponent(k, Real(c), nu.to_real());
      if (auto gap = find_gap(k, Real(c), n, Real(prefix))) {
        w_.steps.push_back({Numeral(c), n, *gap, nu});
        return;
      }
      c *= 2;
    }
    throw InfeasibleError("step " + std::to_string(k) + ": no admissible gap for inequality (5)"
                          " after c-escalation", k, "5");
  }

  Real guard(const Real& scale) const { return guard_scale_ * max(Real(1), abs(scale)); }

  // Smallest n >= lo satisfying pred, for pred monotone in n.
  template <class Pred>
  BigInt minimal(BigInt lo, Pred pred, std::size_t k, const char* inequality) {
    if (pred(lo)) return lo;
    BigInt step = 1;
    BigInt hi = lo + step;
    while (!pred(hi)) {
      lo = hi;
      step *= 2;
      hi = lo + step;
      if (bit_length(hi) > cfg_.exponent_cap_bits) {
        throw InfeasibleError("step " + std::to_string(k) + ": exponent cap reached for inequality (" +
                                  inequality + ")",
                              k, inequality);
      }
    }
    // pred(lo) false, pred(hi) true
    while (hi - lo > 1) {
      BigInt mid = (lo + hi) / 2;
      if (pred(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }

  BigInt find_exponent(std::size_t k, const Real& c, const Real& nu) {
    BigInt lo = w_.steps.empty() ? BigInt(0) : w_.steps.back().exponent + 1;
    const Real bound2 = exp(Real(-0.5) * Real(static_cast<unsigned long>(k)) * log(Real(2)));
    BigInt n = minimal(
        lo, [&](const BigInt& m) { return margin2(k, c, m, nu) > guard(bound2); }, k, "2");

    // Re-check (3)/(4) for every earlier p with the new term appended. The
    // new term may use at most half of the slack left at r_p, so later steps
    // always find room.
    const StepValues v = evaluate_steps(w_);
    std::vector<Real> half_slack;
    for (std::size_t p = 1; p < k; ++p) {
      half_slack.push_back((blowup_margin(v, p, k - 1) - v.target[p - 1]) / 2);
    }
    auto keeps_earlier = [&](const BigInt& m) {
      for (std::size_t p = 1; p < k; ++p) {
        Real margin = half_slack[p - 1] - c * pow_from_gap(v.gap[p - 1], m);
        if (!(margin > guard(c))) return false;
      }
      return true;
    };
    return minimal(n, keeps_earlier, k, k == 2 ? "3" : "4");
  }

  std::optional<Numeral> find_gap(std::size_t k, const Real& c, const BigInt& n, const Real& prefix) {
    const Real previous = w_.steps.empty() ? Real(1) : w_.steps.back().gap.to_real();
    const Real top = previous / 2;
    const Real floor = exp(Real(cfg_.gap_floor_exp10) * log(Real(10)));
    const Real ratio = exp(-log(Real(10)) / Real(static_cast<unsigned long>(cfg_.gap_resolution)));
    Real x = top;
    Real last_value = previous;
    while (x >= floor) {
      Numeral candidate = Numeral::from_real(x, cfg_.gap_digits, MPFR_RNDD);
      Real gap = candidate.to_real();
      x *= ratio;
      if (!(gap < last_value) || !(gap > 0)) continue;
      last_value = gap;
      Real target = w_.growth.target(k, gap);
      Real margin = c * pow_from_gap(gap, n) - prefix - target;
      if (margin > guard(c)) return candidate;
    }
    return std::nullopt;
  }

  const BuildConfig& cfg_;
  LacunaryWitness w_;
  Real guard_scale_;
};

}  // namespace detail

/// Runs the greedy construction; the result is certified by verify().
inline LacunaryWitness build(const BuildConfig& cfg) {
  cfg.validate();
  LacunaryWitness w = detail::Builder(cfg).run();
  VerificationReport report = verify(w, cfg.precision);
  if (!report.pass) {
    const MarginEntry* bad = report.first_failure();
    throw InfeasibleError("built witness failed certification at step " + std::to_string(bad->step),
                          bad->step, check_name(bad->check));
  }
  return w;
}

// ---- serialization -------------------------------------------------------

inline nlohmann::json growth_to_json(const Growth& g) {
  switch (g.kind) {
    case Growth::Kind::Linear:
      return {{"kind", "linear"}};
    case Growth::Kind::Weighted:
      return {{"kind", "weighted"}, {"phi", g.phi.name()}};
    case Growth::Kind::Explicit: {
      nlohmann::json t = nlohmann::json::array();
      for (const auto& v : g.targets) t.push_back(v.text());
      return {{"kind", "explicit"}, {"targets", t}};
    }
  }
  return {};
}

inline Growth growth_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") return Growth::linear();
  if (kind == "weighted") return Growth::weighted(WeightFunction::parse(j.at("phi").get<std::string>()));
  if (kind == "explicit") {
    std::vector<Numeral> t;
    for (const auto& v : j.at("targets")) t.emplace_back(v.get<std::string>());
    return Growth::explicit_targets(std::move(t));
  }
  throw DomainError("unknown growth kind '" + kind + "'");
}

inline nlohmann::json to_json(const LacunaryWitness& w) {
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t k = 1; k <= w.size(); ++k) {
    const auto& s = w.steps[k - 1];
    steps.push_back({{"k", k},
                     {"c", s.coefficient.text()},
                     {"n", s.exponent.get_str()},
                     {"gap", s.gap.text()},
                     {"nu", s.nu.text()}});
  }
  return {{"format", "disclab-witness"},
          {"version", 1},
          {"mode", w.mode == NuMode::AllNu ? "all_nu" : "single_nu"},
          {"growth", growth_to_json(w.growth)},
          {"precision", w.precision},
          {"steps", steps}};
}

/// Parses a witness; numerals and exponents are validated, inequalities are not.
inline LacunaryWitness witness_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "disclab-witness") throw DomainError("not a witness document");
    LacunaryWitness w;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "all_nu") {
      w.mode = NuMode::AllNu;
    } else if (mode == "single_nu") {
      w.mode = NuMode::SingleNu;
    } else {
      throw DomainError("unknown witness mode '" + mode + "'");
    }
    w.growth = growth_from_json(j.at("growth"));
    w.precision = j.at("precision").get<unsigned>();
    if (w.precision < 128) throw DomainError("witness precision must be >= 128 bits");
    for (const auto& s : j.at("steps")) {
      BigInt n = parse_bigint(s.at("n").get<std::string>());
      if (n < 0) throw DomainError("witness exponents must be nonnegative");
      w.steps.push_back({Numeral(s.at("c").get<std::string>()), n,
                         Numeral(s.at("gap").get<std::string>()), Numeral(s.at("nu").get<std::string>())});
    }
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed witness: ") + e.what());
  }
}

inline nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"check", check_name(e.check)},
                       {"step", e.step},
                       {"margin", e.margin.to_string(20)},
                       {"margin_check", e.margin_check.to_string(20)},
                       {"certified", e.certified}});
  }
  nlohmann::json j = {{"pass", r.pass},
                      {"precision", r.precision},
                      {"check_precision", r.check_precision},
                      {"entries", entries}};
  if (const MarginEntry* bad = r.first_failure()) {
    j["failure"] = {{"check", check_name(bad->check)}, {"step", bad->step}};
  }
  return j;
}

inline nlohmann::json to_json(const MembershipTail& m) {
  return {{"k", m.k},
          {"partial", m.partial.to_string()},
          {"tail", m.tail.to_string()},
          {"total", m.total.to_string()}};
}

/// CSV rows "k,check,margin" of a verification report.
inline void write_margins_csv(std::ostream& os, const VerificationReport& r) {
  os << "k,check,margin\n";
  for (const auto& e : r.entries) {
    os << e.step << ',' << check_name(e.check) << ',' << e.margin.to_string(20) << '\n';
  }
}

}  // namespace disclab
