#pragma once

#include <string>

#include <json.hpp>

#include "disclab/errors.hpp"
#include "disclab/real.hpp"

namespace disclab {

/// Increasing weight phi(r) with phi -> infinity as r -> 1, evaluated from the
/// gap 1 - r: log(1/(1-r)) or (1-r)^{-s}.
struct WeightFunction {
  enum class Family { LogReciprocal, PowerGap };
  Family family = Family::LogReciprocal;
  double s = 1.0;  // PowerGap exponent

  static WeightFunction log_reciprocal() { return {Family::LogReciprocal, 1.0}; }
  static WeightFunction power_gap(double s) {
    if (!(s > 0)) throw DomainError("power-gap weight needs s > 0");
    return {Family::PowerGap, s};
  }

  Real operator()(const Real& gap) const {
    if (!(gap > 0) || gap > 1) throw DomainError("weight needs gap in (0, 1]");
    if (family == Family::LogReciprocal) return -log(gap);
    return exp(-Real(s) * log(gap));
  }

  /// "log" or "power:<s>".
  std::string name() const {
    return family == Family::LogReciprocal ? "log" : "power:" + nlohmann::json(s).dump();
  }
  static WeightFunction parse(const std::string& text) {
    if (text == "log") return log_reciprocal();
    if (text.rfind("power:", 0) == 0) {
      try {
        return power_gap(std::stod(text.substr(6)));
      } catch (const std::logic_error&) {
        throw DomainError("bad weight exponent in '" + text + "'");
      }
    }
    throw DomainError("unknown weight '" + text + "' (expected log or power:<s>)");
  }
};

}  // namespace disclab
