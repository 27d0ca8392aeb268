#pragma once

// Command-line front end. run() parses one subcommand, writes JSON reports to
// `out` and short summaries to `err`, and returns the exit status:
// 0 success, 2 invalid input, 3 infeasible / failed precondition / failed
// certification.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "disclab/baire.hpp"
#include "disclab/bounds.hpp"
#include "disclab/construction.hpp"
#include "disclab/errors.hpp"
#include "disclab/real.hpp"
#include "disclab/series.hpp"
#include "disclab/spaces.hpp"
#include "disclab/weight.hpp"

namespace disclab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitFailed = 3;
inline constexpr const char* kPrecisionEnv = "DISCLAB_PRECISION";

namespace detail {

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot write '" + path + "'");
  os << text;
}

inline void emit(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

inline unsigned default_precision() {
  if (const char* env = std::getenv(kPrecisionEnv)) {
    try {
      std::size_t used = 0;
      unsigned long bits = std::stoul(env, &used);
      if (used == std::string(env).size() && bits >= kMinPrecisionBits) return static_cast<unsigned>(bits);
    } catch (const std::logic_error&) {
    }
    throw DomainError(std::string(kPrecisionEnv) + " must be an integer >= 53");
  }
  return kDefaultPrecisionBits;
}

// Appends "--key value" for every config key that the command line does not
// already set.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end()) return args;
  if (it + 1 == args.end()) throw DomainError("--config needs a file");
  const std::string path = *(it + 1);
  args.erase(it, it + 2);
  const nlohmann::json cfg = read_json_file(path);
  if (!cfg.is_object()) throw DomainError("config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    auto scalar = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      args.push_back(flag);
      for (const auto& v : value) args.push_back(scalar(v));
    } else {
      args.push_back(flag);
      args.push_back(scalar(value));
    }
  }
  return args;
}

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw DomainError("bad number '" + item + "'");
    } catch (const std::logic_error&) {
      throw DomainError("bad number '" + item + "'");
    }
  }
  return v;
}

inline PowerSeries parse_polynomial(const std::string& re, const std::string& im) {
  std::vector<double> a = parse_list(re);
  std::vector<double> b = im.empty() ? std::vector<double>{} : parse_list(im);
  std::vector<std::complex<double>> c(std::max(a.size(), b.size()));
  for (std::size_t n = 0; n < c.size(); ++n) {
    c[n] = {n < a.size() ? a[n] : 0.0, n < b.size() ? b[n] : 0.0};
  }
  return PowerSeries(std::move(c));
}

inline SpaceSpec parse_space(const std::string& kind, double nu, double p, double alpha) {
  SpaceSpec s;
  if (kind == "s-nu") {
    s = WeightedHardy{nu};
  } else if (kind == "hardy") {
    s = Hardy{p};
  } else if (kind == "bergman") {
    s = WeightedBergman{p, alpha};
  } else if (kind == "dirichlet") {
    s = DirichletType{p, alpha};
  } else {
    throw DomainError("unknown space '" + kind + "' (expected s-nu, hardy, bergman or dirichlet)");
  }
  validate(s);
  return s;
}

inline Real parse_gap(const std::string& text) {
  Real g = Numeral(text).to_real();
  if (!(g > 0) || g > 1) throw DomainError("gap must lie in (0, 1]");
  return g;
}

struct Options {
  unsigned precision = 0;
  // construct
  std::size_t steps = 6;
  std::string nu_schedule = "1/k";
  std::string growth = "linear";
  std::string phi = "log";
  std::size_t escalation_limit = 64;
  std::string out_file;
  // shared
  std::string witness;
  std::string margins_csv;
  std::string space = "s-nu";
  double nu = 0.0;
  double p = 2.0;
  double alpha = 0.0;
  std::string coeffs;
  std::string coeffs_imag;
  std::string gap;
  std::string r;
  double tolerance = 0.0;
  std::size_t grid = 4096;
  std::size_t step = 0;
  std::string csv;
  std::string radial_csv;
  bool normalized = false;
  std::vector<std::string> nus;
  // experiments
  std::string experiment;
  std::vector<std::uint64_t> n_range;
  std::vector<std::size_t> k_range;
  std::size_t samples = 20;
  std::uint64_t seed = 1;
  double space_p = 3.0;
};

inline LacunaryWitness load_witness(const std::string& path) {
  if (path.empty()) throw DomainError("--witness is required");
  return witness_from_json(read_json_file(path));
}

inline int cmd_construct(const Options& o, std::ostream& out, std::ostream& err) {
  BuildConfig cfg;
  cfg.steps = o.steps;
  cfg.nu = NuSchedule::parse(o.nu_schedule);
  cfg.escalation_limit = o.escalation_limit;
  cfg.precision = o.precision;
  if (o.growth == "phi") {
    cfg.growth = Growth::weighted(WeightFunction::parse(o.phi));
  } else if (o.growth != "linear") {
    throw DomainError("unknown growth '" + o.growth + "' (expected linear or phi)");
  }
  LacunaryWitness w = build(cfg);
  nlohmann::json j = to_json(w);
  if (!o.out_file.empty()) write_text_file(o.out_file, j.dump(2) + "\n");
  emit(out, j);
  const auto& last = w.steps.back();
  err << "built " << w.size() << " steps; n_K = " << last.exponent.get_str() << ", gap_K = " << last.gap.text()
      << '\n';
  return kExitOk;
}

inline int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  LacunaryWitness w = load_witness(o.witness);
  VerificationReport r = verify(w, o.precision ? o.precision : w.precision);
  if (!o.margins_csv.empty()) {
    std::ostringstream csv;
    write_margins_csv(csv, r);
    write_text_file(o.margins_csv, csv.str());
  }
  emit(out, to_json(r));
  if (const MarginEntry* bad = r.first_failure()) {
    err << "verification failed: inequality " << check_name(bad->check) << " at step " << bad->step << '\n';
    return kExitFailed;
  }
  err << "all " << r.entries.size() << " margins certified at " << r.precision << " and " << r.check_precision
      << " bits\n";
  return kExitOk;
}

inline int cmd_norm(const Options& o, std::ostream& out, std::ostream& err) {
  PowerSeries f = parse_polynomial(o.coeffs, o.coeffs_imag);
  SpaceSpec s = parse_space(o.space, o.nu, o.p, o.alpha);
  QuadratureConfig cfg;
  if (o.tolerance > 0) cfg.tolerance = o.tolerance;
  std::optional<double> hardy_gap;
  if (!o.gap.empty()) hardy_gap = parse_gap(o.gap).to_double();
  NormReport r = norm(f, s, cfg, hardy_gap, o.grid);
  emit(out, to_json(r));
  err << "norm = " << std::setprecision(17) << r.value << '\n';
  return kExitOk;
}

inline int cmd_kernel_bound(const Options& o, std::ostream& out, std::ostream& err) {
  EvalBound b = kernel_bound(o.nu, parse_gap(o.gap), o.tolerance > 0 ? o.tolerance : kDefaultKernelTolerance);
  emit(out, to_json(b));
  err << "kernel norm = " << b.value.to_string(17) << '\n';
  return kExitOk;
}

inline int cmd_cr_bound(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.gap.empty() == o.r.empty()) throw DomainError("give exactly one of --r and --gap");
  Real gap = o.gap.empty() ? Real(1) - Numeral(o.r).to_real() : parse_gap(o.gap);
  if (!(gap > 0) || !(gap < 1)) throw DomainError("radius must lie in (0, 1)");
  EvalBound b = l1_average_bound(o.p, gap);
  nlohmann::json j = to_json(b);
  j["normalized"] = o.normalized;
  if (o.normalized) j["value"] = Real(c_of_r_normalized(o.p, gap)).to_string(17);
  emit(out, j);
  err << "C(r) = " << j["value"].get<std::string>() << '\n';
  return kExitOk;
}

inline int cmd_radial_profile(const Options& o, std::ostream& out, std::ostream& err) {
  LacunaryWitness w = load_witness(o.witness);
  PrecisionScope scope(o.precision ? o.precision : w.precision);
  if (o.grid < 2) throw DomainError("--grid must be >= 2");
  Real gap;
  if (o.step > 0) {
    if (o.step > w.size()) throw DomainError("--step exceeds the witness length");
    gap = w.gap(o.step);
  } else if (!o.gap.empty()) {
    gap = parse_gap(o.gap);
  } else {
    throw DomainError("give --step or --gap");
  }
  const LacunarySeries f = w.series();
  std::vector<Real> prof = circle_profile(f, gap, o.grid);
  if (!o.csv.empty()) {
    std::ostringstream csv;
    write_profile_csv(csv, prof);
    write_text_file(o.csv, csv.str());
  }
  auto [lo, hi] = std::minmax_element(prof.begin(), prof.end(), [](const Real& a, const Real& b) { return a < b; });
  nlohmann::json j = {{"gap", gap.to_string()}, {"grid", o.grid}, {"min", lo->to_string(20)},
                      {"max", hi->to_string(20)}};
  if (o.step > 0) {
    j["step"] = o.step;
    j["min_modulus_lower_bound"] = min_modulus_lower_bound(w, o.step).to_string(20);
    j["target"] = w.target(o.step).to_string(20);
  }
  if (!o.radial_csv.empty()) {
    std::ostringstream csv;
    csv << "r,gap,min_modulus,lower_bound\n";
    for (std::size_t p = 1; p <= w.size(); ++p) {
      auto pp = circle_profile(f, w.gap(p), o.grid);
      Real m = *std::min_element(pp.begin(), pp.end(), [](const Real& a, const Real& b) { return a < b; });
      csv << (Real(1) - w.gap(p)).to_string(30) << ',' << w.steps[p - 1].gap.text() << ',' << m.to_string(20) << ','
          << min_modulus_lower_bound(w, p).to_string(20) << '\n';
    }
    write_text_file(o.radial_csv, csv.str());
  }
  emit(out, j);
  err << "min |f| on the grid = " << lo->to_string(10) << '\n';
  return kExitOk;
}

inline int cmd_membership(const Options& o, std::ostream& out, std::ostream& err) {
  LacunaryWitness w = load_witness(o.witness);
  PrecisionScope scope(o.precision ? o.precision : w.precision);
  if (o.nus.empty()) throw DomainError("--nu is required");
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& text : o.nus) {
    Real nu = Numeral(text).to_real();
    if (!(nu > 0)) throw DomainError("membership needs nu > 0");
    MembershipTail m = membership_tail(w, nu);
    nlohmann::json j = to_json(m);
    j["nu"] = text;
    j["prefix_norm"] = s_nu_norm_lacunary(w.series(), -nu).to_string(20);
    rows.push_back(j);
    err << "nu = " << text << ": squared-norm bound " << m.total.to_string(10) << '\n';
  }
  emit(out, {{"membership", rows}});
  return kExitOk;
}

inline Experiment experiment_from_options(const Options& o, BallMode mode) {
  nlohmann::json j = o.experiment.empty() ? nlohmann::json::object() : read_json_file(o.experiment);
  if (o.experiment.empty()) {
    j["mode"] = mode == BallMode::Kernel ? "kernel" : "l1-average";
    if (mode == BallMode::Kernel) {
      j["space"] = to_json(SpaceSpec{WeightedHardy{o.nu}});
      j["k_range"] = {2, 4};
    } else {
      j["space"] = to_json(SpaceSpec{DirichletType{o.space_p, o.space_p - 1.0}});
      j["k_range"] = {1, 2};
      j["n_range"] = {0, 2};
    }
    j["phi"] = o.phi;
    j["samples"] = o.samples;
    j["grid"] = o.grid;
    j["seed"] = o.seed;
  }
  if (!o.n_range.empty()) {
    if (o.n_range.size() != 2) throw DomainError("--n-range takes two values");
    j["n_range"] = o.n_range;
  }
  if (!o.k_range.empty()) {
    if (o.k_range.size() != 2) throw DomainError("--k-range takes two values");
    j["k_range"] = o.k_range;
  }
  Experiment e = experiment_from_json(j);
  if (e.mode != mode) throw DomainError("experiment mode does not match the subcommand");
  return e;
}

inline int cmd_baire(const Options& o, BallMode mode, std::ostream& out, std::ostream& err) {
  std::string witness_path = o.witness;
  if (witness_path.empty() && !o.experiment.empty()) {
    witness_path = read_json_file(o.experiment).value("witness", "");
  }
  Experiment e = experiment_from_options(o, mode);
  LacunaryWitness w = load_witness(witness_path);
  PrecisionScope scope(o.precision ? o.precision : w.precision);
  ExperimentResult r = run_experiment(e, w);
  emit(out, to_json(r));
  std::size_t passed = 0;
  for (const auto& c : r.cells) passed += c.pass;
  err << passed << " of " << r.cells.size() << " cells pass\n";
  return kExitOk;
}

inline int cmd_dump(const Options& o, std::ostream& out, std::ostream&) {
  emit(out, to_json(load_witness(o.witness)));
  return kExitOk;
}

inline int cmd_load(const Options& o, std::ostream& out, std::ostream& err) {
  LacunaryWitness w = load_witness(o.witness);
  nlohmann::json j = to_json(w);
  nlohmann::json summary = {{"steps", w.size()}, {"mode", j["mode"]}, {"growth", j["growth"]},
                            {"precision", w.precision}};
  if (w.size() > 0) {
    summary["last"] = j["steps"].back();
  }
  emit(out, summary);
  err << "witness with " << w.size() << " steps\n";
  return kExitOk;
}

}  // namespace detail

/// Runs one subcommand; `args` excludes the program name.
inline int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  detail::Options o;
  CLI::App app{"Extended-precision experiments with analytic functions on the unit disc", "disclab"};
  app.require_subcommand(1, 1);

  auto add_precision = [&](CLI::App* c) {
    c->add_option("--precision", o.precision, "working precision in bits")->check(CLI::Range(53u, 1u << 20));
  };
  auto add_witness = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--witness", o.witness, "witness JSON file");
    if (required) opt->required();
  };

  auto* construct = app.add_subcommand("construct", "build a certified lacunary witness");
  construct->add_option("--steps", o.steps)->check(CLI::Range(1, 200));
  construct->add_option("--nu-schedule", o.nu_schedule, "1/k or const:<nu>");
  construct->add_option("--growth", o.growth, "linear or phi");
  construct->add_option("--phi", o.phi, "log or power:<s>");
  construct->add_option("--escalation-limit", o.escalation_limit);
  construct->add_option("--out", o.out_file, "also write the witness here");
  add_precision(construct);

  auto* verify_cmd = app.add_subcommand("verify", "certify inequalities (1)-(5) of a witness");
  add_witness(verify_cmd, true);
  verify_cmd->add_option("--margins-csv", o.margins_csv, "k,check,margin rows");
  add_precision(verify_cmd);

  auto* norm_cmd = app.add_subcommand("norm", "norm of a polynomial in a function space");
  norm_cmd->add_option("--space", o.space, "s-nu, hardy, bergman or dirichlet");
  norm_cmd->add_option("--nu", o.nu);
  norm_cmd->add_option("--p", o.p);
  norm_cmd->add_option("--alpha", o.alpha);
  norm_cmd->add_option("--coeffs", o.coeffs, "comma-separated real parts a_0,a_1,...")->required();
  norm_cmd->add_option("--coeffs-imag", o.coeffs_imag, "comma-separated imaginary parts");
  norm_cmd->add_option("--gap", o.gap, "radius gap for Hardy circle means");
  norm_cmd->add_option("--grid", o.grid);
  norm_cmd->add_option("--tolerance", o.tolerance);

  auto* kernel_cmd = app.add_subcommand("kernel-bound", "norm of point evaluation on S_nu");
  kernel_cmd->add_option("--nu", o.nu)->required();
  kernel_cmd->add_option("--gap", o.gap)->required();
  kernel_cmd->add_option("--tolerance", o.tolerance);
  add_precision(kernel_cmd);

  auto* cr_cmd = app.add_subcommand("cr-bound", "L1-average constant C(r) on D^p_{p-1}");
  cr_cmd->add_option("--p", o.p)->required();
  cr_cmd->add_option("--r", o.r);
  cr_cmd->add_option("--gap", o.gap);
  cr_cmd->add_flag("--normalized", o.normalized, "use dm = dtheta / 2 pi");
  add_precision(cr_cmd);

  auto* profile_cmd = app.add_subcommand("radial-profile", "|f| on a circle, as CSV");
  add_witness(profile_cmd, true);
  profile_cmd->add_option("--step", o.step, "use the radius r_p of this step");
  profile_cmd->add_option("--gap", o.gap);
  profile_cmd->add_option("--grid", o.grid);
  profile_cmd->add_option("--csv", o.csv, "theta,modulus rows");
  profile_cmd->add_option("--radial-csv", o.radial_csv, "r,gap,min_modulus,lower_bound rows");
  add_precision(profile_cmd);

  auto* member_cmd = app.add_subcommand("membership", "S_{-nu} norm bounds of the witness");
  add_witness(member_cmd, true);
  member_cmd->add_option("--nu", o.nus, "one or more nu > 0")->required();
  add_precision(member_cmd);

  auto add_experiment = [&](CLI::App* c) {
    add_witness(c, false);
    c->add_option("--experiment", o.experiment, "JSON experiment descriptor");
    c->add_option("--n-range", o.n_range)->expected(2);
    c->add_option("--k-range", o.k_range)->expected(2);
    c->add_option("--samples", o.samples);
    c->add_option("--grid", o.grid);
    c->add_option("--seed", o.seed);
    c->add_option("--phi", o.phi);
    add_precision(c);
  };
  auto* baire_a = app.add_subcommand("baire-a", "A(n,k) measures for kernel-mode balls");
  add_experiment(baire_a);
  baire_a->add_option("--nu", o.nu, "space S_nu of the balls");
  auto* baire_h = app.add_subcommand("baire-h", "H(n,k) measures for L1-average balls");
  add_experiment(baire_h);
  baire_h->add_option("--p", o.space_p, "space D^p_{p-1} of the balls");

  auto* dump_cmd = app.add_subcommand("dump", "canonical witness JSON");
  add_witness(dump_cmd, true);
  auto* load_cmd = app.add_subcommand("load", "parse and summarize a witness");
  add_witness(load_cmd, true);

  try {
    o.precision = 0;
    std::vector<std::string> args = detail::merge_config(raw_args);
    std::vector<const char*> argv{"disclab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << e.what() << "\n\n" << app.help();
      return kExitInvalid;
    }
    if (baire_a->parsed() && baire_a->count("--nu") == 0) o.nu = -0.5;

    const unsigned bits = o.precision ? o.precision : detail::default_precision();
    PrecisionScope scope(bits);
    if (construct->parsed()) {
      o.precision = bits;
      return detail::cmd_construct(o, out, err);
    }
    if (verify_cmd->parsed()) return detail::cmd_verify(o, out, err);
    if (norm_cmd->parsed()) return detail::cmd_norm(o, out, err);
    if (kernel_cmd->parsed()) return detail::cmd_kernel_bound(o, out, err);
    if (cr_cmd->parsed()) return detail::cmd_cr_bound(o, out, err);
    if (profile_cmd->parsed()) return detail::cmd_radial_profile(o, out, err);
    if (member_cmd->parsed()) return detail::cmd_membership(o, out, err);
    if (baire_a->parsed()) return detail::cmd_baire(o, BallMode::Kernel, out, err);
    if (baire_h->parsed()) return detail::cmd_baire(o, BallMode::L1Average, out, err);
    if (dump_cmd->parsed()) return detail::cmd_dump(o, out, err);
    if (load_cmd->parsed()) return detail::cmd_load(o, out, err);
    return kExitInvalid;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    detail::emit(out, {{"error", "infeasible"}, {"message", e.what()}, {"step", e.step()},
                       {"inequality", e.inequality()}});
    return kExitFailed;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    detail::emit(out, {{"error", "precondition"}, {"message", e.what()}, {"deficit", e.deficit()}});
    return kExitFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    detail::emit(out, {{"error", "failed"}, {"message", e.what()}});
    return kExitFailed;
  }
}

}  // namespace disclab::cli
