#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bgw/errors.hpp"
#include "bgw/expr.hpp"
#include "bgw/parallel.hpp"

namespace bgw::cli {
namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::kConfig, msg); }

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) config_error("missing config field '" + where + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number()) config_error("config field '" + where + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return number(j, key, where);
}

std::string text(const json& j, const std::string& key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_string()) config_error("config field '" + where + key + "' must be a string");
  return v.get<std::string>();
}

std::array<std::string, 2> text_pair(const json& j, const std::string& key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string()) {
    config_error("config field '" + where + key + "' must be two expression strings");
  }
  return {v[0].get<std::string>(), v[1].get<std::string>()};
}

DensityPart parse_density(const json& d, const std::string& where) {
  std::string form = text(d, "form", where);
  double lo = number_or(d, "lo", 0.0, where);
  double hi = d.contains("hi") && d["hi"].is_string() && d["hi"] == "inf" ? kInf
                                                                          : number_or(d, "hi", kInf, where);
  if (form == "power") return DensityPart::power(number(d, "coef", where), number(d, "exponent", where), lo, hi);
  if (form == "log_power") {
    return DensityPart::log_power(number(d, "coef", where), number(d, "exponent", where), lo, hi);
  }
  if (form == "constant") return DensityPart::constant(number(d, "value", where), lo, hi);
  if (form == "expr") {
    std::string src = text(d, "expr", where);
    Expr e = Expr::parse(src, {"u"});
    return DensityPart::custom([e](double u) { return e.eval(std::span<const double>(&u, 1)); }, lo, hi, {},
                               src);
  }
  config_error("unknown density form '" + form + "' at '" + where + "form'");
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

JumpMeasure parse_measure(const json& j, const std::string& where) {
  if (j.is_null()) return JumpMeasure::zero();
  if (!j.is_object()) config_error("config field '" + where + "' must be a measure object");
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    for (const auto& a : j["atoms"]) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
        config_error("config field '" + where + ".atoms' entries must be [location, mass]");
      }
      atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    }
  }
  std::vector<DensityPart> parts;
  if (j.contains("densities")) {
    for (const auto& d : j["densities"]) parts.push_back(parse_density(d, where + ".densities."));
  }
  return JumpMeasure(std::move(atoms), std::move(parts));
}

RunConfig RunConfig::from_json(json doc) {
  RunConfig c;
  if (!doc.is_object()) config_error("config must be a JSON object");
  c.doc_ = std::move(doc);
  try {
    const json& sc = field(c.doc_, "scenario", "");
    std::string preset = text(sc, "preset", "scenario.");
    if (preset == "survival_sexual") {
      c.scenario_ = Scenario::kSurvivalSexual;
      c.survival_.alpha = number(sc, "alpha", "scenario.");
      c.survival_.mu = parse_measure(sc.value("mu", json()), "scenario.mu");
      c.survival_.q = number(sc, "q", "scenario.");
      c.survival_.p_f = number(sc, "p_f", "scenario.");
      c.survival_.p_m = number(sc, "p_m", "scenario.");
      c.limit_params().validate();
    } else if (preset == "replacement") {
      c.scenario_ = Scenario::kReplacement;
      const json& f = field(sc, "female", "scenario.");
      const json& m = field(sc, "male", "scenario.");
      c.replacement_.death_f = number(f, "death", "scenario.female.");
      c.replacement_.sigma_f = number_or(f, "sigma", 0.0, "scenario.female.");
      c.replacement_.nu_f = parse_measure(f.value("nu", json()), "scenario.female.nu");
      c.replacement_.death_m = number(m, "death", "scenario.male.");
      c.replacement_.sigma_m = number_or(m, "sigma", 0.0, "scenario.male.");
      c.replacement_.nu_m = parse_measure(m.value("nu", json()), "scenario.male.nu");
      c.limit_params().validate();
    } else if (preset == "general") {
      c.scenario_ = Scenario::kGeneral;
      std::array<JumpMeasure, 2> lambda{};
      if (sc.contains("lambda")) {
        const json& l = sc["lambda"];
        if (!l.is_array() || l.size() != 2) config_error("config field 'scenario.lambda' must hold two measures");
        lambda[0] = parse_measure(l[0], "scenario.lambda[0]");
        lambda[1] = parse_measure(l[1], "scenario.lambda[1]");
      }
      c.general_.coefficients = general_from_expressions(
          text_pair(sc, "b", "scenario."), text_pair(sc, "ell", "scenario."),
          text_pair(sc, "kappa", "scenario."), text_pair(sc, "p", "scenario."), lambda);
      c.general_.L_growth = number(sc, "L_growth", "scenario.");
      c.general_.A_growth = number(sc, "A_growth", "scenario.");
    } else {
      config_error("unknown scenario preset '" + preset + "'");
    }
  } catch (const SyntaxError& e) {
    throw Error(ErrorCode::kConfig, std::string("malformed expression: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    throw Error(ErrorCode::kConfig, std::string("invalid scenario: ") + e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("invalid scenario: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(std::move(doc));
}

std::string RunConfig::fingerprint() const {
  json copy = doc_;
  copy.erase("threads");
  copy.erase("output_dir");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(copy.dump())));
  return buf;
}

std::vector<std::int64_t> RunConfig::require_ladder() const {
  const json& l = field(doc_, "N_ladder", "");
  std::vector<std::int64_t> out;
  if (!l.is_array() || l.empty()) config_error("config field 'N_ladder' must be a nonempty array");
  for (const auto& v : l) {
    if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
      config_error("config field 'N_ladder' entries must be positive integers");
    }
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

double RunConfig::v_N(std::int64_t N) const {
  std::string rule = doc_.value("v_N", std::string("N"));
  try {
    Expr e = Expr::parse(rule, {"N"});
    double n = static_cast<double>(N);
    double v = e.eval(std::span<const double>(&n, 1));
    if (!(v > 0.0)) config_error("config field 'v_N' must evaluate to a positive number");
    return v;
  } catch (const SyntaxError& e) {
    throw Error(ErrorCode::kConfig, std::string("malformed expression in 'v_N': ") + e.what());
  }
}

std::array<double, 2> RunConfig::require_z0() const {
  const json& z = field(doc_, "z0", "");
  if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number() ||
      z[0].get<double>() < 0.0 || z[1].get<double>() < 0.0) {
    config_error("config field 'z0' must be two nonnegative numbers");
  }
  return {z[0].get<double>(), z[1].get<double>()};
}

double RunConfig::require_horizon() const {
  double h = number(doc_, "horizon", "");
  if (!(h > 0.0)) config_error("config field 'horizon' must be positive");
  return h;
}

std::vector<double> RunConfig::require_record_times() const {
  const json& r = field(doc_, "record_times", "");
  if (!r.is_array() || r.empty()) config_error("config field 'record_times' must be a nonempty array");
  std::vector<double> out;
  for (const auto& v : r) {
    if (!v.is_number() || v.get<double>() < 0.0) config_error("config field 'record_times' entries must be >= 0");
    out.push_back(v.get<double>());
  }
  if (!std::is_sorted(out.begin(), out.end())) config_error("config field 'record_times' must be sorted");
  if (out.back() > require_horizon()) config_error("config field 'record_times' exceeds 'horizon'");
  return out;
}

std::size_t RunConfig::require_paths() const {
  const json& p = field(doc_, "paths", "");
  if (!p.is_number_integer() || p.get<std::int64_t>() <= 0) config_error("config field 'paths' must be a positive integer");
  return static_cast<std::size_t>(p.get<std::int64_t>());
}

IntegrateOptions RunConfig::integrate_options() const {
  IntegrateOptions o;
  o.dt = number_or(doc_, "dt", o.dt, "");
  o.epsilon = number_or(doc_, "epsilon", o.epsilon, "");
  o.explosion_ceiling = number_or(doc_, "explosion_ceiling", o.explosion_ceiling, "");
  std::string mode = doc_.value("small_jumps", std::string("gaussian"));
  if (mode == "gaussian") {
    o.small_jumps = SmallJumpMode::kGaussianCorrect;
  } else if (mode == "drop") {
    o.small_jumps = SmallJumpMode::kCompensateDrop;
  } else {
    config_error("config field 'small_jumps' must be \"gaussian\" or \"drop\"");
  }
  if (!(o.dt > 0.0) || !(o.epsilon > 0.0)) config_error("config fields 'dt' and 'epsilon' must be positive");
  return o;
}

std::uint64_t RunConfig::seed() const {
  if (!doc_.contains("seed")) return 0;
  if (!doc_["seed"].is_number_unsigned()) config_error("config field 'seed' must be a nonnegative integer");
  return doc_["seed"].get<std::uint64_t>();
}

unsigned RunConfig::threads() const {
  unsigned requested = 0;
  if (doc_.contains("threads")) {
    if (!doc_["threads"].is_number_unsigned()) config_error("config field 'threads' must be a nonnegative integer");
    requested = doc_["threads"].get<unsigned>();
  }
  return resolve_threads(requested);
}

std::string RunConfig::output_dir() const { return doc_.value("output_dir", std::string(".")); }

void RunConfig::set_seed(std::uint64_t seed) { doc_["seed"] = seed; }
void RunConfig::set_threads(unsigned threads) { doc_["threads"] = threads; }
void RunConfig::set_output_dir(const std::string& dir) { doc_["output_dir"] = dir; }

ScalingFamily RunConfig::family(std::int64_t N) const {
  const double v = v_N(N);
  switch (scenario_) {
    case Scenario::kSurvivalSexual:
      return build_survival_sexual(survival_.alpha, survival_.mu, survival_.q, survival_.p_f, survival_.p_m, N, v);
    case Scenario::kReplacement: {
      const auto& r = replacement_;
      return build_replacement_couples(OffspringLaw::triplet(r.death_f, r.sigma_f, r.nu_f, N, v),
                                       OffspringLaw::triplet(r.death_m, r.sigma_m, r.nu_m, N, v), N, v);
    }
    case Scenario::kGeneral:
      break;
  }
  config_error("the general scenario has no discrete chain");
}

LimitSystemParams RunConfig::limit_params() const {
  switch (scenario_) {
    case Scenario::kSurvivalSexual:
      return survival_sexual_limit(survival_.alpha, survival_.mu, survival_.q, survival_.p_f, survival_.p_m);
    case Scenario::kReplacement: {
      const auto& r = replacement_;
      auto h = TruncationFunction::clamp();
      return replacement_limit({triplet_alpha(r.death_f, r.nu_f, h), r.sigma_f, r.nu_f},
                               {triplet_alpha(r.death_m, r.nu_m, h), r.sigma_m, r.nu_m}, h);
    }
    case Scenario::kGeneral:
      break;
  }
  config_error("the general scenario has no limit parameters");
}

JumpSdeSystem RunConfig::system() const {
  try {
    if (scenario_ == Scenario::kGeneral) {
      return make_general_system(general_.coefficients, TruncationFunction::clamp(), general_.L_growth,
                                 general_.A_growth);
    }
    return build_limit_system(limit_params());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    throw Error(ErrorCode::kConfig, std::string("invalid system: ") + e.what());
  }
}

}  // namespace bgw::cli
