#pragma once

// JSON run configuration for the bgw command-line tool.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bgw/chain.hpp"
#include "bgw/convergence.hpp"
#include "bgw/limit_params.hpp"
#include "bgw/measure.hpp"
#include "bgw/sde.hpp"

namespace bgw::cli {

using nlohmann::json;

enum class Scenario { kSurvivalSexual, kReplacement, kGeneral };

struct SurvivalSexual {
  double alpha = 0.0;
  JumpMeasure mu;
  double q = 0.5;
  double p_f = 0.0;
  double p_m = 0.0;
};

struct General {
  GeneralCoefficients coefficients;
  double L_growth = 0.0;
  double A_growth = 0.0;
};

/// Parsed view of a config document. Fields a subcommand does not use may be
/// absent; `require_*` raise kConfig naming the missing field.
class RunConfig {
 public:
  /// Throws kConfig on malformed documents and unknown presets, kSyntax
  /// re-raised as kConfig for bad expressions.
  static RunConfig from_json(json document);
  static RunConfig load(const std::string& path);

  const json& document() const noexcept { return doc_; }
  Scenario scenario() const noexcept { return scenario_; }
  const SurvivalSexual& survival() const { return survival_; }
  const ReplacementSpec& replacement() const { return replacement_; }
  const General& general() const { return general_; }

  /// FNV-1a 64 of the canonical JSON (sorted keys) with "threads" and
  /// "output_dir" removed, as 16 hex digits.
  std::string fingerprint() const;

  std::vector<std::int64_t> require_ladder() const;
  double v_N(std::int64_t N) const;
  std::array<double, 2> require_z0() const;
  double require_horizon() const;
  std::vector<double> require_record_times() const;
  std::size_t require_paths() const;
  IntegrateOptions integrate_options() const;

  std::uint64_t seed() const;
  unsigned threads() const;
  std::string output_dir() const;

  void set_seed(std::uint64_t seed);
  void set_threads(unsigned threads);
  void set_output_dir(const std::string& dir);

  /// Scaling family at N; kConfig for the general scenario, which has none.
  ScalingFamily family(std::int64_t N) const;
  LimitSystemParams limit_params() const;
  JumpSdeSystem system() const;

 private:
  json doc_;
  Scenario scenario_ = Scenario::kSurvivalSexual;
  SurvivalSexual survival_;
  ReplacementSpec replacement_;
  General general_;
};

/// {"atoms": [[location, mass], ...], "densities": [{"form": "power" |
/// "log_power" | "expr", ...}]}.
JumpMeasure parse_measure(const json& j, const std::string& where);

std::uint64_t fnv1a64(const std::string& bytes) noexcept;

}  // namespace bgw::cli
