#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "bgw/conditions.hpp"
#include "bgw/errors.hpp"
#include "bgw/generator.hpp"
#include "bgw/mating.hpp"
#include "bgw/regime.hpp"
#include "bgw/rng.hpp"

namespace bgw::cli {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvFile {
 public:
  CsvFile(const RunConfig& config, const std::string& name, const std::string& header) {
    std::filesystem::path dir(config.output_dir());
    std::filesystem::create_directories(dir);
    path_ = (dir / name).string();
    out_.open(path_, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error(ErrorCode::kConfig, "cannot write output file '" + path_ + "'");
    out_ << "# config_fingerprint=" << config.fingerprint() << '\n' << header << '\n';
  }
  std::ostream& row() { return out_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

constexpr const char* kPathHeader = "path_id,t,F_over_N,M_over_N,exploded_flag";

void write_paths(CsvFile& f, const std::vector<Path>& paths) {
  for (const auto& p : paths) {
    const int flag = p.exploded_at ? 1 : 0;
    for (std::size_t r = 0; r < p.states.size(); ++r) {
      f.row() << p.path_id << ',' << fmt(p.times[r]) << ',' << fmt(p.states[r][0]) << ','
              << fmt(p.states[r][1]) << ',' << flag << '\n';
    }
  }
}

std::size_t count_exploded(const std::vector<Path>& paths) {
  std::size_t n = 0;
  for (const auto& p : paths) n += p.exploded_at ? 1 : 0;
  return n;
}

}  // namespace

int cmd_simulate_chain(const RunConfig& c, std::ostream& out) {
  auto ladder = c.require_ladder();
  auto z0 = c.require_z0();
  double horizon = c.require_horizon();
  auto times = c.require_record_times();
  auto paths = c.require_paths();
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    ScalingFamily fam = c.family(ladder[k]);
    auto ens = simulate_chain_ensemble(fam, z0, horizon, times, paths, stream_seed(c.seed(), k), c.threads());
    CsvFile f(c, "chain_N" + std::to_string(ladder[k]) + ".csv", kPathHeader);
    write_paths(f, ens);
    out << "chain N=" << ladder[k] << ": " << paths << " paths, " << count_exploded(ens) << " exploded -> "
        << f.path() << '\n';
  }
  return 0;
}

int cmd_simulate_sde(const RunConfig& c, std::ostream& out) {
  auto z0 = c.require_z0();
  double horizon = c.require_horizon();
  auto times = c.require_record_times();
  auto paths = c.require_paths();
  SdeIntegrator integrator(c.system(), c.integrate_options());
  auto ens = simulate_sde_ensemble(integrator, z0, horizon, times, paths, c.seed(), c.threads());
  CsvFile f(c, "sde.csv", kPathHeader);
  write_paths(f, ens);
  out << "sde: " << paths << " paths, " << count_exploded(ens) << " exploded -> " << f.path() << '\n';
  return 0;
}

int cmd_check(const RunConfig& c, std::ostream& out) {
  JumpSdeSystem sys = c.system();
  RegimeReport rep = detect_uniqueness_regime(sys);
  auto items = rep.items;
  if (c.scenario() != Scenario::kGeneral) {
    std::vector<std::int64_t> ladder{16, 64, 256};
    if (c.document().contains("N_ladder")) ladder = c.require_ladder();
    items.emplace_back("B1", check_B1(c.limit_params().g, ladder, 5.0));
  }
  CsvFile f(c, "check.csv", "hypothesis,status,method,rule,detail");
  bool all = true;
  for (const auto& [name, v] : items) {
    f.row() << name << ',' << to_string(v.status) << ',' << to_string(v.method) << ',' << quoted(v.rule) << ','
            << quoted(v.detail) << '\n';
    out << name << ": " << to_string(v.status) << " (" << v.rule << ")\n";
    all = all && v.satisfied();
  }
  out << "overall: " << (all ? "SATISFIED" : "NOT SATISFIED") << '\n';
  return all ? 0 : 1;
}

int cmd_generator_check(const RunConfig& c, std::ostream& out) {
  auto ladder = c.require_ladder();
  const json gen = c.document().value("generator", json::object());
  std::vector<std::pair<int, int>> indices{{1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}};
  std::vector<std::array<double, 2>> points{{0.5, 0.5}, {1.0, 2.0}};
  std::int64_t samples = 100000;
  try {
    if (gen.contains("indices")) indices = gen["indices"].get<std::vector<std::pair<int, int>>>();
    if (gen.contains("points")) points = gen["points"].get<std::vector<std::array<double, 2>>>();
    if (gen.contains("samples")) samples = gen["samples"].get<std::int64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("invalid 'generator' section: ") + e.what());
  }
  if (samples <= 0) throw Error(ErrorCode::kConfig, "config field 'generator.samples' must be positive");
  LimitSystemParams lim = c.limit_params();
  CsvFile f(c, "generator.csv", "N,i,j,y,z,empirical,SE,limit,gap,prelimit_exact");
  bool ok = true;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    ScalingFamily fam = c.family(ladder[k]);
    const double n = static_cast<double>(ladder[k]);
    for (std::size_t p = 0; p < points.size(); ++p) {
      auto [y, z] = points[p];
      auto est = empirical_generator(fam, indices, y, z, samples, stream_seed(c.seed(), k * 1024 + p), c.threads());
      for (const auto& e : est) {
        double limit = limiting_generator(lim, e.i, e.j, y, z);
        double exact = prelimit_generator(fam, e.i, e.j, static_cast<std::int64_t>(std::floor(n * y)),
                                          static_cast<std::int64_t>(std::floor(n * z)));
        double gap = e.estimate - limit;
        f.row() << ladder[k] << ',' << e.i << ',' << e.j << ',' << fmt(y) << ',' << fmt(z) << ',' << fmt(e.estimate)
                << ',' << fmt(e.standard_error) << ',' << fmt(limit) << ',' << fmt(gap) << ',' << fmt(exact) << '\n';
        if (k + 1 == ladder.size() && std::fabs(gap) > 4.0 * e.standard_error) ok = false;
      }
    }
  }
  out << "generator table -> " << f.path() << "\nlargest N within 4 SE: " << (ok ? "yes" : "no") << '\n';
  return ok ? 0 : 1;
}

int cmd_convergence(const RunConfig& c, std::ostream& out) {
  StudyOptions o;
  o.ladder = c.require_ladder();
  o.paths = c.require_paths();
  o.seed = c.seed();
  o.threads = c.threads();
  o.sde = c.integrate_options();
  const json conv = c.document().value("convergence", json::object());
  try {
    o.bootstrap_reps = conv.value("bootstrap_reps", o.bootstrap_reps);
    o.sde_paths = conv.value("sde_paths", o.sde_paths);
    o.scheme_tolerance = conv.value("scheme_tolerance", o.scheme_tolerance);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("invalid 'convergence' section: ") + e.what());
  }
  auto z0 = c.require_z0();
  auto times = c.require_record_times();
  ConvergenceReport rep =
      run_study([&](std::int64_t N) { return c.family(N); }, c.limit_params(), z0, times, o);

  CsvFile m(c, "convergence_moments.csv", "source,N,t,statistic,mean,variance,SE,n,exploded");
  for (const auto& r : rep.moments) {
    m.row() << r.source << ',' << r.N << ',' << fmt(r.time) << ',' << to_string(r.statistic) << ','
            << fmt(r.stats.mean) << ',' << fmt(r.stats.variance) << ',' << fmt(r.stats.standard_error) << ','
            << r.stats.n << ',' << r.exploded << '\n';
  }
  CsvFile w(c, "convergence_w1.csv", "N,t,statistic,w1,ci_lo,ci_hi");
  for (const auto& d : rep.distances) {
    w.row() << d.N << ',' << fmt(d.time) << ',' << to_string(d.statistic) << ',' << fmt(d.w1) << ','
            << fmt(d.ci.lo) << ',' << fmt(d.ci.hi) << '\n';
  }
  CsvFile t(c, "convergence_trend.csv", "t,statistic,decreasing");
  for (const auto& tr : rep.trends) {
    t.row() << fmt(tr.time) << ',' << to_string(tr.statistic) << ',' << (tr.decreasing ? 1 : 0) << '\n';
  }
  CsvFile h(c, "convergence_headline.csv", "t,statistic,chain_mean,sde_mean,joint_SE,tolerance,pass");
  for (const auto& r : rep.headline) {
    h.row() << fmt(r.time) << ',' << to_string(r.statistic) << ',' << fmt(r.chain_mean) << ',' << fmt(r.sde_mean)
            << ',' << fmt(r.joint_se) << ',' << fmt(r.tolerance) << ',' << (r.pass ? 1 : 0) << '\n';
    out << "t=" << r.time << ' ' << to_string(r.statistic) << ": chain " << r.chain_mean << " sde " << r.sde_mean
        << " (tol " << r.tolerance << ") " << (r.pass ? "ok" : "FAIL") << '\n';
  }
  out << "headline: " << (rep.headline_pass ? "pass" : "fail") << '\n';
  return rep.headline_pass ? 0 : 1;
}

}  // namespace bgw::cli
