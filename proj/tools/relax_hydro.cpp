// relax_hydro.cpp
// CLI driver: `relax-hydro <euler|limit|sweep|verify|subsolution>
//   --config <path> [--out <dir>] [--seed <u64>]`

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "relaxhydro/config.hpp"
#include "relaxhydro/scenario.hpp"
#include "relaxhydro/snapshot.hpp"

namespace {

using namespace relaxhydro;

void print_violations(const LoadResult& lr) {
  for (const auto& v : lr.violations)
    std::fprintf(stderr, "%s [%s] %s\n", v.fatal ? "error:" : "warning:",
                 v.rule.c_str(), v.message.c_str());
}

int run_euler_cmd(const RunConfig& cfg, const std::string& outdir) {
  ReportBuilder report;
  const EulerScenarioOutcome out = run_euler_scenario(cfg, outdir);
  report.add_check("run.completed", !out.run.aborted,
                   out.run.aborted ? out.run.abort_reason
                                   : std::to_string(out.run.total_steps) + " steps");
  if (!out.run.steps.empty() && !out.run.aborted) {
    const double m0 = out.run.steps.front().mass;
    const double m1 = out.run.steps.back().mass;
    const double drift = std::fabs(m1 - m0) / std::max(1e-300, std::fabs(m0));
    report.add_check("mass.conservation", drift <= 1e-12,
                     "relative drift " + std::to_string(drift));
    bool monotone = true;
    const double slack = 1e-8 * std::fabs(out.run.steps.front().e_total);
    for (std::size_t i = 1; i < out.run.steps.size(); ++i)
      if (out.run.steps[i].e_total >
          out.run.steps[i - 1].e_total + slack)
        monotone = false;
    report.add_check("energy.non-increasing", monotone, "");
  }
  for (const auto& a : out.artifacts) report.add_artifact(a);
  const std::string rp = (std::filesystem::path(outdir) / "report.txt").string();
  report.write(rp);
  std::printf("%s", report.str().c_str());
  return report.all_passed() && !out.run.aborted ? 0 : 1;
}

int run_limit_cmd(const RunConfig& cfg, const std::string& outdir) {
  ReportBuilder report;
  const LimitScenarioOutcome out = run_limit_scenario(cfg, outdir);
  report.add_check("run.completed", !out.run.aborted,
                   out.run.aborted ? out.run.abort_reason : "");
  if (!out.run.aborted && out.run.free_energy.size() > 1) {
    bool monotone = true;
    const double slack = 1e-8 * std::fabs(out.run.free_energy.front());
    for (std::size_t i = 1; i < out.run.free_energy.size(); ++i)
      if (out.run.free_energy[i] > out.run.free_energy[i - 1] + slack)
        monotone = false;
    report.add_check("free-energy.non-increasing", monotone, "");
  }
  for (const auto& a : out.artifacts) report.add_artifact(a);
  const std::string rp = (std::filesystem::path(outdir) / "report.txt").string();
  report.write(rp);
  std::printf("%s", report.str().c_str());
  return report.all_passed() && !out.run.aborted ? 0 : 1;
}

int run_sweep_cmd(const RunConfig& cfg, const std::string& outdir) {
  ReportBuilder report;
  const SweepOutcome out = run_sweep(cfg, outdir);
  report.add_check("limit-run.completed", !out.limit_aborted, "");
  bool all_runs = true;
  for (const auto& pt : out.points)
    if (pt.euler_aborted) all_runs = false;
  report.add_check("damped-runs.completed", all_runs, "");
  if (!out.limit_aborted && all_runs) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "fitted order %.3f, monotone %s",
                  out.fit.fitted_order, out.fit.monotone ? "yes" : "no");
    report.add_note(buf);
    report.add_check("sweep.sup-theta-decreasing", out.fit.monotone, "");
    report.add_check("sweep.order-at-least-0.8", out.fit.fitted_order >= 0.8,
                     "");
  }
  for (const auto& a : out.artifacts) report.add_artifact(a);
  const std::string rp = (std::filesystem::path(outdir) / "report.txt").string();
  report.write(rp);
  std::printf("%s", report.str().c_str());
  return report.all_passed() ? 0 : 1;
}

int run_verify_cmd(const RunConfig& cfg, const std::string& outdir) {
  ReportBuilder report;
  const VerifyOutcome out = run_verify(cfg);
  for (const auto& item : out.items)
    report.add_check(item.name, item.pass, item.detail);
  if (!outdir.empty()) {
    std::filesystem::create_directories(outdir);
    report.write((std::filesystem::path(outdir) / "report.txt").string());
  }
  std::printf("%s", report.str().c_str());
  return out.all_pass ? 0 : 1;
}

int run_subsolution_cmd(const RunConfig& cfg, const std::string& outdir) {
  ReportBuilder report;
  const SubsolutionOutcome out = run_subsolution_study(cfg, outdir);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "pi_min %.6g, decomposition %.3g, correction residual %.3g, "
                "trace %.3g",
                out.pi_min, out.decomposition_error, out.correction_residual,
                out.correction_trace);
  report.add_note(buf);
  report.add_check("margin.negative-at-pi-min", out.negative_at_pi_min, "");
  report.add_check("margin.violated-below-pi-min", out.violation_below_pi_min, "");
  report.add_check("decomposition.exact", out.decomposition_error <= 1e-10, "");
  for (const auto& a : out.artifacts) report.add_artifact(a);
  const std::string rp = (std::filesystem::path(outdir) / "report.txt").string();
  report.write(rp);
  std::printf("%s", report.str().c_str());
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"periodic-domain lab for damped nonlocal Euler dynamics and its "
               "aggregation-diffusion limit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  unsigned long long seed_override = 0;
  bool seed_given = false;

  for (const char* name :
       {"euler", "limit", "sweep", "verify", "subsolution"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration file")
        ->required();
    sub->add_option("--out", out_override, "output directory override");
    sub->add_option("--seed", seed_override, "seed override")
        ->each([&](const std::string&) { seed_given = true; });
  }

  CLI11_PARSE(app, argc, argv);

  const LoadResult lr = load_config(config_path);
  print_violations(lr);
  if (!lr.ok()) return 2;
  RunConfig cfg = *lr.config;
  if (!out_override.empty()) cfg.output_directory = out_override;
  if (seed_given) cfg.seed = seed_override;

  try {
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "euler") return run_euler_cmd(cfg, cfg.output_directory);
    if (sub == "limit") return run_limit_cmd(cfg, cfg.output_directory);
    if (sub == "sweep") return run_sweep_cmd(cfg, cfg.output_directory);
    if (sub == "verify") return run_verify_cmd(cfg, cfg.output_directory);
    if (sub == "subsolution")
      return run_subsolution_cmd(cfg, cfg.output_directory);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
