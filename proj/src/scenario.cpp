// scenario.cpp

#include "relaxhydro/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "relaxhydro/convolve.hpp"
#include "relaxhydro/kernels.hpp"
#include "relaxhydro/spectral.hpp"
#include "relaxhydro/subsolution.hpp"

namespace relaxhydro {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string eps_tag(double eps) {
  std::ostringstream out;
  out << eps;
  std::string s = out.str();
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

void write_field(const RunConfig& cfg, const std::string& path,
                 const ScalarField& f, double t,
                 std::vector<std::string>& artifacts) {
  if (cfg.snapshot_format == SnapshotFormat::Binary)
    write_snapshot_binary(path + ".bin", f, t);
  else
    write_snapshot_csv(path + ".csv", f, t);
  artifacts.push_back(path + (cfg.snapshot_format == SnapshotFormat::Binary
                                  ? ".bin"
                                  : ".csv"));
}

}  // namespace

int worker_thread_count() {
  if (const char* env = std::getenv("RELAX_HYDRO_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

ScalarField build_initial_density(const RunConfig& cfg) {
  const PeriodicGrid g = PeriodicGrid::make(cfg.dim, cfg.n, cfg.half_width);
  switch (cfg.initial_kind) {
    case InitialKind::Uniform: {
      ScalarField f(g);
      f.values.assign(f.size(), cfg.initial_baseline);
      return f;
    }
    case InitialKind::GaussianBump: {
      const PotentialSpec bump =
          PotentialSpec::wrapped_gaussian(cfg.initial_amplitude, cfg.initial_width);
      ScalarField f = bump.sample_potential(g);
      for (double& v : f.values) v += cfg.initial_baseline;
      return f;
    }
    case InitialKind::CosineBump: {
      const PotentialSpec mode =
          PotentialSpec::cosine_mode(cfg.initial_amplitude, cfg.initial_modes);
      ScalarField f = mode.sample_potential(g);
      for (double& v : f.values) v += cfg.initial_baseline;
      return f;
    }
  }
  throw std::logic_error("unreachable initial kind");
}

VectorField build_initial_velocity(const RunConfig& cfg, const ScalarField& rho0) {
  if (cfg.velocity_init == VelocityInit::Zero) return VectorField(rho0.grid);
  return equilibrium_velocity(rho0, cfg.law(), cfg.interaction, cfg.confinement,
                              cfg.c_k);
}

EulerConfig euler_config_from(const RunConfig& cfg, double epsilon) {
  EulerConfig ec;
  ec.epsilon = epsilon;
  ec.law = cfg.law();
  ec.interaction = cfg.interaction;
  ec.confinement = cfg.confinement;
  ec.c_k = cfg.c_k;
  ec.cfl = cfg.cfl;
  ec.t_end = cfg.t_end;
  ec.snapshot_stride = cfg.snapshot_stride;
  ec.rho_floor = cfg.rho_floor;
  return ec;
}

EulerScenarioOutcome run_euler_scenario(const RunConfig& cfg,
                                        const std::string& outdir) {
  EulerScenarioOutcome out;
  const ScalarField rho0 = build_initial_density(cfg);
  const VectorField u0 = build_initial_velocity(cfg, rho0);
  const EulerConfig ec = euler_config_from(cfg, cfg.epsilons.front());
  out.run = run_euler(ec, rho0, u0);

  if (!outdir.empty()) {
    fs::create_directories(outdir);
    const std::string diag = join(outdir, "euler_diagnostics.csv");
    write_diagnostics_csv(diag, out.run.steps);
    out.artifacts.push_back(diag);
    for (std::size_t i = 0; i < out.run.snapshots.size(); ++i) {
      const EulerState& s = out.run.snapshots[i];
      std::ostringstream base;
      base << "euler_rho_" << i;
      write_field(cfg, join(outdir, base.str()), s.rho, s.t, out.artifacts);
      for (int a = 0; a < s.mom.grid.dim; ++a) {
        std::ostringstream mb;
        mb << "euler_mom" << a << "_" << i;
        ScalarField comp(s.rho.grid);
        comp.values.assign(s.mom.comp[a].begin(), s.mom.comp[a].end());
        write_field(cfg, join(outdir, mb.str()), comp, s.t, out.artifacts);
      }
    }
  }
  return out;
}

LimitScenarioOutcome run_limit_scenario(const RunConfig& cfg,
                                        const std::string& outdir) {
  LimitScenarioOutcome out;
  const ScalarField rho0 = build_initial_density(cfg);
  out.run = run_diffusion(rho0, cfg.law(), cfg.interaction, cfg.confinement,
                          cfg.c_k, cfg.t_end, cfg.limit_snapshots);
  out.velocities = reconstruct_limit_velocities(out.run, cfg.law(), cfg.interaction,
                                                cfg.confinement, cfg.c_k);
  if (!outdir.empty()) {
    fs::create_directories(outdir);
    for (std::size_t i = 0; i < out.run.snapshots.size(); ++i) {
      std::ostringstream base;
      base << "limit_rho_" << i;
      write_field(cfg, join(outdir, base.str()), out.run.snapshots[i].rho_bar,
                  out.run.snapshots[i].t, out.artifacts);
    }
    // free-energy series as a diagnostics CSV (energy in the E_total column)
    std::vector<DiagnosticsRecord> rows(out.run.free_energy.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].step = static_cast<long>(i);
      rows[i].t = out.run.energy_times[i];
      rows[i].e_total = out.run.free_energy[i];
    }
    const std::string diag = join(outdir, "limit_free_energy.csv");
    write_diagnostics_csv(diag, rows);
    out.artifacts.push_back(diag);
  }
  return out;
}

namespace {

SweepPointOutcome sweep_point(const RunConfig& cfg, double epsilon,
                              const ScalarField& rho0, const VectorField& u0,
                              const std::vector<DiffusionState>& limit_states,
                              const std::vector<LimitVelocity>& limit_velocities,
                              const ScalarField& kernel, bool interacting) {
  SweepPointOutcome pt;
  pt.epsilon = epsilon;
  const EulerConfig ec = euler_config_from(cfg, epsilon);
  const EulerRunResult run = run_euler(ec, rho0, u0);
  pt.euler_aborted = run.aborted;

  double vgap_sq_int = 0.0;
  double prev_t = 0.0, prev_vgap2 = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const EulerState& s = run.snapshots[i];
    auto [lim, lv] = interpolate_limit(limit_states, limit_velocities, s.t);
    const DiagnosticsRecord rec = theta(s, lim, lv, ec);
    pt.theta_times.push_back(s.t);
    pt.theta_series.push_back(rec.theta);
    if (i == 0) pt.theta0 = rec.theta;
    pt.sup_theta = std::max(pt.sup_theta, rec.theta);
    pt.l2_density_gap_max = std::max(pt.l2_density_gap_max, rec.l2_density_gap);
    pt.velocity_gap_linf_l2 =
        std::max(pt.velocity_gap_linf_l2, rec.weighted_velocity_gap);
    const double vgap2 = rec.weighted_velocity_gap * rec.weighted_velocity_gap;
    if (i > 0) vgap_sq_int += 0.5 * (s.t - prev_t) * (vgap2 + prev_vgap2);
    prev_t = s.t;
    prev_vgap2 = vgap2;

    if (interacting) {
      const HlsWitness w = hls_check(s.rho, lim.rho_bar, kernel, ec.law);
      if (!std::isfinite(w.c_star)) pt.c_star_finite = false;
      pt.c_star_max = std::max(pt.c_star_max, w.c_star);
      const double ratio =
          coercivity_check(s.rho, lim.rho_bar, kernel, ec.law, ec.c_k);
      min_margin = std::min(min_margin, ratio - (1.0 - 0.5 * ec.c_k * w.c_star));
    }
  }
  pt.velocity_gap_l2l2 = std::sqrt(std::max(vgap_sq_int, 0.0));
  pt.min_coercivity_margin =
      std::isfinite(min_margin) ? min_margin : 0.0;
  return pt;
}

}  // namespace

SweepOutcome run_sweep(const RunConfig& cfg, const std::string& outdir) {
  SweepOutcome out;
  const ScalarField rho0 = build_initial_density(cfg);
  const VectorField u0 = build_initial_velocity(cfg, rho0);

  const LimitScenarioOutcome limit = run_limit_scenario(cfg, "");
  out.limit_aborted = limit.run.aborted;
  if (limit.run.aborted) return out;

  const bool interacting =
      cfg.c_k != 0.0 && cfg.interaction.kind != PotentialKind::Zero;
  ScalarField kernel;
  if (interacting)
    kernel = cfg.interaction.sample_kernel(rho0.grid);

  out.points.resize(cfg.epsilons.size());
  std::atomic<std::size_t> next{0};
  const int workers =
      std::min<int>(worker_thread_count(), static_cast<int>(cfg.epsilons.size()));
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.epsilons.size()) return;
      out.points[i] =
          sweep_point(cfg, cfg.epsilons[i], rho0, u0, limit.run.snapshots,
                      limit.velocities, kernel, interacting);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::vector<std::pair<double, double>> fit_data;
  for (const auto& pt : out.points) fit_data.push_back({pt.epsilon, pt.sup_theta});
  out.fit = convergence_fit(fit_data);

  if (!outdir.empty()) {
    fs::create_directories(outdir);
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < out.points.size(); ++i) {
      const auto& pt = out.points[i];
      SweepRow row;
      row.epsilon = pt.epsilon;
      row.sup_theta = pt.sup_theta;
      row.theta0 = pt.theta0;
      if (i >= 1) {
        std::vector<std::pair<double, double>> head;
        for (std::size_t j = 0; j <= i; ++j)
          head.push_back({out.points[j].epsilon, out.points[j].sup_theta});
        row.fitted_order_running = convergence_fit(head).fitted_order;
      } else {
        row.fitted_order_running = DiagnosticsRecord::nan;
      }
      row.l2_density_gap_max = pt.l2_density_gap_max;
      row.velocity_gap_l2l2 = pt.velocity_gap_l2l2;
      rows.push_back(row);
    }
    const std::string sweep_path = join(outdir, "sweep_summary.csv");
    write_sweep_csv(sweep_path, rows);
    out.artifacts.push_back(sweep_path);

    for (const auto& pt : out.points) {
      std::vector<DiagnosticsRecord> trows(pt.theta_times.size());
      for (std::size_t i = 0; i < trows.size(); ++i) {
        trows[i].step = static_cast<long>(i);
        trows[i].t = pt.theta_times[i];
        trows[i].theta = pt.theta_series[i];
        trows[i].e_total = pt.theta_series[i];
      }
      const std::string path =
          join(outdir, "theta_eps_" + eps_tag(pt.epsilon) + ".csv");
      write_diagnostics_csv(path, trows);
      out.artifacts.push_back(path);
    }
  }
  return out;
}

VerifyOutcome run_verify(const RunConfig& cfg) {
  VerifyOutcome out;
  auto check = [&](const std::string& name, bool pass, const std::string& detail) {
    out.items.push_back({name, pass, detail});
    if (!pass) out.all_pass = false;
  };
  std::mt19937_64 rng(cfg.seed);

  // entropy: thermodynamic consistency by finite differences
  {
    const EntropyLaw law = cfg.law();
    double worst = 0.0;
    const double step = 1e-5;
    for (double rho = 0.1; rho <= 10.0; rho += 0.1) {
      const double fd =
          (law.pressure(rho + step) - law.pressure(rho - step)) / (2.0 * step);
      const double exact = rho * law.h_second(rho);
      worst = std::max(worst, std::fabs(fd - exact) / std::max(1.0, std::fabs(exact)));
    }
    std::ostringstream d;
    d << "max relative error " << worst;
    check("entropy.pressure-derivative-consistency", worst <= 1e-6, d.str());
  }

  // entropy: sampled lower-bound certificates
  {
    std::uniform_real_distribution<double> u(1e-3, 10.0);
    for (const double m : {1.0, cfg.m}) {
      const EntropyLaw law = EntropyLaw::power_law(m, cfg.k);
      std::size_t violations = 0;
      for (int i = 0; i < 10'000; ++i) {
        const double rho = u(rng), rb = u(rng);
        const double lhs = law.relative_entropy(rho, rb);
        const double d = rho - rb;
        double rhs;
        if (m == 1.0)
          rhs = 0.5 * law.coefficient() * std::min(1.0 / rho, 1.0 / rb) * d * d;
        else if (m <= 2.0)
          rhs = 0.5 * law.coefficient() * m *
                std::min(std::pow(rho, m - 2.0), std::pow(rb, m - 2.0)) * d * d;
        else
          continue;
        if (lhs - rhs < -1e-12 * (1.0 + lhs + rhs)) ++violations;
      }
      std::ostringstream d;
      d << "m=" << m << " violations=" << violations;
      check("entropy.lower-bound-random", violations == 0, d.str());
      const BoundCertificate cert =
          certify_bounds(law, {0.05, 10.0}, {0.5, 2.0}, 4096);
      std::ostringstream cd;
      cd << "m=" << m << " regime=" << cert.regime
         << " worst_margin=" << cert.worst_margin;
      check("entropy.bound-certificate", cert.passed && cert.worst_margin >= 0.0,
            cd.str());
    }
  }

  // entropy: relative-pressure identity for tail-free 1 < m <= 2
  {
    const double m = (cfg.m > 1.0 && cfg.m <= 2.0) ? cfg.m : 1.5;
    const EntropyLaw law = EntropyLaw::power_law(m, cfg.k);
    std::uniform_real_distribution<double> u(0.05, 8.0);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const double rho = u(rng), rb = u(rng);
      const double lhs = law.relative_pressure(rho, rb);
      const double rhs = (m - 1.0) * law.relative_entropy(rho, rb);
      const double scale =
          std::fabs(law.pressure(rho)) + std::fabs(law.pressure(rb));
      const double tol = 1e-12 * std::max(std::fabs(lhs), std::fabs(rhs)) +
                         1e-14 * (1.0 + scale);
      worst = std::max(worst, std::fabs(lhs - rhs) - tol);
    }
    std::ostringstream d;
    d << "m=" << m << " worst gap beyond tolerance " << worst;
    check("entropy.relative-pressure-identity", worst <= 0.0, d.str());
  }

  // entropy: pressure curvature bound for the steep family
  {
    const EntropyLaw law = EntropyLaw::power_law(3.0, 1.0);
    const double margin = pressure_tail_bound_margin(law, {0.1, 10.0}, 2000);
    std::ostringstream d;
    d << "worst margin " << margin;
    check("entropy.pressure-curvature-bound", margin >= 0.0, d.str());
  }

  const PeriodicGrid g = PeriodicGrid::make(std::min(cfg.dim, 2), 32, 1.0);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  auto random_field = [&](const PeriodicGrid& gg) {
    ScalarField f(gg);
    for (double& v : f.values) v = unit(rng);
    return f;
  };

  // fields: direct vs spectral convolution and symmetry pairing
  {
    const PotentialSpec K = PotentialSpec::wrapped_gaussian(1.0, 0.2);
    const ScalarField kf = K.sample_kernel(g);
    const ScalarField rho = random_field(g);
    const ScalarField sigma = random_field(g);
    const ScalarField a = convolve(kf, rho, ConvolvePath::Direct);
    const ScalarField b = convolve(kf, rho, ConvolvePath::Spectral);
    double rel = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      rel = std::max(rel, std::fabs(a.values[i] - b.values[i]) /
                              std::max(1.0, std::fabs(a.values[i])));
    std::ostringstream d;
    d << "max relative gap " << rel;
    check("fields.convolution-route-equivalence", rel <= 1e-12, d.str());

    const double p1 = inner(convolve(kf, rho), sigma);
    const double p2 = inner(convolve(kf, sigma), rho);
    const double gap = std::fabs(p1 - p2) / std::max(1.0, std::fabs(p1));
    std::ostringstream d2;
    d2 << "pairing gap " << gap;
    check("fields.convolution-symmetry-pairing", gap <= 1e-12, d2.str());
  }

  // fields: discrete integration by parts
  {
    const ScalarField f = random_field(g);
    VectorField F(g);
    for (int a = 0; a < g.dim; ++a)
      for (double& v : F.comp[a]) v = unit(rng);
    double lhs = inner(f, divergence(F));
    const VectorField gf = gradient(f);
    double rhs = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      ScalarField ga(g), Fa(g);
      ga.values.assign(gf.comp[a].begin(), gf.comp[a].end());
      Fa.values.assign(F.comp[a].begin(), F.comp[a].end());
      rhs += inner(ga, Fa);
    }
    const double gap = std::fabs(lhs + rhs) / std::max(1.0, std::fabs(lhs));
    std::ostringstream d;
    d << "skew-adjointness gap " << gap;
    check("fields.gradient-divergence-adjoint", gap <= 1e-12, d.str());
  }

  // decomposition: reconstruction and projection idempotence
  {
    const PeriodicGrid g2 = PeriodicGrid::make(2, 32, 1.0);
    VectorField mom(g2);
    for (int a = 0; a < 2; ++a)
      for (double& v : mom.comp[a]) v = unit(rng) - 1.0;
    const MomentumParts parts = decompose_momentum(mom);
    const VectorField gpsi = gradient(parts.potential);
    double recon = 0.0, dvv = 0.0;
    const ScalarField div_v = divergence(parts.solenoidal);
    dvv = max_abs(div_v);
    for (int a = 0; a < 2; ++a)
      for (std::size_t i = 0; i < mom.comp[a].size(); ++i)
        recon = std::max(recon, std::fabs(parts.solenoidal.comp[a][i] +
                                          parts.mean[a] + gpsi.comp[a][i] -
                                          mom.comp[a][i]));
    // idempotence: decomposing the solenoidal part must return it untouched
    const MomentumParts again = decompose_momentum(parts.solenoidal);
    double idem = std::fabs(again.mean[0]) + std::fabs(again.mean[1]) +
                  max_abs(again.potential);
    for (int a = 0; a < 2; ++a)
      for (std::size_t i = 0; i < mom.comp[a].size(); ++i)
        idem = std::max(idem, std::fabs(again.solenoidal.comp[a][i] -
                                        parts.solenoidal.comp[a][i]));
    std::ostringstream d;
    d << "reconstruction " << recon << ", div " << dvv << ", idempotence " << idem;
    check("decomposition.exactness", recon <= 1e-10 && dvv <= 1e-10, d.str());
    check("decomposition.idempotence", idem <= 1e-12, d.str());
  }

  // pointwise eigenvalue inequality over random draws
  {
    std::uniform_real_distribution<double> um(-2.0, 2.0);
    std::uniform_real_distribution<double> ur(0.1, 10.0);
    double worst = std::numeric_limits<double>::infinity();
    for (int d3 = 2; d3 <= 3; ++d3) {
      for (int i = 0; i < 100'000; ++i) {
        std::array<double, 3> M{um(rng), um(rng), d3 == 3 ? um(rng) : 0.0};
        double H[9] = {0};
        if (d3 == 2) {
          const double a = um(rng), b = um(rng);
          H[0] = a; H[1] = b; H[2] = b; H[3] = -a;
        } else {
          const double a = um(rng), b = um(rng), c = um(rng), e = um(rng), f = um(rng);
          H[0] = a; H[4] = b; H[8] = -a - b;
          H[1] = H[3] = c; H[2] = H[6] = e; H[5] = H[7] = f;
        }
        worst = std::min(worst,
                         algebraic_inequality_margin(M, d3, ur(rng), H));
      }
    }
    std::ostringstream d;
    d << "min margin " << worst;
    check("subsolution.eigenvalue-inequality", worst >= -1e-12, d.str());
  }

  // mean-flow ODE vs closed form
  {
    const std::array<double, 3> v0{1.0, -2.0, 0.0};
    const int steps = 200;
    const double dt = 0.01;
    std::vector<std::array<double, 3>> forcing(steps, {0.0, 0.0, 0.0});
    const auto series = solve_mean_flow_ode(forcing, v0, dt, 2);
    double worst = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double expect = std::exp(-dt * i);
      worst = std::max(worst, std::fabs(series[i][0] - v0[0] * expect));
      worst = std::max(worst, std::fabs(series[i][1] - v0[1] * expect));
    }
    std::ostringstream d;
    d << "max gap vs closed form " << worst;
    check("subsolution.mean-flow-ode", worst <= 1e-12, d.str());
  }

  // interaction-bound witness on random fields
  {
    const PotentialSpec K = PotentialSpec::wrapped_gaussian(0.5, 0.25);
    const ScalarField kf = K.sample_kernel(g);
    const EntropyLaw law = EntropyLaw::power_law(2.0, 1.0);
    double k_l1 = 0.0, w = 1.0;
    for (int a = 0; a < g.dim; ++a) w *= g.dx;
    for (double v : kf.values) k_l1 += std::fabs(v) * w;
    bool ok = true;
    double worst_ratio = 0.0, worst_margin = 0.0;
    for (int i = 0; i < 16; ++i) {
      const ScalarField rho = random_field(g);
      const ScalarField rb = random_field(g);
      const HlsWitness hw = hls_check(rho, rb, kf, law);
      if (!(hw.c_star <= k_l1 / law.coefficient() + 1e-9)) ok = false;
      worst_ratio = std::max(worst_ratio, hw.c_star);
      const double c_k = 0.5 / std::max(k_l1, 1e-12);
      const double ratio = coercivity_check(rho, rb, kf, law, c_k);
      worst_margin =
          std::min(worst_margin, ratio - (1.0 - 0.5 * c_k * hw.c_star));
    }
    std::ostringstream d;
    d << "max c_star " << worst_ratio << " (bound " << k_l1 << "), min coercivity margin "
      << worst_margin;
    check("diagnostics.interaction-bound-witness", ok && worst_margin >= -1e-12,
          d.str());
  }

  return out;
}

SubsolutionOutcome run_subsolution_study(const RunConfig& cfg,
                                         const std::string& outdir) {
  SubsolutionOutcome out;
  const int dim = std::max(cfg.dim, 2);
  const PeriodicGrid g = PeriodicGrid::make(dim, cfg.n, cfg.half_width);
  const double L = cfg.half_width;
  const EntropyLaw law = cfg.law();

  // band-limited study data: density, stream function for the solenoidal
  // part, single-mode potential and its time derivative
  const ScalarField rho = sample(g, [&](const std::array<double, 3>& x) {
    double v = cfg.initial_baseline;
    double shape = 1.0;
    for (int a = 0; a < dim; ++a) shape *= std::cos(M_PI * x[a] / L);
    return v + cfg.initial_amplitude * shape;
  });
  const ScalarField stream = sample(g, [&](const std::array<double, 3>& x) {
    return 0.3 * std::sin(M_PI * x[0] / L) * std::sin(M_PI * x[1] / L);
  });
  // rho_t of the study trajectory: single decaying mode; potential solves the
  // mass constraint (d_t rho + lap Psi = 0) spectrally, and so does psi_t.
  const ScalarField rho_t = sample(g, [&](const std::array<double, 3>& x) {
    double shape = 1.0;
    for (int a = 0; a < dim; ++a) shape *= std::cos(M_PI * x[a] / L);
    return -cfg.initial_amplitude * shape;
  });
  ScalarField neg_rho_t = scaled(-1.0, rho_t);
  const ScalarField psi = spectral::solve_poisson_fd(neg_rho_t);
  // study trajectory has rho_tt = -rho_t (exponential relaxation)
  const ScalarField psi_t = spectral::solve_poisson_fd(rho_t);

  // momentum candidate: rotated stream gradient + mean drift + grad psi
  VectorField mom(g);
  {
    const VectorField gs = gradient(stream);
    const VectorField gpsi = gradient(psi);
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
      mom.comp[0][i] = gs.comp[1][i] + 0.1 + gpsi.comp[0][i];
      mom.comp[1][i] = -gs.comp[0][i] + gpsi.comp[1][i];
    }
    if (dim == 3)
      for (std::size_t i = 0; i < g.cell_count(); ++i) mom.comp[2][i] = 0.0;
  }

  const PotentialSpec Kspec = cfg.interaction.kind == PotentialKind::Zero
                                  ? PotentialSpec::wrapped_gaussian(0.5, 0.25)
                                  : cfg.interaction;
  const PotentialSpec Pspec = cfg.confinement.kind == PotentialKind::Zero
                                  ? PotentialSpec::cosine_mode(0.2, {1, 1, 1})
                                  : cfg.confinement;
  const ScalarField kernel = Kspec.sample_kernel(g);
  const ScalarField phi = Pspec.sample_potential(g);

  SubsolutionFrame frame = build_frame(rho, mom, psi_t, 0.0, law, kernel, phi);

  // decomposition exactness on this candidate
  {
    const VectorField gpsi = gradient(frame.potential);
    double worst = 0.0;
    for (int a = 0; a < dim; ++a)
      for (std::size_t i = 0; i < g.cell_count(); ++i)
        worst = std::max(worst, std::fabs(frame.v.comp[a][i] + frame.mean[a] +
                                          gpsi.comp[a][i] - mom.comp[a][i]));
    worst = std::max(worst, max_abs(divergence(frame.v)));
    out.decomposition_error = worst;
  }

  // residual of the elliptic correction against its defining identity
  {
    VectorField source(g);
    const ScalarField conv = convolve(kernel, rho);
    const VectorField gk = gradient(conv);
    const VectorField gphi = gradient(phi);
    for (int a = 0; a < dim; ++a) {
      for (std::size_t i = 0; i < g.cell_count(); ++i)
        source.comp[a][i] =
            -(gk.comp[a][i] + gphi.comp[a][i]) * rho.values[i] - mom.comp[a][i];
      double mean = 0.0;
      for (double v : source.comp[a]) mean += v;
      mean /= static_cast<double>(g.cell_count());
      for (double& v : source.comp[a]) v -= mean;
    }
    out.correction_residual = correction_residual(frame.correction, source);
    out.correction_trace = frame.correction.max_trace_abs();
  }

  const SymTensorField f_zero(g);
  MarginField probe = x0_margin(frame, f_zero, rho, law);
  out.pi_min = probe.pi_min;

  frame.pi_gauge = probe.pi_min;
  const MarginField at_pi = x0_margin(frame, f_zero, rho, law);
  out.negative_at_pi_min = max_value(at_pi.margin) < 0.0;

  frame.pi_gauge = 0.9 * probe.pi_min;
  const MarginField below = x0_margin(frame, f_zero, rho, law);
  out.violation_below_pi_min = max_value(below.margin) >= 0.0;

  if (!outdir.empty()) {
    fs::create_directories(outdir);
    const std::string path = join(outdir, "admissibility_margin");
    if (cfg.snapshot_format == SnapshotFormat::Binary) {
      write_snapshot_binary(path + ".bin", at_pi.margin, 0.0);
      out.artifacts.push_back(path + ".bin");
    } else {
      write_snapshot_csv(path + ".csv", at_pi.margin, 0.0);
      out.artifacts.push_back(path + ".csv");
    }
  }
  return out;
}

}  // namespace relaxhydro
