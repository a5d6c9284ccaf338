// diagnostics.cpp

#include "relaxhydro/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "relaxhydro/convolve.hpp"
#include "relaxhydro/kernels.hpp"

namespace relaxhydro {

namespace {

const kernels::Backend& kn() { return kernels::active(); }

double cell_weight(const PeriodicGrid& g) {
  double w = 1.0;
  for (int a = 0; a < g.dim; ++a) w *= g.dx;
  return w;
}

ScalarField relative_entropy_field(const ScalarField& rho,
                                   const ScalarField& rho_bar,
                                   const EntropyLaw& law) {
  ScalarField out(rho.grid);
  for (std::size_t i = 0; i < rho.size(); ++i)
    out.values[i] = law.relative_entropy(rho.values[i], rho_bar.values[i]);
  return out;
}

}  // namespace

EnergyParts energy_parts(const EulerState& state, const EulerConfig& cfg) {
  const PeriodicGrid& g = state.rho.grid;
  const std::size_t N = state.rho.size();
  const double w = cell_weight(g);
  const double eps = cfg.epsilon;
  EnergyParts e;

  std::vector<double> inv_rho(N), u(N), h(N);
  kn().reciprocal(inv_rho.data(), state.rho.data(), N);
  for (int a = 0; a < g.dim; ++a) {
    kn().mul(u.data(), state.mom.comp[a].data(), inv_rho.data(), N);
    e.kinetic += 0.5 * w * kn().dot(state.mom.comp[a].data(), u.data(), N);
  }
  cfg.law.fill_h(state.rho.data(), h.data(), N);
  e.internal = w * kn().sum(h.data(), N) / eps;
  if (cfg.c_k != 0.0 && cfg.interaction.kind != PotentialKind::Zero) {
    const ScalarField kernel = cfg.interaction.sample_kernel(g);
    const ScalarField conv = convolve(kernel, state.rho);
    e.interaction = 0.5 * cfg.c_k / eps * inner(conv, state.rho);
  }
  if (cfg.confinement.kind != PotentialKind::Zero) {
    const ScalarField phi = cfg.confinement.sample_potential(g);
    e.confinement = inner(state.rho, phi) / eps;
  }
  return e;
}

double total_energy(const EulerState& state, const EulerConfig& cfg) {
  return energy_parts(state, cfg).total();
}

DiagnosticsRecord theta(const EulerState& state, const DiffusionState& limit,
                        const LimitVelocity& limit_velocity,
                        const EulerConfig& cfg) {
  const PeriodicGrid& g = state.rho.grid;
  if (!(limit.rho_bar.grid == g) || !(limit_velocity.u_bar.grid == g))
    throw std::invalid_argument("state and limit solution live on different grids");
  if (!(min_value(limit.rho_bar) > 0.0))
    throw std::domain_error("limit density must be strictly positive");
  const std::size_t N = state.rho.size();
  const double w = cell_weight(g);
  const double eps = cfg.epsilon;

  DiagnosticsRecord r;
  r.t = state.t;
  r.mass = integrate(state.rho);

  // (1/eps) int h(rho | rho_bar)
  const ScalarField hrel = relative_entropy_field(state.rho, limit.rho_bar, cfg.law);
  r.theta_entropy = w * kn().sum(hrel.data(), N) / eps;

  // 1/2 int rho |u - u_bar|^2
  std::vector<double> inv_rho(N), du(N);
  kn().reciprocal(inv_rho.data(), state.rho.data(), N);
  double vgap2 = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    kn().mul(du.data(), state.mom.comp[a].data(), inv_rho.data(), N);
    kn().axpby(du.data(), 1.0, du.data(), -1.0, limit_velocity.u_bar.comp[a].data(), N);
    kn().mul(du.data(), du.data(), du.data(), N);
    vgap2 += w * kn().dot(state.rho.data(), du.data(), N);
  }
  r.theta_kinetic = 0.5 * vgap2;
  r.weighted_velocity_gap = std::sqrt(std::max(vgap2, 0.0));

  // (c_k / 2 eps) int (rho - rho_bar) K*(rho - rho_bar)
  const ScalarField delta = add_scaled(1.0, state.rho, -1.0, limit.rho_bar);
  r.theta_interaction = 0.0;
  if (cfg.c_k != 0.0 && cfg.interaction.kind != PotentialKind::Zero) {
    const ScalarField kernel = cfg.interaction.sample_kernel(g);
    r.theta_interaction = 0.5 * cfg.c_k / eps * inner(convolve(kernel, delta), delta);
  }
  r.theta = r.theta_entropy + r.theta_kinetic + r.theta_interaction;
  r.l2_density_gap = l2_norm(delta);

  const EnergyParts e = energy_parts(state, cfg);
  r.kinetic = e.kinetic;
  r.internal = e.internal;
  r.interaction = e.interaction;
  r.confinement = e.confinement;
  r.e_total = e.total();

  // limit-side free energy, weighted like the damped system's
  {
    std::vector<double> h(N);
    cfg.law.fill_h(limit.rho_bar.data(), h.data(), N);
    double fe = w * kn().sum(h.data(), N);
    if (cfg.c_k != 0.0 && cfg.interaction.kind != PotentialKind::Zero) {
      const ScalarField kernel = cfg.interaction.sample_kernel(g);
      fe += 0.5 * cfg.c_k * inner(convolve(kernel, limit.rho_bar), limit.rho_bar);
    }
    if (cfg.confinement.kind != PotentialKind::Zero)
      fe += inner(limit.rho_bar, cfg.confinement.sample_potential(g));
    r.e_free_bar = fe / eps;
  }
  return r;
}

std::pair<DiffusionState, LimitVelocity> interpolate_limit(
    const std::vector<DiffusionState>& states,
    const std::vector<LimitVelocity>& velocities, double t) {
  if (states.empty() || states.size() != velocities.size())
    throw std::invalid_argument("limit trajectory is empty or misaligned");
  const double t0 = states.front().t;
  const double t1 = states.back().t;
  const double tol = 1e-9 * (1.0 + std::fabs(t1));
  if (t < t0 - tol || t > t1 + tol)
    throw std::invalid_argument("time outside the stored limit trajectory");

  std::size_t hi = 0;
  while (hi + 1 < states.size() && states[hi].t < t) ++hi;
  if (states[hi].t >= t && hi > 0 && states[hi - 1].t >= t) --hi;
  const std::size_t lo = hi > 0 ? hi - 1 : 0;
  if (hi == lo || std::fabs(states[hi].t - states[lo].t) < 1e-300)
    return {states[lo], velocities[lo]};

  const double alpha =
      std::clamp((t - states[lo].t) / (states[hi].t - states[lo].t), 0.0, 1.0);
  const PeriodicGrid& g = states[lo].rho_bar.grid;
  const std::size_t N = g.cell_count();

  DiffusionState s;
  s.t = t;
  s.rho_bar = ScalarField(g);
  kn().axpby(s.rho_bar.values.data(), 1.0 - alpha, states[lo].rho_bar.data(),
             alpha, states[hi].rho_bar.data(), N);

  LimitVelocity v;
  v.t = t;
  v.u_bar = VectorField(g);
  v.e_bar = VectorField(g);
  for (int a = 0; a < g.dim; ++a) {
    kn().axpby(v.u_bar.comp[a].data(), 1.0 - alpha,
               velocities[lo].u_bar.comp[a].data(), alpha,
               velocities[hi].u_bar.comp[a].data(), N);
    kn().axpby(v.e_bar.comp[a].data(), 1.0 - alpha,
               velocities[lo].e_bar.comp[a].data(), alpha,
               velocities[hi].e_bar.comp[a].data(), N);
  }
  v.e_bar_one_sided =
      velocities[lo].e_bar_one_sided || velocities[hi].e_bar_one_sided;
  return {s, v};
}

ResidualReport relative_entropy_residual(
    const EulerRunResult& euler_run,
    const std::vector<DiffusionState>& limit_states,
    const std::vector<LimitVelocity>& limit_velocities, const EulerConfig& cfg,
    double t) {
  if (euler_run.snapshots.empty())
    throw std::invalid_argument("empty trajectory");
  const double tol = 1e-9 * (1.0 + std::fabs(t));

  std::vector<const EulerState*> nodes;
  for (const auto& s : euler_run.snapshots)
    if (s.t <= t + tol) nodes.push_back(&s);
  if (nodes.size() < 2 || std::fabs(nodes.back()->t - t) > tol)
    throw std::invalid_argument("trajectory does not cover the requested time");

  const PeriodicGrid& g = nodes.front()->rho.grid;
  const std::size_t N = g.cell_count();
  const double w = cell_weight(g);
  const double eps = cfg.epsilon;
  const bool interacting =
      cfg.c_k != 0.0 && cfg.interaction.kind != PotentialKind::Zero;
  ScalarField kernel;
  if (interacting) kernel = cfg.interaction.sample_kernel(g);

  struct TermSample {
    double damping = 0, vel_grad = 0, defect = 0, pdil = 0, inter = 0;
  };
  std::vector<double> times(nodes.size());
  std::vector<TermSample> samples(nodes.size());

  std::vector<double> inv_rho(N), wcomp0(N), wcomp1(N), wcomp2(N), tmp(N);
  std::array<std::vector<double>*, 3> wcomp{&wcomp0, &wcomp1, &wcomp2};

  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const EulerState& s = *nodes[k];
    times[k] = s.t;
    auto [lim, lv] = interpolate_limit(limit_states, limit_velocities, s.t);
    TermSample& ts = samples[k];

    kn().reciprocal(inv_rho.data(), s.rho.data(), N);
    for (int a = 0; a < g.dim; ++a) {
      kn().mul(wcomp[a]->data(), s.mom.comp[a].data(), inv_rho.data(), N);
      kn().axpby(wcomp[a]->data(), 1.0, wcomp[a]->data(), -1.0,
                 lv.u_bar.comp[a].data(), N);
    }

    // (1/eps) int rho |u - u_bar|^2
    for (int a = 0; a < g.dim; ++a) {
      kn().mul(tmp.data(), wcomp[a]->data(), wcomp[a]->data(), N);
      ts.damping += w / eps * kn().dot(s.rho.data(), tmp.data(), N);
    }

    // int rho (grad u_bar) : w x w
    for (int b = 0; b < g.dim; ++b) {
      ScalarField ub(g);
      ub.values.assign(lv.u_bar.comp[b].begin(), lv.u_bar.comp[b].end());
      const VectorField gub = gradient(ub);
      for (int a = 0; a < g.dim; ++a) {
        kn().mul(tmp.data(), wcomp[a]->data(), wcomp[b]->data(), N);
        kn().mul(tmp.data(), tmp.data(), gub.comp[a].data(), N);
        ts.vel_grad += w * kn().dot(s.rho.data(), tmp.data(), N);
      }
    }

    // int (rho / rho_bar) e_bar . w
    {
      std::vector<double> ratio(N);
      kn().reciprocal(ratio.data(), lim.rho_bar.data(), N);
      kn().mul(ratio.data(), ratio.data(), s.rho.data(), N);
      for (int a = 0; a < g.dim; ++a) {
        kn().mul(tmp.data(), lv.e_bar.comp[a].data(), wcomp[a]->data(), N);
        ts.defect += w * kn().dot(ratio.data(), tmp.data(), N);
      }
    }

    // (1/eps) int p(rho|rho_bar) div u_bar
    {
      const ScalarField divu = divergence(lv.u_bar);
      double acc = 0.0;
      for (std::size_t i = 0; i < N; ++i)
        acc += cfg.law.relative_pressure(s.rho.values[i], lim.rho_bar.values[i]) *
               divu.values[i];
      ts.pdil = w / eps * acc;
    }

    // (c_k/eps) int (K*(rho-rho_bar)) div((rho-rho_bar) u_bar)
    if (interacting) {
      const ScalarField delta = add_scaled(1.0, s.rho, -1.0, lim.rho_bar);
      const ScalarField conv = convolve(kernel, delta);
      VectorField delta_u(g);
      for (int a = 0; a < g.dim; ++a)
        kn().mul(delta_u.comp[a].data(), delta.data(), lv.u_bar.comp[a].data(), N);
      const ScalarField div_du = divergence(delta_u);
      ts.inter = cfg.c_k / eps * inner(conv, div_du);
    }
  }

  // trapezoid in time
  ResidualReport rep;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double hdt = 0.5 * (times[k + 1] - times[k]);
    rep.damping_term -= hdt * (samples[k].damping + samples[k + 1].damping);
    rep.velocity_gradient_term -= hdt * (samples[k].vel_grad + samples[k + 1].vel_grad);
    rep.defect_coupling_term -= hdt * (samples[k].defect + samples[k + 1].defect);
    rep.pressure_dilation_term -= hdt * (samples[k].pdil + samples[k + 1].pdil);
    rep.interaction_transport_term -= hdt * (samples[k].inter + samples[k + 1].inter);
  }

  {
    auto [lim0, lv0] = interpolate_limit(limit_states, limit_velocities, times.front());
    auto [lim1, lv1] = interpolate_limit(limit_states, limit_velocities, times.back());
    const double th0 = theta(*nodes.front(), lim0, lv0, cfg).theta;
    const double th1 = theta(*nodes.back(), lim1, lv1, cfg).theta;
    rep.lhs = th1 - th0;
  }
  rep.rhs = rep.damping_term + rep.velocity_gradient_term +
            rep.defect_coupling_term + rep.pressure_dilation_term +
            rep.interaction_transport_term;
  rep.residual = std::fabs(rep.lhs - rep.rhs) /
                 std::max({std::fabs(rep.lhs), std::fabs(rep.rhs), 1e-30});
  return rep;
}

HlsWitness hls_check(const ScalarField& rho, const ScalarField& rho_bar,
                     const ScalarField& kernel, const EntropyLaw& law) {
  if (!(min_value(rho_bar) > 0.0))
    throw std::domain_error("reference density must be strictly positive");
  HlsWitness out;
  const ScalarField delta = add_scaled(1.0, rho, -1.0, rho_bar);
  out.lhs = std::fabs(inner(convolve(kernel, delta), delta));
  out.rhs = integrate(relative_entropy_field(rho, rho_bar, law));
  if (out.rhs > 0.0)
    out.c_star = out.lhs / out.rhs;
  else
    out.c_star = out.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return out;
}

double coercivity_check(const ScalarField& rho, const ScalarField& rho_bar,
                        const ScalarField& kernel, const EntropyLaw& law,
                        double c_k) {
  if (c_k < 0.0) throw std::invalid_argument("interaction strength must be >= 0");
  const double h = integrate(relative_entropy_field(rho, rho_bar, law));
  if (!(h > 0.0)) return 1.0;
  const ScalarField delta = add_scaled(1.0, rho, -1.0, rho_bar);
  const double inter = inner(convolve(kernel, delta), delta);
  return (h + 0.5 * c_k * inter) / h;
}

SweepResult convergence_fit(const std::vector<std::pair<double, double>>& sweep) {
  if (sweep.size() < 2)
    throw std::invalid_argument("convergence fit needs at least two points");
  std::vector<std::pair<double, double>> pts = sweep;
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  SweepResult out;
  double sx = 0, sy = 0;
  std::vector<double> xs, ys;
  for (const auto& [eps, sup] : pts) {
    if (!(eps > 0.0)) throw std::invalid_argument("epsilon values must be positive");
    out.epsilons.push_back(eps);
    out.sup_theta.push_back(sup);
    out.constants.push_back(sup / eps);
    xs.push_back(std::log(eps));
    ys.push_back(std::log(std::max(sup, 1e-300)));
    sx += xs.back();
    sy += ys.back();
  }
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n, my = sy / n;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  out.fitted_order = den > 0.0 ? num / den : 0.0;
  for (std::size_t i = 0; i + 1 < out.sup_theta.size(); ++i)
    if (!(out.sup_theta[i + 1] < out.sup_theta[i])) out.monotone = false;
  return out;
}

}  // namespace relaxhydro
