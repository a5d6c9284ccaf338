// parabolic.cpp

#include "relaxhydro/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "relaxhydro/convolve.hpp"
#include "relaxhydro/kernels.hpp"

namespace relaxhydro {

namespace {

const kernels::Backend& kn() { return kernels::active(); }

struct Sampled {
  ScalarField kernel;
  ScalarField phi;
  VectorField grad_phi;
  bool interacting = false;
  bool confined = false;

  Sampled(const PeriodicGrid& g, const PotentialSpec& K, const PotentialSpec& Phi,
          double c_k) {
    interacting = c_k != 0.0 && K.kind != PotentialKind::Zero;
    confined = Phi.kind != PotentialKind::Zero;
    if (interacting) kernel = K.sample_kernel(g);
    phi = Phi.sample_potential(g);
    grad_phi = confined ? gradient(phi) : VectorField(g);
  }
};

// flux F = grad p + c_k rho grad(K*rho) + rho grad Phi; rhs = div F.
// Optionally hands back K*rho for reuse by the energy bookkeeping.
ScalarField rhs_impl(const ScalarField& rho, const EntropyLaw& law,
                     const Sampled& s, double c_k, ScalarField* conv_out) {
  const PeriodicGrid& g = rho.grid;
  const std::size_t N = rho.size();

  ScalarField p(g);
  law.fill_pressure(rho.data(), p.values.data(), N);
  VectorField flux = gradient(p);

  if (s.interacting) {
    ScalarField conv = convolve(s.kernel, rho);
    VectorField gk = gradient(conv);
    for (int a = 0; a < g.dim; ++a) {
      kn().mul(gk.comp[a].data(), gk.comp[a].data(), rho.data(), N);
      kn().axpby(flux.comp[a].data(), 1.0, flux.comp[a].data(), c_k,
                 gk.comp[a].data(), N);
    }
    if (conv_out) *conv_out = std::move(conv);
  } else if (conv_out) {
    *conv_out = ScalarField(g);
  }
  if (s.confined) {
    std::vector<double> tmp(N);
    for (int a = 0; a < g.dim; ++a) {
      kn().mul(tmp.data(), rho.data(), s.grad_phi.comp[a].data(), N);
      kn().axpby(flux.comp[a].data(), 1.0, flux.comp[a].data(), 1.0, tmp.data(), N);
    }
  }
  return divergence(flux);
}

double free_energy(const ScalarField& rho, const EntropyLaw& law,
                   const Sampled& s, double c_k, const ScalarField* conv) {
  const std::size_t N = rho.size();
  std::vector<double> h(N);
  law.fill_h(rho.data(), h.data(), N);
  double w = 1.0;
  for (int a = 0; a < rho.grid.dim; ++a) w *= rho.grid.dx;
  double e = w * kn().sum(h.data(), N);
  if (s.interacting && conv != nullptr && conv->size() == N)
    e += 0.5 * c_k * w * kn().dot(conv->data(), rho.data(), N);
  if (s.confined) e += w * kn().dot(rho.data(), s.phi.data(), N);
  return e;
}

// stability bound: 0.2 dx^2 / max p' and 0.2 dx / max |advective velocity|
double stable_dt(const ScalarField& rho, const EntropyLaw& law, const Sampled& s,
                 double c_k) {
  const PeriodicGrid& g = rho.grid;
  const std::size_t N = rho.size();
  std::vector<double> pp(N);
  law.fill_pressure_prime(rho.data(), pp.data(), N);
  const double pmax = kn().max_val(pp.data(), N);
  double dt = pmax > 0.0 ? 0.2 * g.dx * g.dx / pmax
                         : std::numeric_limits<double>::infinity();

  double wmax = 0.0;
  if (s.interacting) {
    ScalarField conv = convolve(s.kernel, rho);
    VectorField gk = gradient(conv);
    std::vector<double> tmp(N);
    for (int a = 0; a < g.dim; ++a) {
      kn().axpby(tmp.data(), c_k, gk.comp[a].data(), 1.0,
                 s.grad_phi.comp[a].data(), N);
      wmax = std::max(wmax, kn().max_abs(tmp.data(), N));
    }
  } else if (s.confined) {
    for (int a = 0; a < g.dim; ++a)
      wmax = std::max(wmax, kn().max_abs(s.grad_phi.comp[a].data(), N));
  }
  if (wmax > 0.0) dt = std::min(dt, 0.2 * g.dx / wmax);
  if (!std::isfinite(dt)) dt = 0.2 * g.dx * g.dx;  // fully degenerate config
  return dt;
}

VectorField velocity_impl(const ScalarField& rho, const EntropyLaw& law,
                          const Sampled& s, double c_k) {
  const PeriodicGrid& g = rho.grid;
  const std::size_t N = rho.size();
  ScalarField hp(g);
  law.fill_h_prime(rho.data(), hp.values.data(), N);
  VectorField u = gradient(hp);
  if (s.interacting) {
    ScalarField conv = convolve(s.kernel, rho);
    VectorField gk = gradient(conv);
    for (int a = 0; a < g.dim; ++a)
      kn().axpby(u.comp[a].data(), -1.0, u.comp[a].data(), -c_k,
                 gk.comp[a].data(), N);
  } else {
    for (int a = 0; a < g.dim; ++a)
      kn().scale(u.comp[a].data(), -1.0, u.comp[a].data(), N);
  }
  if (s.confined)
    for (int a = 0; a < g.dim; ++a)
      kn().axpby(u.comp[a].data(), 1.0, u.comp[a].data(), -1.0,
                 s.grad_phi.comp[a].data(), N);
  return u;
}

// d_t(rho u) by a 3-point nonuniform stencil at t1 (interior nodes).
void add_time_derivative(VectorField& out, const VectorField& f0, double t0,
                         const VectorField& f1, double t1, const VectorField& f2,
                         double t2) {
  const double d01 = t1 - t0, d12 = t2 - t1, d02 = t2 - t0;
  const double c0 = -d12 / (d01 * d02);
  const double c1 = (d12 - d01) / (d01 * d12);
  const double c2 = d01 / (d12 * d02);
  const std::size_t N = f1.comp[0].size();
  for (int a = 0; a < out.grid.dim; ++a)
    for (std::size_t i = 0; i < N; ++i)
      out.comp[a][i] += c0 * f0.comp[a][i] + c1 * f1.comp[a][i] + c2 * f2.comp[a][i];
}

}  // namespace

ScalarField diffusion_rhs(const ScalarField& rho_bar, const EntropyLaw& law,
                          const PotentialSpec& K, const PotentialSpec& Phi,
                          double c_k) {
  if (!(min_value(rho_bar) > 0.0))
    throw std::domain_error("diffusion rhs needs a strictly positive density");
  Sampled s(rho_bar.grid, K, Phi, c_k);
  return rhs_impl(rho_bar, law, s, c_k, nullptr);
}

DiffusionRunResult run_diffusion(const ScalarField& rho0, const EntropyLaw& law,
                                 const PotentialSpec& K, const PotentialSpec& Phi,
                                 double c_k, double t_end, int snapshot_count) {
  if (!(min_value(rho0) > 0.0))
    throw std::invalid_argument("initial density must be strictly positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (snapshot_count < 1) snapshot_count = 1;

  const PeriodicGrid& g = rho0.grid;
  Sampled s(g, K, Phi, c_k);

  DiffusionRunResult result;
  ScalarField rho = rho0;
  double t = 0.0;
  result.snapshots.push_back({rho, 0.0});

  {
    ScalarField conv;
    if (s.interacting) conv = convolve(s.kernel, rho);
    result.energy_times.push_back(0.0);
    result.free_energy.push_back(free_energy(rho, law, s, c_k, s.interacting ? &conv : nullptr));
  }
  if (t_end == 0.0) return result;

  const double snap_dt = t_end / snapshot_count;
  long steps = 0;
  for (int interval = 0; interval < snapshot_count; ++interval) {
    const double target = (interval + 1 == snapshot_count)
                              ? t_end
                              : snap_dt * static_cast<double>(interval + 1);
    const double dt_cap = stable_dt(rho, law, s, c_k);
    const long substeps =
        std::max<long>(1, static_cast<long>(std::ceil((target - t) / dt_cap)));
    const double dt = (target - t) / static_cast<double>(substeps);

    for (long k = 0; k < substeps; ++k) {
      ScalarField conv;
      ScalarField rhs = rhs_impl(rho, law, s, c_k, s.interacting ? &conv : nullptr);
      kn().axpby(rho.values.data(), 1.0, rho.data(), dt, rhs.data(), rho.size());
      ++steps;
      if (!(min_value(rho) > 0.0) || !rho.all_finite()) {
        result.aborted = true;
        result.abort_reason = "density positivity lost";
        result.total_steps = steps;
        return result;
      }
      t += dt;
      ScalarField conv_new;
      if (s.interacting) conv_new = convolve(s.kernel, rho);
      result.energy_times.push_back(t);
      result.free_energy.push_back(
          free_energy(rho, law, s, c_k, s.interacting ? &conv_new : nullptr));
    }
    t = target;
    result.snapshots.push_back({rho, t});
  }
  result.total_steps = steps;
  return result;
}

VectorField equilibrium_velocity(const ScalarField& rho, const EntropyLaw& law,
                                 const PotentialSpec& K, const PotentialSpec& Phi,
                                 double c_k) {
  if (!(min_value(rho) > 0.0))
    throw std::domain_error("equilibrium velocity needs a positive density");
  Sampled s(rho.grid, K, Phi, c_k);
  return velocity_impl(rho, law, s, c_k);
}

LimitVelocity reconstruct_u_bar(const DiffusionState& state, const EntropyLaw& law,
                                const PotentialSpec& K, const PotentialSpec& Phi,
                                double c_k) {
  LimitVelocity lv;
  lv.t = state.t;
  lv.u_bar = equilibrium_velocity(state.rho_bar, law, K, Phi, c_k);
  lv.e_bar = VectorField(state.rho_bar.grid);
  lv.e_bar_one_sided = true;  // no trajectory to difference
  return lv;
}

std::vector<LimitVelocity> reconstruct_limit_velocities(
    const DiffusionRunResult& run, const EntropyLaw& law, const PotentialSpec& K,
    const PotentialSpec& Phi, double c_k) {
  const std::size_t count = run.snapshots.size();
  std::vector<LimitVelocity> out(count);
  if (count == 0) return out;
  const PeriodicGrid& g = run.snapshots.front().rho_bar.grid;
  Sampled s(g, K, Phi, c_k);
  const std::size_t N = g.cell_count();

  // momentum fields rho_bar * u_bar per snapshot
  std::vector<VectorField> mom(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].t = run.snapshots[i].t;
    out[i].u_bar = velocity_impl(run.snapshots[i].rho_bar, law, s, c_k);
    mom[i] = VectorField(g);
    for (int a = 0; a < g.dim; ++a)
      kn().mul(mom[i].comp[a].data(), run.snapshots[i].rho_bar.data(),
               out[i].u_bar.comp[a].data(), N);
  }

  for (std::size_t i = 0; i < count; ++i) {
    VectorField e(g);
    if (count == 1) {
      out[i].e_bar = e;
      out[i].e_bar_one_sided = true;
      continue;
    }
    if (i == 0 || i + 1 == count) {
      const std::size_t a0 = i == 0 ? 0 : count - 2;
      const std::size_t a1 = a0 + 1;
      const double inv = 1.0 / (out[a1].t - out[a0].t);
      for (int a = 0; a < g.dim; ++a)
        kn().axpby(e.comp[a].data(), inv, mom[a1].comp[a].data(), -inv,
                   mom[a0].comp[a].data(), N);
      out[i].e_bar_one_sided = true;
    } else {
      add_time_derivative(e, mom[i - 1], out[i - 1].t, mom[i], out[i].t,
                          mom[i + 1], out[i + 1].t);
    }

    // + div(rho u x u): component b gets sum_a d_a(rho u_a u_b)
    VectorField flux(g);
    std::vector<double> tmp(N);
    for (int b = 0; b < g.dim; ++b) {
      for (int a = 0; a < g.dim; ++a)
        kn().mul(flux.comp[a].data(), mom[i].comp[a].data(),
                 out[i].u_bar.comp[b].data(), N);
      ScalarField db = divergence(flux);
      kn().axpby(e.comp[b].data(), 1.0, e.comp[b].data(), 1.0, db.data(), N);
    }
    out[i].e_bar = std::move(e);
  }
  return out;
}

}  // namespace relaxhydro
