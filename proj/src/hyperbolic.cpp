// hyperbolic.cpp

#include "relaxhydro/hyperbolic.hpp"

#include <algorithm>
#include <cmath>

#include "relaxhydro/convolve.hpp"
#include "relaxhydro/kernels.hpp"

namespace relaxhydro {

namespace {

const kernels::Backend& kn() { return kernels::active(); }

struct RunContext {
  const EulerConfig& cfg;
  ScalarField kernel;       // K on the offset lattice (valid iff interacting)
  ScalarField phi;          // confinement samples
  VectorField grad_phi;
  bool interacting = false;
  bool confined = false;
  double cell_weight = 1.0;  // dx^dim

  explicit RunContext(const EulerConfig& c, const PeriodicGrid& g) : cfg(c) {
    interacting = c.c_k != 0.0 && c.interaction.kind != PotentialKind::Zero;
    confined = c.confinement.kind != PotentialKind::Zero;
    if (interacting) kernel = c.interaction.sample_kernel(g);
    phi = c.confinement.sample_potential(g);
    grad_phi = confined ? gradient(phi) : VectorField(g);
    cell_weight = 1.0;
    for (int a = 0; a < g.dim; ++a) cell_weight *= g.dx;
  }
};

void require_valid_state(const EulerState& state) {
  if (state.rho.size() == 0) throw std::invalid_argument("empty state");
  if (!(state.rho.grid == state.mom.grid))
    throw std::invalid_argument("density and momentum grids differ");
}

// |u_a| + sqrt(p'(rho)/eps) maxima per axis.
std::array<double, 3> axis_speed_maxima(const EulerState& state,
                                        const EulerConfig& cfg) {
  const std::size_t n = state.rho.size();
  std::vector<double> c2(n), speed(n);
  cfg.law.fill_pressure_prime(state.rho.data(), c2.data(), n);
  kn().scale(c2.data(), 1.0 / cfg.epsilon, c2.data(), n);
  std::array<double, 3> smax{0.0, 0.0, 0.0};
  for (int a = 0; a < state.rho.grid.dim; ++a) {
    kn().wave_speed(speed.data(), state.mom.comp[a].data(), state.rho.data(),
                    c2.data(), n);
    smax[a] = kn().max_val(speed.data(), n);
  }
  return smax;
}

// Unsplit Rusanov update of the flux terms; throws RunAbort on positivity
// loss. When central_out is given it also receives the update with the
// dissipative flux part switched off (used to put the scheme's viscous
// energy drain on the correct side of the energy ledger).
EulerState flux_update(const EulerState& state, const EulerConfig& cfg,
                       double dt, EulerState* central_out = nullptr) {
  const PeriodicGrid& g = state.rho.grid;
  const std::size_t N = state.rho.size();
  const std::size_t n = static_cast<std::size_t>(g.n);
  const int d = g.dim;
  const double lambda = dt / g.dx;

  std::vector<double> inv_rho(N), p_eps(N), c2(N);
  kn().reciprocal(inv_rho.data(), state.rho.data(), N);
  cfg.law.fill_pressure(state.rho.data(), p_eps.data(), N);
  kn().scale(p_eps.data(), 1.0 / cfg.epsilon, p_eps.data(), N);
  cfg.law.fill_pressure_prime(state.rho.data(), c2.data(), N);
  kn().scale(c2.data(), 1.0 / cfg.epsilon, c2.data(), N);

  EulerState out;
  out.rho = state.rho;
  out.mom = state.mom;
  out.t = state.t;
  if (central_out != nullptr) *central_out = out;

  std::vector<double> zero_speed;
  if (central_out != nullptr) zero_speed.assign(N, 0.0);

  std::vector<double> u_axis(N), speed(N), flux(N);
  for (int a = 0; a < d; ++a) {
    kn().mul(u_axis.data(), state.mom.comp[a].data(), inv_rho.data(), N);
    kn().wave_speed(speed.data(), state.mom.comp[a].data(), state.rho.data(),
                    c2.data(), N);

    // conserved components: rho with flux m_a, then each momentum component
    // with flux m_b u_a (+ p/eps on the diagonal).
    for (int q = -1; q < d; ++q) {
      const double* qv;
      const double* fv;
      if (q < 0) {
        qv = state.rho.data();
        fv = state.mom.comp[a].data();
      } else {
        kn().mul(flux.data(), state.mom.comp[q].data(), u_axis.data(), N);
        if (q == a)
          kn().axpby(flux.data(), 1.0, flux.data(), 1.0, p_eps.data(), N);
        qv = state.mom.comp[q].data();
        fv = flux.data();
      }
      for (int pass = 0; pass < (central_out != nullptr ? 2 : 1); ++pass) {
        EulerState& target = pass == 0 ? out : *central_out;
        double* acc = q < 0 ? target.rho.data() : target.mom.comp[q].data();
        const double* sp = pass == 0 ? speed.data() : zero_speed.data();
        if (a == 0) {
          for (std::size_t row = 0; row < N; row += n)
            kn().rusanov_line(acc + row, qv + row, fv + row, sp + row, n, lambda);
        } else {
          detail::for_each_axis_slice(
              g, a,
              [&](std::size_t off, std::size_t mo, std::size_t po,
                  std::size_t len) {
                kn().rusanov_planes(acc + off, qv + mo, qv + off, qv + po,
                                    fv + mo, fv + off, fv + po, sp + mo,
                                    sp + off, sp + po, len, lambda);
              });
        }
      }
    }
  }

  if (!(kn().min_val(out.rho.data(), N) > 0.0))
    throw RunAbort("flux step produced a nonpositive density");
  return out;
}

// Damping + frozen forces; optionally accumulates the damping work
//   (dt/eps) * dx^d * sum rho u_new . (u_old + u_new)/2
// which is the exact kinetic-energy drain of the semi-implicit rule.
void source_update(EulerState& state, const RunContext& ctx, double dt,
                   double* damping_work, ScalarField* conv_out) {
  const std::size_t N = state.rho.size();
  const double gamma = dt / ctx.cfg.epsilon;
  const int d = state.rho.grid.dim;

  VectorField force(state.rho.grid);
  if (ctx.interacting) {
    ScalarField conv = convolve(ctx.kernel, state.rho);
    VectorField gk = gradient(conv);
    for (int a = 0; a < d; ++a)
      kn().axpby(force.comp[a].data(), ctx.cfg.c_k, gk.comp[a].data(), 1.0,
                 ctx.grad_phi.comp[a].data(), N);
    if (conv_out) *conv_out = std::move(conv);
  } else {
    if (ctx.confined) force = ctx.grad_phi;
    if (conv_out) *conv_out = ScalarField(state.rho.grid);
  }

  std::vector<double> m_new(N), tmp(N);
  std::vector<double> inv_rho;
  if (damping_work) {
    inv_rho.resize(N);
    kn().reciprocal(inv_rho.data(), state.rho.data(), N);
  }
  for (int a = 0; a < d; ++a) {
    double* m_old = state.mom.comp[a].data();
    kn().damped_update(m_new.data(), m_old, state.rho.data(),
                       force.comp[a].data(), N, gamma);
    if (damping_work) {
      kn().axpby(tmp.data(), 0.5, m_old, 0.5, m_new.data(), N);
      kn().mul(tmp.data(), tmp.data(), m_new.data(), N);
      kn().mul(tmp.data(), tmp.data(), inv_rho.data(), N);
      *damping_work += gamma * ctx.cell_weight * kn().sum(tmp.data(), N);
    }
    std::copy(m_new.begin(), m_new.end(), state.mom.comp[a].begin());
  }
}

struct EnergySplit {
  double kinetic = 0, internal = 0, interaction = 0, confinement = 0;
  double total() const { return kinetic + internal + interaction + confinement; }
};

EnergySplit energy_split(const EulerState& state, const RunContext& ctx,
                         const ScalarField* conv) {
  const std::size_t N = state.rho.size();
  const double w = ctx.cell_weight;
  const double eps = ctx.cfg.epsilon;
  EnergySplit e;

  std::vector<double> inv_rho(N), u(N), h(N);
  kn().reciprocal(inv_rho.data(), state.rho.data(), N);
  for (int a = 0; a < state.rho.grid.dim; ++a) {
    kn().mul(u.data(), state.mom.comp[a].data(), inv_rho.data(), N);
    e.kinetic += 0.5 * w * kn().dot(state.mom.comp[a].data(), u.data(), N);
  }
  ctx.cfg.law.fill_h(state.rho.data(), h.data(), N);
  e.internal = w * kn().sum(h.data(), N) / eps;
  if (ctx.interacting && conv != nullptr && conv->size() == N)
    e.interaction =
        0.5 * ctx.cfg.c_k / eps * w * kn().dot(conv->data(), state.rho.data(), N);
  if (ctx.confined)
    e.confinement = w * kn().dot(state.rho.data(), ctx.phi.data(), N) / eps;
  return e;
}

DiagnosticsRecord make_record(long step, double t, double dt,
                              const EulerState& state, const EnergySplit& e,
                              double residual) {
  DiagnosticsRecord r;
  r.step = step;
  r.t = t;
  r.dt = dt;
  r.mass = integrate(state.rho);
  r.kinetic = e.kinetic;
  r.internal = e.internal;
  r.interaction = e.interaction;
  r.confinement = e.confinement;
  r.e_total = e.total();
  r.dissipation_residual = residual;
  return r;
}

}  // namespace

double max_wave_speed(const EulerState& state, const EulerConfig& cfg) {
  require_valid_state(state);
  if (!(kn().min_val(state.rho.data(), state.rho.size()) > 0.0))
    throw std::domain_error("wave speed needs strictly positive density");
  const auto smax = axis_speed_maxima(state, cfg);
  double m = 0.0;
  for (int a = 0; a < state.rho.grid.dim; ++a) m = std::max(m, smax[a]);
  return m;
}

EulerState flux_step(const EulerState& state, const EulerConfig& cfg, double dt) {
  require_valid_state(state);
  if (!(dt >= 0.0)) throw std::invalid_argument("dt must be nonnegative");
  const double smax = max_wave_speed(state, cfg);
  if (smax > 0.0 && dt > cfg.cfl * state.rho.grid.dx / smax * (1.0 + 1e-9))
    throw std::invalid_argument("flux step violates the CFL bound");
  return flux_update(state, cfg, dt);
}

EulerState source_step(const EulerState& state, const EulerConfig& cfg,
                       double dt) {
  require_valid_state(state);
  if (!(dt >= 0.0)) throw std::invalid_argument("dt must be nonnegative");
  RunContext ctx(cfg, state.rho.grid);
  EulerState out = state;
  source_update(out, ctx, dt, nullptr, nullptr);
  return out;
}

EulerRunResult run_euler(const EulerConfig& cfg, const ScalarField& rho0,
                         const VectorField& u0,
                         const std::vector<EulerObserver>& observers) {
  if (!(rho0.grid == u0.grid))
    throw std::invalid_argument("initial fields live on different grids");
  if (!(min_value(rho0) >= cfg.rho_floor))
    throw std::invalid_argument(
        "initial density must sit above the configured floor");
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0))
    throw std::invalid_argument("cfl must lie in (0, 1]");

  const PeriodicGrid& g = rho0.grid;
  RunContext ctx(cfg, g);

  EulerState state;
  state.rho = rho0;
  state.mom = VectorField(g);
  for (int a = 0; a < g.dim; ++a)
    kn().mul(state.mom.comp[a].data(), rho0.data(), u0.comp[a].data(),
             rho0.size());
  state.t = 0.0;

  EulerRunResult result;
  ScalarField conv0;
  if (ctx.interacting) conv0 = convolve(ctx.kernel, state.rho);
  EnergySplit e0 = energy_split(state, ctx, &conv0);
  DiagnosticsRecord row0 = make_record(0, 0.0, 0.0, state, e0, 0.0);
  result.steps.push_back(row0);
  result.snapshots.push_back(state);
  for (const auto& obs : observers) obs(state, row0);

  double e_prev = e0.total();
  long step = 0;
  double t = 0.0;
  while (t < cfg.t_end && step < cfg.max_steps) {
    const auto smax = axis_speed_maxima(state, cfg);
    double speed_sum = 0.0;
    for (int a = 0; a < g.dim; ++a) speed_sum += smax[a];
    double dt = 0.5 * cfg.epsilon;
    if (speed_sum > 0.0) dt = std::min(dt, cfg.cfl * g.dx / speed_sum);
    dt = std::min(dt, cfg.t_end - t);
    if (!(dt > 0.0)) break;

    const EulerState last_valid = state;
    double damping_work = 0.0;
    double viscous_drain = 0.0;
    ScalarField conv_final;
    try {
      source_update(state, ctx, 0.5 * dt, &damping_work, nullptr);
      EulerState central;
      state = flux_update(state, cfg, dt, &central);
      // exact energy effect of the dissipative flux part: the scheme's own
      // discrete energy law drains it alongside the damping term
      if (min_value(central.rho) > 0.0) {
        ScalarField cr, cc;
        if (ctx.interacting) {
          cr = convolve(ctx.kernel, state.rho);
          cc = convolve(ctx.kernel, central.rho);
        }
        viscous_drain =
            energy_split(central, ctx, ctx.interacting ? &cc : nullptr).total() -
            energy_split(state, ctx, ctx.interacting ? &cr : nullptr).total();
      }
      source_update(state, ctx, 0.5 * dt, &damping_work, &conv_final);
      const double rho_min = min_value(state.rho);
      if (!(rho_min >= cfg.rho_floor))
        throw RunAbort("density fell below the configured floor");
      if (!state.rho.all_finite() || !state.mom.all_finite())
        throw RunAbort("state left the finite range");
    } catch (const RunAbort& abort) {
      result.aborted = true;
      result.abort_reason = abort.what();
      result.snapshots.push_back(last_valid);
      break;
    }

    ++step;
    t += dt;
    state.t = t;

    const ScalarField* conv_ptr = ctx.interacting ? &conv_final : nullptr;
    const EnergySplit e = energy_split(state, ctx, conv_ptr);
    const double residual =
        std::fabs(e.total() - e_prev + damping_work + viscous_drain);
    DiagnosticsRecord row = make_record(step, t, dt, state, e, residual);
    e_prev = e.total();
    result.steps.push_back(row);
    const bool final = !(t < cfg.t_end);
    if (step % cfg.snapshot_stride == 0 || final) result.snapshots.push_back(state);
    for (const auto& obs : observers) obs(state, row);
  }
  result.total_steps = step;
  return result;
}

}  // namespace relaxhydro
