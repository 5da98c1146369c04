#ifndef HYPCHEMO_KINETIC1D_HPP
#define HYPCHEMO_KINETIC1D_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hypchemo/mesh.hpp"
#include "hypchemo/model.hpp"

/** @file hypchemo/kinetic1d.hpp
    @brief Two-velocity kinetic model (velocities -s and +s) for cells f and chemical g.

    Velocity integrals are two-term sums. Cells turn with
      L0(f) = mu0 (F_{n,u} - f),
      L1(f) = mu1 (n/2 - f) - (mu2/s^2) (q/2 - v f) a,   a = alpha1 dN1/dx,
    scaled as (1/eps_k) L0 + L1; the chemical turns with l(g) = sigma1 (N1/2 - g) and is
    produced at rate n/2 per velocity.
*/

namespace hypchemo
{

struct KineticState1D
{
  std::vector<double> f_plus, f_minus, g_plus, g_minus;

  KineticState1D() = default;
  explicit KineticState1D(std::size_t nodes)
    : f_plus(nodes, 0.0), f_minus(nodes, 0.0), g_plus(nodes, 0.0), g_minus(nodes, 0.0)
  {}

  std::size_t size() const { return f_plus.size(); }
};

/** @brief F_{n,u}(+-s) = (n +- q/s)/2. */
inline std::pair<double, double> equilibrium(double n, double q, double s)
{
  detail::require_positive(s, "s");
  return {0.5 * (n + q / s), 0.5 * (n - q / s)};
}

inline MacroState1D moments(const KineticState1D & k, double s)
{
  MacroState1D m(k.size());
  for (std::size_t i = 0; i < k.size(); ++i)
  {
    m.n[i] = k.f_plus[i] + k.f_minus[i];
    m.q[i] = s * (k.f_plus[i] - k.f_minus[i]);
    m.N1[i] = k.g_plus[i] + k.g_minus[i];
    m.Q1[i] = s * (k.g_plus[i] - k.g_minus[i]);
  }
  return m;
}

/** @brief Local equilibrium of the macroscopic state, for both species. */
inline KineticState1D from_moments(const MacroState1D & m, double s)
{
  KineticState1D k(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
  {
    std::tie(k.f_plus[i], k.f_minus[i]) = equilibrium(m.n[i], m.q[i], s);
    std::tie(k.g_plus[i], k.g_minus[i]) = equilibrium(m.N1[i], m.Q1[i], s);
  }
  return k;
}

/** @brief a_i = alpha1 (N1_{i+1} - N1_{i-1}) / (2 dx) with ghosts from the flux rule. */
inline std::vector<double> chemotactic_drive(const std::vector<double> & N1, const ModelParams & params,
                                             const Grid1D & grid, FluxRule rule = FluxRule::copy)
{
  const auto [left, right] = ghost_values_1d(N1, rule, Parity::even);
  const int Nx = grid.Nx;
  std::vector<double> a(N1.size());
  for (int i = 0; i <= Nx; ++i)
  {
    const double lo = i == 0 ? left : N1[i - 1];
    const double hi = i == Nx ? right : N1[i + 1];
    a[i] = params.alpha1 * (hi - lo) / (2.0 * grid.dx);
  }
  return a;
}

/** @brief Right-hand side of the collision/source terms for (f+, f-, g+, g-). */
inline std::array<std::vector<double>, 4> collision_rhs(const KineticState1D & k, const ModelParams & params,
                                                        const Grid1D & grid, FluxRule rule = FluxRule::copy)
{
  const double s = params.s;
  const MacroState1D m = moments(k, s);
  const std::vector<double> a = chemotactic_drive(m.N1, params, grid, rule);
  const double relax = params.mu0 / params.eps_k;
  const double drift = params.mu2 / (s * s);

  std::array<std::vector<double>, 4> rhs;
  for (auto & r : rhs)
    r.assign(k.size(), 0.0);
  for (std::size_t i = 0; i < k.size(); ++i)
  {
    const auto [Fp, Fm] = equilibrium(m.n[i], m.q[i], s);
    rhs[0][i] = relax * (Fp - k.f_plus[i]) + params.mu1 * (0.5 * m.n[i] - k.f_plus[i]) -
                drift * (0.5 * m.q[i] - s * k.f_plus[i]) * a[i];
    rhs[1][i] = relax * (Fm - k.f_minus[i]) + params.mu1 * (0.5 * m.n[i] - k.f_minus[i]) -
                drift * (0.5 * m.q[i] + s * k.f_minus[i]) * a[i];
    rhs[2][i] = params.sigma1 * (0.5 * m.N1[i] - k.g_plus[i]) + 0.5 * m.n[i];
    rhs[3][i] = params.sigma1 * (0.5 * m.N1[i] - k.g_minus[i]) + 0.5 * m.n[i];
  }
  return rhs;
}

/** @brief Upwind transport over dt: +s components take the left neighbour, -s the right one.
 *
 *  Ghosts: copy uses node 1 / Nx-1; reflect sends the outgoing component back as the incoming one.
 */
inline KineticState1D kinetic_transport(const KineticState1D & k, double s, const Grid1D & grid, double dt,
                                        FluxRule rule = FluxRule::copy)
{
  const double nu = s * dt / grid.dx;
  if (!(dt > 0.0) || nu > 1.0 + 1e-12)
    throw SolverError("kinetic_transport: CFL violated, s dt / dx = " + std::to_string(nu));
  const int Nx = grid.Nx;
  KineticState1D out(k.size());
  auto advect = [&](const std::vector<double> & plus, const std::vector<double> & minus, std::vector<double> & plus_out,
                    std::vector<double> & minus_out) {
    const double plus_ghost = rule == FluxRule::copy ? plus[1] : minus[0];
    const double minus_ghost = rule == FluxRule::copy ? minus[Nx - 1] : plus[Nx];
    for (int i = 0; i <= Nx; ++i)
    {
      const double upstream_plus = i == 0 ? plus_ghost : plus[i - 1];
      const double upstream_minus = i == Nx ? minus_ghost : minus[i + 1];
      plus_out[i] = plus[i] - nu * (plus[i] - upstream_plus);
      minus_out[i] = minus[i] - nu * (minus[i] - upstream_minus);
    }
  };
  advect(k.f_plus, k.f_minus, out.f_plus, out.f_minus);
  advect(k.g_plus, k.g_minus, out.g_plus, out.g_minus);
  return out;
}

/** @brief Collision substep: backward Euler in the mu0/eps_k and sigma1 relaxations, forward Euler elsewhere.
 *
 *  The implicit relaxations target the equilibria of the post-collision moments,
 *  which are known in closed form because L0 and l conserve them.
 */
inline KineticState1D kinetic_collide(const KineticState1D & k, const ModelParams & params, const Grid1D & grid,
                                      double dt, FluxRule rule = FluxRule::copy)
{
  const double s = params.s;
  const MacroState1D m = moments(k, s);
  const std::vector<double> a = chemotactic_drive(m.N1, params, grid, rule);
  const double relax = dt * params.mu0 / params.eps_k;
  const double drift = params.mu2 / (s * s);
  const double chem = dt * params.sigma1;

  KineticState1D out(k.size());
  for (std::size_t i = 0; i < k.size(); ++i)
  {
    const double explicit_plus =
        params.mu1 * (0.5 * m.n[i] - k.f_plus[i]) - drift * (0.5 * m.q[i] - s * k.f_plus[i]) * a[i];
    const double explicit_minus =
        params.mu1 * (0.5 * m.n[i] - k.f_minus[i]) - drift * (0.5 * m.q[i] + s * k.f_minus[i]) * a[i];
    const double star_plus = k.f_plus[i] + dt * explicit_plus;
    const double star_minus = k.f_minus[i] + dt * explicit_minus;
    // L0 conserves n and q, so the new equilibrium is that of the explicit update.
    const auto [Fp, Fm] = equilibrium(star_plus + star_minus, s * (star_plus - star_minus), s);
    out.f_plus[i] = (star_plus + relax * Fp) / (1.0 + relax);
    out.f_minus[i] = (star_minus + relax * Fm) / (1.0 + relax);

    const double N1_new = m.N1[i] + dt * m.n[i];
    out.g_plus[i] = (k.g_plus[i] + chem * 0.5 * N1_new + 0.5 * dt * m.n[i]) / (1.0 + chem);
    out.g_minus[i] = (k.g_minus[i] + chem * 0.5 * N1_new + 0.5 * dt * m.n[i]) / (1.0 + chem);
  }
  return out;
}

/** @brief dt = min(0.45 dx^2/(2 max(D_n, D_N1)), cfl dx/s, cfl/mu1). */
inline double default_dt_kinetic(const ModelParams & params, const Grid1D & grid, double cfl = 0.9)
{
  const double parabolic = 0.45 * grid.dx * grid.dx / (2.0 * std::max(params.D_n, params.D_N1));
  return std::min({parabolic, cfl * grid.dx / params.s, cfl / params.mu1});
}

/** @brief Transport then collision. */
inline KineticState1D kinetic_step(const KineticState1D & k, const ModelParams & params, const Grid1D & grid,
                                   double dt, FluxRule rule = FluxRule::copy)
{
  if (k.size() != grid.nodes())
    throw ValidationError("kinetic_step: state does not match the grid");
  KineticState1D out = kinetic_collide(kinetic_transport(k, params.s, grid, dt, rule), params, grid, dt, rule);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!std::isfinite(out.f_plus[i]) || !std::isfinite(out.f_minus[i]) || !std::isfinite(out.g_plus[i]) ||
        !std::isfinite(out.g_minus[i]))
      throw SolverError("kinetic_step: non-finite value at node " + std::to_string(i));
  return out;
}

} // namespace hypchemo

#endif // HYPCHEMO_KINETIC1D_HPP
