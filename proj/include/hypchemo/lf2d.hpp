#ifndef HYPCHEMO_LF2D_HPP
#define HYPCHEMO_LF2D_HPP

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "hypchemo/mesh.hpp"
#include "hypchemo/model.hpp"

/** @file hypchemo/lf2d.hpp
    @brief Two-dimensional Lax-Friedrichs splitting scheme: conservative transport, then an
           implicit cell-local relaxation/source step.
*/

namespace hypchemo
{

/// (n, q1, q2, N1, Q1x, Q1y) at one node.
using Cell6 = std::array<double, 6>;

struct Wavespeeds
{
  double alpha_x = 0.0;
  double alpha_y = 0.0;
};

/** @brief Physical fluxes F1(U), F2(U) of the transport part. */
inline std::pair<Cell6, Cell6> physical_fluxes(const Cell6 & U, double s)
{
  const double half_s2 = 0.5 * s * s;
  const Cell6 F1{U[1], half_s2 * U[0], 0.0, U[4], half_s2 * U[3], 0.0};
  const Cell6 F2{U[2], 0.0, half_s2 * U[0], U[5], 0.0, half_s2 * U[3]};
  return {F1, F2};
}

/** @brief Spectral radius of the flux Jacobians. The spectrum is {0, 0, +-s/sqrt(2)}, twice. */
inline Wavespeeds max_wavespeeds(const ModelParams & params)
{
  if (params.d != 2)
    throw ValidationError("max_wavespeeds: the Lax-Friedrichs scheme needs d = 2, got d = " + std::to_string(params.d));
  const double alpha = params.s / std::sqrt(2.0);
  return {alpha, alpha};
}

/** @brief dt = cfl / (alpha_x/dx + alpha_y/dy). */
inline double cfl_dt(const ModelParams & params, const Grid2D & grid, double cfl)
{
  if (!(cfl > 0.0 && cfl <= 1.0))
    throw ValidationError("cfl must lie in (0, 1]");
  const Wavespeeds a = max_wavespeeds(params);
  return cfl / (a.alpha_x / grid.dx + a.alpha_y / grid.dy);
}

inline Cell6 cell_at(const MacroState2D & U, int i, int j)
{
  return {U.n(i, j), U.q1(i, j), U.q2(i, j), U.N1(i, j), U.Q1x(i, j), U.Q1y(i, j)};
}

inline void set_cell(MacroState2D & U, int i, int j, const Cell6 & c)
{
  U.n(i, j) = c[0];
  U.q1(i, j) = c[1];
  U.q2(i, j) = c[2];
  U.N1(i, j) = c[3];
  U.Q1x(i, j) = c[4];
  U.Q1y(i, j) = c[5];
}

/** @brief Node value with one index allowed one step outside the grid.
 *
 *  copy: ghost = node next to the boundary node, all components.
 *  reflect: ghost = boundary node, with the normal components of q and Q1 negated.
 */
inline Cell6 cell_with_ghost(const MacroState2D & U, int i, int j, FluxRule rule)
{
  const int Nx = U.Nx(), Ny = U.Ny();
  if (i >= 0 && i <= Nx && j >= 0 && j <= Ny)
    return cell_at(U, i, j);
  if (i < 0 || i > Nx)
  {
    const bool left = i < 0;
    if (rule == FluxRule::copy)
      return cell_at(U, left ? 1 : Nx - 1, j);
    Cell6 c = cell_at(U, left ? 0 : Nx, j);
    c[1] = -c[1];
    c[4] = -c[4];
    return c;
  }
  const bool bottom = j < 0;
  if (rule == FluxRule::copy)
    return cell_at(U, i, bottom ? 1 : Ny - 1);
  Cell6 c = cell_at(U, i, bottom ? 0 : Ny);
  c[2] = -c[2];
  c[5] = -c[5];
  return c;
}

/** @brief Lax-Friedrichs flux (F(U_L) + F(U_R))/2 - alpha/2 (U_R - U_L) in direction 0 (x) or 1 (y). */
inline Cell6 lf_flux(const Cell6 & UL, const Cell6 & UR, double s, double alpha, int direction)
{
  const auto [FxL, FyL] = physical_fluxes(UL, s);
  const auto [FxR, FyR] = physical_fluxes(UR, s);
  const Cell6 & FL = direction == 0 ? FxL : FyL;
  const Cell6 & FR = direction == 0 ? FxR : FyR;
  Cell6 F{};
  for (int c = 0; c < 6; ++c)
    F[c] = 0.5 * (FL[c] + FR[c]) - 0.5 * alpha * (UR[c] - UL[c]);
  return F;
}

/** @brief Conservative transport substep (source term dropped). */
inline MacroState2D lf_conservative_step(const MacroState2D & state, const ModelParams & params,
                                         const Grid2D & grid, double dt, FluxRule rule = FluxRule::reflect)
{
  if (state.Nx() != grid.Nx || state.Ny() != grid.Ny)
    throw ValidationError("lf_conservative_step: state does not match the grid");
  const Wavespeeds a = max_wavespeeds(params);
  const double courant = dt * (a.alpha_x / grid.dx + a.alpha_y / grid.dy);
  if (!(dt > 0.0) || courant > 1.0 + 1e-12)
    throw SolverError("lf_conservative_step: CFL violated, dt (alpha_x/dx + alpha_y/dy) = " + std::to_string(courant));

  MacroState2D next(grid.Nx, grid.Ny);
  const double rx = dt / grid.dx, ry = dt / grid.dy;
  for (int i = 0; i <= grid.Nx; ++i)
    for (int j = 0; j <= grid.Ny; ++j)
    {
      const Cell6 U = cell_at(state, i, j);
      const Cell6 east = lf_flux(U, cell_with_ghost(state, i + 1, j, rule), params.s, a.alpha_x, 0);
      const Cell6 west = lf_flux(cell_with_ghost(state, i - 1, j, rule), U, params.s, a.alpha_x, 0);
      const Cell6 north = lf_flux(U, cell_with_ghost(state, i, j + 1, rule), params.s, a.alpha_y, 1);
      const Cell6 south = lf_flux(cell_with_ghost(state, i, j - 1, rule), U, params.s, a.alpha_y, 1);
      Cell6 out{};
      for (int c = 0; c < 6; ++c)
        out[c] = U[c] - rx * (east[c] - west[c]) - ry * (north[c] - south[c]);
      set_cell(next, i, j, out);
    }
  return next;
}

/** @brief Implicit source substep U = U* + dt R_d(U), solved node by node in closed form.
 *
 *  Order: n unchanged; N1 += dt n; Q1 /= (1 + dt sigma1); then
 *  q = (q* + dt mu2 n alpha1 grad_h N1) / (1 + dt mu1), with the centred gradient of the new N1.
 */
inline MacroState2D source_step(const MacroState2D & state, const ModelParams & params, const Grid2D & grid,
                                double dt, FluxRule rule = FluxRule::reflect)
{
  if (state.Nx() != grid.Nx || state.Ny() != grid.Ny)
    throw ValidationError("source_step: state does not match the grid");
  MacroState2D next = state;
  for (int i = 0; i <= grid.Nx; ++i)
    for (int j = 0; j <= grid.Ny; ++j)
    {
      next.N1(i, j) = state.N1(i, j) + dt * state.n(i, j);
      next.Q1x(i, j) = state.Q1x(i, j) / (1.0 + dt * params.sigma1);
      next.Q1y(i, j) = state.Q1y(i, j) / (1.0 + dt * params.sigma1);
    }

  const double relax = 1.0 + dt * params.mu1;
  for (int i = 0; i <= grid.Nx; ++i)
    for (int j = 0; j <= grid.Ny; ++j)
    {
      const double grad_x =
          (cell_with_ghost(next, i + 1, j, rule)[3] - cell_with_ghost(next, i - 1, j, rule)[3]) / (2.0 * grid.dx);
      const double grad_y =
          (cell_with_ghost(next, i, j + 1, rule)[3] - cell_with_ghost(next, i, j - 1, rule)[3]) / (2.0 * grid.dy);
      const double drive = dt * params.mu2 * next.n(i, j) * params.alpha1;
      next.q1(i, j) = (state.q1(i, j) + drive * grad_x) / relax;
      next.q2(i, j) = (state.q2(i, j) + drive * grad_y) / relax;
    }
  return next;
}

/** @brief Full splitting step: transport, then source. */
inline MacroState2D lf2d_step(const MacroState2D & state, const ModelParams & params, const Grid2D & grid, double dt,
                              FluxRule rule = FluxRule::reflect)
{
  MacroState2D out = source_step(lf_conservative_step(state, params, grid, dt, rule), params, grid, dt, rule);
  for (double value : out.n.values())
    if (!std::isfinite(value))
      throw SolverError("lf2d_step: non-finite density");
  return out;
}

} // namespace hypchemo

#endif // HYPCHEMO_LF2D_HPP
