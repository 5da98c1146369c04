#ifndef HYPCHEMO_KS1D_HPP
#define HYPCHEMO_KS1D_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hypchemo/banded.hpp"
#include "hypchemo/mesh.hpp"
#include "hypchemo/model.hpp"

/** @file hypchemo/ks1d.hpp
    @brief Keller-Segel reference scheme: explicit Scharfetter-Gummel drift-diffusion for the cells,
           implicit centred diffusion for the chemical.
*/

namespace hypchemo
{

struct KSState1D
{
  std::vector<double> n, S;

  std::size_t size() const { return n.size(); }
};

/** @brief Scharfetter-Gummel flux J_{i+1/2} between nodes i and i+1.
 *
 *  With sigma = (S_{i+1} - S_i)/dx and beta = alpha1 dx sigma / D_n,
 *  J = alpha1 sigma (n_i - e^{-beta} n_{i+1}) / (1 - e^{-beta}).
 *  Evaluated as (D_n/dx) (B(-beta) n_i - B(beta) n_{i+1}) with the Bernoulli
 *  function B(x) = x/(e^x - 1), which does not overflow for either sign of beta.
 */
inline double sg_flux(double n_i, double n_ip1, double S_i, double S_ip1, double alpha1, double D_n, double dx)
{
  if (!std::isfinite(n_i) || !std::isfinite(n_ip1) || !std::isfinite(S_i) || !std::isfinite(S_ip1))
    throw SolverError("non-finite input to sg_flux");
  const double gradient = (S_ip1 - S_i) / dx;
  const double beta = alpha1 * dx * gradient / D_n;
  if (std::abs(beta) < 1e-8)
    return D_n / dx * (n_i - n_ip1);
  auto bernoulli = [](double x) {
    if (x > 700.0)
      return 0.0;
    return x / std::expm1(x);
  };
  return D_n / dx * (bernoulli(-beta) * n_i - bernoulli(beta) * n_ip1);
}

/** @brief Fluxes J_{k-1/2}, k = 0..Nx+1, with ghost nodes from the flux rule. */
inline std::vector<double> ks_fluxes(const KSState1D & state, const ModelParams & params, const Grid1D & grid,
                                     FluxRule rule = FluxRule::copy)
{
  const int Nx = grid.Nx;
  const auto [n_left, n_right] = ghost_values_1d(state.n, rule, Parity::even);
  const auto [S_left, S_right] = ghost_values_1d(state.S, rule, Parity::even);
  std::vector<double> J(static_cast<std::size_t>(Nx) + 2);
  for (int k = 0; k <= Nx + 1; ++k)
  {
    const double nl = k == 0 ? n_left : state.n[k - 1];
    const double Sl = k == 0 ? S_left : state.S[k - 1];
    const double nr = k == Nx + 1 ? n_right : state.n[k];
    const double Sr = k == Nx + 1 ? S_right : state.S[k];
    J[k] = sg_flux(nl, nr, Sl, Sr, params.alpha1, params.D_n, grid.dx);
  }
  return J;
}

/** @brief Tridiagonal system (1/dt)(S' - S) = D_S (S'_{i-1} - 2 S'_i + S'_{i+1})/dx^2 + n_i with ghosts folded in. */
struct ChemicalDiffusionSystem
{
  std::vector<double> lower, diag, upper, rhs;
};

inline ChemicalDiffusionSystem assemble_chemical_diffusion(const std::vector<double> & S_old,
                                                           const std::vector<double> & n_new,
                                                           const ModelParams & params, const Grid1D & grid,
                                                           double dt, FluxRule rule = FluxRule::copy)
{
  const std::size_t nodes = grid.nodes();
  const double r = dt * params.D_N1 / (grid.dx * grid.dx);
  ChemicalDiffusionSystem sys{std::vector<double>(nodes, -r), std::vector<double>(nodes, 1.0 + 2.0 * r),
                              std::vector<double>(nodes, -r), std::vector<double>(nodes)};
  for (std::size_t i = 0; i < nodes; ++i)
    sys.rhs[i] = S_old[i] + dt * n_new[i];
  sys.lower[0] = 0.0;
  sys.upper[nodes - 1] = 0.0;
  if (rule == FluxRule::copy)
  {
    // S_{-1} = S_1, S_{Nx+1} = S_{Nx-1}
    sys.upper[0] = -2.0 * r;
    sys.lower[nodes - 1] = -2.0 * r;
  }
  else
  {
    // S_{-1} = S_0, S_{Nx+1} = S_{Nx}
    sys.diag[0] = 1.0 + r;
    sys.diag[nodes - 1] = 1.0 + r;
  }
  return sys;
}

/** @brief Default step 0.45 dx^2/(2 D_n). Same clock as wb1d for the usual parameters. */
inline double default_dt_ks(const ModelParams & params, const Grid1D & grid, double safety = 0.45)
{
  return safety * grid.dx * grid.dx / (2.0 * params.D_n);
}

/** @brief One density-then-chemical step of the Keller-Segel scheme. */
inline KSState1D ks_step(const KSState1D & state, const ModelParams & params, const Grid1D & grid, double dt,
                         FluxRule rule = FluxRule::copy)
{
  if (!(dt > 0.0))
    throw ValidationError("ks_step: dt must be positive");
  if (state.n.size() != grid.nodes() || state.S.size() != grid.nodes())
    throw ValidationError("ks_step: state does not match the grid");

  const std::vector<double> J = ks_fluxes(state, params, grid, rule);
  const double ratio = dt / grid.dx;
  KSState1D next;
  next.n.resize(grid.nodes());
  for (std::size_t i = 0; i < grid.nodes(); ++i)
    next.n[i] = state.n[i] - ratio * (J[i + 1] - J[i]);

  const ChemicalDiffusionSystem sys = assemble_chemical_diffusion(state.S, next.n, params, grid, dt, rule);
  next.S = solve_tridiagonal(sys.lower, sys.diag, sys.upper, sys.rhs);
  const double residual = tridiagonal_residual(sys.lower, sys.diag, sys.upper, sys.rhs, next.S);
  if (!(residual <= 1e-10))
    throw SolverError("ks_step: tridiagonal residual " + std::to_string(residual) + " above tolerance");

  for (std::size_t i = 0; i < grid.nodes(); ++i)
    if (!std::isfinite(next.n[i]) || !std::isfinite(next.S[i]))
      throw SolverError("ks_step: non-finite value at node " + std::to_string(i));
  return next;
}

} // namespace hypchemo

#endif // HYPCHEMO_KS1D_HPP
