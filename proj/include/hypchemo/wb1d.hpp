#ifndef HYPCHEMO_WB1D_HPP
#define HYPCHEMO_WB1D_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hypchemo/banded.hpp"
#include "hypchemo/mesh.hpp"
#include "hypchemo/model.hpp"

/** @file hypchemo/wb1d.hpp
    @brief One-dimensional well-balanced, asymptotic-preserving scheme for the hyperbolic chemotaxis system.

    The system is written in the diagonal variables
      v = (n + eps q)/2,  w = (n - eps q)/2,  V = (N1 + eps Q1)/2,  W = (N1 - eps Q1)/2,
    with eps = 1/s. Interface fluxes come from the exact stationary solution on each
    cell [x_{i-1}, x_i]. The cell part is explicit in the interface flux f and implicit
    in the local relaxation; the chemical part is fully implicit and solved as one
    banded system per step. As eps -> 0 the scheme reduces to the Scharfetter-Gummel
    discretisation in ks1d.hpp.
*/

namespace hypchemo
{

/** @brief Diagonal representation of a MacroState1D. */
struct DiagonalState1D
{
  std::vector<double> v, w, V, W;

  std::size_t size() const { return v.size(); }
};

inline DiagonalState1D to_diagonal(const MacroState1D & state, double eps)
{
  detail::require_positive(eps, "eps");
  const std::size_t nodes = state.size();
  DiagonalState1D diag{std::vector<double>(nodes), std::vector<double>(nodes), std::vector<double>(nodes),
                       std::vector<double>(nodes)};
  for (std::size_t i = 0; i < nodes; ++i)
  {
    diag.v[i] = 0.5 * (state.n[i] + eps * state.q[i]);
    diag.w[i] = 0.5 * (state.n[i] - eps * state.q[i]);
    diag.V[i] = 0.5 * (state.N1[i] + eps * state.Q1[i]);
    diag.W[i] = 0.5 * (state.N1[i] - eps * state.Q1[i]);
  }
  return diag;
}

inline MacroState1D from_diagonal(const DiagonalState1D & diag, double eps)
{
  detail::require_positive(eps, "eps");
  MacroState1D state(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i)
  {
    state.n[i] = diag.v[i] + diag.w[i];
    state.q[i] = (diag.v[i] - diag.w[i]) / eps;
    state.N1[i] = diag.V[i] + diag.W[i];
    state.Q1[i] = (diag.V[i] - diag.W[i]) / eps;
  }
  return state;
}

namespace detail
{
  /// Exponential form of the cell flux without the a -> 0 branch.
  /// For a dx < 0 numerator and denominator are multiplied by exp(a dx) so nothing overflows.
  inline double cell_flux_exponential(double v_left, double w_right, double a, double eps, double D_n, double dx)
  {
    const double z = a * dx;
    if (z >= 0.0)
    {
      const double e = std::exp(-z);
      const double one_minus_e = -std::expm1(-z);
      const double numerator = 2.0 * eps * a * D_n * ((v_left - w_right) + one_minus_e * w_right);
      const double denominator = eps * a * (1.0 + e) + one_minus_e;
      return numerator / denominator;
    }
    const double g = std::exp(z);           // = 1/e, in (0, 1)
    const double g_minus_one = std::expm1(z);
    const double numerator = 2.0 * eps * a * D_n * ((v_left - w_right) + g_minus_one * v_left);
    const double denominator = eps * a * (1.0 + g) + g_minus_one;
    return numerator / denominator;
  }

  inline void require_finite(double value, const char * what)
  {
    if (!std::isfinite(value))
      throw SolverError(std::string("non-finite input to ") + what);
  }
}

/// |a dx| below this switches the cell flux to its a -> 0 limit.
inline constexpr double flux_limit_threshold = 1e-8;

/** @brief Cell interface flux f_{i-1/2} from v_{i-1}, w_i and the slope a_{i-1/2}.
 *
 *  f = 2 eps a D_n (v - e^{-a dx} w) / (eps a (1 + e^{-a dx}) - (e^{-a dx} - 1)),
 *  and 2 eps D_n (v - w) / (2 eps + dx) when |a dx| < 1e-8.
 */
inline double interface_flux_f(double v_left, double w_right, double a, double eps, double D_n, double dx)
{
  detail::require_finite(v_left, "interface_flux_f");
  detail::require_finite(w_right, "interface_flux_f");
  detail::require_finite(a, "interface_flux_f");
  if (std::abs(a * dx) < flux_limit_threshold)
    return 2.0 * eps * D_n * (v_left - w_right) / (2.0 * eps + dx);
  return detail::cell_flux_exponential(v_left, w_right, a, eps, D_n, dx);
}

/// Coefficient 2 eps D / (2 eps D + dx) of the chemical interface flux.
inline double chemical_flux_coefficient(double eps, double D_N1, double dx)
{
  return 2.0 * eps * D_N1 / (2.0 * eps * D_N1 + dx);
}

/** @brief Chemical interface flux F_{i-1/2} = 2 eps D / (2 eps D + dx) (V_{i-1} - W_i). */
inline double interface_flux_F(double V_left, double W_right, double eps, double D_N1, double dx)
{
  return chemical_flux_coefficient(eps, D_N1, dx) * (V_left - W_right);
}

/** @brief Interface quantities of one step; index k holds interface k - 1/2, k = 0..Nx+1. */
struct WBWorkspace
{
  std::vector<double> a;
  std::vector<double> f;
};

/** @brief Slopes a_{i-1/2} and fluxes f_{i-1/2} at all Nx+2 interfaces, ghosts included. */
inline void compute_cell_fluxes(const DiagonalState1D & diag, const std::vector<double> & N1,
                                const ModelParams & params, const Grid1D & grid, FluxRule rule,
                                WBWorkspace & ws)
{
  const int Nx = grid.Nx;
  if (diag.size() != grid.nodes() || N1.size() != grid.nodes())
    throw ValidationError("compute_cell_fluxes: state does not match the grid");

  // v at -1 and w at Nx+1. Under copy they are copied from nodes 1 and Nx-1; under
  // reflect the flux is odd about the wall, which swaps v and w.
  const double v_ghost = rule == FluxRule::copy ? diag.v[1] : diag.w[0];
  const double w_ghost = rule == FluxRule::copy ? diag.w[Nx - 1] : diag.v[Nx];
  const auto [N1_left, N1_right] = ghost_values_1d(N1, rule, Parity::even);

  ws.a.assign(static_cast<std::size_t>(Nx) + 2, 0.0);
  ws.f.assign(static_cast<std::size_t>(Nx) + 2, 0.0);
  const double slope = params.alpha1 / params.D_n / grid.dx;
  for (int k = 0; k <= Nx + 1; ++k)
  {
    const double N_left = k == 0 ? N1_left : N1[k - 1];
    const double N_right = k == Nx + 1 ? N1_right : N1[k];
    const double v_left = k == 0 ? v_ghost : diag.v[k - 1];
    const double w_right = k == Nx + 1 ? w_ghost : diag.w[k];
    ws.a[k] = slope * (N_right - N_left);
    ws.f[k] = interface_flux_f(v_left, w_right, ws.a[k], params.eps, params.D_n, grid.dx);
  }
}

namespace detail
{
  /** Chemical system in sum and difference unknowns S_i = V_i + W_i (row 2i) and
   *  D_i = V_i - W_i (row 2i+1). The difference rows are scaled by 1/(1 + 2 lambda),
   *  which keeps the matrix well conditioned for large lambda.
   */
  inline BandedMatrix assemble_chemical_matrix(const ModelParams & params, const Grid1D & grid, double dt,
                                               FluxRule rule)
  {
    const int Nx = grid.Nx;
    const double lambda = dt / (params.eps * grid.dx);
    const double cl = lambda * chemical_flux_coefficient(params.eps, params.D_N1, grid.dx);
    const double kappa = cl / (1.0 + 2.0 * lambda);
    BandedMatrix A(2 * grid.nodes(), 3, 3);

    auto S = [](int i) { return static_cast<std::size_t>(2 * i); };
    auto D = [](int i) { return static_cast<std::size_t>(2 * i + 1); };

    // Adds coef * (V_{k-1} - W_k) to row r, for interface k between nodes k-1 and k.
    auto add_G = [&](std::size_t r, int k, double coef) {
      if ((k == 0 || k == Nx + 1) && rule == FluxRule::reflect)
        return; // mirrored ghost: V_{-1} = W_0, W_{Nx+1} = V_Nx
      const int left = k == 0 ? 1 : k - 1;        // V_{-1} = V_1
      const int right = k == Nx + 1 ? Nx - 1 : k; // W_{Nx+1} = W_{Nx-1}
      A(r, S(left)) += 0.5 * coef;
      A(r, D(left)) += 0.5 * coef;
      A(r, S(right)) -= 0.5 * coef;
      A(r, D(right)) += 0.5 * coef;
    };

    for (int i = 0; i <= Nx; ++i)
    {
      A(S(i), S(i)) += 1.0;
      add_G(S(i), i, -cl);
      add_G(S(i), i + 1, cl);
      A(D(i), D(i)) += 1.0;
      add_G(D(i), i, -kappa);
      add_G(D(i), i + 1, -kappa);
    }
    return A;
  }

  /// Solves for (S, D)^{k+1} given S^k = N1 and D^k = eps Q1.
  inline std::pair<std::vector<double>, std::vector<double>>
  chemical_solve_sd(const std::vector<double> & S_k, const std::vector<double> & D_k, const std::vector<double> & n_new,
                    const ModelParams & params, const Grid1D & grid, double dt, FluxRule rule)
  {
    const std::size_t nodes = grid.nodes();
    const double lambda = dt / (params.eps * grid.dx);
    BandedMatrix A = assemble_chemical_matrix(params, grid, dt, rule);
    std::vector<double> rhs(2 * nodes);
    for (std::size_t i = 0; i < nodes; ++i)
    {
      rhs[2 * i] = S_k[i] + dt * n_new[i];
      rhs[2 * i + 1] = D_k[i] / (1.0 + 2.0 * lambda);
    }

    std::vector<double> x;
    try
    {
      x = solve_banded(A, rhs);
    }
    catch (const SolverError & e)
    {
      std::ostringstream msg;
      msg << "chemical_solve: " << e.what() << " (lambda = " << lambda
          << ", flux coefficient = " << chemical_flux_coefficient(params.eps, params.D_N1, grid.dx) << ")";
      throw SolverError(msg.str());
    }

    const std::vector<double> Ax = A.multiply(x);
    double residual = 0.0, scale = 1.0;
    for (std::size_t r = 0; r < rhs.size(); ++r)
    {
      residual = std::max(residual, std::abs(Ax[r] - rhs[r]));
      scale = std::max(scale, std::abs(rhs[r]));
    }
    if (!(residual <= 1e-10 * scale))
      throw SolverError("chemical_solve: residual " + std::to_string(residual) + " above tolerance");

    std::pair<std::vector<double>, std::vector<double>> out{std::vector<double>(nodes), std::vector<double>(nodes)};
    for (std::size_t i = 0; i < nodes; ++i)
    {
      out.first[i] = x[2 * i];
      out.second[i] = x[2 * i + 1];
    }
    return out;
  }
}

/** @brief Implicit chemical update (V, W)^k -> (V, W)^{k+1} driven by the new density.
 *
 *  Returns {V_new, W_new}. Throws SolverError if the banded solve fails or its
 *  relative residual exceeds 1e-10.
 */
inline std::pair<std::vector<double>, std::vector<double>>
chemical_solve(const DiagonalState1D & diag_k, const std::vector<double> & n_new, const ModelParams & params,
               const Grid1D & grid, double dt, FluxRule rule = FluxRule::copy)
{
  const std::size_t nodes = grid.nodes();
  if (diag_k.size() != nodes || n_new.size() != nodes)
    throw ValidationError("chemical_solve: arrays do not match the grid");

  std::vector<double> S_k(nodes), D_k(nodes);
  for (std::size_t i = 0; i < nodes; ++i)
  {
    S_k[i] = diag_k.V[i] + diag_k.W[i];
    D_k[i] = diag_k.V[i] - diag_k.W[i];
  }
  auto [S, D] = detail::chemical_solve_sd(S_k, D_k, n_new, params, grid, dt, rule);
  std::pair<std::vector<double>, std::vector<double>> out{std::vector<double>(nodes), std::vector<double>(nodes)};
  for (std::size_t i = 0; i < nodes; ++i)
  {
    out.first[i] = 0.5 * (S[i] + D[i]);
    out.second[i] = 0.5 * (S[i] - D[i]);
  }
  return out;
}

/** @brief Default time step C dx^2 / (2 max(D_n, max(D_N1, D_n))), C = 0.45; independent of eps. */
inline double default_dt_1d(const ModelParams & params, const Grid1D & grid, double safety = 0.45)
{
  const double D_eff = std::max(params.D_n, std::max(params.D_N1, params.D_n));
  return safety * grid.dx * grid.dx / (2.0 * D_eff);
}

/** @brief One step of the well-balanced scheme. The interface data of the step is left in ws. */
inline MacroState1D wb_step(const MacroState1D & state, const ModelParams & params, const Grid1D & grid, double dt,
                            FluxRule rule, WBWorkspace & ws)
{
  if (!(dt > 0.0))
    throw ValidationError("wb_step: dt must be positive");
  if (state.size() != grid.nodes())
    throw ValidationError("wb_step: state does not match the grid");

  const double eps = params.eps;
  const double lambda = dt / (eps * grid.dx);
  DiagonalState1D diag = to_diagonal(state, eps);
  compute_cell_fluxes(diag, state.N1, params, grid, rule, ws);

  // Closed-form solution of the local 2x2 systems: the sum gives n, the difference v - w.
  const std::size_t nodes = grid.nodes();
  MacroState1D out;
  out.n.resize(nodes);
  out.q.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i)
  {
    const double f_left = ws.f[i], f_right = ws.f[i + 1];
    out.n[i] = state.n[i] + lambda * (f_left - f_right);
    const double diff = (eps * state.q[i] + lambda * (f_left + f_right)) / (1.0 + 2.0 * lambda);
    out.q[i] = diff / eps;
  }

  std::vector<double> D_k(nodes);
  for (std::size_t i = 0; i < nodes; ++i)
    D_k[i] = eps * state.Q1[i];
  auto [S, D] = detail::chemical_solve_sd(state.N1, D_k, out.n, params, grid, dt, rule);
  out.N1 = std::move(S);
  out.Q1 = std::move(D);
  for (double & x : out.Q1)
    x /= eps;
  for (std::size_t i = 0; i < nodes; ++i)
    if (!std::isfinite(out.n[i]) || !std::isfinite(out.q[i]) || !std::isfinite(out.N1[i]) || !std::isfinite(out.Q1[i]))
      throw SolverError("wb_step: non-finite value at node " + std::to_string(i));
  return out;
}

inline MacroState1D wb_step(const MacroState1D & state, const ModelParams & params, const Grid1D & grid, double dt,
                            FluxRule rule = FluxRule::copy)
{
  WBWorkspace ws;
  return wb_step(state, params, grid, dt, rule, ws);
}

} // namespace hypchemo

#endif // HYPCHEMO_WB1D_HPP
