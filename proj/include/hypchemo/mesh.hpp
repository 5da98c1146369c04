#ifndef HYPCHEMO_MESH_HPP
#define HYPCHEMO_MESH_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hypchemo/model.hpp"

/** @file hypchemo/mesh.hpp
    @brief Uniform node-centred grids, macroscopic field storage, ghost values and initial data.
*/

namespace hypchemo
{

/** @brief How ghost nodes at index -1 and Nx+1 are filled.
 *
 *  copy:    every field is copied from the second node, f(-1) = f(1), f(Nx+1) = f(Nx-1).
 *  reflect: a wall at the half interfaces -1/2 and Nx+1/2. Scalars are mirrored
 *           from the boundary node, normal flux components are mirrored and negated,
 *           so the normal numerical flux through the wall vanishes.
 */
enum class FluxRule
{
  copy,
  reflect
};

/** @brief Parity of a field under reflection at the wall. */
enum class Parity
{
  even,  ///< densities, concentrations, tangential flux components
  odd    ///< normal flux components
};

inline std::string to_string(FluxRule rule)
{
  return rule == FluxRule::copy ? "copy" : "reflect";
}

inline FluxRule flux_rule_from_string(const std::string & name)
{
  if (name == "copy")
    return FluxRule::copy;
  if (name == "reflect")
    return FluxRule::reflect;
  throw ValidationError("unknown flux rule '" + name + "' (expected copy or reflect)");
}

/** @brief Nodes x_i = -L + i dx, i = 0..Nx, on [-L, L]. */
struct Grid1D
{
  double L = 1.0;
  int Nx = 2;
  double dx = 1.0;

  Grid1D() = default;
  Grid1D(double half_width, int intervals) : L(half_width), Nx(intervals), dx(2.0 * half_width / intervals)
  {
    detail::require_positive(half_width, "L");
    if (intervals < 2)
      throw ValidationError("Nx must be at least 2");
  }

  std::size_t nodes() const { return static_cast<std::size_t>(Nx) + 1; }
  /// Exactly -L at i = 0, L at i = Nx, and x(Nx - i) == -x(i).
  double x(int i) const { return L * (static_cast<double>(2 * i - Nx) / Nx); }
};

/** @brief Nodes (x_i, y_j) of [-Lx, Lx] x [-Ly, Ly]. */
struct Grid2D
{
  double Lx = 1.0, Ly = 1.0;
  int Nx = 2, Ny = 2;
  double dx = 1.0, dy = 1.0;

  Grid2D() = default;
  Grid2D(double half_x, double half_y, int nx, int ny)
    : Lx(half_x), Ly(half_y), Nx(nx), Ny(ny), dx(2.0 * half_x / nx), dy(2.0 * half_y / ny)
  {
    detail::require_positive(half_x, "Lx");
    detail::require_positive(half_y, "Ly");
    if (nx < 2 || ny < 2)
      throw ValidationError("Nx and Ny must be at least 2");
  }

  std::size_t nodes() const { return (static_cast<std::size_t>(Nx) + 1) * (static_cast<std::size_t>(Ny) + 1); }
  double x(int i) const { return Lx * (static_cast<double>(2 * i - Nx) / Nx); }
  double y(int j) const { return Ly * (static_cast<double>(2 * j - Ny) / Ny); }
};

/** @brief Conserved 1D fields on nodes 0..Nx; q = n u and Q1 = N1 U1. */
struct MacroState1D
{
  std::vector<double> n, q, N1, Q1;

  MacroState1D() = default;
  explicit MacroState1D(std::size_t nodes) : n(nodes, 0.0), q(nodes, 0.0), N1(nodes, 0.0), Q1(nodes, 0.0) {}

  std::size_t size() const { return n.size(); }
};

/** @brief Node field of a 2D grid, row index i (x), column index j (y). */
class Field2D
{
public:
  Field2D() = default;
  Field2D(int nx, int ny, double value = 0.0)
    : nx_(nx), ny_(ny), data_((static_cast<std::size_t>(nx) + 1) * (static_cast<std::size_t>(ny) + 1), value)
  {}

  double & operator()(int i, int j) { return data_[index(i, j)]; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }

  int Nx() const { return nx_; }
  int Ny() const { return ny_; }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const Field2D &) const = default;

private:
  std::size_t index(int i, int j) const
  {
    return static_cast<std::size_t>(i) * (static_cast<std::size_t>(ny_) + 1) + static_cast<std::size_t>(j);
  }

  int nx_ = 0, ny_ = 0;
  std::vector<double> data_;
};

/** @brief The six components (n, q1, q2, N1, Q1x, Q1y) of the 2D unknown. */
struct MacroState2D
{
  Field2D n, q1, q2, N1, Q1x, Q1y;

  MacroState2D() = default;
  MacroState2D(int nx, int ny) : n(nx, ny), q1(nx, ny), q2(nx, ny), N1(nx, ny), Q1x(nx, ny), Q1y(nx, ny) {}

  int Nx() const { return n.Nx(); }
  int Ny() const { return n.Ny(); }
};

/** @brief Symmetric two-bump density at rest.
 *
 *  n(x) = n0/(2 pi sigma^2) [exp(-(x-x0)^2/(2 sigma^2)) + exp(-(x+x0)^2/(2 sigma^2))].
 *  The normaliser is the 2D one, kept as in the reference experiments.
 */
inline MacroState1D gaussian_ic_1d(const Grid1D & grid, double n0, double x0, double sigma)
{
  detail::require_positive(sigma, "sigma");
  MacroState1D state(grid.nodes());
  const double two_var = 2.0 * sigma * sigma;
  const double amplitude = n0 / (std::numbers::pi * two_var);
  for (int i = 0; i <= grid.Nx; ++i)
  {
    const double x = grid.x(i);
    state.n[i] = amplitude * (std::exp(-(x - x0) * (x - x0) / two_var) + std::exp(-(x + x0) * (x + x0) / two_var));
  }
  return state;
}

/** @brief Two Gaussian bumps centred at (x0, y0) and (-x0, -y0), all fluxes and N1 zero. */
inline MacroState2D gaussian_ic_2d(const Grid2D & grid, double n0, double x0, double y0, double sigma)
{
  detail::require_positive(sigma, "sigma");
  MacroState2D state(grid.Nx, grid.Ny);
  const double two_var = 2.0 * sigma * sigma;
  const double amplitude = n0 / (std::numbers::pi * two_var);
  for (int i = 0; i <= grid.Nx; ++i)
    for (int j = 0; j <= grid.Ny; ++j)
    {
      const double x = grid.x(i), y = grid.y(j);
      const double r_plus = (x - x0) * (x - x0) + (y - y0) * (y - y0);
      const double r_minus = (x + x0) * (x + x0) + (y + y0) * (y + y0);
      state.n(i, j) = amplitude * (std::exp(-r_plus / two_var) + std::exp(-r_minus / two_var));
    }
  return state;
}

/** @brief Ghost values (left at -1, right at Nx+1) of a node field. */
inline std::pair<double, double> ghost_values_1d(std::span<const double> field, FluxRule rule = FluxRule::copy,
                                                 Parity parity = Parity::even)
{
  if (field.size() < 3)
    throw ValidationError("ghost_values_1d needs at least 3 nodes, got " + std::to_string(field.size()));
  const std::size_t last = field.size() - 1;
  if (rule == FluxRule::copy)
    return {field[1], field[last - 1]};
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  return {sign * field[0], sign * field[last]};
}

/** @brief Riemann sum dx * sum_i field_i. */
inline double total_mass(std::span<const double> field, double dx)
{
  double sum = 0.0;
  for (double value : field)
    sum += value;
  return dx * sum;
}

} // namespace hypchemo

#endif // HYPCHEMO_MESH_HPP
