// Independent reference computations for the tests.
//
// Everything here is transcribed from the scheme equations directly and solved with
// dense Eigen factorisations; library types are used for storage only.

#ifndef HYPCHEMO_TESTS_ORACLES_HPP
#define HYPCHEMO_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hypchemo/mesh.hpp"
#include "hypchemo/model.hpp"

namespace oracle
{

using hypchemo::Field2D;
using hypchemo::Grid2D;
using hypchemo::MacroState2D;
using hypchemo::ModelParams;

inline Eigen::VectorXd dense_solve(const Eigen::MatrixXd & A, const Eigen::VectorXd & b)
{
  return A.fullPivLu().solve(b);
}

inline std::vector<double> to_std(const Eigen::VectorXd & v)
{
  return std::vector<double>(v.data(), v.data() + v.size());
}

/// Printed cell flux with the a = 0 limit; no overflow handling (test data keep |a dx| moderate).
inline double cell_flux(double v_left, double w_right, double a, double eps, double D_n, double dx)
{
  if (std::abs(a * dx) < 1e-8)
    return 2.0 * eps * D_n * (v_left - w_right) / (2.0 * eps + dx);
  const double e = std::exp(-a * dx);
  return 2.0 * eps * a * D_n * (v_left - e * w_right) / (eps * a * (1.0 + e) - (e - 1.0));
}

/// Printed Scharfetter-Gummel flux with the diffusive limit.
inline double sg_flux(double n_i, double n_ip1, double S_i, double S_ip1, double alpha, double D_n, double dx)
{
  const double grad = (S_ip1 - S_i) / dx;
  const double beta = alpha * dx * grad / D_n;
  if (std::abs(beta) < 1e-8)
    return D_n / dx * (n_i - n_ip1);
  return alpha * grad * (n_i - std::exp(-beta) * n_ip1) / (1.0 - std::exp(-beta));
}

struct Params
{
  double eps, D_n, D_N1, alpha1, dx, dt;
  bool reflect;
};

/// Dense version of the implicit chemical system, unknowns (V_0..V_Nx, W_0..W_Nx) in block order.
inline std::pair<std::vector<double>, std::vector<double>> chemical_dense(const std::vector<double> & V,
                                                                          const std::vector<double> & W,
                                                                          const std::vector<double> & n_new,
                                                                          const Params & p)
{
  const int N = static_cast<int>(V.size());
  const int Nx = N - 1;
  const double lam = p.dt / (p.eps * p.dx);
  const double c = 2.0 * p.eps * p.D_N1 / (2.0 * p.eps * p.D_N1 + p.dx);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  Eigen::VectorXd b(2 * N);
  auto iV = [&](int i) {
    if (i < 0)
      return p.reflect ? N + 0 : 1;  // V_{-1} := W_0 or V_1
    return i;
  };
  auto iW = [&](int i) {
    if (i > Nx)
      return p.reflect ? Nx : N + Nx - 1;  // W_{Nx+1} := V_Nx or W_{Nx-1}
    return N + i;
  };
  for (int i = 0; i <= Nx; ++i)
  {
    // (1+lam) V_i - lam W_i = V_i^k + lam c (V_{i-1} - W_i) + dt/2 n_i
    A(i, iV(i)) += 1.0 + lam;
    A(i, iW(i)) += -lam;
    A(i, iV(i - 1)) += -lam * c;
    A(i, iW(i)) += lam * c;
    b(i) = V[i] + 0.5 * p.dt * n_new[i];
    // (1+lam) W_i - lam V_i = W_i^k - lam c (V_i - W_{i+1}) + dt/2 n_i
    A(N + i, iW(i)) += 1.0 + lam;
    A(N + i, iV(i)) += -lam;
    A(N + i, iV(i)) += lam * c;
    A(N + i, iW(i + 1)) += -lam * c;
    b(N + i) = W[i] + 0.5 * p.dt * n_new[i];
  }
  const Eigen::VectorXd x = dense_solve(A, b);
  std::vector<double> Vn(N), Wn(N);
  for (int i = 0; i < N; ++i)
  {
    Vn[i] = x(i);
    Wn[i] = x(N + i);
  }
  return {Vn, Wn};
}

struct Macro
{
  std::vector<double> n, q, N1, Q1;
};

/// One well-balanced step with all four rows solved as one dense system in (v, w, V, W).
inline Macro wb_step_monolithic(const Macro & s, const Params & p)
{
  const int N = static_cast<int>(s.n.size());
  const int Nx = N - 1;
  std::vector<double> v(N), w(N), V(N), W(N);
  for (int i = 0; i < N; ++i)
  {
    v[i] = 0.5 * (s.n[i] + p.eps * s.q[i]);
    w[i] = 0.5 * (s.n[i] - p.eps * s.q[i]);
    V[i] = 0.5 * (s.N1[i] + p.eps * s.Q1[i]);
    W[i] = 0.5 * (s.N1[i] - p.eps * s.Q1[i]);
  }
  // ghost-extended n, q, N1
  auto n_at = [&](int i) { return i < 0 ? (p.reflect ? s.n[0] : s.n[1]) : i > Nx ? (p.reflect ? s.n[Nx] : s.n[Nx - 1]) : s.n[i]; };
  auto q_at = [&](int i) { return i < 0 ? (p.reflect ? -s.q[0] : s.q[1]) : i > Nx ? (p.reflect ? -s.q[Nx] : s.q[Nx - 1]) : s.q[i]; };
  auto N1_at = [&](int i) { return i < 0 ? (p.reflect ? s.N1[0] : s.N1[1]) : i > Nx ? (p.reflect ? s.N1[Nx] : s.N1[Nx - 1]) : s.N1[i]; };
  auto f_at = [&](int i) {  // f_{i-1/2}
    const double a = p.alpha1 / p.D_n * (N1_at(i) - N1_at(i - 1)) / p.dx;
    const double vl = 0.5 * (n_at(i - 1) + p.eps * q_at(i - 1));
    const double wr = 0.5 * (n_at(i) - p.eps * q_at(i));
    return cell_flux(vl, wr, a, p.eps, p.D_n, p.dx);
  };

  const double lam = p.dt / (p.eps * p.dx);
  const double c = 2.0 * p.eps * p.D_N1 / (2.0 * p.eps * p.D_N1 + p.dx);
  const int M = 4 * N;
  auto iv = [&](int i) { return i; };
  auto iw = [&](int i) { return N + i; };
  auto iV = [&](int i) { return i < 0 ? (p.reflect ? 3 * N : 2 * N + 1) : 2 * N + i; };
  auto iW = [&](int i) { return i > Nx ? (p.reflect ? 2 * N + Nx : 3 * N + Nx - 1) : 3 * N + i; };
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, M);
  Eigen::VectorXd b(M);
  for (int i = 0; i <= Nx; ++i)
  {
    const int r1 = i, r2 = N + i, r3 = 2 * N + i, r4 = 3 * N + i;
    A(r1, iv(i)) += 1.0 + lam;
    A(r1, iw(i)) += -lam;
    b(r1) = v[i] + lam * f_at(i);
    A(r2, iw(i)) += 1.0 + lam;
    A(r2, iv(i)) += -lam;
    b(r2) = w[i] - lam * f_at(i + 1);
    // chemical rows, source dt/2 n^{k+1} = dt/2 (v + w)^{k+1} moved to the matrix
    A(r3, iV(i)) += 1.0 + lam;
    A(r3, iW(i)) += -lam;
    A(r3, iV(i - 1)) += -lam * c;
    A(r3, iW(i)) += lam * c;
    A(r3, iv(i)) += -0.5 * p.dt;
    A(r3, iw(i)) += -0.5 * p.dt;
    b(r3) = V[i];
    A(r4, iW(i)) += 1.0 + lam;
    A(r4, iV(i)) += -lam;
    A(r4, iV(i)) += lam * c;
    A(r4, iW(i + 1)) += -lam * c;
    A(r4, iv(i)) += -0.5 * p.dt;
    A(r4, iw(i)) += -0.5 * p.dt;
    b(r4) = W[i];
  }
  const Eigen::VectorXd x = dense_solve(A, b);
  Macro out{std::vector<double>(N), std::vector<double>(N), std::vector<double>(N), std::vector<double>(N)};
  for (int i = 0; i < N; ++i)
  {
    out.n[i] = x(iv(i)) + x(iw(i));
    out.q[i] = (x(iv(i)) - x(iw(i))) / p.eps;
    out.N1[i] = x(2 * N + i) + x(3 * N + i);
    out.Q1[i] = (x(2 * N + i) - x(3 * N + i)) / p.eps;
  }
  return out;
}

/// Implicit chemical diffusion with ghosts, as a dense system.
inline std::vector<double> ks_chemical_dense(const std::vector<double> & S, const std::vector<double> & n_new,
                                             double D_S, double dx, double dt, bool reflect)
{
  const int N = static_cast<int>(S.size());
  const int Nx = N - 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd b(N);
  auto col = [&](int i) { return i < 0 ? (reflect ? 0 : 1) : i > Nx ? (reflect ? Nx : Nx - 1) : i; };
  const double r = D_S * dt / (dx * dx);
  for (int i = 0; i <= Nx; ++i)
  {
    // S_i - S_i^k = r (S_{i-1} - 2 S_i + S_{i+1}) + dt n_i
    A(i, i) += 1.0 + 2.0 * r;
    A(i, col(i - 1)) -= r;
    A(i, col(i + 1)) -= r;
    b(i) = S[i] + dt * n_new[i];
  }
  return to_std(dense_solve(A, b));
}

/// Random vector of given length with entries in [lo, hi).
inline std::vector<double> random_vector(std::mt19937_64 & rng, std::size_t n, double lo, double hi)
{
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double & x : v)
    x = dist(rng);
  return v;
}

// Node-padded copy of one component with the boundary rule applied; index shift of 1.
struct Padded
{
  int Nx, Ny;
  std::vector<double> data;
  double operator()(int i, int j) const { return data[(i + 1) * (Ny + 3) + (j + 1)]; }
};

inline Padded pad(const Field2D & f, bool reflect, bool odd_x, bool odd_y)
{
  const int Nx = f.Nx(), Ny = f.Ny();
  Padded p{Nx, Ny, std::vector<double>((Nx + 3) * (Ny + 3), 0.0)};
  auto at = [&](int i, int j) -> double & { return p.data[(i + 1) * (Ny + 3) + (j + 1)]; };
  for (int i = 0; i <= Nx; ++i)
    for (int j = 0; j <= Ny; ++j)
      at(i, j) = f(i, j);
  for (int j = 0; j <= Ny; ++j)
  {
    at(-1, j) = reflect ? (odd_x ? -f(0, j) : f(0, j)) : f(1, j);
    at(Nx + 1, j) = reflect ? (odd_x ? -f(Nx, j) : f(Nx, j)) : f(Nx - 1, j);
  }
  for (int i = 0; i <= Nx; ++i)
  {
    at(i, -1) = reflect ? (odd_y ? -f(i, 0) : f(i, 0)) : f(i, 1);
    at(i, Ny + 1) = reflect ? (odd_y ? -f(i, Ny) : f(i, Ny)) : f(i, Ny - 1);
  }
  return p;
}

// Lax-Friedrichs update written as central difference plus numerical viscosity.
inline MacroState2D lf_transcription(const MacroState2D & U, double s, const Grid2D & g, double dt, bool reflect)
{
  const double alpha = s / std::sqrt(2.0), h = 0.5 * s * s;
  const Padded n = pad(U.n, reflect, false, false), q1 = pad(U.q1, reflect, true, false),
               q2 = pad(U.q2, reflect, false, true), N = pad(U.N1, reflect, false, false),
               Qx = pad(U.Q1x, reflect, true, false), Qy = pad(U.Q1y, reflect, false, true);
  const double rx = dt / g.dx, ry = dt / g.dy;
  auto visc = [&](const Padded & f, int i, int j) {
    return 0.5 * alpha * rx * (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) +
           0.5 * alpha * ry * (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1));
  };
  auto dxc = [&](const Padded & f, int i, int j) { return 0.5 * rx * (f(i + 1, j) - f(i - 1, j)); };
  auto dyc = [&](const Padded & f, int i, int j) { return 0.5 * ry * (f(i, j + 1) - f(i, j - 1)); };
  MacroState2D out(g.Nx, g.Ny);
  for (int i = 0; i <= g.Nx; ++i)
    for (int j = 0; j <= g.Ny; ++j)
    {
      out.n(i, j) = n(i, j) - dxc(q1, i, j) - dyc(q2, i, j) + visc(n, i, j);
      out.q1(i, j) = q1(i, j) - h * dxc(n, i, j) + visc(q1, i, j);
      out.q2(i, j) = q2(i, j) - h * dyc(n, i, j) + visc(q2, i, j);
      out.N1(i, j) = N(i, j) - dxc(Qx, i, j) - dyc(Qy, i, j) + visc(N, i, j);
      out.Q1x(i, j) = Qx(i, j) - h * dxc(N, i, j) + visc(Qx, i, j);
      out.Q1y(i, j) = Qy(i, j) - h * dyc(N, i, j) + visc(Qy, i, j);
    }
  return out;
}

// U = U* + dt R(U) by Picard iteration; needs dt mu1, dt sigma1 well below 1.
inline MacroState2D source_fixed_point(const MacroState2D & star, const ModelParams & p, const Grid2D & g, double dt,
                                bool reflect)
{
  MacroState2D U = star;
  for (int it = 0; it < 300; ++it)
  {
    const Padded N = pad(U.N1, reflect, false, false);
    MacroState2D next = star;
    for (int i = 0; i <= g.Nx; ++i)
      for (int j = 0; j <= g.Ny; ++j)
      {
        const double gx = (N(i + 1, j) - N(i - 1, j)) / (2.0 * g.dx);
        const double gy = (N(i, j + 1) - N(i, j - 1)) / (2.0 * g.dy);
        next.q1(i, j) += dt * (p.mu2 * U.n(i, j) * p.alpha1 * gx - p.mu1 * U.q1(i, j));
        next.q2(i, j) += dt * (p.mu2 * U.n(i, j) * p.alpha1 * gy - p.mu1 * U.q2(i, j));
        next.N1(i, j) += dt * U.n(i, j);
        next.Q1x(i, j) += -dt * p.sigma1 * U.Q1x(i, j);
        next.Q1y(i, j) += -dt * p.sigma1 * U.Q1y(i, j);
      }
    U = next;
  }
  return U;
}

} // namespace oracle

#endif // HYPCHEMO_TESTS_ORACLES_HPP
