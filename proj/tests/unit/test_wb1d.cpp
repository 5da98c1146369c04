#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hypchemo/ks1d.hpp"
#include "hypchemo/wb1d.hpp"
#include "oracles/oracles.hpp"

using namespace hypchemo;

namespace
{
MacroState1D random_state(std::mt19937_64 & rng, std::size_t nodes)
{
  MacroState1D st(nodes);
  st.n = oracle::random_vector(rng, nodes, 0.1, 2.0);
  st.q = oracle::random_vector(rng, nodes, -1.0, 1.0);
  st.N1 = oracle::random_vector(rng, nodes, 0.0, 1.5);
  st.Q1 = oracle::random_vector(rng, nodes, -1.0, 1.0);
  return st;
}

double max_abs_diff(const std::vector<double> & a, const std::vector<double> & b)
{
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
}

TEST(Diagonal, Example)
{
  MacroState1D st(1);
  st.n = {2.0};
  st.q = {4.0};
  st.N1 = {1.0};
  st.Q1 = {-2.0};
  const DiagonalState1D d = to_diagonal(st, 0.5);
  EXPECT_EQ(d.v[0], 2.0);
  EXPECT_EQ(d.w[0], 0.0);
  EXPECT_EQ(d.V[0], 0.0);
  EXPECT_EQ(d.W[0], 1.0);
}

TEST(Diagonal, RoundTrip)
{
  std::mt19937_64 rng(21);
  for (double eps : {1.0, 0.3, 1e-3})
  {
    const MacroState1D st = random_state(rng, 40);
    const MacroState1D back = from_diagonal(to_diagonal(st, eps), eps);
    EXPECT_LT(max_abs_diff(back.n, st.n), 1e-15);
    EXPECT_LT(max_abs_diff(back.N1, st.N1), 1e-15);
    EXPECT_LT(max_abs_diff(back.q, st.q), 1e-15 / eps);
    EXPECT_LT(max_abs_diff(back.Q1, st.Q1), 1e-15 / eps);
  }
}

TEST(InterfaceFluxF, GoldenValue)
{
  EXPECT_NEAR(interface_flux_f(1.0, 0.0, 1.0, 0.5, 1.0, 1.0), 0.75984361479631957594, 1e-15);
}

TEST(InterfaceFluxF, ZeroSlopeLimit)
{
  const double limit = 0.25;
  EXPECT_NEAR(interface_flux_f(0.7, 0.4, 0.0, 0.05, 1.0, 0.02), limit, 1e-15);
  // Below the threshold the limit form is used; the exact formula differs by O(a dx).
  const double a = 1e-10, dx = 0.02, e = std::exp(-a * dx);
  const double exact = 2.0 * 0.05 * a * (0.7 - e * 0.4) / (0.05 * a * (1.0 + e) - std::expm1(-a * dx));
  EXPECT_NEAR(exact, 0.25000000000091666667, 1e-12);
  EXPECT_LE(std::abs(interface_flux_f(0.7, 0.4, 1e-10, 0.05, 1.0, 0.02) - exact), 1e-8 * limit);
  EXPECT_EQ(interface_flux_f(1.0, 1.0, 1e-12, 0.05, 1.0, 0.02), 0.0);
}

TEST(InterfaceFluxF, SmallJumpAtThreshold)
{
  const double dx = 0.02;
  for (double sign : {1.0, -1.0})
  {
    const double below = interface_flux_f(0.7, 0.4, sign * 0.99e-8 / dx, 0.05, 1.0, dx);
    const double above = interface_flux_f(0.7, 0.4, sign * 1.01e-8 / dx, 0.05, 1.0, dx);
    // The switch costs a relative jump of order the threshold itself.
    EXPECT_NEAR(below, above, 3e-8 * 0.25);
  }
}

TEST(InterfaceFluxF, MatchesPrintedFormula)
{
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial)
  {
    const double v = u(rng), w = u(rng), dx = 0.01 + 0.1 * u(rng);
    const double a = (u(rng) - 0.5) * 10.0 / dx;
    const double eps = std::pow(10.0, -4.0 * u(rng));
    const double got = interface_flux_f(v, w, a, eps, 1.3, dx);
    const double ref = oracle::cell_flux(v, w, a, eps, 1.3, dx);
    EXPECT_NEAR(got, ref, 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST(InterfaceFluxF, LargeSlopesStayFinite)
{
  for (double adx : {-800.0, -50.0, 50.0, 800.0})
  {
    const double f = interface_flux_f(1.0, 1.0, adx / 0.02, 1e-6, 1.0, 0.02);
    EXPECT_TRUE(std::isfinite(f)) << adx;
  }
  // Pure upwinding once exp(-a dx) is negligible: f = 2 eps a D v / (1 + eps a).
  const double a = 300.0 / 0.02, eps = 1e-6;
  const double f = interface_flux_f(1.0, 1.0, a, eps, 1.0, 0.02);
  EXPECT_NEAR(f, 2.0 * eps * a / (1.0 + eps * a), 1e-12 * f);
  EXPECT_NEAR(interface_flux_f(1.0, 1.0, -a, eps, 1.0, 0.02), -f, 1e-12 * f);
}

TEST(InterfaceFluxF, RejectsNonFinite)
{
  EXPECT_THROW(interface_flux_f(NAN, 0.0, 1.0, 0.1, 1.0, 0.1), SolverError);
  EXPECT_THROW(interface_flux_f(1.0, 0.0, std::numeric_limits<double>::infinity(), 0.1, 1.0, 0.1), SolverError);
}

TEST(InterfaceFluxF, ZeroSlopeSmallEpsIsCentralDiffusion)
{
  // f / eps -> D (n_{i-1} - n_i) / dx when a = 0 and q = 0.
  const double f = interface_flux_f(0.5 * 1.2, 0.5 * 1.0, 0.0, 1e-9, 2.0, 0.1);
  EXPECT_NEAR(f / 1e-9, 2.0 * 0.2 / 0.1, 1e-7);
}

TEST(InterfaceFluxF, SmallEpsApproachesSGFlux)
{
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial)
  {
    const double n_l = 0.1 + u(rng), n_r = 0.1 + u(rng), S_l = u(rng), S_r = u(rng), dx = 0.02;
    const double alpha = 0.33, D = 1.0;
    const double a = alpha / D * (S_r - S_l) / dx;
    const double eps = 1e-9;
    const double f = interface_flux_f(0.5 * n_l, 0.5 * n_r, a, eps, D, dx);
    const double sg = sg_flux(n_l, n_r, S_l, S_r, alpha, D, dx);
    EXPECT_NEAR(f / eps, sg, 1e-6 * std::max(1.0, std::abs(sg)));
  }
}

TEST(InterfaceFluxF_Chemical, ExampleAndLimit)
{
  const double c = 2.0 * 0.1 * 0.001 / (2.0 * 0.1 * 0.001 + 0.02);
  EXPECT_DOUBLE_EQ(chemical_flux_coefficient(0.1, 0.001, 0.02), c);
  EXPECT_DOUBLE_EQ(interface_flux_F(1.0, 0.5, 0.1, 0.001, 0.02), 0.5 * c);
  // F / eps -> D_N1 (N1_{i-1} - N1_i) / dx
  const double eps = 1e-10;
  EXPECT_NEAR(interface_flux_F(0.5 * 3.0, 0.5 * 1.0, eps, 0.5, 0.1) / eps, 0.5 * 2.0 / 0.1, 1e-7);
}

TEST(ChemicalSolve, MatchesDenseOracle)
{
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Grid1D grid(1.0, 16);
  for (FluxRule rule : {FluxRule::copy, FluxRule::reflect})
    for (int trial = 0; trial < 100; ++trial)
    {
      const double s = std::pow(10.0, 3.0 * u(rng));
      const ModelParams p = derive_coefficients(s, 1.0, 0.001 + u(rng), 0.33);
      const double dt = 1e-4 + 1e-2 * u(rng);
      const MacroState1D st = random_state(rng, grid.nodes());
      const DiagonalState1D d = to_diagonal(st, p.eps);
      const auto n_new = oracle::random_vector(rng, grid.nodes(), 0.0, 3.0);
      const auto [V, W] = chemical_solve(d, n_new, p, grid, dt, rule);
      const auto [Vr, Wr] =
          oracle::chemical_dense(d.V, d.W, n_new, {p.eps, p.D_n, p.D_N1, p.alpha1, grid.dx, dt, rule == FluxRule::reflect});
      EXPECT_LE(max_abs_diff(V, Vr), 1e-12);
      EXPECT_LE(max_abs_diff(W, Wr), 1e-12);
    }
}

TEST(ChemicalSolve, UniformChemicalGainsSource)
{
  const Grid1D grid(1.0, 10);
  const ModelParams p = derive_coefficients(100.0, 1.0, 0.01, 0.33);
  MacroState1D st(grid.nodes());
  st.N1.assign(grid.nodes(), 0.7);
  const auto [V, W] = chemical_solve(to_diagonal(st, p.eps), std::vector<double>(grid.nodes(), 2.0), p, grid, 0.01);
  for (std::size_t i = 0; i < grid.nodes(); ++i)
  {
    EXPECT_NEAR(V[i] + W[i], 0.7 + 0.02, 1e-14);
    EXPECT_NEAR(V[i] - W[i], 0.0, 1e-14);
  }
}

TEST(ChemicalSolve, RejectsMismatchedArrays)
{
  const Grid1D grid(1.0, 10);
  const ModelParams p = derive_coefficients(1.0, 1.0, 1.0, 0.0);
  EXPECT_THROW(chemical_solve(to_diagonal(MacroState1D(11), 1.0), std::vector<double>(5), p, grid, 0.1), ValidationError);
}

TEST(WBStep, MatchesMonolithicOracle)
{
  std::mt19937_64 rng(25);
  const Grid1D grid(1.0, 4);
  for (FluxRule rule : {FluxRule::copy, FluxRule::reflect})
    for (double s : {1.0, 10.0, 1000.0})
      for (int trial = 0; trial < 20; ++trial)
      {
        const ModelParams p = derive_coefficients(s, 1.0, 0.1, 0.33);
        const MacroState1D st = random_state(rng, grid.nodes());
        const double dt = 0.01;
        const MacroState1D got = wb_step(st, p, grid, dt, rule);
        const oracle::Macro ref = oracle::wb_step_monolithic(
            {st.n, st.q, st.N1, st.Q1}, {p.eps, p.D_n, p.D_N1, p.alpha1, grid.dx, dt, rule == FluxRule::reflect});
        EXPECT_LE(max_abs_diff(got.n, ref.n), 1e-12);
        EXPECT_LE(max_abs_diff(got.N1, ref.N1), 1e-12);
        EXPECT_LE(p.eps * max_abs_diff(got.q, ref.q), 1e-12);
        EXPECT_LE(p.eps * max_abs_diff(got.Q1, ref.Q1), 1e-12);
      }
}

TEST(WBStep, UniformStateIsSteady)
{
  const Grid1D grid(2.0, 50);
  for (FluxRule rule : {FluxRule::copy, FluxRule::reflect})
    for (double s : {1.0, 25.0, std::pow(5.0, 9)})
    {
      const ModelParams p = derive_coefficients(s, 1.0, 0.001, 0.33);
      MacroState1D st(grid.nodes());
      st.n.assign(grid.nodes(), 1.7);
      st.N1.assign(grid.nodes(), 0.4);
      const double dt = default_dt_1d(p, grid);
      const MacroState1D out = wb_step(st, p, grid, dt, rule);
      for (std::size_t i = 0; i < grid.nodes(); ++i)
      {
        EXPECT_NEAR(out.n[i], 1.7, 1e-12);
        EXPECT_NEAR(out.q[i], 0.0, 1e-12);
        EXPECT_NEAR(out.N1[i], 0.4 + dt * 1.7, 1e-12);
        EXPECT_NEAR(out.Q1[i], 0.0, 1e-12);
      }
    }
}

TEST(WBStep, MassTelescopes)
{
  std::mt19937_64 rng(26);
  const Grid1D grid(2.0, 60);
  for (FluxRule rule : {FluxRule::copy, FluxRule::reflect})
    for (double s : {1.0, 125.0, 1e5})
    {
      const ModelParams p = derive_coefficients(s, 1.0, 0.001, 0.33);
      MacroState1D st = random_state(rng, grid.nodes());
      const double dt = default_dt_1d(p, grid);
      const double lambda = dt / (p.eps * grid.dx);
      for (int step = 0; step < 20; ++step)
      {
        WBWorkspace ws;
        const MacroState1D next = wb_step(st, p, grid, dt, rule, ws);
        double before = 0.0, after = 0.0;
        for (std::size_t i = 0; i < grid.nodes(); ++i)
        {
          before += st.n[i];
          after += next.n[i];
        }
        const double boundary = lambda * (ws.f.front() - ws.f.back());
        EXPECT_NEAR(after - before, boundary, 1e-12 * std::abs(before));
        if (rule == FluxRule::reflect)
        {
          EXPECT_EQ(ws.f.front(), 0.0);
          EXPECT_EQ(ws.f.back(), 0.0);
        }
        st = next;
      }
    }
}

TEST(WBStep, PreservesMirrorSymmetry)
{
  const Grid1D grid(2.0, 100);
  const ModelParams p = derive_coefficients(std::pow(5.0, 9), 1.0, 0.001, 0.33);
  MacroState1D st = gaussian_ic_1d(grid, 5.0, 0.5, 0.3);
  const double dt = default_dt_1d(p, grid);
  for (int step = 0; step < 200; ++step)
    st = wb_step(st, p, grid, dt);
  for (int i = 0; i <= grid.Nx; ++i)
  {
    EXPECT_NEAR(st.n[i], st.n[grid.Nx - i], 1e-12);
    EXPECT_NEAR(st.N1[i], st.N1[grid.Nx - i], 1e-12);
  }
}

TEST(WBStep, StaysPositiveOnPositiveData)
{
  const Grid1D grid(2.0, 100);
  for (double s : {1.0, 5.0, std::pow(5.0, 9)})
  {
    const ModelParams p = derive_coefficients(s, 1.0, 0.001, 0.33);
    MacroState1D st = gaussian_ic_1d(grid, 5.0, 0.5, 0.3);
    const double dt = default_dt_1d(p, grid);
    for (int step = 0; step < 300; ++step)
      st = wb_step(st, p, grid, dt);
    for (double n : st.n)
      EXPECT_GT(n, 0.0);
  }
}

TEST(WBStep, RejectsBadArguments)
{
  const Grid1D grid(1.0, 8);
  const ModelParams p = derive_coefficients(1.0, 1.0, 1.0, 0.0);
  EXPECT_THROW(wb_step(MacroState1D(9), p, grid, 0.0), ValidationError);
  EXPECT_THROW(wb_step(MacroState1D(9), p, grid, -1e-3), ValidationError);
  EXPECT_THROW(wb_step(MacroState1D(5), p, grid, 1e-3), ValidationError);
  MacroState1D bad(9);
  bad.n[3] = NAN;
  EXPECT_THROW(wb_step(bad, p, grid, 1e-3), SolverError);
}

TEST(DefaultDt, Example)
{
  const ModelParams p = derive_coefficients(1.0, 1.0, 0.001, 0.33);
  EXPECT_DOUBLE_EQ(default_dt_1d(p, Grid1D(2.0, 200)), 9e-5);
  const ModelParams q = derive_coefficients(1e9, 1.0, 0.001, 0.33);
  EXPECT_EQ(default_dt_1d(q, Grid1D(2.0, 200)), default_dt_1d(p, Grid1D(2.0, 200)));
}
