#ifndef HYPCHEMO_BANDED_HPP
#define HYPCHEMO_BANDED_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hypchemo/model.hpp"

/** @file hypchemo/banded.hpp
    @brief Direct elimination for banded and tridiagonal systems arising in the implicit substeps.
*/

namespace hypchemo
{

/** @brief Square band matrix with kl sub-diagonals and ku super-diagonals.
 *
 *  Entry (r, c) is stored at band_[r * width + (c - r + kl)]; only |c - r| inside the band is addressable.
 */
class BandedMatrix
{
public:
  BandedMatrix(std::size_t n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), width_(static_cast<std::size_t>(kl + ku + 1)), band_(n * width_, 0.0)
  {}

  std::size_t size() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }

  bool in_band(std::size_t r, std::size_t c) const
  {
    const auto offset = static_cast<long>(c) - static_cast<long>(r);
    return offset >= -kl_ && offset <= ku_;
  }

  double & operator()(std::size_t r, std::size_t c)
  {
    if (r >= n_ || c >= n_ || !in_band(r, c))
      throw SolverError("banded entry (" + std::to_string(r) + ", " + std::to_string(c) + ") outside the band");
    return band_[slot(r, c)];
  }

  double operator()(std::size_t r, std::size_t c) const
  {
    if (r >= n_ || c >= n_ || !in_band(r, c))
      return 0.0;
    return band_[slot(r, c)];
  }

  /// y = A x
  std::vector<double> multiply(std::span<const double> x) const
  {
    std::vector<double> y(n_, 0.0);
    for (std::size_t r = 0; r < n_; ++r)
    {
      const std::size_t c0 = r >= static_cast<std::size_t>(kl_) ? r - kl_ : 0;
      const std::size_t c1 = std::min(n_ - 1, r + ku_);
      for (std::size_t c = c0; c <= c1; ++c)
        y[r] += band_[slot(r, c)] * x[c];
    }
    return y;
  }

private:
  std::size_t slot(std::size_t r, std::size_t c) const
  {
    return r * width_ + static_cast<std::size_t>(static_cast<long>(c) - static_cast<long>(r) + kl_);
  }

  std::size_t n_;
  int kl_, ku_;
  std::size_t width_;
  std::vector<double> band_;
};

/** @brief Solves A x = b by band Gaussian elimination with partial pivoting.
 *
 *  Row interchanges widen the upper band to ku + kl. A column without a usable
 *  pivot (relative to the largest entry of A) raises SolverError.
 */
inline std::vector<double> solve_banded(const BandedMatrix & A, std::vector<double> b)
{
  const std::size_t n = A.size();
  if (b.size() != n)
    throw ValidationError("solve_banded: right-hand side has wrong length");
  const auto kl = static_cast<std::size_t>(A.lower());
  const auto ku = static_cast<std::size_t>(A.upper()) + kl;

  BandedMatrix U(n, A.lower(), static_cast<int>(ku));
  double scale = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r >= kl ? r - kl : 0; c <= std::min(n - 1, r + A.upper()); ++c)
    {
      U(r, c) = A(r, c);
      scale = std::max(scale, std::abs(A(r, c)));
    }
  const double tiny = 1e-300 + 1e-14 * scale;

  for (std::size_t k = 0; k < n; ++k)
  {
    const std::size_t r_end = std::min(n - 1, k + kl);
    const std::size_t c_end = std::min(n - 1, k + ku);
    std::size_t p = k;
    for (std::size_t r = k + 1; r <= r_end; ++r)
      if (std::abs(U(r, k)) > std::abs(U(p, k)))
        p = r;
    if (!(std::abs(U(p, k)) > tiny))
      throw SolverError("solve_banded: zero pivot in column " + std::to_string(k));
    if (p != k)
    {
      for (std::size_t c = k; c <= c_end; ++c)
        std::swap(U(k, c), U(p, c));
      std::swap(b[k], b[p]);
    }
    const double pivot = U(k, k);
    for (std::size_t r = k + 1; r <= r_end; ++r)
    {
      const double factor = U(r, k) / pivot;
      if (factor == 0.0)
        continue;
      U(r, k) = 0.0;
      for (std::size_t c = k + 1; c <= c_end; ++c)
        U(r, c) -= factor * U(k, c);
      b[r] -= factor * b[k];
    }
  }

  std::vector<double> x(n, 0.0);
  for (std::size_t k = n; k-- > 0;)
  {
    double sum = b[k];
    const std::size_t c_end = std::min(n - 1, k + ku);
    for (std::size_t c = k + 1; c <= c_end; ++c)
      sum -= U(k, c) * x[c];
    x[k] = sum / U(k, k);
  }
  return x;
}

/** @brief Thomas algorithm for lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
 *
 *  lower[0] and upper[n-1] are ignored.
 */
inline std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                             std::span<const double> upper, std::span<const double> rhs)
{
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n || n == 0)
    throw ValidationError("solve_tridiagonal: inconsistent array lengths");

  std::vector<double> c(n, 0.0), d(n, 0.0);
  double denom = diag[0];
  if (denom == 0.0)
    throw SolverError("solve_tridiagonal: zero pivot in row 0");
  c[0] = n > 1 ? upper[0] / denom : 0.0;
  d[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i)
  {
    denom = diag[i] - lower[i] * c[i - 1];
    if (denom == 0.0 || !std::isfinite(denom))
      throw SolverError("solve_tridiagonal: zero pivot in row " + std::to_string(i));
    c[i] = i + 1 < n ? upper[i] / denom : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
  }
  std::vector<double> x(n);
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

/** @brief max_i |A x - b|_i / max(1, |b|_inf) for a tridiagonal system. */
inline double tridiagonal_residual(std::span<const double> lower, std::span<const double> diag,
                                   std::span<const double> upper, std::span<const double> rhs,
                                   std::span<const double> x)
{
  const std::size_t n = diag.size();
  double worst = 0.0, bnorm = 1.0;
  for (std::size_t i = 0; i < n; ++i)
  {
    double r = diag[i] * x[i] - rhs[i];
    if (i > 0)
      r += lower[i] * x[i - 1];
    if (i + 1 < n)
      r += upper[i] * x[i + 1];
    worst = std::max(worst, std::abs(r));
    bnorm = std::max(bnorm, std::abs(rhs[i]));
  }
  return worst / bnorm;
}

} // namespace hypchemo

#endif // HYPCHEMO_BANDED_HPP
