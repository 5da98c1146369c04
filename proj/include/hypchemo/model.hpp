#ifndef HYPCHEMO_MODEL_HPP
#define HYPCHEMO_MODEL_HPP

#include <cmath>
#include <stdexcept>
#include <string>

/** @file hypchemo/model.hpp
    @brief Model parameters of the hyperbolic chemotaxis system and the derived turning rates.
*/

namespace hypchemo
{

/** @brief Base class of all errors raised by the library. */
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/** @brief Invalid input: a parameter, a configuration value, an array shape. */
class ValidationError : public Error
{
public:
  using Error::Error;
};

/** @brief A solver failed: singular system, non-finite value, CFL violation. */
class SolverError : public Error
{
public:
  using Error::Error;
};

/** @brief Physical and derived coefficients.
 *
 *  Only derive_coefficients() produces a valid instance; the turning rates are
 *  functions of (s, D_n, D_N1) and are never set independently.
 */
struct ModelParams
{
  double s = 1.0;       ///< microscopic speed
  double eps = 1.0;     ///< 1/s
  int d = 1;            ///< spatial dimension, 1 or 2
  double D_n = 1.0;     ///< cell diffusivity of the parabolic limit
  double D_N1 = 1.0;    ///< chemical diffusivity
  double alpha1 = 0.0;  ///< chemotactic sensitivity (constant)
  double mu1 = 1.0;     ///< s^2 / D_n
  double mu2 = 1.0;     ///< s^2 / D_n
  double sigma1 = 1.0;  ///< s^2 / D_N1
  double tau1 = 1.0;
  double mu0 = 1.0;     ///< dominant turning rate, kinetic solver only
  double eps_k = 1e-3;  ///< kinetic relaxation scale, kinetic solver only
};

namespace detail
{
  inline void require_positive(double value, const char * name)
  {
    if (!(value > 0.0) || !std::isfinite(value))
      throw ValidationError(std::string(name) + " must be positive");
  }
}

/** @brief Builds a ModelParams with mu1 = mu2 = s^2/D_n, sigma1 = s^2/D_N1, eps = 1/s, tau1 = 1. */
inline ModelParams derive_coefficients(double s, double D_n, double D_N1, double alpha1,
                                       double mu0 = 1.0, double eps_k = 1e-3, int d = 1)
{
  detail::require_positive(s, "s");
  detail::require_positive(D_n, "D_n");
  detail::require_positive(D_N1, "D_N1");
  detail::require_positive(mu0, "mu0");
  detail::require_positive(eps_k, "eps_k");
  if (!std::isfinite(alpha1))
    throw ValidationError("alpha1 must be finite");
  if (d != 1 && d != 2)
    throw ValidationError("d must be 1 or 2");

  ModelParams p;
  p.s = s;
  p.eps = 1.0 / s;
  p.d = d;
  p.D_n = D_n;
  p.D_N1 = D_N1;
  p.alpha1 = alpha1;
  p.mu1 = s * s / D_n;
  p.mu2 = p.mu1;
  p.sigma1 = s * s / D_N1;
  p.tau1 = 1.0;
  p.mu0 = mu0;
  p.eps_k = eps_k;
  return p;
}

} // namespace hypchemo

#endif // HYPCHEMO_MODEL_HPP
