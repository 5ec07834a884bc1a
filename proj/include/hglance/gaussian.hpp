#ifndef HGLANCE_GAUSSIAN_HPP_
#define HGLANCE_GAUSSIAN_HPP_

#include <cmath>

#include "hglance/errors.hpp"

namespace hglance {

inline constexpr double kTwoPi = 6.28318530717958647692;

inline void check_sigma(double sigma, double sigma_min) {
  if (!(sigma >= sigma_min))
    throw SigmaTooSmall("sigma below configured floor");
}

// d log N(x; mu, sigma) / d mu = (x - mu) / sigma^2
inline double xi_mu(double x, double mu, double sigma, double sigma_min) {
  check_sigma(sigma, sigma_min);
  return (x - mu) / (sigma * sigma);
}

// d log N(x; mu, sigma) / d sigma = ((x - mu)^2 - sigma^2) / sigma^3
inline double xi_sigma(double x, double mu, double sigma, double sigma_min) {
  check_sigma(sigma, sigma_min);
  const double d = x - mu;
  return (d * d - sigma * sigma) / (sigma * sigma * sigma);
}

inline double log_normal_density(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(kTwoPi);
}

}  // namespace hglance

#endif  // HGLANCE_GAUSSIAN_HPP_
