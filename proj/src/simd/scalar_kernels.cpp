#include "flattop/simd/kernels.hpp"

#include <cmath>

namespace flattop::simd::scalar {

double trapezoid_sum(std::span<const double> times,
                     std::span<const double> weights,
                     double x,
                     double inv_h,
                     int order,
                     const TrapezoidCoeffs& coeffs)
{
  double acc = 0.0;
  const std::size_t n = times.size();
  switch (order) {
    case 0:
      for (std::size_t j = 0; j < n; ++j)
        acc += weights[j] * trapezoid_value((x - times[j]) * inv_h, coeffs);
      break;
    case 1:
      for (std::size_t j = 0; j < n; ++j)
        acc += weights[j] * trapezoid_first_derivative((x - times[j]) * inv_h, coeffs);
      break;
    case 2:
      for (std::size_t j = 0; j < n; ++j)
        acc += weights[j] * trapezoid_second_derivative((x - times[j]) * inv_h, coeffs);
      break;
    default:
      break;
  }
  return acc;
}

std::complex<double> weighted_cexp_sum(std::span<const double> times,
                                       std::span<const double> weights,
                                       double t)
{
  double re = 0.0;
  double im = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double arg = t * times[j];
    re += weights[j] * std::cos(arg);
    im += weights[j] * std::sin(arg);
  }
  return {re, im};
}

} // namespace flattop::simd::scalar
