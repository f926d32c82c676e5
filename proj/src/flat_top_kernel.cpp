#include "flattop/flat_top_kernel.hpp"

#include "flattop/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flattop {

namespace {

void check_order(int p)
{
  if (p < 0 || p > 2)
    throw std::invalid_argument("derivative order not implemented");
}

} // namespace

double Kernel::weighted_sum(std::span<const double> times,
                            std::span<const double> weights,
                            double x,
                            double inv_h,
                            int p) const
{
  check_order(p);
  double acc = 0.0;
  for (std::size_t j = 0; j < times.size(); ++j)
    acc += weights[j] * derivative((x - times[j]) * inv_h, p);
  return acc;
}

double kappa(double t, double c)
{
  const double at = std::fabs(t);
  if (at <= 1.0)
    return 1.0;
  return std::max(0.0, 1.0 + c - c * at);
}

FlatTopKernel::FlatTopKernel(double c)
{
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("flat-top slope c must be positive");
  coeffs_ = simd::make_trapezoid_coeffs(c);
}

double FlatTopKernel::value(double x) const
{
  return simd::trapezoid_value(x, coeffs_);
}

double FlatTopKernel::derivative(double x, int p) const
{
  check_order(p);
  switch (p) {
    case 0:
      return simd::trapezoid_value(x, coeffs_);
    case 1:
      return simd::trapezoid_first_derivative(x, coeffs_);
    default:
      return simd::trapezoid_second_derivative(x, coeffs_);
  }
}

double FlatTopKernel::roughness() const
{
  return (1.0 + 1.0 / (3.0 * coeffs_.c)) / M_PI;
}

double FlatTopKernel::weighted_sum(std::span<const double> times,
                                   std::span<const double> weights,
                                   double x,
                                   double inv_h,
                                   int p) const
{
  return simd::trapezoid_sum(times, weights, x, inv_h, p, coeffs_);
}

double GaussianKernel::value(double x) const
{
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

double GaussianKernel::derivative(double x, int p) const
{
  check_order(p);
  const double phi = value(x);
  switch (p) {
    case 0:
      return phi;
    case 1:
      return -x * phi;
    default:
      return (x * x - 1.0) * phi;
  }
}

double GaussianKernel::roughness() const
{
  return gaussian_kernel_constants().roughness;
}

KernelConstants gaussian_kernel_constants()
{
  return {0.5 / std::sqrt(M_PI), 1.0};
}

} // namespace flattop
