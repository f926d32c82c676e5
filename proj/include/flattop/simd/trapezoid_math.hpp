#pragma once

// Scalar reference formulas for the trapezoidal flat-top kernel. The AVX2
// variant evaluates the same expressions lane-wise; keep the two in sync.
//
// With b = 1 + 1/c the kernel is
//   K(u) = (c/π) (cos u - cos bu) / u²  =  (2c/π) sin(αu) sin(βu) / u²,
// α = (b+1)/2, β = (b-1)/2. Its power series is
//   K(u) = (c/π) Σ_k a_k u^{2k},  a_k = (-1)^k (b^{2k+2} - 1) / (2k+2)!.

#include <array>
#include <cmath>
#include <cstddef>

namespace flattop::simd {

inline constexpr std::size_t kSeriesTerms = 11;

//! |u| below which K itself is evaluated from its u⁴-truncated series.
inline constexpr double kValueSeriesCut = 1e-3;

struct TrapezoidCoeffs
{
  double c = 4.0;
  double b = 1.25;
  double alpha = 1.125;
  double beta = 0.125;
  double scale = 4.0 / M_PI; // c / π
  double b2 = 1.5625;
  //! |u| below which K' and K'' use the series (1/b).
  double derivative_cut = 0.8;
  std::array<double, kSeriesTerms> series{};
};

inline TrapezoidCoeffs make_trapezoid_coeffs(double c)
{
  TrapezoidCoeffs k;
  k.c = c;
  k.b = 1.0 + 1.0 / c;
  k.alpha = 0.5 * (k.b + 1.0);
  k.beta = 0.5 / c;
  k.scale = c / M_PI;
  k.b2 = k.b * k.b;
  k.derivative_cut = 1.0 / k.b;
  const double log_b = std::log1p(1.0 / c);
  double factorial = 1.0;
  for (std::size_t i = 0; i < kSeriesTerms; ++i) {
    const double m = 2.0 * static_cast<double>(i) + 2.0;
    factorial *= (m - 1.0) * m;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    k.series[i] = sign * std::expm1(m * log_b) / factorial;
  }
  return k;
}

inline double trapezoid_value(double u, const TrapezoidCoeffs& k)
{
  const double au = std::fabs(u);
  if (au < kValueSeriesCut) {
    const double u2 = u * u;
    return k.scale * (k.series[0] + u2 * (k.series[1] + u2 * k.series[2]));
  }
  return 2.0 * k.scale * std::sin(k.alpha * u) * std::sin(k.beta * u) / (u * u);
}

inline double trapezoid_first_derivative(double u, const TrapezoidCoeffs& k)
{
  if (std::fabs(u) < k.derivative_cut) {
    const double u2 = u * u;
    double acc = 0.0;
    for (std::size_t i = kSeriesTerms - 1; i >= 1; --i)
      acc = acc * u2 + 2.0 * static_cast<double>(i) * k.series[i];
    return k.scale * acc * u;
  }
  const double n0 = std::cos(u) - std::cos(k.b * u);
  const double n1 = -std::sin(u) + k.b * std::sin(k.b * u);
  return k.scale * (u * n1 - 2.0 * n0) / (u * u * u);
}

inline double trapezoid_second_derivative(double u, const TrapezoidCoeffs& k)
{
  if (std::fabs(u) < k.derivative_cut) {
    const double u2 = u * u;
    double acc = 0.0;
    for (std::size_t i = kSeriesTerms - 1; i >= 1; --i) {
      const double m = 2.0 * static_cast<double>(i);
      acc = acc * u2 + m * (m - 1.0) * k.series[i];
    }
    return k.scale * acc;
  }
  const double cu = std::cos(u);
  const double cbu = std::cos(k.b * u);
  const double n0 = cu - cbu;
  const double n1 = -std::sin(u) + k.b * std::sin(k.b * u);
  const double n2 = -cu + k.b2 * cbu;
  const double u2 = u * u;
  return k.scale * (u2 * n2 - 4.0 * u * n1 + 6.0 * n0) / (u2 * u2);
}

} // namespace flattop::simd
