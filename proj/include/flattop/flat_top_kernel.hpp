#pragma once

#include "flattop/simd/trapezoid_math.hpp"

#include <span>

namespace flattop {

//! Even smoothing kernel with unit integral and derivatives up to order 2.
class Kernel
{
public:
  virtual ~Kernel() = default;

  virtual double value(double x) const = 0;
  //! p-th derivative, p ∈ {0, 1, 2}; other orders throw std::invalid_argument.
  virtual double derivative(double x, int p) const = 0;
  //! ∫ x² K(x) dx
  virtual double second_moment() const = 0;
  //! ∫ K(x)² dx
  virtual double roughness() const = 0;

  //! Σ_j w_j K^{(p)}((x - X_j) · inv_h).
  virtual double weighted_sum(std::span<const double> times,
                              std::span<const double> weights,
                              double x,
                              double inv_h,
                              int p) const;
};

//! Trapezoidal flat-top lag window
//!   κ(t) = 1 for |t| <= 1,  (1 + c - c|t|)⁺ otherwise,
//! and its Fourier transform K(x) = (1/2π) ∫ κ(t) e^{-itx} dt.
double kappa(double t, double c);

//! Infinite-order kernel obtained from the trapezoidal κ. All moments of
//! order 1..∞ vanish, so second_moment() is exactly 0.
class FlatTopKernel final : public Kernel
{
public:
  static constexpr double kDefaultSlope = 4.0;

  explicit FlatTopKernel(double c = kDefaultSlope);

  double c() const { return coeffs_.c; }
  //! 1 + 1/c, the frequency beyond which κ vanishes.
  double support_edge() const { return coeffs_.b; }
  double kappa(double t) const { return flattop::kappa(t, coeffs_.c); }

  double value(double x) const override;
  double derivative(double x, int p) const override;
  double second_moment() const override { return 0.0; }
  //! (1/π)(1 + 1/(3c)) by Parseval.
  double roughness() const override;

  double weighted_sum(std::span<const double> times,
                      std::span<const double> weights,
                      double x,
                      double inv_h,
                      int p) const override;

  const simd::TrapezoidCoeffs& coeffs() const { return coeffs_; }

private:
  simd::TrapezoidCoeffs coeffs_;
};

//! Standard normal density, the second-order comparator kernel.
class GaussianKernel final : public Kernel
{
public:
  double value(double x) const override;
  double derivative(double x, int p) const override;
  double second_moment() const override { return 1.0; }
  double roughness() const override;
};

struct KernelConstants
{
  double roughness;
  double second_moment;
};

//! R = 1/(2√π), μ₂ = 1.
KernelConstants gaussian_kernel_constants();

} // namespace flattop
