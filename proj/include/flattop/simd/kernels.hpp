#pragma once

// Data-parallel inner loops over observations, with a scalar reference
// implementation and ISA-specific variants chosen at runtime.

#include "flattop/simd/trapezoid_math.hpp"

#include <complex>
#include <span>
#include <string_view>

namespace flattop::simd {

enum class Isa
{
  scalar,
  avx2
};

std::string_view isa_name(Isa isa);

//! Best ISA supported by both the build and the running CPU.
Isa best_available_isa();

//! ISA used by the dispatching entry points below. Defaults to
//! best_available_isa(), unless FLATTOP_ISA=scalar is set in the environment.
Isa active_isa();

//! Overrides the active ISA (tests, benchmarking). Throws
//! std::invalid_argument if `isa` is not available.
void set_active_isa(Isa isa);

//! Σ_j w_j K^{(order)}((x - X_j) · inv_h) for the trapezoidal kernel,
//! order ∈ {0, 1, 2}. Summation order is fixed for a given ISA.
double trapezoid_sum(std::span<const double> times,
                     std::span<const double> weights,
                     double x,
                     double inv_h,
                     int order,
                     const TrapezoidCoeffs& coeffs);

//! Σ_j w_j exp(i t X_j).
std::complex<double> weighted_cexp_sum(std::span<const double> times,
                                       std::span<const double> weights,
                                       double t);

namespace scalar {
double trapezoid_sum(std::span<const double> times,
                     std::span<const double> weights,
                     double x,
                     double inv_h,
                     int order,
                     const TrapezoidCoeffs& coeffs);
std::complex<double> weighted_cexp_sum(std::span<const double> times,
                                       std::span<const double> weights,
                                       double t);
} // namespace scalar

namespace avx2 {
double trapezoid_sum(std::span<const double> times,
                     std::span<const double> weights,
                     double x,
                     double inv_h,
                     int order,
                     const TrapezoidCoeffs& coeffs);
std::complex<double> weighted_cexp_sum(std::span<const double> times,
                                       std::span<const double> weights,
                                       double t);
} // namespace avx2

} // namespace flattop::simd
