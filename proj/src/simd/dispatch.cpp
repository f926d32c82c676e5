#include "flattop/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace flattop::simd {

#if !defined(FLATTOP_HAVE_AVX2)
namespace avx2 {
double trapezoid_sum(std::span<const double>, std::span<const double>, double, double, int,
                     const TrapezoidCoeffs&)
{
  throw std::logic_error("avx2 kernels not built");
}
std::complex<double> weighted_cexp_sum(std::span<const double>, std::span<const double>, double)
{
  throw std::logic_error("avx2 kernels not built");
}
} // namespace avx2
#endif

namespace {

bool cpu_has_avx2()
{
#if defined(FLATTOP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa()
{
  if (const char* forced = std::getenv("FLATTOP_ISA"); forced && std::string(forced) == "scalar")
    return Isa::scalar;
  return best_available_isa();
}

std::atomic<Isa>& active()
{
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

} // namespace

std::string_view isa_name(Isa isa)
{
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

Isa best_available_isa()
{
  static const Isa best = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  return best;
}

Isa active_isa()
{
  return active().load(std::memory_order_relaxed);
}

void set_active_isa(Isa isa)
{
  if (isa == Isa::avx2 && best_available_isa() != Isa::avx2)
    throw std::invalid_argument("avx2 kernels are not available on this build or CPU");
  active().store(isa, std::memory_order_relaxed);
}

double trapezoid_sum(std::span<const double> times,
                     std::span<const double> weights,
                     double x,
                     double inv_h,
                     int order,
                     const TrapezoidCoeffs& coeffs)
{
  if (order < 0 || order > 2)
    throw std::invalid_argument("derivative order not implemented");
  if (active_isa() == Isa::avx2)
    return avx2::trapezoid_sum(times, weights, x, inv_h, order, coeffs);
  return scalar::trapezoid_sum(times, weights, x, inv_h, order, coeffs);
}

std::complex<double> weighted_cexp_sum(std::span<const double> times,
                                       std::span<const double> weights,
                                       double t)
{
  if (active_isa() == Isa::avx2)
    return avx2::weighted_cexp_sum(times, weights, t);
  return scalar::weighted_cexp_sum(times, weights, t);
}

} // namespace flattop::simd
