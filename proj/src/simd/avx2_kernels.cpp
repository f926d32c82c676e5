// Compiled with -mavx2 -mfma. Only reached through the runtime dispatcher
// after a CPU feature check.

#include "flattop/simd/kernels.hpp"

#include <immintrin.h>

#include <array>

namespace flattop::simd::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

struct SinCos
{
  __m256d sin;
  __m256d cos;
};

inline __m256d polevl(__m256d x, const double* coef, int count)
{
  __m256d acc = _mm256_set1_pd(coef[0]);
  for (int i = 1; i < count; ++i)
    acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(coef[i]));
  return acc;
}

// Cephes-style sin/cos: reduce by multiples of π/4 (three-part Cody-Waite
// constant), then minimax polynomials on [-π/4, π/4].
inline SinCos sincos_pd(__m256d x)
{
  static constexpr double kSinCoef[] = {
    1.58962301576546568060e-10, -2.50507477628578072866e-8,
    2.75573136213857245213e-6,  -1.98412698295895385996e-4,
    8.33333333332211858878e-3,  -1.66666666666666307295e-1,
  };
  static constexpr double kCosCoef[] = {
    -1.13585365213876817300e-11, 2.08757008419747316778e-9,
    -2.75573141792967388112e-7,  2.48015872888517045348e-5,
    -1.38888888888730564116e-3,  4.16666666666665929218e-2,
  };
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  const __m256d ax = _mm256_andnot_pd(sign_bit, x);
  const __m256d x_sign = _mm256_and_pd(sign_bit, x);

  __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(1.27323954473516268615)));
  // round y up to even
  const __m256d odd =
    _mm256_sub_pd(y, _mm256_mul_pd(_mm256_set1_pd(2.0),
                                   _mm256_floor_pd(_mm256_mul_pd(y, _mm256_set1_pd(0.5)))));
  y = _mm256_add_pd(y, odd);
  const __m256d octant =
    _mm256_sub_pd(y, _mm256_mul_pd(_mm256_set1_pd(8.0),
                                   _mm256_floor_pd(_mm256_mul_pd(y, _mm256_set1_pd(0.125)))));

  __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(7.85398125648498535156e-1), ax);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(3.77489470793079817668e-8), z);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(2.69515142907905952645e-15), z);
  const __m256d zz = _mm256_mul_pd(z, z);

  const __m256d sin_poly = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), polevl(zz, kSinCoef, 6), z);
  const __m256d cos_poly =
    _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), polevl(zz, kCosCoef, 6),
                    _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0)));

  const __m256d is2 = _mm256_cmp_pd(octant, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
  const __m256d is4 = _mm256_cmp_pd(octant, _mm256_set1_pd(4.0), _CMP_EQ_OQ);
  const __m256d is6 = _mm256_cmp_pd(octant, _mm256_set1_pd(6.0), _CMP_EQ_OQ);
  const __m256d swap = _mm256_or_pd(is2, is6);
  const __m256d sin_neg = _mm256_cmp_pd(octant, _mm256_set1_pd(4.0), _CMP_GE_OQ);
  const __m256d cos_neg = _mm256_or_pd(is2, is4);

  __m256d s = _mm256_blendv_pd(sin_poly, cos_poly, swap);
  __m256d c = _mm256_blendv_pd(cos_poly, sin_poly, swap);
  s = _mm256_xor_pd(s, _mm256_and_pd(sin_neg, sign_bit));
  s = _mm256_xor_pd(s, x_sign);
  c = _mm256_xor_pd(c, _mm256_and_pd(cos_neg, sign_bit));
  return {s, c};
}

inline double horizontal_sum(__m256d v)
{
  alignas(32) std::array<double, kLanes> lanes;
  _mm256_store_pd(lanes.data(), v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

struct TrapezoidLanes
{
  __m256d scale;
  __m256d two_scale;
  __m256d alpha;
  __m256d beta;
  __m256d b;
  __m256d b2;
  __m256d value_cut;
  __m256d derivative_cut;
  __m256d series[kSeriesTerms];

  explicit TrapezoidLanes(const TrapezoidCoeffs& k)
    : scale(_mm256_set1_pd(k.scale))
    , two_scale(_mm256_set1_pd(2.0 * k.scale))
    , alpha(_mm256_set1_pd(k.alpha))
    , beta(_mm256_set1_pd(k.beta))
    , b(_mm256_set1_pd(k.b))
    , b2(_mm256_set1_pd(k.b2))
    , value_cut(_mm256_set1_pd(kValueSeriesCut))
    , derivative_cut(_mm256_set1_pd(k.derivative_cut))
  {
    for (std::size_t i = 0; i < kSeriesTerms; ++i)
      series[i] = _mm256_set1_pd(k.series[i]);
  }
};

inline __m256d abs_pd(__m256d v)
{
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

inline __m256d value_lanes(__m256d u, const TrapezoidLanes& k)
{
  const __m256d u2 = _mm256_mul_pd(u, u);
  const __m256d near =
    _mm256_mul_pd(k.scale, _mm256_add_pd(k.series[0],
                                         _mm256_mul_pd(u2, _mm256_add_pd(k.series[1],
                                                                         _mm256_mul_pd(u2, k.series[2])))));
  const __m256d sa = sincos_pd(_mm256_mul_pd(k.alpha, u)).sin;
  const __m256d sb = sincos_pd(_mm256_mul_pd(k.beta, u)).sin;
  const __m256d far = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(k.two_scale, sa), sb), u2);
  const __m256d use_near = _mm256_cmp_pd(abs_pd(u), k.value_cut, _CMP_LT_OQ);
  return _mm256_blendv_pd(far, near, use_near);
}

inline __m256d first_derivative_lanes(__m256d u, const TrapezoidLanes& k)
{
  const __m256d u2 = _mm256_mul_pd(u, u);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = kSeriesTerms - 1; i >= 1; --i) {
    const __m256d coef = _mm256_mul_pd(_mm256_set1_pd(2.0 * static_cast<double>(i)), k.series[i]);
    acc = _mm256_add_pd(_mm256_mul_pd(acc, u2), coef);
  }
  const __m256d near = _mm256_mul_pd(_mm256_mul_pd(k.scale, acc), u);

  const SinCos s1 = sincos_pd(u);
  const SinCos sb = sincos_pd(_mm256_mul_pd(k.b, u));
  const __m256d n0 = _mm256_sub_pd(s1.cos, sb.cos);
  const __m256d n1 = _mm256_add_pd(_mm256_sub_pd(_mm256_setzero_pd(), s1.sin), _mm256_mul_pd(k.b, sb.sin));
  const __m256d num = _mm256_sub_pd(_mm256_mul_pd(u, n1), _mm256_mul_pd(_mm256_set1_pd(2.0), n0));
  const __m256d far = _mm256_div_pd(_mm256_mul_pd(k.scale, num), _mm256_mul_pd(u2, u));

  const __m256d use_near = _mm256_cmp_pd(abs_pd(u), k.derivative_cut, _CMP_LT_OQ);
  return _mm256_blendv_pd(far, near, use_near);
}

inline __m256d second_derivative_lanes(__m256d u, const TrapezoidLanes& k)
{
  const __m256d u2 = _mm256_mul_pd(u, u);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = kSeriesTerms - 1; i >= 1; --i) {
    const double m = 2.0 * static_cast<double>(i);
    const __m256d coef = _mm256_mul_pd(_mm256_set1_pd(m * (m - 1.0)), k.series[i]);
    acc = _mm256_add_pd(_mm256_mul_pd(acc, u2), coef);
  }
  const __m256d near = _mm256_mul_pd(k.scale, acc);

  const SinCos s1 = sincos_pd(u);
  const SinCos sb = sincos_pd(_mm256_mul_pd(k.b, u));
  const __m256d n0 = _mm256_sub_pd(s1.cos, sb.cos);
  const __m256d n1 = _mm256_add_pd(_mm256_sub_pd(_mm256_setzero_pd(), s1.sin), _mm256_mul_pd(k.b, sb.sin));
  const __m256d n2 = _mm256_add_pd(_mm256_sub_pd(_mm256_setzero_pd(), s1.cos), _mm256_mul_pd(k.b2, sb.cos));
  __m256d num = _mm256_mul_pd(u2, n2);
  num = _mm256_sub_pd(num, _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(4.0), u), n1));
  num = _mm256_add_pd(num, _mm256_mul_pd(_mm256_set1_pd(6.0), n0));
  const __m256d far = _mm256_div_pd(_mm256_mul_pd(k.scale, num), _mm256_mul_pd(u2, u2));

  const __m256d use_near = _mm256_cmp_pd(abs_pd(u), k.derivative_cut, _CMP_LT_OQ);
  return _mm256_blendv_pd(far, near, use_near);
}

template <typename LaneFn>
double accumulate(std::span<const double> times,
                  std::span<const double> weights,
                  double x,
                  double inv_h,
                  LaneFn&& lane_fn)
{
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vinv_h = _mm256_set1_pd(inv_h);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n = times.size();
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const __m256d u = _mm256_mul_pd(_mm256_sub_pd(vx, _mm256_loadu_pd(times.data() + j)), vinv_h);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(weights.data() + j), lane_fn(u), acc);
  }
  if (j < n) {
    // padding lanes sit at u = 0 with zero weight
    alignas(32) std::array<double, kLanes> t_tail;
    alignas(32) std::array<double, kLanes> w_tail{};
    t_tail.fill(x);
    for (std::size_t i = 0; j + i < n; ++i) {
      t_tail[i] = times[j + i];
      w_tail[i] = weights[j + i];
    }
    const __m256d u = _mm256_mul_pd(_mm256_sub_pd(vx, _mm256_load_pd(t_tail.data())), vinv_h);
    acc = _mm256_fmadd_pd(_mm256_load_pd(w_tail.data()), lane_fn(u), acc);
  }
  return horizontal_sum(acc);
}

} // namespace

double trapezoid_sum(std::span<const double> times,
                     std::span<const double> weights,
                     double x,
                     double inv_h,
                     int order,
                     const TrapezoidCoeffs& coeffs)
{
  const TrapezoidLanes k(coeffs);
  switch (order) {
    case 0:
      return accumulate(times, weights, x, inv_h, [&k](__m256d u) { return value_lanes(u, k); });
    case 1:
      return accumulate(times, weights, x, inv_h, [&k](__m256d u) { return first_derivative_lanes(u, k); });
    case 2:
      return accumulate(times, weights, x, inv_h, [&k](__m256d u) { return second_derivative_lanes(u, k); });
    default:
      return 0.0;
  }
}

std::complex<double> weighted_cexp_sum(std::span<const double> times,
                                       std::span<const double> weights,
                                       double t)
{
  const __m256d vt = _mm256_set1_pd(t);
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  const std::size_t n = times.size();
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    const SinCos sc = sincos_pd(_mm256_mul_pd(vt, _mm256_loadu_pd(times.data() + j)));
    const __m256d w = _mm256_loadu_pd(weights.data() + j);
    re = _mm256_fmadd_pd(w, sc.cos, re);
    im = _mm256_fmadd_pd(w, sc.sin, im);
  }
  if (j < n) {
    alignas(32) std::array<double, kLanes> t_tail{};
    alignas(32) std::array<double, kLanes> w_tail{};
    for (std::size_t i = 0; j + i < n; ++i) {
      t_tail[i] = times[j + i];
      w_tail[i] = weights[j + i];
    }
    const SinCos sc = sincos_pd(_mm256_mul_pd(vt, _mm256_load_pd(t_tail.data())));
    const __m256d w = _mm256_load_pd(w_tail.data());
    re = _mm256_fmadd_pd(w, sc.cos, re);
    im = _mm256_fmadd_pd(w, sc.sin, im);
  }
  return {horizontal_sum(re), horizontal_sum(im)};
}

} // namespace flattop::simd::avx2
