#include "flattop/flat_top_kernel.hpp"
#include "flattop/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace flattop;

namespace {

constexpr double kPi = std::numbers::pi;

//! (1/2π) ∫ κ(t h) g(t) dt, split at the kinks of κ so each piece is smooth.
double fourier_side(const FlatTopKernel& k, double h, const std::function<double(double)>& g, double tol = 1e-13)
{
  const double inner = 1.0 / h;
  const double outer = k.support_edge() / h;
  auto f = [&](double t) { return k.kappa(t * h) * g(t); };
  const double total = quad::adaptive_simpson(f, -outer, -inner, tol) + quad::adaptive_simpson(f, -inner, inner, tol) +
                       quad::adaptive_simpson(f, inner, outer, tol);
  return total / (2.0 * kPi);
}

//! ∫ x^m K(x) exp(-x²/(2σ²)) dx on the real line; the Gaussian factor makes
//! the moments of a 1/x²-decaying kernel well defined.
double damped_moment(const Kernel& k, int m, double sigma)
{
  const double L = 10.0 * sigma;
  auto f = [&](double x) { return std::pow(x, m) * k.value(x) * std::exp(-x * x / (2.0 * sigma * sigma)); };
  return quad::simpson(f, -L, L, 400000);
}

} // namespace

TEST_CASE("kappa is the trapezoid")
{
  CHECK(kappa(0.5, 4) == 1.0);
  CHECK(kappa(1.0, 4) == 1.0);
  CHECK(kappa(1.25, 4) == 0.0);
  CHECK(kappa(1.125, 4) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(kappa(-1.125, 4) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(kappa(3.0, 4) == 0.0);

  double max_jump = 0.0;
  double prev = kappa(-2.0, 4);
  for (int i = 1; i <= 400000; ++i) {
    const double t = -2.0 + 4.0 * i / 400000.0;
    max_jump = std::max(max_jump, std::abs(kappa(t, 4) - prev));
    prev = kappa(t, 4);
  }
  CHECK(max_jump <= 4.0 * 4.0 / 400000.0 + 1e-15);
}

TEST_CASE("K(0) matches quadrature of the inverse transform")
{
  const FlatTopKernel k(4.0);
  const double oracle = fourier_side(k, 1.0, [](double) { return 1.0; });
  CHECK(std::abs(k.value(0.0) - oracle) < 1e-10);
  CHECK(k.value(0.0) == doctest::Approx(2.25 / (2.0 * kPi)).epsilon(1e-15));
  CHECK(k.value(0.0) == doctest::Approx(0.358099).epsilon(1e-6));
}

TEST_CASE("dual path: (1/h) K(x/h) equals the frequency-domain integral")
{
  for (double c : {1.0, 4.0, 10.0}) {
    const FlatTopKernel k(c);
    for (double h : {0.1, 0.5, 1.0, 2.3}) {
      for (double x : {0.0, 1e-4, 0.002, 0.3, 0.8, 1.7, 4.2, 11.0, -3.3}) {
        const double spatial = k.value(x / h) / h;
        const double oracle = fourier_side(k, h, [x](double t) { return std::cos(t * x); });
        CHECK(std::abs(spatial - oracle) < 1e-8);
      }
    }
  }
}

TEST_CASE("K is even and K' is odd")
{
  const FlatTopKernel k;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 500; ++i) {
    const double x = u(rng);
    CHECK(k.value(x) == k.value(-x));
    CHECK(k.derivative(x, 1) == -k.derivative(-x, 1));
    CHECK(k.derivative(x, 2) == k.derivative(-x, 2));
  }
  CHECK(k.derivative(0.0, 1) == 0.0);
}

TEST_CASE("unit mass and vanishing moments")
{
  const FlatTopKernel k;
  const double sigma = 8.0;
  CHECK(std::abs(damped_moment(k, 0, sigma) - 1.0) < 1e-6);
  CHECK(std::abs(damped_moment(k, 1, sigma)) < 1e-6);
  CHECK(std::abs(damped_moment(k, 2, sigma)) < 1e-6);
  CHECK(k.second_moment() == 0.0);
}

TEST_CASE("roughness matches Parseval quadrature")
{
  for (double c : {1.0, 4.0}) {
    const FlatTopKernel k(c);
    const double oracle = fourier_side(k, 1.0, [&](double t) { return k.kappa(t); });
    CHECK(k.roughness() == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("derivatives match central finite differences")
{
  const FlatTopKernel k;
  const double step = 1e-4;
  auto fd1 = [&](double x) { return (k.value(x + step) - k.value(x - step)) / (2.0 * step); };
  auto fd2 = [&](double x) { return (k.value(x + step) - 2.0 * k.value(x) + k.value(x - step)) / (step * step); };
  CHECK(std::abs(k.derivative(0.7, 2) - fd2(0.7)) < 1e-5);
  for (double x = -12.0; x <= 12.0; x += 0.173) {
    CHECK(std::abs(k.derivative(x, 1) - fd1(x)) < 1e-7);
    CHECK(std::abs(k.derivative(x, 2) - fd2(x)) < 1e-5);
  }
}

TEST_CASE("derivatives at zero equal frequency moments")
{
  for (double c : {2.0, 4.0}) {
    const FlatTopKernel k(c);
    // K''(0) = -(1/2π) ∫ t² κ(t) dt
    const double oracle = -fourier_side(k, 1.0, [](double t) { return t * t; });
    CHECK(k.derivative(0.0, 2) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("series and closed-form branches agree at the switch points")
{
  const FlatTopKernel k;
  const double cut = 1.0 / k.support_edge();
  for (double u : {cut, simd::kValueSeriesCut}) {
    for (int p = 0; p <= 2; ++p) {
      const double below = k.derivative(std::nextafter(u, 0.0), p);
      const double above = k.derivative(std::nextafter(u, 1.0), p);
      CHECK(std::abs(below - above) < 1e-11);
    }
  }
}

TEST_CASE("kernel argument validation")
{
  CHECK_THROWS_AS(FlatTopKernel(0.0), std::invalid_argument);
  CHECK_THROWS_AS(FlatTopKernel(-1.0), std::invalid_argument);
  const FlatTopKernel k;
  CHECK_THROWS_WITH_AS(k.derivative(0.5, 3), "derivative order not implemented", std::invalid_argument);
  const GaussianKernel g;
  CHECK_THROWS_WITH_AS(g.derivative(0.5, 3), "derivative order not implemented", std::invalid_argument);
}

TEST_CASE("Gaussian comparator constants")
{
  const auto consts = gaussian_kernel_constants();
  CHECK(consts.roughness == doctest::Approx(0.2820948).epsilon(1e-7));
  CHECK(consts.second_moment == 1.0);

  const GaussianKernel g;
  const double mass = quad::adaptive_simpson([&](double x) { return g.value(x); }, -12, 12, 1e-13);
  const double var = quad::adaptive_simpson([&](double x) { return x * x * g.value(x); }, -12, 12, 1e-13);
  const double rough = quad::adaptive_simpson([&](double x) { return g.value(x) * g.value(x); }, -12, 12, 1e-13);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(var == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rough == doctest::Approx(consts.roughness).epsilon(1e-10));
  CHECK(g.roughness() == consts.roughness);
  CHECK(g.derivative(0.8, 1) == doctest::Approx(-0.8 * g.value(0.8)));
  CHECK(g.derivative(0.8, 2) == doctest::Approx((0.64 - 1.0) * g.value(0.8)));
}
