#include "flattop/plugin_bandwidth.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace flattop;

TEST_CASE("pointwise formula with synthetic pilots")
{
  const auto g = gaussian_kernel_constants();
  // (0.2/0.5 · R / 1)^{1/5} with R = 1/(2√π), evaluated independently in
  // extended precision: 0.64636…
  const long double oracle = std::pow(0.4L * (1.0L / (2.0L * std::sqrt(3.14159265358979323846L))), 0.2L);
  CHECK(plugin_mse_formula(0.2, 0.5, 1.0, g, 1.0) == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-14));
  CHECK(plugin_mse_formula(0.2, 0.5, 1.0, g, 1.0) == doctest::Approx(0.6464).epsilon(1e-4));
  for (double n : {10.0, 100.0, 12345.0})
    CHECK(plugin_mse_formula(0.2, 0.5, 1.0, g, n) ==
          doctest::Approx(static_cast<double>(oracle) * std::pow(n, -0.2)).epsilon(1e-14));
}

TEST_CASE("n^{-1/5} law and roughness homogeneity")
{
  const auto g = gaussian_kernel_constants();
  for (double n : {50.0, 100.0, 3125.0}) {
    const double h1 = plugin_mse_formula(0.3, 0.8, -1.7, g, n);
    const double h32 = plugin_mse_formula(0.3, 0.8, -1.7, g, 32.0 * n);
    CHECK(h32 / h1 == doctest::Approx(0.5).epsilon(1e-15));
    const double m1 = plugin_mise_formula(0.9, 0.4, g, n);
    CHECK(plugin_mise_formula(0.9, 0.4, g, 32.0 * n) / m1 == doctest::Approx(0.5).epsilon(1e-15));
  }
  KernelConstants doubled = g;
  doubled.roughness *= 2.0;
  CHECK(plugin_mse_formula(0.3, 0.8, 2.0, doubled, 100.0) / plugin_mse_formula(0.3, 0.8, 2.0, g, 100.0) ==
        doctest::Approx(std::pow(2.0, 0.2)).epsilon(1e-15));
}

TEST_CASE("constant pilots reduce the global formula to the pointwise one")
{
  const auto g = gaussian_kernel_constants();
  const double f = 0.25, surv = 0.6, f2 = -0.9, len = 1.7;
  CHECK(plugin_mise_formula(f / surv * len, f2 * f2 * len, g, 200.0) ==
        doctest::Approx(plugin_mse_formula(f, surv, f2, g, 200.0)).epsilon(1e-14));
}

TEST_CASE("sample pilots: frozen pilot values give exact n scaling")
{
  const auto s = CensoredSample::ingest(testing::random_censored(300, 6));
  PluginConfig cfg;
  cfg.mode = PluginMode::pointwise_mse;
  cfg.x = -0.2;
  const auto base = h_mse(s, cfg, 300.0);
  const auto big = h_mse(s, cfg, 9600.0);
  CHECK(big.bandwidth / base.bandwidth == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(base.bandwidth > 0.0);
  CHECK(base.pilot_bandwidth == pilot_bandwidth(s));
  CHECK(base.diagnostics.censoring_survival == censoring_km(s)(-0.2));

  PluginConfig mise;
  const auto m = h_mise(s, mise);
  CHECK(m.bandwidth > 0.0);
  CHECK(m.diagnostics.lo == weighted_quantile(s, 0.05));
  CHECK(m.diagnostics.hi == weighted_quantile(s, 0.95));
  CHECK(h_mise(s, mise, 32.0 * 300.0).bandwidth / m.bandwidth == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(plugin_bandwidth(s, mise).bandwidth == m.bandwidth);
}

TEST_CASE("shrinking the weight interval recovers the pointwise bandwidth")
{
  const auto s = CensoredSample::ingest(testing::random_censored(400, 13));
  PluginConfig point;
  point.mode = PluginMode::pointwise_mse;
  point.x = -0.35;
  const auto hp = h_mse(s, point);
  PluginConfig narrow;
  narrow.lo = point.x - 1e-6;
  narrow.hi = point.x + 1e-6;
  const auto hm = h_mise(s, narrow);
  CHECK(hm.bandwidth == doctest::Approx(hp.bandwidth).epsilon(1e-6));
}

TEST_CASE("uncensored data has unit censoring survival")
{
  const auto s = CensoredSample::ingest(testing::uncensored_normal(250, 2));
  PluginConfig cfg;
  cfg.mode = PluginMode::pointwise_mse;
  cfg.x = 0.7;
  const auto r = h_mse(s, cfg);
  CHECK(r.diagnostics.censoring_survival == 1.0);
  CHECK(r.bandwidth == plugin_mse_formula(r.diagnostics.density, 1.0, r.diagnostics.curvature,
                                          gaussian_kernel_constants(), 250.0));
}

TEST_CASE("weighted quantile")
{
  const std::vector<CensoredObservation> obs{{1, true}, {2, false}, {3, true}};
  const auto s = CensoredSample::ingest(obs);
  CHECK(weighted_quantile(s, 0.05) == 1.0);
  CHECK(weighted_quantile(s, 0.3) == 1.0);
  CHECK(weighted_quantile(s, 0.5) == 3.0);
  CHECK(weighted_quantile(s, 1.0) == 3.0);
}

TEST_CASE("plug-in error paths")
{
  const auto g = gaussian_kernel_constants();
  CHECK_THROWS_WITH_AS(plugin_mse_formula(0.2, 0.5, 0.0, g, 100.0),
                       "flat second derivative; pointwise plug-in undefined", std::domain_error);
  CHECK_THROWS_WITH_AS(plugin_mse_formula(0.2, 0.0, 1.0, g, 100.0), "no risk mass at x", std::domain_error);
  CHECK_THROWS_AS(plugin_mse_formula(-0.1, 0.5, 1.0, g, 100.0), std::domain_error);
  CHECK_THROWS_WITH_AS(plugin_mise_formula(1.0, 0.0, g, 100.0), "flat pilot curvature", std::domain_error);

  const auto s = CensoredSample::ingest(testing::random_censored(100, 3));
  PluginConfig point;
  point.mode = PluginMode::pointwise_mse;
  point.x = s.times().back() + 1.0;
  CHECK_THROWS_AS(h_mse(s, point), std::domain_error);

  PluginConfig inverted;
  inverted.lo = 1.0;
  inverted.hi = 0.0;
  CHECK_THROWS_AS(h_mise(s, inverted), std::invalid_argument);
  PluginConfig outside;
  outside.lo = s.times().back() + 10.0;
  outside.hi = s.times().back() + 11.0;
  CHECK_THROWS_AS(h_mise(s, outside), std::invalid_argument);
  PluginConfig bad_pilot;
  bad_pilot.pilot_bandwidth = -1.0;
  CHECK_THROWS_WITH_AS(h_mise(s, bad_pilot), "invalid bandwidth", std::invalid_argument);
}
