#include "flattop/plugin_bandwidth.hpp"

#include "flattop/estimators.hpp"
#include "flattop/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace flattop {

namespace {

double resolve_pilot_bandwidth(const CensoredSample& sample, const PluginConfig& config)
{
  if (config.pilot_bandwidth) {
    if (!(*config.pilot_bandwidth > 0.0))
      throw std::invalid_argument("invalid bandwidth");
    return *config.pilot_bandwidth;
  }
  return pilot_bandwidth(sample, config.pilot);
}

double resolve_n(const CensoredSample& sample, std::optional<double> n)
{
  const double value = n.value_or(static_cast<double>(sample.size()));
  if (!(value > 0.0))
    throw std::invalid_argument("sample size must be positive");
  return value;
}

} // namespace

std::string_view mode_name(PluginMode mode)
{
  return mode == PluginMode::pointwise_mse ? "mse" : "mise";
}

double plugin_mse_formula(double density,
                          double censoring_survival,
                          double curvature,
                          const KernelConstants& comparator,
                          double n)
{
  if (curvature == 0.0)
    throw std::domain_error("flat second derivative; pointwise plug-in undefined");
  if (!(censoring_survival > 0.0))
    throw std::domain_error("no risk mass at x");
  if (!(density > 0.0))
    throw std::domain_error("nonpositive pilot density; pointwise plug-in undefined");
  const double spread = curvature * comparator.second_moment;
  const double ratio = (density / censoring_survival) * comparator.roughness / (spread * spread);
  return std::pow(ratio, 0.2) * std::pow(n, -0.2);
}

double plugin_mise_formula(double weighted_density_integral,
                           double curvature_integral,
                           const KernelConstants& comparator,
                           double n)
{
  if (!(curvature_integral > 0.0))
    throw std::domain_error("flat pilot curvature");
  if (!(weighted_density_integral > 0.0))
    throw std::domain_error("nonpositive pilot density mass");
  const double mu2 = comparator.second_moment;
  const double ratio = weighted_density_integral * comparator.roughness / (curvature_integral * mu2 * mu2);
  return std::pow(ratio, 0.2) * std::pow(n, -0.2);
}

double weighted_quantile(const CensoredSample& sample, double q)
{
  const auto& x = sample.times();
  const auto& w = sample.weights();
  double cumulative = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    cumulative += w[j];
    if (cumulative >= q)
      return x[j];
  }
  return x.back();
}

PluginResult h_mse(const CensoredSample& sample, const PluginConfig& config, std::optional<double> n)
{
  if (!std::isfinite(config.x))
    throw std::invalid_argument("pointwise plug-in needs a finite x");
  const double dn = resolve_n(sample, n);
  const double pilot_h = resolve_pilot_bandwidth(sample, config);
  const FlatTopKernel kernel(config.flat_top_c);

  PluginResult result;
  result.mode = PluginMode::pointwise_mse;
  result.pilot_bandwidth = pilot_h;
  auto& d = result.diagnostics;
  d.density = kernel_estimate_at(sample, kernel, pilot_h, 0, config.x);
  d.curvature = kernel_estimate_at(sample, kernel, pilot_h, 2, config.x);
  d.censoring_survival = censoring_km(sample)(config.x);
  result.bandwidth = plugin_mse_formula(d.density, d.censoring_survival, d.curvature, config.comparator, dn);
  return result;
}

PluginResult h_mise(const CensoredSample& sample, const PluginConfig& config, std::optional<double> n)
{
  const double lo = config.lo.value_or(weighted_quantile(sample, 0.05));
  const double hi = config.hi.value_or(weighted_quantile(sample, 0.95));
  if (!(lo < hi))
    throw std::invalid_argument("weight interval needs lo < hi");
  if (hi < sample.times().front() || lo > sample.times().back())
    throw std::invalid_argument("weight interval does not overlap the data");
  const double dn = resolve_n(sample, n);
  const double pilot_h = resolve_pilot_bandwidth(sample, config);
  const FlatTopKernel kernel(config.flat_top_c);
  const SurvivalCurve censor_surv = censoring_km(sample);

  std::size_t nodes = config.mise_nodes < 3 ? 3 : config.mise_nodes;
  if (nodes % 2 == 0)
    ++nodes;
  const auto grid = quad::linspace(lo, hi, nodes);
  std::vector<double> numerator(nodes);
  std::vector<double> curvature(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double x = grid[i];
    const double risk = censor_surv(x);
    if (!(risk > 0.0))
      throw std::domain_error("no risk mass at x = " + std::to_string(x));
    numerator[i] = kernel_estimate_at(sample, kernel, pilot_h, 0, x) / risk;
    const double f2 = kernel_estimate_at(sample, kernel, pilot_h, 2, x);
    curvature[i] = f2 * f2;
  }

  PluginResult result;
  result.mode = PluginMode::global_mise;
  result.pilot_bandwidth = pilot_h;
  auto& d = result.diagnostics;
  d.lo = lo;
  d.hi = hi;
  d.weighted_density_integral = quad::integrate_samples(grid, numerator);
  d.curvature_integral = quad::integrate_samples(grid, curvature);
  result.bandwidth = plugin_mise_formula(d.weighted_density_integral, d.curvature_integral, config.comparator, dn);
  return result;
}

PluginResult plugin_bandwidth(const CensoredSample& sample, const PluginConfig& config)
{
  return config.mode == PluginMode::pointwise_mse ? h_mse(sample, config) : h_mise(sample, config);
}

} // namespace flattop
