#pragma once

#include "flattop/censored_km.hpp"
#include "flattop/ecf_bandwidth.hpp"
#include "flattop/flat_top_kernel.hpp"

#include <cstddef>
#include <optional>
#include <string_view>

namespace flattop {

// Plug-in bandwidths for a second-order kernel Λ (roughness R, second moment
// μ₂) under right censoring. The unknown f, f'' are replaced by flat-top
// pilots f̂, f̂₂ at the ECF bandwidth, and 1 - G by the KM estimate built
// from flipped indicators:
//   h_MSE  = ( f(x)/(1-G(x)) · R / (f''(x) μ₂)² )^{1/5} n^{-1/5}
//   h_MISE = ( ∫ f/(1-G) ω · R / (∫ (f'')² ω · μ₂²) )^{1/5} n^{-1/5}
// with ω the indicator of [lo, hi].

enum class PluginMode
{
  pointwise_mse,
  global_mise
};

std::string_view mode_name(PluginMode mode);

struct PluginConfig
{
  PluginMode mode = PluginMode::global_mise;
  //! Evaluation point for pointwise_mse.
  double x = 0.0;
  //! ω-interval for global_mise; defaults to the 5th and 95th KM percentiles.
  std::optional<double> lo;
  std::optional<double> hi;
  KernelConstants comparator = gaussian_kernel_constants();
  double flat_top_c = FlatTopKernel::kDefaultSlope;
  BandwidthConfig pilot;
  //! Skip the ECF search and use this pilot bandwidth.
  std::optional<double> pilot_bandwidth;
  //! Simpson nodes on the ω-interval.
  std::size_t mise_nodes = 201;
};

struct PluginDiagnostics
{
  // pointwise_mse
  double density = 0.0;
  double curvature = 0.0;
  double censoring_survival = 0.0;
  // global_mise
  double lo = 0.0;
  double hi = 0.0;
  double weighted_density_integral = 0.0;
  double curvature_integral = 0.0;
};

struct PluginResult
{
  PluginMode mode = PluginMode::global_mise;
  double bandwidth = 0.0;
  double pilot_bandwidth = 0.0;
  PluginDiagnostics diagnostics;
};

//! Closed-form h_MSE for given pilot values.
double plugin_mse_formula(double density,
                          double censoring_survival,
                          double curvature,
                          const KernelConstants& comparator,
                          double n);

//! Closed-form h_MISE for given pilot integrals.
double plugin_mise_formula(double weighted_density_integral,
                           double curvature_integral,
                           const KernelConstants& comparator,
                           double n);

//! Smallest X_j whose cumulative KM weight reaches q.
double weighted_quantile(const CensoredSample& sample, double q);

//! Pointwise plug-in bandwidth at config.x. `n` defaults to the sample size.
PluginResult h_mse(const CensoredSample& sample,
                   const PluginConfig& config,
                   std::optional<double> n = std::nullopt);

//! Global plug-in bandwidth over the ω-interval.
PluginResult h_mise(const CensoredSample& sample,
                    const PluginConfig& config,
                    std::optional<double> n = std::nullopt);

//! Dispatches on config.mode.
PluginResult plugin_bandwidth(const CensoredSample& sample, const PluginConfig& config);

} // namespace flattop
