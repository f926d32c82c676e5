#include "flattop/ecf_bandwidth.hpp"

#include "flattop/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flattop {

std::complex<double> ecf(const CensoredSample& sample, double t)
{
  return simd::weighted_cexp_sum(sample.times(), sample.weights(), t);
}

double default_window(std::size_t n)
{
  return std::max(1.0, std::sqrt(std::log10(static_cast<double>(n))));
}

double ecf_threshold(double threshold_constant, std::size_t n)
{
  const double dn = static_cast<double>(n);
  return threshold_constant * std::sqrt(std::log10(dn) / dn);
}

double weighted_sd(const CensoredSample& sample)
{
  const auto& x = sample.times();
  const auto& w = sample.weights();
  double mean = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    mean += w[j] * x[j];
  double var = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    var += w[j] * (x[j] - mean) * (x[j] - mean);
  return std::sqrt(var);
}

Crossing find_sustained_crossing(const std::function<double(double)>& magnitude,
                                 double t_step,
                                 double t_max,
                                 double window,
                                 double threshold,
                                 EcfCurve* trace,
                                 bool full_grid)
{
  if (!(t_step > 0.0) || !(t_max > t_step) || !(window > 0.0))
    throw std::invalid_argument("invalid frequency grid");

  const auto ceiling = static_cast<std::size_t>(std::floor(t_max / t_step + 1e-9));
  const auto window_points =
    std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(window / t_step + 1e-9)));
  const std::size_t last = ceiling + window_points;

  Crossing result;
  bool found = false;
  std::size_t run = 0;
  for (std::size_t i = 0; i <= last; ++i) {
    const double t = t_step * static_cast<double>(i);
    const double m = magnitude(t);
    if (trace) {
      trace->t_grid.push_back(t);
      trace->magnitude.push_back(m);
    }
    if (found) {
      if (!full_grid)
        break;
      continue;
    }
    // runs may only start at index 2 so that t* >= t_1 > 0
    run = (i >= 2 && m < threshold) ? run + 1 : 0;
    if (run == window_points) {
      result.index = i - window_points;
      found = true;
      if (!full_grid)
        break;
    }
  }
  if (!found) {
    result.index = ceiling;
    result.ceiling_hit = true;
  }
  result.t_star = result.ceiling_hit ? t_max : t_step * static_cast<double>(result.index);
  return result;
}

EcfCurve select_bandwidth(const CensoredSample& sample, const BandwidthConfig& config, bool full_grid)
{
  const std::size_t n = sample.size();
  if (n < 2)
    throw std::invalid_argument("bandwidth selection needs at least two observations");
  if (!(config.threshold_constant > 0.0))
    throw std::invalid_argument("threshold constant C must be positive");
  const double sd = weighted_sd(sample);
  if (!(sd > 0.0))
    throw std::invalid_argument("degenerate sample: zero spread");

  const double unit = 1.0 / sd;
  const double window_std = config.window_rule ? config.window_rule(n) : default_window(n);
  if (!(window_std > 0.0))
    throw std::invalid_argument("window rule must be positive");

  EcfCurve curve;
  curve.t_step = config.t_step.value_or(0.25 * unit);
  const double t_max = config.t_max.value_or(400.0 * curve.t_step);
  curve.window = window_std * unit;
  curve.threshold = ecf_threshold(config.threshold_constant, n);

  const auto magnitude = [&sample](double t) { return std::abs(ecf(sample, t)); };
  const Crossing crossing =
    find_sustained_crossing(magnitude, curve.t_step, t_max, curve.window, curve.threshold, &curve, full_grid);

  curve.t_star = crossing.t_star;
  curve.t_star_index = crossing.index;
  curve.ceiling_hit = crossing.ceiling_hit;
  curve.bandwidth = 1.0 / crossing.t_star;
  return curve;
}

double pilot_bandwidth(const CensoredSample& sample, const BandwidthConfig& config)
{
  return select_bandwidth(sample, config).bandwidth;
}

} // namespace flattop
