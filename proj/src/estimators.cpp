#include "flattop/estimators.hpp"

#include "flattop/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flattop {

namespace {

void check_bandwidth(double h)
{
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("invalid bandwidth");
}

void check_grid(std::span<const double> x)
{
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || (i > 0 && !(x[i] > x[i - 1])))
      throw std::invalid_argument("invalid evaluation grid: abscissae must be finite and strictly ascending");
  }
}

void check_nonnegative_grid(std::span<const double> x)
{
  if (!x.empty() && x.front() < 0.0)
    throw std::invalid_argument("reflected estimates are defined only for x >= 0");
}

double normal_cdf(double z)
{
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

} // namespace

std::string_view kind_name(EstimateKind kind)
{
  switch (kind) {
    case EstimateKind::density:
      return "density";
    case EstimateKind::derivative:
      return "derivative";
    case EstimateKind::hazard:
      return "hazard";
    case EstimateKind::survival_smoothed:
      return "survival-smoothed";
  }
  return "unknown";
}

double kernel_estimate_at(const CensoredSample& sample, const Kernel& kernel, double h, int p, double x)
{
  check_bandwidth(h);
  const double inv_h = 1.0 / h;
  const double sum = kernel.weighted_sum(sample.times(), sample.weights(), x, inv_h, p);
  return sum * std::pow(inv_h, p + 1);
}

EstimateGrid density(const CensoredSample& sample,
                     const Kernel& kernel,
                     double h,
                     std::span<const double> x_grid)
{
  check_bandwidth(h);
  check_grid(x_grid);
  EstimateGrid out;
  out.x.assign(x_grid.begin(), x_grid.end());
  out.value.resize(out.x.size());
  for (std::size_t i = 0; i < out.x.size(); ++i)
    out.value[i] = kernel_estimate_at(sample, kernel, h, 0, out.x[i]);
  out.bandwidth = h;
  out.kind = EstimateKind::density;
  return out;
}

EstimateGrid density_derivative(const CensoredSample& sample,
                                const Kernel& kernel,
                                double h,
                                int p,
                                std::span<const double> x_grid)
{
  if (p != 1 && p != 2)
    throw std::invalid_argument("derivative order not implemented");
  check_bandwidth(h);
  check_grid(x_grid);
  EstimateGrid out;
  out.x.assign(x_grid.begin(), x_grid.end());
  out.value.resize(out.x.size());
  for (std::size_t i = 0; i < out.x.size(); ++i)
    out.value[i] = kernel_estimate_at(sample, kernel, h, p, out.x[i]);
  out.bandwidth = h;
  out.kind = EstimateKind::derivative;
  out.order = p;
  return out;
}

EstimateGrid reflected_estimate(const CensoredSample& sample,
                                const Kernel& kernel,
                                double h,
                                int p,
                                std::span<const double> x_grid)
{
  check_bandwidth(h);
  check_grid(x_grid);
  check_nonnegative_grid(x_grid);
  const double sign = (p % 2 == 0) ? 1.0 : -1.0;
  EstimateGrid out;
  out.x.assign(x_grid.begin(), x_grid.end());
  out.value.resize(out.x.size());
  for (std::size_t i = 0; i < out.x.size(); ++i) {
    const double x = out.x[i];
    out.value[i] = kernel_estimate_at(sample, kernel, h, p, x) +
                   sign * kernel_estimate_at(sample, kernel, h, p, -x);
  }
  out.bandwidth = h;
  out.kind = p == 0 ? EstimateKind::density : EstimateKind::derivative;
  out.order = p;
  out.corrections.reflected = true;
  return out;
}

EstimateGrid reflect(const EstimateGrid& grid)
{
  if (grid.kind != EstimateKind::density && grid.kind != EstimateKind::derivative)
    throw std::invalid_argument("reflection applies to density");
  const double sign = (grid.order % 2 == 0) ? 1.0 : -1.0;

  EstimateGrid out;
  out.bandwidth = grid.bandwidth;
  out.kind = grid.kind;
  out.order = grid.order;
  out.corrections = grid.corrections;
  out.corrections.reflected = true;

  for (std::size_t i = 0; i < grid.x.size(); ++i) {
    const double x = grid.x[i];
    if (x < 0.0)
      continue;
    const double tol = 1e-12 * std::max(1.0, std::fabs(x));
    const auto it = std::lower_bound(grid.x.begin(), grid.x.end(), -x - tol);
    if (it == grid.x.end() || std::fabs(*it + x) > tol)
      throw std::invalid_argument("reflection needs the mirrored abscissa -x on the grid");
    const auto mirror = static_cast<std::size_t>(it - grid.x.begin());
    out.x.push_back(x);
    out.value.push_back(grid.value[i] + sign * grid.value[mirror]);
  }
  return out;
}

std::vector<double> mirrored_grid(std::span<const double> x_grid)
{
  std::vector<double> out;
  out.reserve(2 * x_grid.size());
  for (double x : x_grid) {
    out.push_back(x);
    out.push_back(-x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EstimateGrid truncate_renormalize(const EstimateGrid& grid)
{
  if (grid.kind != EstimateKind::density)
    throw std::invalid_argument("truncation applies to density");
  EstimateGrid out = grid;
  for (double& v : out.value)
    v = std::max(v, 0.0);
  const double mass = quad::integrate_samples(out.x, out.value);
  if (!(mass > 0.0))
    throw std::domain_error("degenerate estimate");
  for (double& v : out.value)
    v /= mass;
  out.corrections.truncated_renormalized = true;
  return out;
}

EstimateGrid smoothed_survival(const CensoredSample& sample,
                               double bandwidth,
                               std::span<const double> x_grid,
                               bool reflect)
{
  check_bandwidth(bandwidth);
  check_grid(x_grid);
  if (reflect)
    check_nonnegative_grid(x_grid);
  const double sd = kKsmoothSdPerBandwidth * bandwidth;
  const auto& t = sample.times();
  const auto& w = sample.weights();

  EstimateGrid out;
  out.x.assign(x_grid.begin(), x_grid.end());
  out.value.resize(out.x.size());
  for (std::size_t i = 0; i < out.x.size(); ++i) {
    const double x = out.x[i];
    double cdf = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      double mass = normal_cdf((x - t[j]) / sd);
      if (reflect)
        mass -= normal_cdf((-x - t[j]) / sd);
      cdf += w[j] * mass;
    }
    out.value[i] = std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  // isotonic (nonincreasing) pass
  for (std::size_t i = 1; i < out.value.size(); ++i)
    out.value[i] = std::min(out.value[i], out.value[i - 1]);

  out.bandwidth = bandwidth;
  out.kind = EstimateKind::survival_smoothed;
  out.corrections.reflected = reflect;
  return out;
}

EstimateGrid hazard(const CensoredSample& sample,
                    const Kernel& kernel,
                    double h,
                    const HazardConfig& config,
                    std::span<const double> x_grid)
{
  if (!(config.survival_floor > 0.0 && config.survival_floor < 0.5))
    throw std::invalid_argument("survival floor must lie in (0, 0.5)");
  const EstimateGrid f = config.reflect ? reflected_estimate(sample, kernel, h, 0, x_grid)
                                        : density(sample, kernel, h, x_grid);
  const EstimateGrid s =
    smoothed_survival(sample, config.survival_bandwidth.value_or(h), x_grid, config.reflect);

  EstimateGrid out = f;
  for (std::size_t i = 0; i < out.value.size(); ++i)
    out.value[i] = f.value[i] / std::max(s.value[i], config.survival_floor);
  out.kind = EstimateKind::hazard;
  return out;
}

std::vector<double> default_grid(const CensoredSample& sample, double h, std::size_t count, bool nonnegative)
{
  double lo = sample.times().front() - 3.0 * h;
  const double hi = sample.times().back() + 3.0 * h;
  if (nonnegative)
    lo = std::max(lo, 0.0);
  return quad::linspace(lo, hi, count);
}

} // namespace flattop
