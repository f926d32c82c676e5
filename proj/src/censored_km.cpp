#include "flattop/censored_km.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace flattop {

namespace {

// P_k = prod_{j<=k} ((n-j)/(n-j+1))^δ_j for k = 0..n-1 (P_0 = 1).
std::vector<double> product_limit_levels(const std::vector<bool>& events)
{
  const std::size_t n = events.size();
  std::vector<double> levels(n, 1.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double remaining = static_cast<double>(n - k + 1); // n - j + 1, j = k
    levels[k] = events[k - 1] ? levels[k - 1] * ((remaining - 1.0) / remaining)
                              : levels[k - 1];
  }
  return levels;
}

} // namespace

SurvivalCurve::SurvivalCurve(std::vector<double> knots, std::vector<double> values)
  : knots_(std::move(knots))
  , values_(std::move(values))
{
  if (knots_.size() != values_.size() || knots_.empty())
    throw std::invalid_argument("survival curve: knots and values must be nonempty and of equal length");
}

double SurvivalCurve::operator()(double t) const
{
  // number of knots strictly below t
  const auto k = static_cast<std::size_t>(
    std::lower_bound(knots_.begin(), knots_.end(), t) - knots_.begin());
  return k < knots_.size() ? values_[k] : 0.0;
}

std::vector<double> km_weights(const std::vector<bool>& events_in_time_order)
{
  const std::size_t n = events_in_time_order.size();
  if (n == 0)
    return {};
  const auto levels = product_limit_levels(events_in_time_order);
  std::vector<double> weights(n);
  // Consecutive levels differ by a factor >= 1/2, so these differences are
  // exact in floating point and the weights telescope to 1.
  for (std::size_t j = 0; j + 1 < n; ++j)
    weights[j] = levels[j] - levels[j + 1];
  weights[n - 1] = levels[n - 1];
  return weights;
}

CensoredSample::CensoredSample(std::vector<double> times, std::vector<bool> events)
  : times_(std::move(times))
  , events_(std::move(events))
  , weights_(km_weights(events_))
{}

CensoredSample CensoredSample::ingest(std::span<const CensoredObservation> records)
{
  if (records.empty())
    throw std::invalid_argument("empty sample");
  for (const auto& r : records) {
    if (!std::isfinite(r.time))
      throw std::invalid_argument("invalid observation");
  }

  std::vector<CensoredObservation> sorted(records.begin(), records.end());
  // events before censorings at tied times
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.time != b.time)
      return a.time < b.time;
    return a.event && !b.event;
  });

  std::vector<double> times(sorted.size());
  std::vector<bool> events(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    times[i] = sorted[i].time;
    events[i] = sorted[i].event;
  }
  return CensoredSample(std::move(times), std::move(events));
}

SurvivalCurve CensoredSample::survival() const
{
  return SurvivalCurve(times_, product_limit_levels(events_));
}

CensoredSample CensoredSample::flipped() const
{
  std::vector<bool> flipped_events(events_.size());
  for (std::size_t i = 0; i < events_.size(); ++i)
    flipped_events[i] = !events_[i];
  return CensoredSample(times_, std::move(flipped_events));
}

double CensoredSample::censored_fraction() const
{
  const auto censored = std::count(events_.begin(), events_.end(), false);
  return static_cast<double>(censored) / static_cast<double>(events_.size());
}

SurvivalCurve censoring_km(const CensoredSample& sample)
{
  return sample.flipped().survival();
}

} // namespace flattop
