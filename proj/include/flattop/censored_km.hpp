#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace flattop {

//! One right-censored record: observed time min(lifetime, censoring time) and
//! whether the lifetime was the one observed.
struct CensoredObservation
{
  double time;
  bool event;
};

//! Kaplan-Meier step function Ŝ. Left-continuous at the knots:
//!   Ŝ(t) = 1                                for t <= X_1,
//!   Ŝ(t) = prod_{j<k} ((n-j)/(n-j+1))^δ_j   for X_{k-1} < t <= X_k,
//!   Ŝ(t) = 0                                for t > X_n.
class SurvivalCurve
{
public:
  SurvivalCurve(std::vector<double> knots, std::vector<double> values);

  //! Ŝ(t) as the exact step function.
  double operator()(double t) const;

  const std::vector<double>& knots() const { return knots_; }
  //! values()[k] is Ŝ on (X_k, X_{k+1}] with X_0 = -inf (1-based knots), so
  //! values()[0] = 1 and values()[n-1] = Ŝ(X_n).
  const std::vector<double>& values() const { return values_; }

private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

//! Ordered censored sample with product-limit jump weights.
//!
//! Observations are sorted ascending by time. At tied times events come
//! before censorings. The last observation always carries the remaining mass
//! Ŝ(X_n), whether or not it is censored, so the weights sum to one.
class CensoredSample
{
public:
  //! Sorts `records` and computes weights. Throws std::invalid_argument
  //! ("empty sample", "invalid observation").
  static CensoredSample ingest(std::span<const CensoredObservation> records);

  std::size_t size() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<bool>& events() const { return events_; }
  const std::vector<double>& weights() const { return weights_; }

  //! Product-limit survival curve of the lifetimes.
  SurvivalCurve survival() const;

  //! Same observations with every indicator flipped, in the same order.
  //! Its survival() estimates 1 - G, the censoring survival function.
  CensoredSample flipped() const;

  //! Fraction of censored observations.
  double censored_fraction() const;

private:
  CensoredSample(std::vector<double> times, std::vector<bool> events);

  std::vector<double> times_;
  std::vector<bool> events_;
  std::vector<double> weights_;
};

//! Jump heights s_j of Ŝ for an already sorted sample:
//! s_j = Ŝ(X_j) - Ŝ(X_{j+1}) for j < n and s_n = Ŝ(X_n).
std::vector<double> km_weights(const std::vector<bool>& events_in_time_order);

//! KM curve of the censoring distribution (1 - Ĝ), built from flipped indicators.
SurvivalCurve censoring_km(const CensoredSample& sample);

} // namespace flattop
