#pragma once

#include "flattop/censored_km.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace flattop {

//! φ̂(t) = Σ_j s_j exp(i t X_j), the characteristic function of the KM
//! distribution.
std::complex<double> ecf(const CensoredSample& sample, double t);

//! ε_n = max(1, sqrt(log10 n)).
double default_window(std::size_t n);

//! C · sqrt(log10(n) / n).
double ecf_threshold(double threshold_constant, std::size_t n);

//! Spread of the KM distribution: sqrt(Σ s_j (X_j - mean)²).
double weighted_sd(const CensoredSample& sample);

struct BandwidthConfig
{
  //! C in the threshold C·sqrt(log10 n / n).
  double threshold_constant = 2.0;
  //! ε_n as a function of n, in units of 1/σ̂ (σ̂ = weighted_sd). Empty means
  //! default_window.
  std::function<double(std::size_t)> window_rule;
  //! Frequency grid spacing; defaults to 0.25/σ̂.
  std::optional<double> t_step;
  //! Search ceiling for t*; defaults to 400 grid steps.
  std::optional<double> t_max;
};

//! |φ̂| on the frequency grid together with the selected crossing.
struct EcfCurve
{
  std::vector<double> t_grid;
  std::vector<double> magnitude;
  double threshold = 0.0;
  double t_star = 0.0;
  //! Grid index of t_star (t_star = t_star_index · t_step).
  std::size_t t_star_index = 0;
  double bandwidth = 0.0;
  bool ceiling_hit = false;
  double t_step = 0.0;
  double window = 0.0;
};

//! Result of the crossing search on an arbitrary magnitude curve.
struct Crossing
{
  std::size_t index = 0;
  double t_star = 0.0;
  bool ceiling_hit = false;
};

//! Smallest grid point t_k = k·t_step, k >= 1, such that
//! magnitude(t) < threshold for every grid t in (t_k, t_k + window]. If none
//! exists with t_k <= t_max, returns the ceiling index with ceiling_hit set.
//! When `trace` is given every evaluated (t, magnitude) pair is appended;
//! with `full_grid` the whole grid up to t_max + window is evaluated.
Crossing find_sustained_crossing(const std::function<double(double)>& magnitude,
                                 double t_step,
                                 double t_max,
                                 double window,
                                 double threshold,
                                 EcfCurve* trace = nullptr,
                                 bool full_grid = false);

//! Empirical-characteristic-function bandwidth: ĥ = 1/t*.
//! Throws std::invalid_argument for n < 2 or a sample with zero spread.
//! With `full_grid` the returned curve covers the whole search grid,
//! otherwise only the prefix examined before t* was decided.
EcfCurve select_bandwidth(const CensoredSample& sample,
                          const BandwidthConfig& config = {},
                          bool full_grid = false);

//! Bandwidth used for the flat-top pilots f̂ and f̂₂ (same ĥ as above).
double pilot_bandwidth(const CensoredSample& sample, const BandwidthConfig& config = {});

} // namespace flattop
