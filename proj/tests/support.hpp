#pragma once

#include "flattop/censored_km.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace flattop::testing {

//! Normal lifetimes censored by an independent normal, fixed seed.
inline std::vector<CensoredObservation> random_censored(std::size_t n,
                                                        std::uint64_t seed,
                                                        double censor_mean = 0.5,
                                                        double scale = 1.0)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> life(0.0, scale);
  std::normal_distribution<double> cens(censor_mean, scale);
  std::vector<CensoredObservation> out(n);
  for (auto& o : out) {
    const double t = life(rng);
    const double c = cens(rng);
    o = {std::min(t, c), t <= c};
  }
  return out;
}

inline std::vector<CensoredObservation> uncensored_normal(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> life(0.0, 1.0);
  std::vector<CensoredObservation> out(n);
  for (auto& o : out)
    o = {life(rng), true};
  return out;
}

inline CensoredSample sample_of(const std::vector<CensoredObservation>& obs)
{
  return CensoredSample::ingest(obs);
}

} // namespace flattop::testing
