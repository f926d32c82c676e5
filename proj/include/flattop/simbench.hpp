#pragma once

#include "flattop/censored_km.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace flattop::sim {

inline constexpr std::uint64_t kDefaultSeed = 20240915;

enum class Family
{
  normal,
  lognormal,
  exponential
};

//! Parametric lifetime or censoring law.
//!   normal:      first = mean,    second = sd
//!   lognormal:   first = meanlog, second = sdlog
//!   exponential: first = mean
struct Distribution
{
  Family family = Family::normal;
  double first = 0.0;
  double second = 1.0;

  double draw(std::mt19937_64& rng) const;
  double pdf(double x) const;
  double survival(double x) const;
  double hazard(double x) const { return pdf(x) / survival(x); }
};

enum class EstimatorKernel
{
  flat_top,
  gaussian
};

struct EstimatorSpec
{
  EstimatorKernel kernel = EstimatorKernel::flat_top;
  //! Fixed bandwidth; empty selects it from the ECF (flat-top only).
  std::optional<double> bandwidth;
  double c = 4.0;
  double threshold_constant = 2.0;
  bool reflect = false;
  bool truncate = false;
};

enum class Target
{
  density,
  hazard
};

struct GridSpec
{
  double lo = -2.0;
  double hi = 2.0;
  std::size_t count = 41;
};

struct SimDesign
{
  std::string name = "design";
  Distribution lifetime;
  //! Empty means no censoring.
  std::optional<Distribution> censoring;
  std::size_t n = 50;
  std::size_t reps = 2000;
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> eval_points{0.0, 1.0, 2.0};
  GridSpec eval_grid;
  EstimatorSpec estimator;
  Target target = Target::density;
  double survival_floor = 0.05;
  std::optional<double> survival_bandwidth;
  //! Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;

  //! Throws std::invalid_argument on violated invariants.
  void validate() const;
};

struct PointResult
{
  double x = 0.0;
  double truth = 0.0;
  double mse = 0.0;
  double mean_estimate = 0.0;
};

struct MseReport
{
  std::string design;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::size_t successful_reps = 0;
  std::size_t failures = 0;
  std::vector<std::string> failure_messages;
  double censoring_fraction = 0.0;
  double mean_bandwidth = 0.0;
  std::vector<PointResult> points;
  std::vector<PointResult> grid;
  double grid_average_mse = 0.0;
  double grid_mean_estimate = 0.0;
  EstimatorSpec estimator;
  Target target = Target::density;
};

//! Estimates at `xs` for one replication; writes the bandwidth it used.
using SimEstimator =
  std::function<std::vector<double>(const CensoredSample&, std::span<const double> xs, double& bandwidth)>;

//! Per-replication RNG seeded from a hash of (seed, rep_index).
std::mt19937_64 replication_rng(std::uint64_t seed, std::uint64_t rep_index);

//! Z_i = min(lifetime, censoring), Δ_i = [lifetime <= censoring].
std::vector<CensoredObservation> generate(const SimDesign& design, std::uint64_t rep_index);

//! Exact target value (density or hazard of the lifetime law) at x.
double true_curve(const SimDesign& design, double x);

//! The estimator described by design.estimator and design.target.
SimEstimator make_estimator(const SimDesign& design);

//! Runs design.reps replications and aggregates pointwise and grid MSE.
MseReport run(const SimDesign& design);
MseReport run(const SimDesign& design, const SimEstimator& estimator);

SimDesign design_from_json(const nlohmann::json& j);
nlohmann::json design_to_json(const SimDesign& design);
nlohmann::json report_to_json(const MseReport& report);

} // namespace flattop::sim
