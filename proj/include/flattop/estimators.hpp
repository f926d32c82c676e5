#pragma once

#include "flattop/censored_km.hpp"
#include "flattop/flat_top_kernel.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace flattop {

enum class EstimateKind
{
  density,
  derivative,
  hazard,
  survival_smoothed
};

std::string_view kind_name(EstimateKind kind);

struct Corrections
{
  bool reflected = false;
  bool truncated_renormalized = false;
};

//! Estimated curve on strictly ascending abscissae.
struct EstimateGrid
{
  std::vector<double> x;
  std::vector<double> value;
  double bandwidth = 0.0;
  EstimateKind kind = EstimateKind::density;
  //! Derivative order for kind == derivative (0 otherwise).
  int order = 0;
  Corrections corrections;
};

struct HazardConfig
{
  //! ksmooth-style bandwidth for smoothing Ŝ (Gaussian sd = 0.3706506 ×
  //! bandwidth, quartiles at ±bandwidth/4). Empty: use the density bandwidth.
  std::optional<double> survival_bandwidth;
  //! Lower clip ε_S for the survival denominator, in (0, 0.5).
  double survival_floor = 0.05;
  //! Reflect both the density and the smoothed survival about 0.
  bool reflect = false;
};

//! Ratio of the Gaussian sd to the ksmooth bandwidth.
inline constexpr double kKsmoothSdPerBandwidth = 0.3706506;

//! (1/h^{p+1}) Σ_j s_j K^{(p)}((x - X_j)/h) for p ∈ {0,1,2}.
double kernel_estimate_at(const CensoredSample& sample, const Kernel& kernel, double h, int p, double x);

//! f̂ on x_grid. Throws std::invalid_argument("invalid bandwidth") for h <= 0.
EstimateGrid density(const CensoredSample& sample,
                     const Kernel& kernel,
                     double h,
                     std::span<const double> x_grid);

//! f̂_p on x_grid, p ∈ {1, 2}.
EstimateGrid density_derivative(const CensoredSample& sample,
                                const Kernel& kernel,
                                double h,
                                int p,
                                std::span<const double> x_grid);

//! f̂_p(x) + (-1)^p f̂_p(-x) evaluated directly on a grid of x >= 0
//! (p = 0 gives the reflected density).
EstimateGrid reflected_estimate(const CensoredSample& sample,
                                const Kernel& kernel,
                                double h,
                                int p,
                                std::span<const double> x_grid);

//! Folds a density or derivative grid about 0: keeps x >= 0 and adds the
//! value at -x (sign (-1)^p for derivatives). Every kept x needs its mirror
//! -x on the grid.
EstimateGrid reflect(const EstimateGrid& grid);

//! Sorted union of x_grid and its mirror image, for use with reflect().
std::vector<double> mirrored_grid(std::span<const double> x_grid);

//! Clips negative density values to zero and rescales to unit quadrature
//! mass over the grid.
EstimateGrid truncate_renormalize(const EstimateGrid& grid);

//! Gaussian smoothing of the KM step function,
//!   Ŝ̃(x) = 1 - Σ_j s_j Φ((x - X_j)/σ),  σ = 0.3706506 · bandwidth,
//! clamped to [0, 1] and made nonincreasing. With `reflect` the smoothing
//! mass is folded at 0 (grid must then be >= 0).
EstimateGrid smoothed_survival(const CensoredSample& sample,
                               double bandwidth,
                               std::span<const double> x_grid,
                               bool reflect = false);

//! Ĥ(x) = f̂(x) / max(Ŝ̃(x), survival_floor).
EstimateGrid hazard(const CensoredSample& sample,
                    const Kernel& kernel,
                    double h,
                    const HazardConfig& config,
                    std::span<const double> x_grid);

//! `count` equispaced points on [X_1 - 3h, X_n + 3h] (clipped below at 0 when
//! `nonnegative`).
std::vector<double> default_grid(const CensoredSample& sample, double h, std::size_t count = 101,
                                 bool nonnegative = false);

} // namespace flattop
