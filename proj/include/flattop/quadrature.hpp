#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace flattop::quad {

//! Composite Simpson rule with `intervals` subintervals (rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t intervals);

//! Adaptive Simpson with Richardson correction. `tol` is an absolute target
//! for the whole interval.
double adaptive_simpson(const std::function<double(double)>& f,
                        double a,
                        double b,
                        double tol,
                        int max_depth = 50);

//! Integral of tabulated values: composite Simpson when the abscissae are
//! equispaced with an odd count, trapezoid otherwise.
double integrate_samples(std::span<const double> x, std::span<const double> y);

//! `count` equispaced points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

} // namespace flattop::quad
