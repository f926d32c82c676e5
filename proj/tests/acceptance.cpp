// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "flattop/censored_km.hpp"
#include "flattop/ecf_bandwidth.hpp"
#include "flattop/estimators.hpp"
#include "flattop/flat_top_kernel.hpp"
#include "flattop/plugin_bandwidth.hpp"
#include "flattop/quadrature.hpp"
#include "flattop/simbench.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace flattop;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict
{
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v)
{
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1)
    return *mid;
  const double upper = *mid;
  return 0.5 * (upper + *std::max_element(v.begin(), mid));
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double flat_top_integral(const FlatTopKernel& k, double h, const std::function<double(double)>& g)
{
  auto f = [&](double t) { return k.kappa(t * h) * g(t); };
  const double inner = 1.0 / h;
  const double outer = k.support_edge() / h;
  const double tol = 1e-12;
  return (quad::adaptive_simpson(f, -outer, -inner, tol) + quad::adaptive_simpson(f, -inner, inner, tol) +
          quad::adaptive_simpson(f, inner, outer, tol)) /
         (2.0 * kPi);
}

sim::SimDesign normal_design(std::size_t n, bool censored)
{
  sim::SimDesign d;
  d.lifetime = {sim::Family::normal, 0.0, 1.0};
  if (censored)
    d.censoring = sim::Distribution{sim::Family::normal, 0.0, 1.0};
  d.n = n;
  d.reps = 2000;
  d.eval_points = {0.0, 1.0, 2.0};
  d.eval_grid = {-2.0, 2.0, 41};
  return d;
}

Verdict uncensored_normal()
{
  auto d = normal_design(50, false);
  d.name = "normal-uncensored-n50";
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = sim::run(d);
  const double secs = seconds_since(t0);
  const double mse = r.points[0].mse * 1e3;
  return {mse >= 1.2 && mse <= 4.8 && secs < 300.0 && r.failures == 0,
          fmt("MSE(0)x1e3 = %.3f (band [1.2, 4.8], reference 2.42), %zu reps in %.2f s, %zu failures", mse,
              r.successful_reps, secs, r.failures)};
}

Verdict censored_normal()
{
  auto fixed = normal_design(500, true);
  fixed.name = "normal-censored-h050";
  fixed.estimator.bandwidth = 0.5;
  const auto rf = sim::run(fixed);
  auto automatic = normal_design(500, true);
  automatic.name = "normal-censored-auto";
  const auto ra = sim::run(automatic);
  const double mf = rf.points[0].mse * 1e3;
  const double ma = ra.points[0].mse * 1e3;
  const bool pass = mf >= 0.470 / 2 && mf <= 0.470 * 2 && ma >= 0.642 / 2 && ma <= 0.642 * 2 &&
                    rf.failures == 0 && ra.failures == 0;
  return {pass, fmt("h=0.5: MSE(0)x1e3 = %.3f (band [0.235, 0.94]); auto: %.3f (band [0.321, 1.284]); "
                    "censored fraction %.3f",
                    mf, ma, ra.censoring_fraction)};
}

Verdict zero_bias()
{
  const auto t0 = std::chrono::steady_clock::now();
  auto fejer = [](double x) {
    if (std::abs(x) < 1e-4)
      return (0.5 - x * x / 24.0) / kPi;
    const double s = std::sin(0.5 * x);
    return 2.0 * s * s / (kPi * x * x);
  };
  const FlatTopKernel k;
  double worst = 0.0;
  // frequency side: E f̂(x) = (1/2π) ∫ φ(t) κ(th) e^{-itx} dt, φ(t) = (1 - |t|)⁺
  for (double h : {0.05, 0.25, 0.5, 0.8, 1.0}) {
    for (double x = -10.0; x <= 10.0 + 1e-9; x += 0.25) {
      auto g = [&](double t) { return std::max(0.0, 1.0 - std::abs(t)) * k.kappa(t * h) * std::cos(t * x); };
      const double expect =
        (quad::adaptive_simpson(g, -1.0, 0.0, 1e-13) + quad::adaptive_simpson(g, 0.0, 1.0, 1e-13)) / (2.0 * kPi);
      worst = std::max(worst, std::abs(expect - fejer(x)));
    }
  }
  // spatial side: ∫ (1/h) K((x - y)/h) f(y) dy
  for (double h : {0.5, 1.0}) {
    for (double x : {-10.0, -3.0, 0.0, 1.0, 6.5, 10.0}) {
      auto g = [&](double y) { return k.value((x - y) / h) / h * fejer(y); };
      worst = std::max(worst, std::abs(quad::simpson(g, x - 400.0, x + 400.0, 160000) - fejer(x)));
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-6 && secs < 1.0, fmt("max |E f_hat - f| = %.2e on [-10, 10] (tol 1e-6) in %.2f s", worst, secs)};
}

Verdict dual_path()
{
  std::mt19937_64 rng(20240915);
  const FlatTopKernel k;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = CensoredSample::ingest(testing::random_censored(20 + rng() % 100, rng(), 0.5, 0.5 + trial * 0.05));
    const double h = select_bandwidth(s).bandwidth;
    const auto grid = quad::linspace(s.times().front(), s.times().back(), 21);
    const auto est = density(s, k, h, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid[i];
      const double freq =
        flat_top_integral(k, h, [&](double t) { return (ecf(s, t) * std::polar(1.0, -t * x)).real(); });
      worst = std::max(worst, std::abs(est.value[i] - freq));
    }
  }
  return {worst < 1e-8, fmt("max |spatial - frequency| = %.2e over 50 samples x 21 points (tol 1e-8)", worst)};
}

Verdict km_oracle()
{
  const std::vector<CensoredObservation> obs{{1, true}, {2, false}, {3, true}};
  const auto s = CensoredSample::ingest(obs);
  const auto& w = s.weights();
  bool pass = std::abs(w[0] - 1.0 / 3.0) < 1e-15 && w[1] == 0.0 && std::abs(w[2] - 2.0 / 3.0) < 1e-15 &&
              std::abs(s.survival()(2.5) - 2.0 / 3.0) < 1e-15;
  double worst = 0.0;
  for (std::size_t n : {1u, 2u, 7u, 50u, 1000u}) {
    const auto u = CensoredSample::ingest(testing::uncensored_normal(n, n));
    for (double x : u.weights())
      worst = std::max(worst, std::abs(x - 1.0 / static_cast<double>(n)));
  }
  pass = pass && worst < 1e-15;
  return {pass, fmt("weights [%.17g, %g, %.17g], S(2.5) = %.17g, uncensored max |s_j - 1/n| = %.1e", w[0], w[1], w[2],
                    s.survival()(2.5), worst)};
}

Verdict kernel_checks()
{
  const FlatTopKernel k(4.0);
  const double k0 = flat_top_integral(k, 1.0, [](double) { return 1.0; });
  const double e0 = std::abs(k.value(0.0) - k0);
  // moments with a Gaussian convergence factor (K decays like 1/x²)
  auto damped = [&](int m) {
    const double sigma = 8.0;
    return quad::simpson(
      [&](double x) { return std::pow(x, m) * k.value(x) * std::exp(-x * x / (2.0 * sigma * sigma)); }, -80.0, 80.0,
      400000);
  };
  const double mass = damped(0);
  const double m2 = damped(2);
  double fd_worst = 0.0;
  const double step = 1e-4;
  for (double x = -10.0; x <= 10.0; x += 0.1) {
    const double fd = (k.value(x + step) - 2.0 * k.value(x) + k.value(x - step)) / (step * step);
    fd_worst = std::max(fd_worst, std::abs(k.derivative(x, 2) - fd));
  }
  const bool pass = e0 < 1e-10 && std::abs(mass - 1.0) < 1e-6 && std::abs(m2) < 1e-6 && fd_worst < 1e-5;
  return {pass, fmt("|K(0) - quad| = %.1e, int K - 1 = %.1e, int x^2 K = %.1e, max |K'' - FD| = %.1e", e0, mass - 1.0,
                    m2, fd_worst)};
}

Verdict bandwidth_behaviour()
{
  auto median_h = [](std::size_t n) {
    std::vector<double> h;
    for (std::uint64_t rep = 0; rep < 200; ++rep)
      h.push_back(select_bandwidth(CensoredSample::ingest(testing::uncensored_normal(n, 7919 * rep + n))).bandwidth);
    return median(h);
  };
  const double h100 = median_h(100);
  const double h1000 = median_h(1000);
  const double h10000 = median_h(10000);
  const bool monotone = h100 > h1000 && h1000 > h10000;

  std::mt19937_64 rng(11);
  bool shift_ok = true;
  bool scale_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    auto obs = testing::random_censored(200, rng());
    const auto ref = select_bandwidth(CensoredSample::ingest(obs));
    auto shifted = obs;
    for (auto& o : shifted)
      o.time += 5.5;
    const auto rs = select_bandwidth(CensoredSample::ingest(shifted));
    shift_ok = shift_ok && rs.t_star_index == ref.t_star_index && std::abs(rs.bandwidth / ref.bandwidth - 1.0) < 1e-12;
    for (double lambda : {0.1, 3.0, 250.0}) {
      auto scaled = obs;
      for (auto& o : scaled)
        o.time *= lambda;
      const auto r = select_bandwidth(CensoredSample::ingest(scaled));
      scale_ok = scale_ok && std::abs(r.t_star - ref.t_star / lambda) <= r.t_step * (1.0 + 1e-9);
    }
  }
  return {monotone && shift_ok && scale_ok,
          fmt("median h: n=100 %.4f > n=1000 %.4f > n=10000 %.4f; shift %s; scale %s", h100, h1000, h10000,
              shift_ok ? "exact" : "BROKEN", scale_ok ? "within one grid step" : "BROKEN")};
}

Verdict plugin_scaling()
{
  const auto s = CensoredSample::ingest(testing::random_censored(400, 3));
  PluginConfig point;
  point.mode = PluginMode::pointwise_mse;
  point.x = -0.25;
  const double frozen = h_mse(s, point, 32.0 * 400.0).bandwidth / h_mse(s, point, 400.0).bandwidth;

  auto median_mise = [](std::size_t n) {
    std::vector<double> h;
    for (std::uint64_t rep = 0; rep < 200; ++rep)
      h.push_back(h_mise(CensoredSample::ingest(testing::uncensored_normal(n, 104729 * rep + n)), {}).bandwidth);
    return median(h);
  };
  const double m100 = median_mise(100);
  const double m3200 = median_mise(3200);
  const double ratio = m3200 / m100;
  const bool pass = std::abs(frozen - 0.5) < 1e-15 && std::abs(ratio - 0.5) <= 0.15;
  return {pass, fmt("frozen-pilot ratio = %.17g; Monte Carlo median h_MISE %.4f -> %.4f, ratio %.3f (0.5 +- 0.15)",
                    frozen, m100, m3200, ratio)};
}

Verdict constant_hazard()
{
  auto design = [](std::size_t n) {
    sim::SimDesign d;
    d.name = "exponential-hazard-n" + std::to_string(n);
    d.lifetime = {sim::Family::exponential, 1.0, 0.0};
    d.censoring = sim::Distribution{sim::Family::exponential, 4.0, 0.0};
    d.n = n;
    d.reps = 500;
    d.eval_points = {0.0, 0.5, 1.0, 1.5};
    d.eval_grid = {0.0, 1.5, 31};
    d.estimator.reflect = true;
    d.target = sim::Target::hazard;
    return d;
  };
  const auto big = sim::run(design(1000));
  const auto small = sim::run(design(100));
  const bool pass = std::abs(big.grid_mean_estimate - 1.0) <= 0.15 && big.grid_average_mse < small.grid_average_mse &&
                    big.failures == 0;
  return {pass, fmt("n=1000: mean H over [0, 1.5] = %.4f (1 +- 0.15); grid MSE %.5f (n=100) -> %.5f (n=1000)",
                    big.grid_mean_estimate, small.grid_average_mse, big.grid_average_mse)};
}

} // namespace

int main()
{
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
    {"1 uncensored normal, n=50, MSE at 0", uncensored_normal},
    {"2 normal/normal censored, n=500, MSE at 0", censored_normal},
    {"3 zero bias for a band-limited density", zero_bias},
    {"4 spatial/frequency dual path", dual_path},
    {"5 Kaplan-Meier hand oracle", km_oracle},
    {"6 kernel correctness", kernel_checks},
    {"7 bandwidth behaviour", bandwidth_behaviour},
    {"8 plug-in scaling", plugin_scaling},
    {"9 constant hazard, exponential design", constant_hazard},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v{false, ""};
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  criterion %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
