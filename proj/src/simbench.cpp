#include "flattop/simbench.hpp"

#include "flattop/ecf_bandwidth.hpp"
#include "flattop/estimators.hpp"
#include "flattop/flat_top_kernel.hpp"
#include "flattop/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <thread>

namespace flattop::sim {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double normal_pdf(double z)
{
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

double normal_upper_tail(double z)
{
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

constexpr std::size_t kMassGridPoints = 801;
constexpr std::size_t kMaxFailureMessages = 5;

struct RepOutcome
{
  bool ok = false;
  std::string error;
  std::vector<double> estimate;
  double bandwidth = 0.0;
  double censored_fraction = 0.0;
};

} // namespace

double Distribution::draw(std::mt19937_64& rng) const
{
  switch (family) {
    case Family::normal:
      return std::normal_distribution<double>(first, second)(rng);
    case Family::lognormal:
      return std::lognormal_distribution<double>(first, second)(rng);
    case Family::exponential:
      return std::exponential_distribution<double>(1.0 / first)(rng);
  }
  throw std::logic_error("unknown distribution");
}

double Distribution::pdf(double x) const
{
  switch (family) {
    case Family::normal:
      return normal_pdf((x - first) / second) / second;
    case Family::lognormal:
      if (x <= 0.0)
        return 0.0;
      return normal_pdf((std::log(x) - first) / second) / (x * second);
    case Family::exponential:
      return x < 0.0 ? 0.0 : std::exp(-x / first) / first;
  }
  throw std::logic_error("unknown distribution");
}

double Distribution::survival(double x) const
{
  switch (family) {
    case Family::normal:
      return normal_upper_tail((x - first) / second);
    case Family::lognormal:
      if (x <= 0.0)
        return 1.0;
      return normal_upper_tail((std::log(x) - first) / second);
    case Family::exponential:
      return x < 0.0 ? 1.0 : std::exp(-x / first);
  }
  throw std::logic_error("unknown distribution");
}

void SimDesign::validate() const
{
  if (reps < 1)
    throw std::invalid_argument("design: reps must be >= 1");
  if (n < 2)
    throw std::invalid_argument("design: n must be >= 2");
  if (eval_grid.count < 2)
    throw std::invalid_argument("design: grid count must be >= 2");
  if (!(eval_grid.lo < eval_grid.hi))
    throw std::invalid_argument("design: grid needs lo < hi");
  if (!estimator.bandwidth && estimator.kernel != EstimatorKernel::flat_top)
    throw std::invalid_argument("design: automatic bandwidth requires the flat-top kernel");
  if (estimator.bandwidth && !(*estimator.bandwidth > 0.0))
    throw std::invalid_argument("design: invalid bandwidth");
  if (estimator.reflect) {
    const bool negative_point =
      std::any_of(eval_points.begin(), eval_points.end(), [](double x) { return x < 0.0; });
    if (negative_point || eval_grid.lo < 0.0)
      throw std::invalid_argument("design: reflected estimates need evaluation points >= 0");
  }
  const auto check_dist = [](const Distribution& d) {
    if (!(d.second > 0.0) && d.family != Family::exponential)
      throw std::invalid_argument("design: scale parameter must be positive");
    if (d.family == Family::exponential && !(d.first > 0.0))
      throw std::invalid_argument("design: exponential mean must be positive");
  };
  check_dist(lifetime);
  if (censoring)
    check_dist(*censoring);
}

std::mt19937_64 replication_rng(std::uint64_t seed, std::uint64_t rep_index)
{
  return std::mt19937_64(splitmix64(seed ^ splitmix64(rep_index + 0x632BE59BD9B4E019ull)));
}

std::vector<CensoredObservation> generate(const SimDesign& design, std::uint64_t rep_index)
{
  auto rng = replication_rng(design.seed, rep_index);
  std::vector<CensoredObservation> data(design.n);
  for (auto& obs : data) {
    const double lifetime = design.lifetime.draw(rng);
    if (design.censoring) {
      const double censor = design.censoring->draw(rng);
      obs = {std::min(lifetime, censor), lifetime <= censor};
    } else {
      obs = {lifetime, true};
    }
  }
  return data;
}

double true_curve(const SimDesign& design, double x)
{
  return design.target == Target::density ? design.lifetime.pdf(x) : design.lifetime.hazard(x);
}

SimEstimator make_estimator(const SimDesign& design)
{
  const EstimatorSpec spec = design.estimator;
  const Target target = design.target;
  const double floor = design.survival_floor;
  const std::optional<double> survival_bandwidth = design.survival_bandwidth;

  return [=](const CensoredSample& sample, std::span<const double> xs, double& bandwidth) {
    std::unique_ptr<Kernel> kernel;
    if (spec.kernel == EstimatorKernel::flat_top)
      kernel = std::make_unique<FlatTopKernel>(spec.c);
    else
      kernel = std::make_unique<GaussianKernel>();

    double h = 0.0;
    if (spec.bandwidth) {
      h = *spec.bandwidth;
    } else {
      BandwidthConfig cfg;
      cfg.threshold_constant = spec.threshold_constant;
      h = select_bandwidth(sample, cfg).bandwidth;
    }
    bandwidth = h;

    EstimateGrid f = spec.reflect ? reflected_estimate(sample, *kernel, h, 0, xs) : density(sample, *kernel, h, xs);
    if (spec.truncate) {
      const double lo = spec.reflect ? 0.0 : sample.times().front() - 6.0 * h;
      const double hi = sample.times().back() + 6.0 * h;
      const auto mass_x = quad::linspace(lo, hi, kMassGridPoints);
      const EstimateGrid wide =
        spec.reflect ? reflected_estimate(sample, *kernel, h, 0, mass_x) : density(sample, *kernel, h, mass_x);
      std::vector<double> clipped(wide.value.size());
      for (std::size_t i = 0; i < clipped.size(); ++i)
        clipped[i] = std::max(wide.value[i], 0.0);
      const double mass = quad::integrate_samples(mass_x, clipped);
      if (!(mass > 0.0))
        throw std::domain_error("degenerate estimate");
      for (double& v : f.value)
        v = std::max(v, 0.0) / mass;
    }

    if (target == Target::density)
      return f.value;

    const EstimateGrid s = smoothed_survival(sample, survival_bandwidth.value_or(h), xs, spec.reflect);
    std::vector<double> out(f.value.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = f.value[i] / std::max(s.value[i], floor);
    return out;
  };
}

MseReport run(const SimDesign& design)
{
  return run(design, make_estimator(design));
}

MseReport run(const SimDesign& design, const SimEstimator& estimator)
{
  design.validate();

  const auto grid_x = quad::linspace(design.eval_grid.lo, design.eval_grid.hi, design.eval_grid.count);
  std::vector<double> all_x(design.eval_points);
  all_x.insert(all_x.end(), grid_x.begin(), grid_x.end());
  std::sort(all_x.begin(), all_x.end());
  all_x.erase(std::unique(all_x.begin(), all_x.end()), all_x.end());
  const auto index_of = [&all_x](double x) {
    return static_cast<std::size_t>(std::lower_bound(all_x.begin(), all_x.end(), x) - all_x.begin());
  };

  std::vector<RepOutcome> outcomes(design.reps);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t rep = next.fetch_add(1); rep < design.reps; rep = next.fetch_add(1)) {
      RepOutcome& out = outcomes[rep];
      const auto data = generate(design, rep);
      try {
        const auto sample = CensoredSample::ingest(data);
        out.censored_fraction = sample.censored_fraction();
        out.estimate = estimator(sample, all_x, out.bandwidth);
        if (out.estimate.size() != all_x.size())
          throw std::runtime_error("estimator returned the wrong number of values");
        for (double v : out.estimate) {
          if (!std::isfinite(v))
            throw std::runtime_error("non-finite estimate");
        }
        out.ok = true;
      } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
      }
    }
  };

  unsigned threads = design.threads ? design.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, design.reps));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i)
      pool.emplace_back(worker);
    for (auto& t : pool)
      t.join();
  }

  std::vector<double> truth(all_x.size());
  for (std::size_t i = 0; i < all_x.size(); ++i)
    truth[i] = true_curve(design, all_x[i]);

  // fixed reduction order over rep_index
  std::vector<double> sq_err(all_x.size(), 0.0);
  std::vector<double> est_sum(all_x.size(), 0.0);
  MseReport report;
  report.design = design.name;
  report.n = design.n;
  report.reps = design.reps;
  report.estimator = design.estimator;
  report.target = design.target;
  double censored = 0.0;
  double bandwidth_sum = 0.0;
  for (const auto& out : outcomes) {
    censored += out.censored_fraction;
    if (!out.ok) {
      ++report.failures;
      if (report.failure_messages.size() < kMaxFailureMessages)
        report.failure_messages.push_back(out.error);
      continue;
    }
    ++report.successful_reps;
    bandwidth_sum += out.bandwidth;
    for (std::size_t i = 0; i < all_x.size(); ++i) {
      const double err = out.estimate[i] - truth[i];
      sq_err[i] += err * err;
      est_sum[i] += out.estimate[i];
    }
  }
  if (report.successful_reps == 0)
    throw std::runtime_error("all replications failed: " + outcomes.front().error);

  const double ok = static_cast<double>(report.successful_reps);
  report.censoring_fraction = censored / static_cast<double>(design.reps);
  report.mean_bandwidth = bandwidth_sum / ok;
  const auto point_at = [&](double x) {
    const std::size_t i = index_of(x);
    return PointResult{x, truth[i], sq_err[i] / ok, est_sum[i] / ok};
  };
  for (double x : design.eval_points)
    report.points.push_back(point_at(x));
  double mse_total = 0.0;
  double est_total = 0.0;
  for (double x : grid_x) {
    report.grid.push_back(point_at(x));
    mse_total += report.grid.back().mse;
    est_total += report.grid.back().mean_estimate;
  }
  report.grid_average_mse = mse_total / static_cast<double>(grid_x.size());
  report.grid_mean_estimate = est_total / static_cast<double>(grid_x.size());
  return report;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Distribution distribution_from_json(const json& j)
{
  const auto family = j.at("family").get<std::string>();
  Distribution d;
  if (family == "normal") {
    d.family = Family::normal;
    d.first = j.value("mean", 0.0);
    d.second = j.value("sd", 1.0);
  } else if (family == "lognormal") {
    d.family = Family::lognormal;
    d.first = j.value("meanlog", 0.0);
    d.second = j.value("sdlog", 1.0);
  } else if (family == "exponential") {
    d.family = Family::exponential;
    d.first = j.value("mean", 1.0);
    d.second = 0.0;
  } else {
    throw std::invalid_argument("unknown distribution: " + family);
  }
  return d;
}

json distribution_to_json(const Distribution& d)
{
  switch (d.family) {
    case Family::normal:
      return {{"family", "normal"}, {"mean", d.first}, {"sd", d.second}};
    case Family::lognormal:
      return {{"family", "lognormal"}, {"meanlog", d.first}, {"sdlog", d.second}};
    case Family::exponential:
      return {{"family", "exponential"}, {"mean", d.first}};
  }
  return {};
}

json estimator_to_json(const EstimatorSpec& e)
{
  json j;
  j["kernel"] = e.kernel == EstimatorKernel::flat_top ? "flat_top" : "gaussian";
  if (e.bandwidth)
    j["bandwidth"] = *e.bandwidth;
  else
    j["bandwidth"] = "auto";
  j["c"] = e.c;
  j["C"] = e.threshold_constant;
  j["reflect"] = e.reflect;
  j["truncate"] = e.truncate;
  return j;
}

json point_to_json(const PointResult& p)
{
  return {{"x", p.x},
          {"truth", p.truth},
          {"mse", p.mse},
          {"mse_x1e3", p.mse * 1e3},
          {"mean_estimate", p.mean_estimate}};
}

} // namespace

SimDesign design_from_json(const json& j)
{
  try {
    SimDesign d;
    d.name = j.value("name", std::string("design"));
    d.lifetime = distribution_from_json(j.at("lifetime"));
    if (j.contains("censoring") && !(j["censoring"].is_string() && j["censoring"] == "none") &&
        !j["censoring"].is_null())
      d.censoring = distribution_from_json(j["censoring"]);
    d.n = j.at("n").get<std::size_t>();
    d.reps = j.value("reps", d.reps);
    d.seed = j.value("seed", kDefaultSeed);
    if (j.contains("eval_points"))
      d.eval_points = j["eval_points"].get<std::vector<double>>();
    if (j.contains("eval_grid")) {
      const auto& g = j["eval_grid"];
      if (g.is_array()) {
        d.eval_grid = {g.at(0).get<double>(), g.at(1).get<double>(), g.at(2).get<std::size_t>()};
      } else {
        d.eval_grid = {g.at("lo").get<double>(), g.at("hi").get<double>(), g.at("count").get<std::size_t>()};
      }
    }
    if (j.contains("estimator")) {
      const auto& e = j["estimator"];
      const auto kernel = e.value("kernel", std::string("flat_top"));
      if (kernel == "flat_top")
        d.estimator.kernel = EstimatorKernel::flat_top;
      else if (kernel == "gaussian")
        d.estimator.kernel = EstimatorKernel::gaussian;
      else
        throw std::invalid_argument("unknown estimator kernel: " + kernel);
      if (e.contains("bandwidth") && e["bandwidth"].is_number())
        d.estimator.bandwidth = e["bandwidth"].get<double>();
      else if (e.contains("bandwidth") && !(e["bandwidth"].is_string() && e["bandwidth"] == "auto"))
        throw std::invalid_argument("estimator bandwidth must be a number or \"auto\"");
      d.estimator.c = e.value("c", d.estimator.c);
      d.estimator.threshold_constant = e.value("C", d.estimator.threshold_constant);
      d.estimator.reflect = e.value("reflect", false);
      d.estimator.truncate = e.value("truncate", false);
    }
    const auto target = j.value("target", std::string("density"));
    if (target == "density")
      d.target = Target::density;
    else if (target == "hazard")
      d.target = Target::hazard;
    else
      throw std::invalid_argument("unknown target: " + target);
    if (j.contains("hazard")) {
      const auto& h = j["hazard"];
      d.survival_floor = h.value("survival_floor", d.survival_floor);
      if (h.contains("survival_bandwidth") && h["survival_bandwidth"].is_number())
        d.survival_bandwidth = h["survival_bandwidth"].get<double>();
    }
    d.threads = j.value("threads", 0u);
    d.validate();
    return d;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("design: ") + e.what());
  }
}

json design_to_json(const SimDesign& d)
{
  json j;
  j["name"] = d.name;
  j["lifetime"] = distribution_to_json(d.lifetime);
  j["censoring"] = d.censoring ? distribution_to_json(*d.censoring) : json("none");
  j["n"] = d.n;
  j["reps"] = d.reps;
  j["seed"] = d.seed;
  j["eval_points"] = d.eval_points;
  j["eval_grid"] = {{"lo", d.eval_grid.lo}, {"hi", d.eval_grid.hi}, {"count", d.eval_grid.count}};
  j["estimator"] = estimator_to_json(d.estimator);
  j["target"] = d.target == Target::density ? "density" : "hazard";
  json hz = {{"survival_floor", d.survival_floor}};
  if (d.survival_bandwidth)
    hz["survival_bandwidth"] = *d.survival_bandwidth;
  j["hazard"] = hz;
  j["threads"] = d.threads;
  return j;
}

json report_to_json(const MseReport& r)
{
  json j;
  j["design"] = r.design;
  j["n"] = r.n;
  j["reps"] = r.reps;
  j["successful_reps"] = r.successful_reps;
  j["failures"] = r.failures;
  j["failure_messages"] = r.failure_messages;
  j["censoring_fraction"] = r.censoring_fraction;
  j["mean_bandwidth"] = r.mean_bandwidth;
  j["target"] = r.target == Target::density ? "density" : "hazard";
  j["estimator"] = estimator_to_json(r.estimator);
  json points = json::array();
  for (const auto& p : r.points)
    points.push_back(point_to_json(p));
  j["points"] = points;
  json grid_points = json::array();
  for (const auto& p : r.grid)
    grid_points.push_back(point_to_json(p));
  j["grid"] = {{"lo", r.grid.empty() ? 0.0 : r.grid.front().x},
               {"hi", r.grid.empty() ? 0.0 : r.grid.back().x},
               {"count", r.grid.size()},
               {"average_mse", r.grid_average_mse},
               {"average_mse_x1e3", r.grid_average_mse * 1e3},
               {"mean_estimate", r.grid_mean_estimate},
               {"points", grid_points}};
  return j;
}

} // namespace flattop::sim
