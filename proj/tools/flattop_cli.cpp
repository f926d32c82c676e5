// flattop: command-line front end for censored density, derivative and
// hazard estimation with flat-top kernels.
//
// Data go to files; the JSON summary of each run goes to stdout; errors go to
// stderr as a single "error: ..." line with a nonzero exit status.

#include "flattop/censored_km.hpp"
#include "flattop/ecf_bandwidth.hpp"
#include "flattop/estimators.hpp"
#include "flattop/flat_top_kernel.hpp"
#include "flattop/io.hpp"
#include "flattop/plugin_bandwidth.hpp"
#include "flattop/quadrature.hpp"
#include "flattop/simbench.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace flattop;

struct Options
{
  std::string input;
  std::string out;
  double c = FlatTopKernel::kDefaultSlope;
  double threshold_constant = 2.0;
  std::optional<double> h;
  bool reflect = false;
  bool truncate = false;
  std::vector<double> grid;
  int order = 1;
  std::optional<double> survival_bandwidth;
  double survival_floor = 0.05;
  std::string mode = "mise";
  std::optional<double> x;
  std::optional<double> lo;
  std::optional<double> hi;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  unsigned threads = 0;
};

CensoredSample load_sample(const Options& opt)
{
  const auto records = io::read_censored_csv_file(opt.input);
  auto sample = CensoredSample::ingest(records);
  if (opt.reflect && sample.times().front() < 0.0)
    std::cerr << "warning: --reflect assumes support on [0, inf) but the input has negative times\n";
  return sample;
}

BandwidthConfig bandwidth_config(const Options& opt)
{
  BandwidthConfig cfg;
  cfg.threshold_constant = opt.threshold_constant;
  return cfg;
}

double resolve_bandwidth(const CensoredSample& sample, const Options& opt)
{
  return opt.h ? *opt.h : select_bandwidth(sample, bandwidth_config(opt)).bandwidth;
}

std::vector<double> resolve_grid(const CensoredSample& sample, double h, const Options& opt)
{
  if (opt.grid.empty())
    return default_grid(sample, h, 101, opt.reflect);
  if (opt.grid.size() != 3 || opt.grid[2] < 2.0)
    throw std::invalid_argument("--grid expects lo,hi,count with count >= 2");
  return quad::linspace(opt.grid[0], opt.grid[1], static_cast<std::size_t>(opt.grid[2]));
}

void emit_grid(const EstimateGrid& grid, const Options& opt)
{
  const auto meta = io::estimate_metadata(grid, opt.c);
  io::write_file(opt.out, io::estimate_csv(grid));
  io::write_file(opt.out + ".json", meta.dump(2) + "\n");
  std::cout << meta.dump() << '\n';
}

int run_km(const Options& opt)
{
  const auto sample = load_sample(opt);
  if (!opt.out.empty())
    io::write_file(opt.out, io::km_csv(sample));
  std::cout << io::km_summary(sample).dump() << '\n';
  return 0;
}

int run_ecf(const Options& opt)
{
  const auto sample = load_sample(opt);
  const auto curve = select_bandwidth(sample, bandwidth_config(opt), true);
  io::write_file(opt.out, io::ecf_csv(curve));
  std::cout << io::bandwidth_json(curve).dump() << '\n';
  return 0;
}

int run_bandwidth(const Options& opt)
{
  const auto sample = load_sample(opt);
  const auto curve = select_bandwidth(sample, bandwidth_config(opt));
  std::cout << io::bandwidth_json(curve).dump() << '\n';
  return 0;
}

int run_density(const Options& opt)
{
  const auto sample = load_sample(opt);
  const FlatTopKernel kernel(opt.c);
  const double h = resolve_bandwidth(sample, opt);
  const auto grid = resolve_grid(sample, h, opt);
  EstimateGrid est = opt.reflect ? reflected_estimate(sample, kernel, h, 0, grid) : density(sample, kernel, h, grid);
  if (opt.truncate)
    est = truncate_renormalize(est);
  emit_grid(est, opt);
  return 0;
}

int run_derivative(const Options& opt)
{
  const auto sample = load_sample(opt);
  const FlatTopKernel kernel(opt.c);
  const double h = resolve_bandwidth(sample, opt);
  const auto grid = resolve_grid(sample, h, opt);
  if (opt.order != 1 && opt.order != 2)
    throw std::invalid_argument("derivative order not implemented");
  const EstimateGrid est = opt.reflect ? reflected_estimate(sample, kernel, h, opt.order, grid)
                                       : density_derivative(sample, kernel, h, opt.order, grid);
  emit_grid(est, opt);
  return 0;
}

int run_hazard(const Options& opt)
{
  const auto sample = load_sample(opt);
  const FlatTopKernel kernel(opt.c);
  const double h = resolve_bandwidth(sample, opt);
  const auto grid = resolve_grid(sample, h, opt);
  HazardConfig cfg;
  cfg.survival_bandwidth = opt.survival_bandwidth;
  cfg.survival_floor = opt.survival_floor;
  cfg.reflect = opt.reflect;
  emit_grid(hazard(sample, kernel, h, cfg, grid), opt);
  return 0;
}

int run_plugin(const Options& opt)
{
  const auto sample = load_sample(opt);
  PluginConfig cfg;
  cfg.flat_top_c = opt.c;
  cfg.pilot = bandwidth_config(opt);
  cfg.pilot_bandwidth = opt.h;
  if (opt.mode == "mse") {
    if (!opt.x)
      throw std::invalid_argument("--mode mse requires --x");
    cfg.mode = PluginMode::pointwise_mse;
    cfg.x = *opt.x;
  } else {
    cfg.mode = PluginMode::global_mise;
    cfg.lo = opt.lo;
    cfg.hi = opt.hi;
  }
  std::cout << io::plugin_json(plugin_bandwidth(sample, cfg)).dump() << '\n';
  return 0;
}

int run_simulate(const Options& opt)
{
  std::ifstream in(opt.config);
  if (!in)
    throw std::runtime_error("cannot open config file '" + opt.config + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(opt.config + ": " + e.what());
  }
  auto design = sim::design_from_json(j);
  if (opt.seed)
    design.seed = *opt.seed;
  if (opt.reps)
    design.reps = *opt.reps;
  if (opt.threads)
    design.threads = opt.threads;
  const auto report = sim::run(design);
  const auto out = sim::report_to_json(report);
  if (!opt.out.empty())
    io::write_file(opt.out, out.dump(2) + "\n");
  nlohmann::json summary = {{"design", report.design},
                            {"successful_reps", report.successful_reps},
                            {"failures", report.failures},
                            {"censoring_fraction", report.censoring_fraction},
                            {"grid_average_mse_x1e3", report.grid_average_mse * 1e3}};
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : report.points)
    points.push_back({{"x", p.x}, {"mse_x1e3", p.mse * 1e3}});
  summary["points"] = points;
  std::cout << summary.dump() << '\n';
  return 0;
}

void add_input(CLI::App* cmd, Options& opt)
{
  cmd->add_option("--input", opt.input, "CSV with header time,status (status 1 = event, 0 = censored)")
    ->required()
    ->check(CLI::ExistingFile);
}

void add_bandwidth_flags(CLI::App* cmd, Options& opt)
{
  cmd->add_option("--C", opt.threshold_constant, "Threshold constant C in C*sqrt(log10(n)/n)")
    ->check(CLI::PositiveNumber);
}

void add_estimator_flags(CLI::App* cmd, Options& opt)
{
  add_input(cmd, opt);
  cmd->add_option("--out", opt.out, "Output CSV (x,value); metadata goes to <out>.json")->required();
  cmd->add_option("--c", opt.c, "Trapezoid slope c of the flat-top window")->check(CLI::PositiveNumber);
  add_bandwidth_flags(cmd, opt);
  cmd->add_option("--h", opt.h, "Fixed bandwidth (default: empirical characteristic function rule)")
    ->check(CLI::PositiveNumber);
  cmd->add_flag("--reflect", opt.reflect, "Reflect about 0 for data supported on [0, inf)");
  cmd->add_option("--grid", opt.grid, "Evaluation grid lo,hi,count (default: 101 points over the data +- 3h)")
    ->delimiter(',')
    ->expected(3);
}

} // namespace

int main(int argc, char** argv)
{
  Options opt;
  CLI::App app{"Censored-data density, derivative and hazard estimation with flat-top kernels"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  auto* km = app.add_subcommand("km", "Kaplan-Meier survival curve and product-limit jump weights");
  add_input(km, opt);
  km->add_option("--out", opt.out, "Output CSV (time,status,weight,survival)");

  auto* ecf = app.add_subcommand("ecf", "|empirical characteristic function| on the search grid with its threshold");
  add_input(ecf, opt);
  add_bandwidth_flags(ecf, opt);
  ecf->add_option("--out", opt.out, "Output CSV (t,magnitude,threshold)")->required();

  auto* bw = app.add_subcommand("bandwidth", "Bandwidth 1/t* from the first sustained drop of |ecf| below threshold");
  add_input(bw, opt);
  add_bandwidth_flags(bw, opt);

  auto* dens = app.add_subcommand("density", "Flat-top kernel density estimate weighted by KM jumps");
  add_estimator_flags(dens, opt);
  dens->add_flag("--truncate", opt.truncate, "Clip negative values and renormalize to unit mass on the grid");

  auto* deriv = app.add_subcommand("derivative", "First or second derivative of the density estimate");
  add_estimator_flags(deriv, opt);
  deriv->add_option("--order", opt.order, "Derivative order (1 or 2)")->check(CLI::IsMember({1, 2}));

  auto* haz = app.add_subcommand("hazard", "Hazard estimate f/S with a smoothed KM denominator");
  add_estimator_flags(haz, opt);
  haz->add_option("--survival-bandwidth", opt.survival_bandwidth,
                  "ksmooth-style bandwidth for smoothing the KM curve (default: density bandwidth)")
    ->check(CLI::PositiveNumber);
  haz->add_option("--survival-floor", opt.survival_floor, "Lower clip for the survival denominator")
    ->check(CLI::Range(1e-12, 0.5));

  auto* plug = app.add_subcommand("plugin-bandwidth",
                                  "MSE/MISE-optimal Gaussian-kernel bandwidth with flat-top pilot estimates");
  add_input(plug, opt);
  add_bandwidth_flags(plug, opt);
  plug->add_option("--mode", opt.mode, "mse (pointwise at --x) or mise (over [--lo, --hi])")
    ->check(CLI::IsMember({"mse", "mise"}));
  plug->add_option("--x", opt.x, "Evaluation point for --mode mse");
  plug->add_option("--lo", opt.lo, "Lower end of the MISE weight interval (default: 5th KM percentile)");
  plug->add_option("--hi", opt.hi, "Upper end of the MISE weight interval (default: 95th KM percentile)");
  plug->add_option("--c", opt.c, "Trapezoid slope c of the pilot kernel")->check(CLI::PositiveNumber);
  plug->add_option("--pilot-h", opt.h, "Fixed pilot bandwidth")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo MSE study from a JSON design file");
  simulate->add_option("--config", opt.config, "Design JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", opt.out, "Report JSON");
  simulate->add_option("--seed", opt.seed, "Base seed (default: design seed, else 20240915)");
  simulate->add_option("--reps", opt.reps, "Override the replication count")->check(CLI::PositiveNumber);
  simulate->add_option("--threads", opt.threads, "Worker threads (default: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: " << msg << '\n';
    return 2;
  }

  try {
    if (km->parsed())
      return run_km(opt);
    if (ecf->parsed())
      return run_ecf(opt);
    if (bw->parsed())
      return run_bandwidth(opt);
    if (dens->parsed())
      return run_density(opt);
    if (deriv->parsed())
      return run_derivative(opt);
    if (haz->parsed())
      return run_hazard(opt);
    if (plug->parsed())
      return run_plugin(opt);
    if (simulate->parsed())
      return run_simulate(opt);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: " << msg << '\n';
    return 1;
  }
  return 1;
}
