#include "flattop/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace flattop::io {

namespace {

std::string trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string where(const std::string& source, std::size_t line)
{
  return source + ":" + std::to_string(line) + ": ";
}

} // namespace

std::vector<CensoredObservation> read_censored_csv(std::istream& in, const std::string& source)
{
  std::vector<CensoredObservation> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty())
      continue;
    const auto comma = row.find(',');
    if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos)
      throw ParseError(where(source, line_no) + "expected two comma-separated columns, got '" + row + "'");
    const std::string first = trim(std::string_view(row).substr(0, comma));
    const std::string second = trim(std::string_view(row).substr(comma + 1));

    if (!header_seen) {
      if (first != "time" || second != "status")
        throw ParseError(where(source, line_no) + "expected header 'time,status', got '" + row + "'");
      header_seen = true;
      continue;
    }

    double time = 0.0;
    const auto [ptr, ec] = std::from_chars(first.data(), first.data() + first.size(), time);
    if (ec != std::errc() || ptr != first.data() + first.size())
      throw ParseError(where(source, line_no) + "invalid time '" + first + "'");
    if (!std::isfinite(time))
      throw ParseError(where(source, line_no) + "invalid observation: non-finite time '" + first + "'");
    if (second != "0" && second != "1")
      throw ParseError(where(source, line_no) + "invalid status '" + second + "' (expected 0 or 1)");
    out.push_back({time, second == "1"});
  }
  if (!header_seen)
    throw ParseError(source + ": missing header 'time,status'");
  return out;
}

std::vector<CensoredObservation> read_censored_csv_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open input file '" + path + "'");
  return read_censored_csv(in, path);
}

std::string format_double(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string estimate_csv(const EstimateGrid& grid)
{
  std::ostringstream os;
  os << "x,value\n";
  for (std::size_t i = 0; i < grid.x.size(); ++i)
    os << format_double(grid.x[i]) << ',' << format_double(grid.value[i]) << '\n';
  return os.str();
}

nlohmann::json estimate_metadata(const EstimateGrid& grid, double kernel_c)
{
  nlohmann::json j;
  j["bandwidth"] = grid.bandwidth;
  j["kernel_c"] = kernel_c;
  j["kind"] = std::string(kind_name(grid.kind));
  if (grid.kind == EstimateKind::derivative)
    j["order"] = grid.order;
  j["corrections"] = {{"reflected", grid.corrections.reflected},
                      {"truncated_renormalized", grid.corrections.truncated_renormalized}};
  j["points"] = grid.x.size();
  return j;
}

std::string km_csv(const CensoredSample& sample)
{
  const SurvivalCurve curve = sample.survival();
  std::ostringstream os;
  os << "time,status,weight,survival\n";
  for (std::size_t j = 0; j < sample.size(); ++j) {
    os << format_double(sample.times()[j]) << ',' << (sample.events()[j] ? 1 : 0) << ','
       << format_double(sample.weights()[j]) << ',' << format_double(curve(sample.times()[j])) << '\n';
  }
  return os.str();
}

nlohmann::json km_summary(const CensoredSample& sample)
{
  double total = 0.0;
  for (double w : sample.weights())
    total += w;
  return {{"n", sample.size()},
          {"censored_fraction", sample.censored_fraction()},
          {"weight_sum", total},
          {"last_weight", sample.weights().back()}};
}

std::string ecf_csv(const EcfCurve& curve)
{
  std::ostringstream os;
  os << "t,magnitude,threshold\n";
  for (std::size_t i = 0; i < curve.t_grid.size(); ++i)
    os << format_double(curve.t_grid[i]) << ',' << format_double(curve.magnitude[i]) << ','
       << format_double(curve.threshold) << '\n';
  return os.str();
}

nlohmann::json bandwidth_json(const EcfCurve& curve)
{
  return {{"t_star", curve.t_star},
          {"bandwidth", curve.bandwidth},
          {"ceiling_hit", curve.ceiling_hit},
          {"threshold", curve.threshold},
          {"t_step", curve.t_step},
          {"window", curve.window}};
}

nlohmann::json plugin_json(const PluginResult& result)
{
  nlohmann::json diag;
  const auto& d = result.diagnostics;
  if (result.mode == PluginMode::pointwise_mse) {
    diag = {{"density", d.density}, {"second_derivative", d.curvature}, {"censoring_survival", d.censoring_survival}};
  } else {
    diag = {{"lo", d.lo},
            {"hi", d.hi},
            {"weighted_density_integral", d.weighted_density_integral},
            {"curvature_integral", d.curvature_integral}};
  }
  return {{"mode", std::string(mode_name(result.mode))},
          {"bandwidth", result.bandwidth},
          {"pilot_bandwidth", result.pilot_bandwidth},
          {"diagnostics", diag}};
}

void write_file(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open output file '" + path + "'");
  out << content;
  if (!out)
    throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace flattop::io
