#pragma once

#include "flattop/censored_km.hpp"
#include "flattop/ecf_bandwidth.hpp"
#include "flattop/estimators.hpp"
#include "flattop/plugin_bandwidth.hpp"

#include <json.hpp>

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace flattop::io {

//! Malformed input; the message names the offending line or token.
class ParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Reads `time,status` CSV (header row required, status 1 = event, 0 =
//! censored). Blank lines are skipped.
std::vector<CensoredObservation> read_censored_csv(std::istream& in, const std::string& source = "<input>");
std::vector<CensoredObservation> read_censored_csv_file(const std::string& path);

//! 17 significant digits, round-trip exact.
std::string format_double(double v);

//! `x,value` rows.
std::string estimate_csv(const EstimateGrid& grid);
nlohmann::json estimate_metadata(const EstimateGrid& grid, double kernel_c);

//! `time,status,weight,survival` rows (survival is Ŝ(X_j)).
std::string km_csv(const CensoredSample& sample);
nlohmann::json km_summary(const CensoredSample& sample);

//! `t,magnitude,threshold` rows.
std::string ecf_csv(const EcfCurve& curve);
nlohmann::json bandwidth_json(const EcfCurve& curve);

nlohmann::json plugin_json(const PluginResult& result);

//! Writes `content` to `path`; throws std::runtime_error on failure.
void write_file(const std::string& path, const std::string& content);

} // namespace flattop::io
