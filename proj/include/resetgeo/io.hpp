#pragma once

// JSON file formats and CSV emission.
//
// Map / rate matrix: {"dim": d, "rows": [[...], ...]}, row-major; maps are
// column-stochastic. Protocols: {"dim": d, "protocols": [{"rows": [[...]],
// "duration": tau}, ...]}. Channels: {"dim": d, "kraus": [[[re, im], ...],
// ...]}, each Kraus operator a row-major d x d matrix of [re, im] pairs;
// projectors use the same matrix encoding under "matrix". Parsers reject
// NaN/Inf and malformed shapes with ParseError.

#include <string>
#include <vector>

#include "json.hpp"

#include "resetgeo/core_maps.hpp"
#include "resetgeo/quantum_geometry.hpp"

namespace resetgeo {

using Json = nlohmann::json;

Json load_json_file(const std::string& path);

StochasticMap parse_map(const Json& j);
TransitionRateMatrix parse_rates(const Json& j);
ProtocolSequence parse_protocols(const Json& j);
KrausChannel parse_channel(const Json& j);
ProjectorQ parse_projector(const Json& j);

Json map_to_json(const StochasticMap& T);
Json channel_to_json(const KrausChannel& ch);

// 12 significant digits, '.' decimal, fixed column order; deterministic bytes.
std::string format_double(double x);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<double>& values);
  void add_row_raw(const std::vector<std::string>& cells);
  const std::string& str() const { return out_; }

 private:
  std::string out_;
  std::size_t columns_;
};

}  // namespace resetgeo
