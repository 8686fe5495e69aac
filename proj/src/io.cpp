#include "resetgeo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "resetgeo/error.hpp"

namespace resetgeo {

namespace {

double finite_number(const Json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::ParseError, std::string(what) + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorCode::ParseError, std::string(what) + ": non-finite value");
  return x;
}

int dim_field(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer()) {
    throw Error(ErrorCode::ParseError, "expected an object with an integer \"dim\"");
  }
  const int d = j["dim"].get<int>();
  if (d < 2 || d > 64) throw Error(ErrorCode::ParseError, "dim out of range");
  return d;
}

Matrix real_matrix(const Json& rows, int d, const char* what) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != d) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": expected dim rows");
  }
  Matrix m(d, d);
  for (int r = 0; r < d; ++r) {
    const Json& row = rows[r];
    if (!row.is_array() || static_cast<int>(row.size()) != d) {
      throw Error(ErrorCode::ParseError, std::string(what) + ": ragged row");
    }
    for (int c = 0; c < d; ++c) m(r, c) = finite_number(row[c], what);
  }
  return m;
}

CMatrix complex_matrix(const Json& rows, int d, const char* what) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != d) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": expected dim rows");
  }
  CMatrix m(d, d);
  for (int r = 0; r < d; ++r) {
    const Json& row = rows[r];
    if (!row.is_array() || static_cast<int>(row.size()) != d) {
      throw Error(ErrorCode::ParseError, std::string(what) + ": ragged row");
    }
    for (int c = 0; c < d; ++c) {
      const Json& cell = row[c];
      if (!cell.is_array() || cell.size() != 2) {
        throw Error(ErrorCode::ParseError, std::string(what) + ": entries must be [re, im]");
      }
      m(r, c) = std::complex<double>(finite_number(cell[0], what), finite_number(cell[1], what));
    }
  }
  return m;
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return j;
}

StochasticMap parse_map(const Json& j) {
  const int d = dim_field(j);
  if (!j.contains("rows")) throw Error(ErrorCode::ParseError, "map: missing \"rows\"");
  return validate_map(real_matrix(j["rows"], d, "map"));
}

TransitionRateMatrix parse_rates(const Json& j) {
  const int d = dim_field(j);
  if (!j.contains("rows")) throw Error(ErrorCode::ParseError, "rates: missing \"rows\"");
  return validate_rates(real_matrix(j["rows"], d, "rates"));
}

ProtocolSequence parse_protocols(const Json& j) {
  const int d = dim_field(j);
  if (!j.contains("protocols") || !j["protocols"].is_array() || j["protocols"].empty()) {
    throw Error(ErrorCode::ParseError, "protocols: expected a nonempty \"protocols\" array");
  }
  ProtocolSequence seq;
  seq.dim = d;
  for (const Json& p : j["protocols"]) {
    if (!p.is_object() || !p.contains("rows") || !p.contains("duration")) {
      throw Error(ErrorCode::ParseError, "protocols: each entry needs \"rows\" and \"duration\"");
    }
    Protocol step;
    step.rates = validate_rates(real_matrix(p["rows"], d, "protocol rates"));
    step.duration = finite_number(p["duration"], "protocol duration");
    if (step.duration <= 0.0) throw Error(ErrorCode::ParseError, "protocol duration must be positive");
    seq.protocols.push_back(std::move(step));
  }
  return seq;
}

KrausChannel parse_channel(const Json& j) {
  const int d = dim_field(j);
  if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty()) {
    throw Error(ErrorCode::ParseError, "channel: expected a nonempty \"kraus\" array");
  }
  std::vector<CMatrix> kraus;
  for (const Json& k : j["kraus"]) kraus.push_back(complex_matrix(k, d, "kraus"));
  try {
    return validate_channel(d, std::move(kraus));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::TracePreservationViolation) throw;
    throw Error(ErrorCode::ParseError, e.what());
  }
}

ProjectorQ parse_projector(const Json& j) {
  const int d = dim_field(j);
  if (!j.contains("matrix")) throw Error(ErrorCode::ParseError, "projector: missing \"matrix\"");
  return validate_projector(d, complex_matrix(j["matrix"], d, "projector"));
}

Json map_to_json(const StochasticMap& T) {
  Json rows = Json::array();
  for (int r = 0; r < T.dim; ++r) {
    Json row = Json::array();
    for (int c = 0; c < T.dim; ++c) row.push_back(T.entries(r, c));
    rows.push_back(std::move(row));
  }
  return Json{{"dim", T.dim}, {"rows", std::move(rows)}};
}

Json channel_to_json(const KrausChannel& ch) {
  Json ops = Json::array();
  for (const auto& k : ch.kraus) {
    Json rows = Json::array();
    for (int r = 0; r < ch.dim; ++r) {
      Json row = Json::array();
      for (int c = 0; c < ch.dim; ++c) {
        row.push_back(Json::array({k(r, c).real(), k(r, c).imag()}));
      }
      rows.push_back(std::move(row));
    }
    ops.push_back(std::move(rows));
  }
  return Json{{"dim", ch.dim}, {"kraus", std::move(ops)}};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ += ',';
    out_ += header[i];
  }
  out_ += '\n';
}

void CsvWriter::add_row(const std::vector<double>& values) {
  if (values.size() != columns_) throw Error(ErrorCode::InvalidArgument, "CSV row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ += ',';
    out_ += format_double(values[i]);
  }
  out_ += '\n';
}

void CsvWriter::add_row_raw(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error(ErrorCode::InvalidArgument, "CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
}

}  // namespace resetgeo
