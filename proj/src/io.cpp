#include "lrr/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

namespace lrr {

namespace {

using nlohmann::json;

std::string path_message(const char* what, const std::filesystem::path& path,
                         const std::string& detail) {
  std::string msg(what);
  msg += ": ";
  msg += path.string();
  if (!detail.empty()) {
    msg += " (" + detail + ")";
  }
  return msg;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument(path_message("cannot open for writing", path, ""));
  }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument(path_message("cannot open for reading", path, ""));
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<double> parse_row(const std::string& line,
                              const std::filesystem::path& path) {
  std::vector<double> row;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string token = line.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    double value = 0.0;
    try {
      value = parse_float(token);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument(
          path_message("malformed CSV value", path, "'" + token + "'"));
    }
    if (!std::isfinite(value)) {
      throw std::invalid_argument(path_message("non-finite CSV value", path, token));
    }
    row.push_back(value);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return row;
}

Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows,
                      const std::filesystem::path& path) {
  if (rows.empty()) {
    throw std::invalid_argument(path_message("empty CSV file", path, ""));
  }
  const std::size_t cols = rows.front().size();
  Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw std::invalid_argument(path_message("ragged CSV row", path,
                                               "row " + std::to_string(i + 1)));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      a(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return a;
}

void write_row(std::ofstream& out, const Matrix& a, Index i) {
  for (Index j = 0; j < a.cols(); ++j) {
    if (j > 0) out << ',';
    out << format_float(a(i, j));
  }
  out << '\n';
}

void write_flattened(std::ofstream& out, const Matrix& a) {
  bool first = true;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (!first) out << ',';
      out << format_float(a(i, j));
      first = false;
    }
  }
  out << '\n';
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << '\n';
  if (!out) {
    throw std::invalid_argument(path_message("write failed", path, ""));
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument(path_message("cannot open for reading", path, ""));
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path_message("malformed JSON", path, e.what()));
  }
  return j;
}

void require_keys(const json& j, const std::vector<std::string>& keys,
                  const std::filesystem::path& path) {
  for (const auto& key : keys) {
    if (!j.contains(key)) {
      throw std::invalid_argument(path_message("missing JSON key", path, key));
    }
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw std::invalid_argument(path_message("unknown JSON key", path, key));
    }
  }
}

} // namespace

std::string format_float(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (res.ec != std::errc{}) {
    throw NumericalError("format_float: conversion failed");
  }
  return std::string(buf, res.ptr);
}

double parse_float(const std::string& token) {
  std::size_t begin = token.find_first_not_of(" \t");
  if (begin == std::string::npos) {
    throw std::invalid_argument("parse_float: empty token");
  }
  const std::size_t end = token.find_last_not_of(" \t") + 1;
  double value = 0.0;
  const char* first = token.data() + begin;
  const char* last = token.data() + end;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw std::invalid_argument("parse_float: malformed number '" + token + "'");
  }
  return value;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& a) {
  if (a.size() == 0) {
    throw std::invalid_argument(path_message("refusing to write empty matrix", path, ""));
  }
  require_finite(a, "write_matrix_csv");
  std::ofstream out = open_for_write(path);
  for (Index i = 0; i < a.rows(); ++i) write_row(out, a, i);
  if (!out) {
    throw std::invalid_argument(path_message("write failed", path, ""));
  }
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::vector<std::vector<double>> rows;
  rows.reserve(lines.size());
  for (const std::string& line : lines) {
    rows.push_back(parse_row(line, path));
  }
  return rows_to_matrix(rows, path);
}

void write_point_set_csv(const std::filesystem::path& path, const PointSet& ps) {
  if (ps.points.empty()) {
    throw std::invalid_argument(path_message("refusing to write empty point set", path, ""));
  }
  std::ofstream out = open_for_write(path);
  for (const Vector& p : ps.points) {
    Matrix row = p.transpose();
    write_row(out, row, 0);
  }
  if (!out) {
    throw std::invalid_argument(path_message("write failed", path, ""));
  }
}

PointSet read_point_set_csv(const std::filesystem::path& path) {
  const Matrix a = read_matrix_csv(path);
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(a.rows()));
  for (Index i = 0; i < a.rows(); ++i) {
    points.push_back(a.row(i).transpose());
  }
  return make_point_set(std::move(points));
}

void write_net_csv(const std::filesystem::path& path, const Net& net) {
  if (net.elements.empty()) {
    throw std::invalid_argument(path_message("refusing to write empty net", path, ""));
  }
  std::ofstream out = open_for_write(path);
  for (const Matrix& e : net.elements) {
    write_flattened(out, e);
  }
  if (!out) {
    throw std::invalid_argument(path_message("write failed", path, ""));
  }
  json sidecar;
  sidecar["ambient"] = net_ambient_name(net.ambient);
  sidecar["n"] = net.n;
  sidecar["k"] = net.k;
  sidecar["r"] = net.r;
  sidecar["eps"] = net.eps;
  sidecar["count"] = net.elements.size();
  sidecar["element_rows"] = net.elements.front().rows();
  sidecar["element_cols"] = net.elements.front().cols();
  std::filesystem::path side = path;
  side += ".json";
  write_json_file(side, sidecar);
}

void write_sampling_operator_json(const std::filesystem::path& path,
                                  const SamplingOperator& op) {
  json j;
  j["n"] = op.n;
  j["m"] = op.omegas.size();
  j["replacement"] = op.replacement;
  j["omegas"] = op.omegas;
  if (op.basis.is_entry()) {
    j["basis"] = "entry";
  } else {
    std::filesystem::path basis_path = path;
    basis_path += ".basis.csv";
    std::ofstream out = open_for_write(basis_path);
    for (int a = 1; a <= op.basis.size(); ++a) {
      write_flattened(out, op.basis.element(a));
    }
    if (!out) {
      throw std::invalid_argument(path_message("write failed", basis_path, ""));
    }
    j["basis"] = basis_path.filename().string();
  }
  write_json_file(path, j);
}

SamplingOperator read_sampling_operator_json(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  require_keys(j, {"n", "m", "replacement", "omegas", "basis"}, path);
  if (!j["n"].is_number_integer() || !j["m"].is_number_integer() ||
      !j["replacement"].is_boolean() || !j["omegas"].is_array() ||
      !j["basis"].is_string()) {
    throw std::invalid_argument(path_message("malformed operator JSON", path, ""));
  }
  const int n = j["n"].get<int>();
  std::vector<int> omegas;
  omegas.reserve(j["omegas"].size());
  for (const auto& v : j["omegas"]) {
    if (!v.is_number_integer()) {
      throw std::invalid_argument(path_message("malformed omegas entry", path, ""));
    }
    omegas.push_back(v.get<int>());
  }
  if (j["m"].get<long>() != static_cast<long>(omegas.size())) {
    throw std::invalid_argument(
        path_message("operator JSON m does not match omegas length", path, ""));
  }
  const std::string basis_name = j["basis"].get<std::string>();
  OperatorBasis basis = OperatorBasis::entry(n);
  if (basis_name != "entry") {
    const std::filesystem::path basis_path = path.parent_path() / basis_name;
    const Matrix flat = read_matrix_csv(basis_path);
    if (flat.rows() != static_cast<Index>(n) * n ||
        flat.cols() != static_cast<Index>(n) * n) {
      throw std::invalid_argument(
          path_message("explicit basis CSV has wrong shape", basis_path, ""));
    }
    std::vector<Matrix> mats;
    mats.reserve(static_cast<std::size_t>(flat.rows()));
    for (Index row = 0; row < flat.rows(); ++row) {
      Matrix e(n, n);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) e(i, k) = flat(row, static_cast<Index>(i) * n + k);
      mats.push_back(std::move(e));
    }
    basis = OperatorBasis::explicit_basis(std::move(mats));
  }
  return make_sampling_operator(std::move(basis), std::move(omegas),
                                j["replacement"].get<bool>());
}

void write_gaussian_map_json(const std::filesystem::path& path,
                             const GaussianMap& map) {
  if (!map.from_seed) {
    throw std::invalid_argument(path_message(
        "only seed-derived maps serialize; this one carries explicit matrices",
        path, ""));
  }
  json j;
  j["kind"] = "gaussian";
  j["m"] = map.m;
  j["rows"] = map.rows;
  j["cols"] = map.cols;
  j["seed"] = map.seed;
  j["stream_id"] = map.stream_id;
  write_json_file(path, j);
}

GaussianMap read_gaussian_map_json(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  require_keys(j, {"kind", "m", "rows", "cols", "seed", "stream_id"}, path);
  if (!j["kind"].is_string() || j["kind"].get<std::string>() != "gaussian") {
    throw std::invalid_argument(path_message("unknown map kind", path, ""));
  }
  if (!j["m"].is_number_integer() || !j["rows"].is_number_integer() ||
      !j["cols"].is_number_integer() || !j["seed"].is_number_unsigned() ||
      !j["stream_id"].is_number_unsigned()) {
    throw std::invalid_argument(path_message("malformed map JSON", path, ""));
  }
  return gaussian_map_from_layout(j["seed"].get<std::uint64_t>(),
                                  j["stream_id"].get<std::uint64_t>(),
                                  j["m"].get<int>(), j["rows"].get<int>(),
                                  j["cols"].get<int>());
}

} // namespace lrr
