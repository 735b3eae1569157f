#pragma once

#include <filesystem>
#include <string>

#include "lrr/nets.hpp"
#include "lrr/prob.hpp"
#include "lrr/sensing.hpp"
#include "lrr/types.hpp"

namespace lrr {

/// Locale-independent decimal form with 17 significant digits, enough to
/// round-trip any double exactly.
std::string format_float(double v);

/// Parses a decimal float; the full token must be consumed.
double parse_float(const std::string& token);

/// CSV, one matrix row per line, ',' separators, '\n' line endings, no
/// header. The reader rejects ragged rows and non-finite entries.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& a);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// One point per line. Weights are not part of the format; readers get
/// uniform weights.
void write_point_set_csv(const std::filesystem::path& path, const PointSet& ps);
PointSet read_point_set_csv(const std::filesystem::path& path);

/// One element per line, row-major flattened, plus a JSON sidecar at
/// path + ".json" recording ambient, dimensions, eps, and element count.
void write_net_csv(const std::filesystem::path& path, const Net& net);

/// JSON {n, m, replacement, omegas[], basis} where basis is "entry" or the
/// name of a CSV next to the JSON holding the flattened explicit basis.
void write_sampling_operator_json(const std::filesystem::path& path,
                                  const SamplingOperator& op);
SamplingOperator read_sampling_operator_json(const std::filesystem::path& path);

/// JSON {kind: "gaussian", m, rows, cols, seed, stream_id}; matrices are
/// re-derived from the stream layout, so only seed-derived maps serialize.
void write_gaussian_map_json(const std::filesystem::path& path,
                             const GaussianMap& map);
GaussianMap read_gaussian_map_json(const std::filesystem::path& path);

} // namespace lrr
