#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "heislab/jets.hpp"
#include "heislab/measure.hpp"

namespace heislab::io {

using json = nlohmann::ordered_json;

/// %.17g; non-finite values print as inf, -inf, nan.
std::string fmt17(double v);

/// JSON text with every floating-point number at 17 significant digits.
/// Non-finite numbers are written as the strings "inf", "-inf", "nan".
std::string dump_json(const json& j, int indent = 2);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

/// One row per node: y1..ym, f1..f_{2n+1}.
std::string sampled_to_csv(const SampledMap& f);
/// Rows may come in any order; the grid is inferred from the distinct
/// coordinate values, which must be uniformly spaced.
SampledMap sampled_from_csv(std::string_view text);

json sampled_to_json(const SampledMap& f);
SampledMap sampled_from_json(const json& j);

/// Dispatch on extension: .csv or .json.
SampledMap load_sampled(const std::filesystem::path& path);

/// Rows of x…, y…, t; an optional non-numeric header line is skipped.
PointCloud cloud_from_csv(std::string_view text);

json to_json(const DimensionFit& fit);

/// Cells coloured by value over a planar grid (log scale when `log_scale`).
std::string svg_heatmap(const GridDomain& grid, const std::vector<double>& values, std::string_view title,
                        bool log_scale);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Log-log scatter with polyline per series.
std::string svg_loglog(const std::vector<Series>& series, std::string_view title, std::string_view xlabel,
                       std::string_view ylabel);

}  // namespace heislab::io
