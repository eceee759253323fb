#include "heislab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "heislab/errors.hpp"

namespace heislab::io {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n')) {
    line = trim(line);
    if (!line.empty() && line.front() != '#') out.push_back(line);
  }
  return out;
}

void emit(const json& j, int indent, int depth, std::string& out) {
  const auto pad = [&](int d) {
    if (indent >= 0) {
      out += '\n';
      out.append(static_cast<std::size_t>(indent * d), ' ');
    }
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        out += json(it.key()).dump();
        out += indent >= 0 ? ": " : ":";
        emit(it.value(), indent, depth + 1, out);
      }
      pad(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) pad(depth + 1);
        emit(e, indent, depth + 1, out);
      }
      if (!flat) pad(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) {
        out += fmt17(v);
      } else {
        out += '"' + fmt17(v) + '"';
      }
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const json& j, int indent) {
  std::string out;
  emit(j, indent, 0, out);
  out += '\n';
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open output file " + path.string());
  os << text;
  if (!os) throw InvalidArgument("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open input file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// SampledMap

std::string sampled_to_csv(const SampledMap& f) {
  const int m = f.domain.m();
  const int d = f.components();
  std::string out;
  for (int k = 0; k < m; ++k) out += (k ? ",y" : "y") + std::to_string(k + 1);
  for (int c = 0; c < d; ++c) out += ",f" + std::to_string(c + 1);
  out += '\n';
  std::vector<double> y(m);
  for (std::size_t i = 0; i < f.domain.size(); ++i) {
    f.domain.coords(i, y);
    for (int k = 0; k < m; ++k) out += (k ? "," : "") + fmt17(y[k]);
    for (double v : f.value(i)) out += "," + fmt17(v);
    out += '\n';
  }
  return out;
}

SampledMap sampled_from_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.size() < 2) throw InvalidArgument("sampled map CSV: need a header and at least one row");
  const auto header = split(lines.front(), ',');
  int m = 0;
  while (m < static_cast<int>(header.size()) && !trim(header[m]).empty() && trim(header[m]).front() == 'y') ++m;
  const int d = static_cast<int>(header.size()) - m;
  if (m < 1) throw InvalidArgument("sampled map CSV: header must start with y1..ym");
  if (d < 3 || d % 2 == 0) throw InvalidArgument("sampled map CSV: need 2n+1 value columns f1..f_{2n+1}");

  const std::size_t rows = lines.size() - 1;
  std::vector<double> table(rows * header.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const auto cells = split(lines[r + 1], ',');
    if (cells.size() != header.size()) {
      throw InvalidArgument("sampled map CSV: row " + std::to_string(r + 2) + " has the wrong column count");
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_double(cells[c], table[r * header.size() + c])) {
        throw InvalidArgument("sampled map CSV: bad number in row " + std::to_string(r + 2));
      }
    }
  }

  std::vector<double> origin(m), spacing(m);
  std::vector<std::size_t> counts(m);
  for (int k = 0; k < m; ++k) {
    std::vector<double> vals(rows);
    for (std::size_t r = 0; r < rows; ++r) vals[r] = table[r * header.size() + k];
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (vals.size() < 3) throw InvalidArgument("sampled map CSV: each axis needs at least 3 distinct values");
    origin[k] = vals.front();
    counts[k] = vals.size();
    spacing[k] = (vals.back() - vals.front()) / static_cast<double>(vals.size() - 1);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double expect = origin[k] + spacing[k] * static_cast<double>(i);
      if (std::abs(vals[i] - expect) > 1e-9 * (std::abs(spacing[k]) + std::abs(expect))) {
        throw InvalidArgument("sampled map CSV: axis y" + std::to_string(k + 1) + " is not uniformly spaced");
      }
    }
  }
  GridDomain dom(origin, spacing, counts);
  if (dom.size() != rows) throw InvalidArgument("sampled map CSV: rows do not fill a tensor grid");
  std::vector<double> values(rows * d);
  std::vector<unsigned char> seen(rows, 0);
  std::vector<std::size_t> multi(m);
  for (std::size_t r = 0; r < rows; ++r) {
    for (int k = 0; k < m; ++k) {
      multi[k] = static_cast<std::size_t>(std::llround((table[r * header.size() + k] - origin[k]) / spacing[k]));
    }
    const std::size_t node = dom.node_at(multi);
    if (seen[node]) throw InvalidArgument("sampled map CSV: duplicate grid node");
    seen[node] = 1;
    for (int c = 0; c < d; ++c) values[node * d + c] = table[r * header.size() + m + c];
  }
  return SampledMap(dom, HeisDim((d - 1) / 2), std::move(values));
}

json sampled_to_json(const SampledMap& f) {
  json j;
  j["n"] = f.dim.n();
  j["origin"] = f.domain.origin();
  j["spacing"] = f.domain.spacing();
  j["counts"] = f.domain.counts();
  j["values"] = f.values;
  return j;
}

SampledMap sampled_from_json(const json& j) {
  try {
    GridDomain dom(j.at("origin").get<std::vector<double>>(), j.at("spacing").get<std::vector<double>>(),
                   j.at("counts").get<std::vector<std::size_t>>());
    return SampledMap(dom, HeisDim(j.at("n").get<int>()), j.at("values").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("sampled map JSON: ") + e.what());
  }
}

SampledMap load_sampled(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  const std::string text = read_text(path);
  if (ext == ".csv") return sampled_from_csv(text);
  if (ext == ".json") {
    try {
      return sampled_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
      throw InvalidArgument(std::string("sampled map JSON: ") + e.what());
    }
  }
  throw InvalidArgument("unsupported sampled map format '" + ext + "' (use .csv or .json)");
}

PointCloud cloud_from_csv(std::string_view text) {
  const auto lines = lines_of(text);
  std::vector<double> coords;
  std::size_t width = 0;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t c = 0; c < cells.size(); ++c) numeric = numeric && parse_double(cells[c], row[c]);
    if (!numeric) {
      if (r == 0) continue;
      throw InvalidArgument("point cloud CSV: bad number in row " + std::to_string(r + 1));
    }
    if (width == 0) width = row.size();
    if (row.size() != width) throw InvalidArgument("point cloud CSV: ragged rows");
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (coords.empty()) throw InvalidArgument("point cloud CSV: empty cloud");
  if (width < 3 || width % 2 == 0) throw InvalidArgument("point cloud CSV: need 2n+1 columns per row");
  return PointCloud(HeisDim(static_cast<int>(width - 1) / 2), std::move(coords));
}

json to_json(const DimensionFit& fit) {
  json j;
  j["gauge"] = to_string(fit.gauge);
  j["slope"] = fit.slope;
  j["half_width"] = fit.half_width;
  j["intercept"] = fit.intercept;
  j["residual"] = fit.residual;
  j["scales"] = fit.scales;
  j["counts"] = fit.counts;
  return j;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string colour(double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const int r = static_cast<int>(255 * std::clamp(1.5 * t, 0.0, 1.0));
  const int g = static_cast<int>(255 * std::clamp(1.5 * t - 0.5, 0.0, 1.0));
  const int b = static_cast<int>(255 * std::clamp(0.6 - t, 0.0, 1.0));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string svg_heatmap(const GridDomain& grid, const std::vector<double>& values, std::string_view title,
                        bool log_scale) {
  if (grid.m() != 2) throw InvalidArgument("svg_heatmap: needs a planar grid");
  const std::size_t nx = grid.counts()[0], ny = grid.counts()[1];
  const double cell = std::max(1.0, 512.0 / static_cast<double>(std::max(nx, ny)));
  auto tr = [&](double v) { return log_scale ? std::log10(std::max(v, 1e-300)) : v; };
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v) || (log_scale && v <= 0.0)) continue;
    lo = std::min(lo, tr(v));
    hi = std::max(hi, tr(v));
  }
  if (!(hi > lo)) hi = lo + 1.0;
  std::ostringstream os;
  const double w = cell * nx, h = cell * ny;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h + 40 << "\">\n";
  os << "<text x=\"4\" y=\"16\" font-size=\"13\">" << escape(title) << " [" << fmt17(lo) << ", " << fmt17(hi)
     << (log_scale ? "] (log10)" : "]") << "</text>\n";
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double v = values[i + j * nx];
      const double t = (log_scale && v <= 0.0) ? 0.0 : (tr(v) - lo) / (hi - lo);
      os << "<rect x=\"" << cell * i << "\" y=\"" << 24 + cell * (ny - 1 - j) << "\" width=\"" << cell
         << "\" height=\"" << cell << "\" fill=\"" << colour(t) << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_loglog(const std::vector<Series>& series, std::string_view title, std::string_view xlabel,
                       std::string_view ylabel) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      x0 = std::min(x0, std::log10(s.x[i]));
      x1 = std::max(x1, std::log10(s.x[i]));
      y0 = std::min(y0, std::log10(s.y[i]));
      y1 = std::max(y1, std::log10(s.y[i]));
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  const double W = 560, H = 400, L = 60, B = 40;
  auto px = [&](double x) { return L + (std::log10(x) - x0) / (x1 - x0) * (W - L - 20); };
  auto py = [&](double y) { return H - B - (std::log10(y) - y0) / (y1 - y0) * (H - B - 30); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<text x=\"" << L << "\" y=\"18\" font-size=\"13\">" << escape(title) << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - 20 << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"30\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 8 << "\" font-size=\"12\">" << escape(xlabel) << " (log10 "
     << fmt17(x0) << " .. " << fmt17(x1) << ")</text>\n";
  os << "<text x=\"4\" y=\"" << H / 2 << "\" font-size=\"12\">" << escape(ylabel) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* col = palette[k % 5];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.x[i] > 0.0 && s.y[i] > 0.0) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.x[i] > 0.0 && s.y[i] > 0.0) {
        os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
      }
    }
    os << "<text x=\"" << W - 160 << "\" y=\"" << 40 + 16 * k << "\" font-size=\"12\" fill=\"" << col << "\">"
       << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace heislab::io
