#include "heislab/commands.hpp"

#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <sstream>

#include "heislab/battery.hpp"
#include "heislab/blowup.hpp"
#include "heislab/contact.hpp"
#include "heislab/errors.hpp"
#include "heislab/io.hpp"
#include "heislab/jets.hpp"
#include "heislab/measure.hpp"
#include "heislab/parallel.hpp"

namespace heislab {

namespace fs = std::filesystem;
using io::json;

namespace {

std::string prefix_of(const ExperimentConfig& cfg) { return cfg.has("prefix") ? cfg.str("prefix") : cfg.command(); }

fs::path out_path(const ExperimentConfig& cfg, const std::string& suffix) {
  return fs::path(cfg.str("output_dir")) / (prefix_of(cfg) + "_" + suffix);
}

void emit(CommandResult& res, const fs::path& path, std::string_view text) {
  io::write_text(path, text);
  res.outputs.push_back(path);
}

double real_or(const ExperimentConfig& cfg, const std::string& key, double fallback) {
  return cfg.has(key) ? cfg.real(key) : fallback;
}

std::vector<std::size_t> counts_for(const ExperimentConfig& cfg, int m, std::vector<std::size_t> fallback) {
  if (cfg.has("grid_counts")) {
    const auto v = cfg.integers("grid_counts");
    if (static_cast<int>(v.size()) != m) {
      throw InvalidArgument("grid_counts needs " + std::to_string(m) + " entries, got " + std::to_string(v.size()));
    }
    std::vector<std::size_t> out;
    for (long c : v) {
      if (c < 3) throw InvalidArgument("grid_counts entries must be >= 3");
      out.push_back(static_cast<std::size_t>(c));
    }
    return out;
  }
  if (cfg.has("grid_count")) {
    const long c = cfg.integer("grid_count");
    if (c < 3) throw InvalidArgument("grid_count must be >= 3");
    return std::vector<std::size_t>(m, static_cast<std::size_t>(c));
  }
  return fallback;
}

GridDomain grid_for(const ExperimentConfig& cfg, int m, double lo, double hi, std::vector<std::size_t> fallback) {
  lo = real_or(cfg, "grid_lo", lo);
  hi = real_or(cfg, "grid_hi", hi);
  if (!(hi > lo)) throw InvalidArgument("grid_hi must exceed grid_lo");
  const auto counts = counts_for(cfg, m, std::move(fallback));
  std::vector<double> spacing;
  for (std::size_t c : counts) spacing.push_back((hi - lo) / static_cast<double>(c - 1));
  return GridDomain(std::vector<double>(m, lo), spacing, counts);
}

std::size_t default_count(int m) { return m <= 2 ? 129 : (m == 3 ? 33 : 9); }

struct Source {
  std::string label;
  SampledMap map;
};

Source load_source(const ExperimentConfig& cfg) {
  if (cfg.has("map") && cfg.has("input")) throw InvalidArgument("set either map or input, not both");
  if (cfg.has("input")) return {cfg.str("input"), io::load_sampled(cfg.str("input"))};
  if (!cfg.has("map")) throw InvalidArgument("missing map source: set --map <gallery id> or --input <file>");
  const AnalyticMap f = gallery_map(cfg.str("map"));
  const GridDomain grid = grid_for(cfg, f.m, -1.0, 1.0, std::vector<std::size_t>(f.m, default_count(f.m)));
  return {f.id, sample_analytic(f, grid)};
}

json grid_json(const GridDomain& g) {
  json j;
  j["origin"] = g.origin();
  j["spacing"] = g.spacing();
  j["counts"] = g.counts();
  return j;
}

// Interior-node discrepancy between wedge columns obtained by slicing the
// sampled map and the full wedge field; fills the per-node columns.
double sliced_wedges(const SampledMap& f, const WedgeField& full, std::vector<std::vector<double>>& columns) {
  const GridDomain& dom = f.domain;
  const int m = dom.m();
  double worst = 0.0;
  for (int k = 0; k < m; ++k) {
    for (int l = k + 1; l < m; ++l) {
      std::vector<double> col(dom.size(), 0.0);
      std::vector<std::size_t> base(m);
      for (std::size_t node = 0; node < dom.size(); ++node) {
        if (dom.index_along(node, k) != 0 || dom.index_along(node, l) != 0) continue;
        for (int a = 0; a < m; ++a) base[a] = dom.index_along(node, a);
        const SliceSpec spec{k, l, base};
        const WedgeField w = wedge_field(jacobian_fd(slice(f, spec)));
        const std::size_t ck = dom.counts()[k];
        for (std::size_t dst = 0; dst < w.domain.size(); ++dst) {
          const std::size_t src = node + (dst % ck) * dom.stride(k) + (dst / ck) * dom.stride(l);
          col[src] = w.at(dst, 0, 1);
          if (full.interior[src]) worst = std::max(worst, std::abs(col[src] - full.at(src, k, l)));
        }
      }
      columns.push_back(std::move(col));
    }
  }
  return worst;
}

std::vector<double> dyadic_scales(const ExperimentConfig& cfg) {
  if (cfg.has("scales")) return cfg.reals("scales");
  const double hi = cfg.positive("delta_max");
  const double lo = cfg.positive("delta_min");
  if (!(lo <= hi)) throw InvalidArgument("delta_min must not exceed delta_max");
  std::vector<double> out;
  for (double d = hi; d >= lo * (1.0 - 1e-12); d *= 0.5) out.push_back(d);
  return out;
}

std::vector<GaugeKind> gauges_of(const ExperimentConfig& cfg) {
  const std::string g = cfg.str("gauge");
  if (g == "both") return {GaugeKind::Euclidean, GaugeKind::Koranyi};
  const GaugeKind k = parse_gauge_kind(g);
  if (k == GaugeKind::CarnotCaratheodory) {
    throw InvalidArgument("box counting uses koranyi or euclidean boxes; cc is not a box family");
  }
  return {k};
}

template <PointSource S>
CommandResult measure_on(const S& src, const ExperimentConfig& cfg, const std::string& label, double exponent,
                         json hypothesis) {
  const std::vector<double> scales = dyadic_scales(cfg);
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("scales must be positive");
  }
  const std::vector<GaugeKind> gauges = gauges_of(cfg);
  std::vector<BoxScale> boxes;
  for (GaugeKind g : gauges)
    for (double s : scales) boxes.push_back({s, g});
  if (src.size() == 0) throw InvalidArgument("empty point cloud");
  const auto counts = count_boxes(src, std::span<const BoxScale>(boxes));

  CommandResult res;
  std::string csv = "gauge,delta,count,exponent,content\n";
  json report;
  report["cloud"] = label;
  report["points"] = src.size();
  report["n"] = src.dim().n();
  report["exponent"] = exponent;
  report["fits"] = json::array();
  report["contents"] = json::object();
  std::vector<io::Series> plot;
  std::ostringstream line;
  for (std::size_t g = 0; g < gauges.size(); ++g) {
    const std::span<const std::size_t> c(counts.data() + g * scales.size(), scales.size());
    require_resolved(src.size(), scales, c);
    const DimensionFit fit = fit_dimension(gauges[g], scales, c);
    report["fits"].push_back(io::to_json(fit));
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    io::Series s{to_string(gauges[g]), {}, {}};
    for (std::size_t i = 0; i < scales.size(); ++i) {
      const double content = static_cast<double>(c[i]) * std::pow(scales[i], exponent);
      lo = std::min(lo, content);
      hi = std::max(hi, content);
      csv += to_string(gauges[g]) + "," + io::fmt17(scales[i]) + "," + std::to_string(c[i]) + "," +
             io::fmt17(exponent) + "," + io::fmt17(content) + "\n";
      s.x.push_back(scales[i]);
      s.y.push_back(static_cast<double>(c[i]));
    }
    report["contents"][to_string(gauges[g])] = {{"min", lo}, {"max", hi}, {"ratio", hi / lo}};
    plot.push_back(std::move(s));
    line << to_string(gauges[g]) << " slope " << io::fmt17(fit.slope) << " (+/- " << io::fmt17(fit.half_width)
         << ") ";
  }
  report["rank_hypothesis"] = std::move(hypothesis);
  emit(res, out_path(cfg, "covers.csv"), csv);
  emit(res, out_path(cfg, "fit.json"), io::dump_json(report));
  if (cfg.flag("svg")) {
    emit(res, out_path(cfg, "loglog.svg"), io::svg_loglog(plot, "occupied boxes " + label, "delta", "N(delta)"));
  }
  res.summary = line.str();
  return res;
}

json rank_hypothesis(const AnalyticMap& f, const GridDomain& grid, double tol) {
  std::vector<double> spacing;
  std::vector<std::size_t> counts;
  for (int k = 0; k < grid.m(); ++k) {
    const std::size_t c = std::clamp<std::size_t>(grid.counts()[k], 3, 129);
    counts.push_back(c);
    spacing.push_back((grid.upper(k) - grid.lower(k)) / static_cast<double>(c - 1));
  }
  const GridDomain coarse(grid.origin(), spacing, counts);
  const double frac = maxrank_scan(jacobian_fd(sample_analytic(f, coarse)), tol);
  return {{"maxrank_fraction", frac}, {"interpretable", frac >= 0.99}};
}

}  // namespace

// ---------------------------------------------------------------------------

CommandResult cmd_analyze(const ExperimentConfig& cfg) {
  const Source src = load_source(cfg);
  const SampledMap& f = src.map;
  const int m = f.domain.m();
  const int n = f.dim.n();
  const ScanTolerances tol{cfg.positive("rank_tol")};

  const JetField jets = jacobian_fd(f);
  const NodeScan scan = scan_nodes(jets, tol);
  const WedgeField wedge = wedge_field(jets);
  const LowRankSummary low = summarize_lowrank(scan, n);
  std::vector<std::vector<double>> columns;
  const double discrepancy = m >= 2 ? sliced_wedges(f, wedge, columns) : 0.0;

  CommandResult res;
  std::string csv;
  for (int k = 0; k < m; ++k) csv += (k ? ",y" : "y") + std::to_string(k + 1);
  csv += ",interior,residual_norm,wedge_max,rank_B,rank_Df";
  for (int k = 0; k < m; ++k)
    for (int l = k + 1; l < m; ++l) csv += ",w_" + std::to_string(k + 1) + "_" + std::to_string(l + 1);
  csv += '\n';
  std::vector<double> y(m);
  for (std::size_t i = 0; i < f.domain.size(); ++i) {
    f.domain.coords(i, y);
    for (int k = 0; k < m; ++k) csv += (k ? "," : "") + io::fmt17(y[k]);
    csv += "," + std::to_string(static_cast<int>(scan.interior[i])) + "," + io::fmt17(scan.residual_norm[i]) + "," +
           io::fmt17(scan.wedge_max[i]) + "," + std::to_string(scan.rank_horizontal[i]) + "," +
           std::to_string(scan.rank_full[i]);
    for (const auto& col : columns) csv += "," + io::fmt17(col[i]);
    csv += '\n';
  }

  json summary;
  summary["source"] = src.label;
  summary["n"] = n;
  summary["m"] = m;
  summary["grid"] = grid_json(f.domain);
  summary["rank_tol"] = tol.rank;
  summary["interior_nodes"] = low.interior_nodes;
  summary["lowrank_fraction"] = low.lowrank_fraction;
  if (m <= 2 * n + 1) {
    summary["maxrank_fraction"] = summarize_maxrank(scan, m);
  } else {
    summary["maxrank_fraction"] = nullptr;
  }
  summary["max_residual"] = low.max_residual;
  summary["max_wedge"] = low.max_wedge;
  summary["slice_discrepancy"] = discrepancy;

  emit(res, out_path(cfg, "nodes.csv"), csv);
  emit(res, out_path(cfg, "summary.json"), io::dump_json(summary));
  if (cfg.flag("svg") && m == 2) {
    emit(res, out_path(cfg, "residual.svg"),
         io::svg_heatmap(f.domain, scan.residual_norm, "contact residual norm " + src.label, true));
    emit(res, out_path(cfg, "wedge.svg"), io::svg_heatmap(f.domain, scan.wedge_max, "max |W| " + src.label, true));
  }
  res.summary = "lowrank_fraction " + io::fmt17(low.lowrank_fraction) + ", max_residual " +
                io::fmt17(low.max_residual) + ", max_wedge " + io::fmt17(low.max_wedge);
  return res;
}

CommandResult cmd_blowup(const ExperimentConfig& cfg) {
  if (cfg.has("map") && cfg.has("input")) throw InvalidArgument("set either map or input, not both");
  BlowupConfig bc;
  bc.rho0 = cfg.positive("rho0");
  bc.levels = static_cast<int>(cfg.integer("levels"));
  bc.radii = cfg.reals("radii");
  bc.nodes = static_cast<int>(cfg.integer("nodes"));
  bc.quadrature = {static_cast<int>(cfg.integer("quad_radial")), static_cast<int>(cfg.integer("quad_angular"))};
  for (double r : bc.radii) {
    if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("radii must lie in (0, 1), got " + io::fmt17(r));
  }
  const auto c = cfg.reals("center");
  if (c.size() != 2) throw InvalidArgument("center needs two coordinates");
  const std::array<double, 2> z{c[0], c[1]};

  auto planar_slice = [&](const SampledMap& f) {
    if (f.domain.m() == 2) return f;
    const auto axes = cfg.integers("slice_axes");
    if (axes.size() != 2) throw InvalidArgument("slice_axes needs two 1-based axes");
    std::vector<std::size_t> base;
    if (cfg.has("slice_base")) {
      for (long b : cfg.integers("slice_base")) base.push_back(static_cast<std::size_t>(b));
    } else {
      for (std::size_t cnt : f.domain.counts()) base.push_back(cnt / 2);
    }
    return slice(f, SliceSpec{static_cast<int>(axes[0] - 1), static_cast<int>(axes[1] - 1), base});
  };

  std::optional<PlanarField> field;
  std::string label;
  if (cfg.has("input")) {
    label = cfg.str("input");
    field = PlanarField::sampled(planar_slice(io::load_sampled(label)));
  } else {
    if (!cfg.has("map")) throw InvalidArgument("missing map source: set --map <gallery id> or --input <file>");
    const AnalyticMap f = gallery_map(cfg.str("map"));
    label = f.id;
    const double lo = real_or(cfg, "grid_lo", -1.0), hi = real_or(cfg, "grid_hi", 1.0);
    if (!(hi > lo)) throw InvalidArgument("grid_hi must exceed grid_lo");
    if (f.m == 2) {
      field = PlanarField::analytic(f, PlanarField::Box{{lo, lo}, {hi, hi}});
    } else {
      const GridDomain grid = grid_for(cfg, f.m, lo, hi, std::vector<std::size_t>(f.m, default_count(f.m)));
      field = PlanarField::sampled(planar_slice(sample_analytic(f, grid)));
    }
  }

  const BlowupReport rep = blowup_report(*field, z, bc);
  CommandResult res;
  const bool sampled = field->is_sampled();
  std::string csv = sampled ? "rho,r,l1_error,defect,estimate,interpolation_error\n" : "rho,r,l1_error,defect,estimate\n";
  for (const auto& row : rep.rows) {
    csv += io::fmt17(row.rho) + "," + io::fmt17(row.r) + "," + io::fmt17(row.l1_error) + "," + io::fmt17(row.defect) +
           "," + io::fmt17(row.estimate);
    if (sampled) csv += "," + io::fmt17(row.interpolation_error);
    csv += '\n';
  }
  json j;
  j["source"] = label;
  j["sampled"] = sampled;
  j["center"] = {z[0], z[1]};
  j["jacobian_wedge"] = rep.analytic_wedge;
  if (rep.l1_slope) {
    j["l1_slope"] = *rep.l1_slope;
  } else {
    j["l1_slope"] = nullptr;
  }
  j["radii"] = json::array();
  for (std::size_t s = 0; s < rep.per_radius.size(); ++s) {
    const WedgeEstimate& w = rep.per_radius[s];
    j["radii"].push_back({{"r", bc.radii[s]},
                          {"estimate", w.estimate},
                          {"rho_slope", w.slope},
                          {"status", to_string(w.status)},
                          {"estimates", w.estimates}});
  }
  emit(res, out_path(cfg, "table.csv"), csv);
  emit(res, out_path(cfg, "report.json"), io::dump_json(j));
  if (cfg.flag("svg")) {
    io::Series s{"l1 error", {}, {}};
    for (std::size_t k = 0; k < rep.rows.size(); k += bc.radii.size()) {
      s.x.push_back(rep.rows[k].rho);
      s.y.push_back(rep.rows[k].l1_error);
    }
    emit(res, out_path(cfg, "l1.svg"), io::svg_loglog({s}, "blow-up L1 error " + label, "rho", "error"));
  }
  res.summary = "jacobian wedge " + io::fmt17(rep.analytic_wedge) + ", circle estimate (r=" +
                io::fmt17(bc.radii.front()) + ") " + io::fmt17(rep.per_radius.front().estimate);
  return res;
}

CommandResult cmd_measure(const ExperimentConfig& cfg) {
  const std::string kind = cfg.has("cloud") ? cfg.str("cloud") : (cfg.has("input") ? "file" : "vertical-plane");
  if (cfg.has("input") && kind != "file") throw InvalidArgument("--input is only read with cloud = file");
  const double s_default = 3.0;
  if (kind == "file") {
    if (!cfg.has("input")) throw InvalidArgument("cloud = file needs --input <points.csv>");
    const PointCloud cloud = io::cloud_from_csv(io::read_text(cfg.str("input")));
    return measure_on(cloud, cfg, cfg.str("input"), real_or(cfg, "exponent", s_default), nullptr);
  }
  if (kind == "single-point") {
    const auto p = cfg.reals("point");
    if (p.size() < 3 || p.size() % 2 == 0) throw InvalidArgument("point needs 2n+1 coordinates");
    const PointCloud cloud(HeisDim(static_cast<int>(p.size() - 1) / 2), p);
    return measure_on(cloud, cfg, kind, real_or(cfg, "exponent", s_default), nullptr);
  }
  std::string id;
  std::vector<std::size_t> fallback;
  if (kind == "horizontal-segment") {
    id = kind;
    fallback = {4097};
  } else if (kind == "vertical-segment") {
    id = kind;
    fallback = {(std::size_t{1} << 20) + 1};
  } else if (kind == "vertical-plane") {
    id = kind;
    fallback = {1025, (std::size_t{1} << 17) + 1};
  } else if (kind == "map") {
    if (!cfg.has("map")) throw InvalidArgument("cloud = map needs --map <gallery id>");
    id = cfg.str("map");
  } else {
    throw InvalidArgument("unknown cloud '" + kind + "'");
  }
  const AnalyticMap f = gallery_map(id);
  if (fallback.empty()) fallback.assign(f.m, 257);
  const GridDomain grid = grid_for(cfg, f.m, 0.0, 1.0, fallback);
  const MapImageCloud cloud(f, grid);
  return measure_on(cloud, cfg, id, real_or(cfg, "exponent", f.m + 1.0),
                    rank_hypothesis(f, grid, cfg.positive("rank_tol")));
}

CommandResult cmd_certify(const ExperimentConfig& cfg) {
  BatteryConfig bc;
  bc.seed = cfg.seed();
  bc.dims.clear();
  for (long n : cfg.integers("n")) {
    if (n < 1) throw InvalidArgument("n must be >= 1, got " + std::to_string(n));
    bc.dims.push_back(static_cast<int>(n));
  }
  bc.trials = static_cast<int>(cfg.integer("trials"));
  bc.green_trials = static_cast<int>(cfg.integer("green_trials"));
  bc.corrupt_j = cfg.flag("corrupt_j");
  const auto results = run_batteries(bc);

  json j;
  j["seed"] = bc.seed;
  j["dims"] = bc.dims;
  j["corrupt_j"] = bc.corrupt_j;
  j["batteries"] = json::array();
  int failed = 0, passed = 0;
  std::string failing;
  for (const auto& r : results) {
    j["batteries"].push_back({{"name", r.name},
                              {"trials", r.trials},
                              {"passed", r.passed},
                              {"failed", r.trials - r.passed},
                              {"worst", r.worst},
                              {"tolerance", r.tolerance}});
    passed += r.passed;
    failed += r.trials - r.passed;
    if (!r.ok()) failing += (failing.empty() ? "" : ", ") + r.name;
  }
  j["passed"] = passed;
  j["failed"] = failed;
  CommandResult res;
  emit(res, out_path(cfg, "battery.json"), io::dump_json(j));
  res.exit_code = failed ? kExitBattery : kExitOk;
  res.summary = std::to_string(passed) + " passed, " + std::to_string(failed) + " failed" +
                (failing.empty() ? "" : " (" + failing + ")");
  return res;
}

CommandResult run_command(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  CommandResult res;
  const std::string& c = cfg.command();
  if (c == "analyze") res = cmd_analyze(cfg);
  else if (c == "blowup") res = cmd_blowup(cfg);
  else if (c == "measure") res = cmd_measure(cfg);
  else if (c == "certify") res = cmd_certify(cfg);
  else throw InvalidArgument("unknown command '" + c + "'");
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json m;
  m["command"] = c;
  m["version"] = kVersion;
  m["config"] = cfg.values();
  m["outputs"] = json::array();
  for (const auto& p : res.outputs) m["outputs"].push_back(p.filename().string());
  m["exit_code"] = res.exit_code;
  m["threads"] = thread_count();
  m["wall_time_s"] = wall;
  m["compiler"] = __VERSION__;
  m["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  const fs::path manifest = out_path(cfg, "manifest.json");
  io::write_text(manifest, io::dump_json(m));
  res.outputs.push_back(manifest);
  return res;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UnderResolved*>(&e)) return kExitUnderResolved;
  if (dynamic_cast<const NumericalFailure*>(&e)) return kExitNumerical;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return kExitInvalid;
  if (dynamic_cast<const std::domain_error*>(&e)) return kExitInvalid;
  return kExitFailure;
}

}  // namespace heislab
