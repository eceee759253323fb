#include "heislab/reference.hpp"

#include <cmath>
#include <cstdint>
#include <set>

namespace heislab::serial {

SampledMap sample_analytic(const AnalyticMap& f, const GridDomain& domain) {
  if (f.m != domain.m()) throw InvalidArgument("sample_analytic: source dimension mismatch");
  const int d = f.components();
  std::vector<double> values(domain.size() * d);
  std::vector<double> y(domain.m());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    domain.coords(i, y);
    f.value(y, std::span<double>(values.data() + i * d, d));
  }
  return SampledMap(domain, f.dim, std::move(values));
}

JetField jacobian_fd(const SampledMap& f) {
  const GridDomain& dom = f.domain;
  const int d = f.components();
  const int m = dom.m();
  JetField j{dom, f.dim, f.values, std::vector<double>(dom.size() * d * m), std::vector<unsigned char>(dom.size())};
  for (std::size_t node = 0; node < dom.size(); ++node) {
    detail::fd_node(dom, f.values, d, node, j.jac.data() + node * d * m);
    j.interior[node] = dom.is_interior(node) ? 1 : 0;
  }
  return j;
}

NodeScan scan_nodes(const JetField& j, const ScanTolerances& tol) {
  const std::size_t N = j.domain.size();
  NodeScan out{std::vector<double>(N), std::vector<double>(N), std::vector<int>(N), std::vector<int>(N),
               std::vector<unsigned char>(N)};
  for (std::size_t i = 0; i < N; ++i) detail::scan_node(j, tol, i, out);
  return out;
}

std::vector<std::size_t> count_boxes(const PointCloud& cloud, std::span<const BoxScale> scales) {
  const int d = cloud.dim().ambient();
  std::vector<std::size_t> out;
  for (const auto& s : scales) {
    if (!(s.delta > 0.0)) throw InvalidArgument("box scale must be positive");
    std::set<std::vector<std::int64_t>> boxes;
    std::vector<std::int64_t> key(d);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto p = cloud.at(i);
      for (int k = 0; k < d; ++k) {
        const double side = (k == d - 1 && s.gauge != GaugeKind::Euclidean) ? s.delta * s.delta : s.delta;
        key[k] = static_cast<std::int64_t>(std::floor(p[k] / side));
      }
      boxes.insert(key);
    }
    out.push_back(boxes.size());
  }
  return out;
}

}  // namespace heislab::serial
