#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "heislab/contact.hpp"
#include "heislab/jets.hpp"
#include "heislab/measure.hpp"

// Single-threaded versions of the OpenMP kernels. Tests compare them with the
// parallel paths; the benchmark times both.
namespace heislab::serial {

SampledMap sample_analytic(const AnalyticMap& f, const GridDomain& domain);
JetField jacobian_fd(const SampledMap& f);
NodeScan scan_nodes(const JetField& j, const ScanTolerances& tol = {});

/// Occupied boxes via an ordered set of integer box keys; no bounding box,
/// no bitmap.
std::vector<std::size_t> count_boxes(const PointCloud& cloud, std::span<const BoxScale> scales);

}  // namespace heislab::serial
