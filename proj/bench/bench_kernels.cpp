// Serial reference vs OpenMP kernels. Thread count comes from the second
// benchmark argument; run with --benchmark_filter to pick a kernel.

#include <benchmark/benchmark.h>

#include "heislab/contact.hpp"
#include "heislab/jets.hpp"
#include "heislab/measure.hpp"
#include "heislab/parallel.hpp"
#include "heislab/reference.hpp"

using namespace heislab;

namespace {

GridDomain grid(std::size_t count) { return GridDomain::cube(2, -1.0, 1.0, count); }

void bm_sample_serial(benchmark::State& st) {
  const AnalyticMap f = gallery_map("twisted");
  const GridDomain g = grid(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(serial::sample_analytic(f, g).values.data());
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.size()));
}

void bm_sample_omp(benchmark::State& st) {
  ScopedThreads scope(static_cast<int>(st.range(1)));
  const AnalyticMap f = gallery_map("twisted");
  const GridDomain g = grid(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(sample_analytic(f, g).values.data());
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.size()));
}

void bm_jets_serial(benchmark::State& st) {
  const SampledMap s = sample_analytic("twisted", grid(static_cast<std::size_t>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(serial::jacobian_fd(s).jac.data());
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.domain.size()));
}

void bm_jets_omp(benchmark::State& st) {
  ScopedThreads scope(static_cast<int>(st.range(1)));
  const SampledMap s = sample_analytic("twisted", grid(static_cast<std::size_t>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(jacobian_fd(s).jac.data());
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.domain.size()));
}

void bm_scan_serial(benchmark::State& st) {
  const JetField j = jacobian_fd(sample_analytic("twisted", grid(static_cast<std::size_t>(st.range(0)))));
  for (auto _ : st) benchmark::DoNotOptimize(serial::scan_nodes(j).wedge_max.data());
  st.SetItemsProcessed(st.iterations() * static_cast<long>(j.domain.size()));
}

void bm_scan_omp(benchmark::State& st) {
  ScopedThreads scope(static_cast<int>(st.range(1)));
  const JetField j = jacobian_fd(sample_analytic("twisted", grid(static_cast<std::size_t>(st.range(0)))));
  for (auto _ : st) benchmark::DoNotOptimize(scan_nodes(j).wedge_max.data());
  st.SetItemsProcessed(st.iterations() * static_cast<long>(j.domain.size()));
}

PointCloud plane(std::size_t nt) {
  const SampledMap s =
      sample_analytic("vertical-plane", GridDomain({0.0, 0.0}, {1.0 / 64, 1.0 / static_cast<double>(nt - 1)}, {65, nt}));
  return cloud_from_map(s);
}

std::vector<BoxScale> box_scales() {
  std::vector<BoxScale> s;
  for (int k = 3; k <= 6; ++k) s.push_back({std::ldexp(1.0, -k), GaugeKind::Koranyi});
  return s;
}

void bm_boxes_serial(benchmark::State& st) {
  const PointCloud c = plane(static_cast<std::size_t>(st.range(0)));
  const auto s = box_scales();
  for (auto _ : st) benchmark::DoNotOptimize(serial::count_boxes(c, s).data());
  st.SetItemsProcessed(st.iterations() * static_cast<long>(c.size()));
}

void bm_boxes_omp(benchmark::State& st) {
  ScopedThreads scope(static_cast<int>(st.range(1)));
  const PointCloud c = plane(static_cast<std::size_t>(st.range(0)));
  const auto s = box_scales();
  for (auto _ : st) benchmark::DoNotOptimize(count_boxes(c, std::span<const BoxScale>(s)).data());
  st.SetItemsProcessed(st.iterations() * static_cast<long>(c.size()));
}

}  // namespace

BENCHMARK(bm_sample_serial)->Arg(513)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_sample_omp)->Args({513, 1})->Args({513, 2})->Args({513, 4})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_jets_serial)->Arg(513)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_jets_omp)->Args({513, 1})->Args({513, 2})->Args({513, 4})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_scan_serial)->Arg(257)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_scan_omp)->Args({257, 1})->Args({257, 2})->Args({257, 4})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_boxes_serial)->Arg(8193)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_boxes_omp)->Args({8193, 1})->Args({8193, 2})->Args({8193, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
