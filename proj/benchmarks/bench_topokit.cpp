#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "topokit/lpvi.hpp"
#include "topokit/pd_metrics.hpp"
#include "topokit/persistence.hpp"

namespace {

std::uint64_t mix(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double uniform(std::uint64_t& s) {
  return static_cast<double>(mix(s) >> 11) * (1.0 / 9007199254740992.0);
}

topokit::PointCloud random_cloud(int n, std::uint64_t seed) {
  std::vector<topokit::Point> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i)
    pts.push_back({uniform(seed), uniform(seed), uniform(seed)});
  return topokit::make_cloud(std::move(pts), 3);
}

void bm_delaunay3(benchmark::State& state) {
  topokit::PointCloud cloud = random_cloud(static_cast<int>(state.range(0)), 11);
  for (auto _ : state) {
    auto cells = topokit::delaunay(cloud);
    benchmark::DoNotOptimize(cells.data());
  }
}
BENCHMARK(bm_delaunay3)->Arg(64)->Arg(256)->Arg(1024);

void bm_alpha_persistence(benchmark::State& state) {
  topokit::PointCloud cloud = random_cloud(static_cast<int>(state.range(0)), 12);
  for (auto _ : state) {
    auto dgm = topokit::compute_persistence(topokit::alpha_filtration(cloud));
    benchmark::DoNotOptimize(dgm.pairs.data());
  }
}
BENCHMARK(bm_alpha_persistence)->Arg(64)->Arg(256)->Arg(1024);

void bm_wasserstein(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 21;
  topokit::PersistenceDiagram a, b;
  for (int i = 0; i < n; ++i) {
    topokit::PersistencePair p;
    p.dim = 0;
    p.birth = uniform(seed);
    p.death = p.birth + uniform(seed);
    a.pairs.push_back(p);
    p.birth = uniform(seed);
    p.death = p.birth + uniform(seed);
    b.pairs.push_back(p);
  }
  for (auto _ : state) {
    double d = topokit::wasserstein(a, b, 2.0);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(bm_wasserstein)->Arg(8)->Arg(32)->Arg(128);

void bm_lpvi_sphere(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 31;
  std::vector<topokit::Point> pts;
  while (static_cast<int>(pts.size()) < n) {
    topokit::Vec3 v{uniform(seed) * 2 - 1, uniform(seed) * 2 - 1,
                    uniform(seed) * 2 - 1};
    double norm = v.norm();
    if (norm < 1e-6 || norm > 1.0) continue;
    pts.push_back(v / norm);
  }
  topokit::PointCloud cloud = topokit::make_cloud(std::move(pts), 3);
  topokit::LpviConfig cfg;
  for (auto _ : state) {
    auto result = topokit::lpvi(cloud, cfg);
    benchmark::DoNotOptimize(result.report.points_added);
  }
}
BENCHMARK(bm_lpvi_sphere)->Arg(100)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
