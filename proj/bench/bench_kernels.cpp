// Serial reference vs OpenMP kernels.
#include "toponav/kernels.hpp"
#include "toponav/sim/render.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace toponav;

std::vector<Vec3> random_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<Vec3> pts(n);
  for (auto& p : pts) p = Vec3(u(rng), u(rng), u(rng) * 0.2);
  return pts;
}

void BM_NearestSerial(benchmark::State& state) {
  const auto q = random_points(static_cast<std::size_t>(state.range(0)), 1);
  const auto s = random_points(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::nearest_distances_serial(q, s));
}

void BM_NearestParallel(benchmark::State& state) {
  const auto q = random_points(static_cast<std::size_t>(state.range(0)), 1);
  const auto s = random_points(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::nearest_distances(q, s));
}

sim::Scene bench_scene() {
  sim::Scene s;
  s.x1 = 8.0;
  s.y1 = 6.0;
  s.walls.push_back({Vec3(3.95, 0.0, 0.0), Vec3(4.05, 2.5, 2.5)});
  s.objects.push_back({"sofa", {Vec3(6.0, 4.0, 0.0), Vec3(7.0, 5.0, 0.8)}});
  return s;
}

LabeledFrame bench_frame(int size) {
  const auto scene = bench_scene();
  ClassVocabulary vocab(scene.class_names());
  sim::RenderConfig rc;
  rc.width = rc.height = size;
  const Pose pose = Pose::camera_at(Vec2(2.0, 3.0), rc.camera_height, 0.3);
  return sim::render_frame(scene, vocab, pose, rc.intrinsics(), rc.max_depth);
}

void BM_BackprojectSerial(benchmark::State& state) {
  const auto frame = bench_frame(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::backproject_frame_serial(frame, 10.0));
}

void BM_BackprojectParallel(benchmark::State& state) {
  const auto frame = bench_frame(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::backproject_frame(frame, 10.0));
}

void BM_RenderSerial(benchmark::State& state) {
  const auto scene = bench_scene();
  ClassVocabulary vocab(scene.class_names());
  sim::RenderConfig rc;
  rc.width = rc.height = static_cast<int>(state.range(0));
  const Pose pose = Pose::camera_at(Vec2(2.0, 3.0), rc.camera_height, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::render_frame_serial(scene, vocab, pose, rc.intrinsics(), rc.max_depth));
  }
}

void BM_RenderParallel(benchmark::State& state) {
  const auto scene = bench_scene();
  ClassVocabulary vocab(scene.class_names());
  sim::RenderConfig rc;
  rc.width = rc.height = static_cast<int>(state.range(0));
  const Pose pose = Pose::camera_at(Vec2(2.0, 3.0), rc.camera_height, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::render_frame(scene, vocab, pose, rc.intrinsics(), rc.max_depth));
  }
}

}  // namespace

BENCHMARK(BM_NearestSerial)->Arg(1000)->Arg(4000);
BENCHMARK(BM_NearestParallel)->Arg(1000)->Arg(4000);
BENCHMARK(BM_BackprojectSerial)->Arg(64)->Arg(256);
BENCHMARK(BM_BackprojectParallel)->Arg(64)->Arg(256);
BENCHMARK(BM_RenderSerial)->Arg(64)->Arg(256);
BENCHMARK(BM_RenderParallel)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
