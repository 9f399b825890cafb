#include <benchmark/benchmark.h>

#include <cstdlib>
#include <ctime>
#include <random>

#include "mobility/activity.hpp"
#include "mobility/geo.hpp"
#include "mobility/network.hpp"
#include "mobility/pipeline.hpp"
#include "mobility/simulate.hpp"
#include "mobility/store.hpp"
#include "mobility/transit.hpp"

using namespace mobility;

namespace {

TransitNetwork load_fixture_network() {
  const std::filesystem::path dir(MOBILITY_DATA_DIR);
  return load_network(dir / "stations.json", dir / "line_orders.json");
}

std::vector<LocationSample> make_trail(std::size_t n) {
  std::vector<LocationSample> trail;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> step(-0.0005, 0.0005);
  double lat = 41.40, lon = 2.16;
  for (std::size_t i = 0; i < n; ++i) {
    lat += step(rng);
    lon += step(rng);
    trail.push_back({lat, lon, 30.0, std::int64_t(i) * 20'000, true});
  }
  return trail;
}

void PathDistance(benchmark::State& state) {
  const auto trail = make_trail(std::size_t(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(geo::path_distance_m(trail));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(PathDistance)->Range(8, 4096)->Complexity(benchmark::oN);

void GeodesicDistance(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        geo::geodesic_distance_m(41.4417702469479, 2.16633743592508,
                                 41.4380515005838, 2.15693039004997));
  }
}
BENCHMARK(GeodesicDistance);

void ActivityEstimate(benchmark::State& state) {
  ActivityWindowCounts counts;
  counts.vehicle_count = 5;
  counts.on_foot_count = 5;
  counts.still_count = 5;
  counts.unknown_count = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(activity::estimate(counts));
  }
}
BENCHMARK(ActivityEstimate);

void RecognizeMetroSameLine(benchmark::State& state) {
  const auto network = load_fixture_network();
  const PipelineConfig config;
  const LocationSample origin{41.4417702469479, 2.16633743592508, 30.0, 0, true};
  const LocationSample destination{41.4306544208465, 2.14505193131497, 30.0,
                                   410'000, true};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        transit::recognize_metro(origin, destination, network, config));
  }
}
BENCHMARK(RecognizeMetroSameLine);

void RecognizeMetroWithTransfer(benchmark::State& state) {
  const auto network = load_fixture_network();
  const PipelineConfig config;
  const LocationSample origin{41.4417702469479, 2.16633743592508, 30.0, 0, true};
  const LocationSample destination{41.4136, 2.1813, 30.0, 900'000, true};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        transit::recognize_metro(origin, destination, network, config));
  }
}
BENCHMARK(RecognizeMetroWithTransfer);

void SegmentsRoundTrip(benchmark::State& state) {
  const auto trail = make_trail(std::size_t(state.range(0)));
  const Segment segment(ActivityLabel::OnFoot, trail.front(), trail.back(),
                        geo::path_distance_m(trail),
                        (trail.back().timestamp_ms - trail.front().timestamp_ms) /
                            1000,
                        4.2, std::nullopt, trail);
  const std::vector segments{segment};
  for (auto _ : state) {
    const auto text = store::segments_to_json(segments);
    benchmark::DoNotOptimize(store::segments_from_json(text));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(SegmentsRoundTrip)->Range(8, 1024)->Complexity(benchmark::oN);

void PipelineReplayJourney(benchmark::State& state) {
  const auto network = load_fixture_network();
  const PipelineConfig config;
  const auto trace = sim::generate(sim::preset("journey2"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trace(trace, config, &network));
  }
}
BENCHMARK(PipelineReplayJourney);

}  // namespace

int main(int argc, char** argv) {
  setenv("TZ", "Europe/Madrid", 1);
  tzset();
  ::benchmark::Initialize(&argc, argv);
  if (::benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  ::benchmark::RunSpecifiedBenchmarks();
  ::benchmark::Shutdown();
  return 0;
}
