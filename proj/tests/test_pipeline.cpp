#include "mobility/pipeline.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "mobility/geo.hpp"
#include "testutil.hpp"

using namespace mobility;
using testutil::sample;

namespace {

constexpr std::int64_t kT0 = 1'421'311'200'000;
constexpr std::int64_t kS = 1000;

void feed_activities(Pipeline& p, const char* label, int n) {
  for (int i = 0; i < n; ++i) p.on_activity(label);
}

int count_events(const Pipeline& p, PipelineEvent::Kind kind) {
  int n = 0;
  for (const auto& e : p.events())
    if (e.kind == kind) ++n;
  return n;
}

}  // namespace

TEST(GpsActivator, EnableOnFourthRepeatedFixWhileWalking) {
  Pipeline p(PipelineConfig{}, nullptr);
  feed_activities(p, "on_foot", 3);

  const auto fix = sample(41.44, 2.16, 50.0, kT0);
  EXPECT_EQ(p.on_location(fix), GpsSignal::NoChange);
  auto repeat = fix;
  repeat.timestamp_ms += 20 * kS;
  EXPECT_EQ(p.on_location(repeat), GpsSignal::NoChange);
  repeat.timestamp_ms += 20 * kS;
  EXPECT_EQ(p.on_location(repeat), GpsSignal::NoChange);
  repeat.timestamp_ms += 20 * kS;
  EXPECT_EQ(p.on_location(repeat), GpsSignal::Enable);  // 4th identical fix
  EXPECT_TRUE(p.state().gps_on);
  EXPECT_EQ(p.state().gps_windows_remaining, 2);
}

TEST(GpsActivator, RepeatsWithoutMovementCountsStayQuiet) {
  Pipeline p(PipelineConfig{}, nullptr);
  feed_activities(p, "still", 10);  // neither vehicle nor walking

  auto repeat = sample(41.44, 2.16, 50.0, kT0);
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(p.on_location(repeat), GpsSignal::NoChange);
    repeat.timestamp_ms += 20 * kS;
  }
  EXPECT_FALSE(p.state().gps_on);
}

TEST(GpsActivator, MidAccuracyFixWithWifiEnables) {
  Pipeline p(PipelineConfig{}, nullptr);
  EXPECT_EQ(p.on_location(sample(41.44, 2.16, 500.0, kT0, true)),
            GpsSignal::Enable);
  // not buffered: only good fixes enter the window
  EXPECT_TRUE(p.state().window_buffer.empty());
}

TEST(GpsActivator, MidAccuracyWithoutWifiDoesNothing) {
  Pipeline p(PipelineConfig{}, nullptr);
  EXPECT_EQ(p.on_location(sample(41.44, 2.16, 500.0, kT0, false)),
            GpsSignal::NoChange);
  EXPECT_FALSE(p.state().gps_on);
}

TEST(GpsActivator, WorseThanBadBoundCountsBadloc) {
  Pipeline p(PipelineConfig{}, nullptr);
  EXPECT_EQ(p.on_location(sample(41.44, 2.16, 1500.0, kT0, true)),
            GpsSignal::NoChange);
  EXPECT_EQ(p.state().badloc, 1);
  // without Wi-Fi the counter stays put
  EXPECT_EQ(p.on_location(sample(41.44, 2.16, 1500.0, kT0 + kS, false)),
            GpsSignal::NoChange);
  EXPECT_EQ(p.state().badloc, 1);
}

TEST(GpsActivator, DisableExactlyTwoWindowClosesAfterEnable) {
  Pipeline p(PipelineConfig{}, nullptr);
  EXPECT_EQ(p.on_location(sample(41.44, 2.16, 500.0, kT0, true)),
            GpsSignal::Enable);
  EXPECT_EQ(p.on_window_close(kT0 + 120 * kS), GpsSignal::NoChange);
  EXPECT_EQ(p.on_window_close(kT0 + 240 * kS), GpsSignal::Disable);
  EXPECT_FALSE(p.state().gps_on);
  EXPECT_EQ(count_events(p, PipelineEvent::Kind::GpsEnable), 1);
  EXPECT_EQ(count_events(p, PipelineEvent::Kind::GpsDisable), 1);
}

TEST(GpsActivator, NoReenableWhileOn) {
  Pipeline p(PipelineConfig{}, nullptr);
  EXPECT_EQ(p.on_location(sample(41.44, 2.16, 500.0, kT0, true)),
            GpsSignal::Enable);
  EXPECT_EQ(p.on_location(sample(41.44, 2.16, 500.0, kT0 + kS, true)),
            GpsSignal::NoChange);
}

TEST(Pipeline, RejectsOutOfOrderTimestamps) {
  Pipeline p(PipelineConfig{}, nullptr);
  p.on_location(sample(41.44, 2.16, 50.0, kT0));
  EXPECT_THROW(p.on_location(sample(41.44, 2.16, 50.0, kT0 - kS)),
               std::invalid_argument);
}

namespace {

/// Feeds one window of fixes walking north at step_deg per fix, plus
/// activity labels, and returns the next fix time.
std::int64_t feed_window(Pipeline& p, double& lat, std::int64_t t, int fixes,
                         double step_deg, const char* label, int labels) {
  feed_activities(p, label, labels);
  for (int i = 0; i < fixes; ++i) {
    p.on_location(sample(lat, 2.16, 40.0, t));
    lat += step_deg;
    t += 20 * kS;
  }
  return t;
}

}  // namespace

TEST(ApplyWindow, TwoWalkingWindowsMerge) {
  Pipeline p(PipelineConfig{}, nullptr);
  double lat = 41.4400;
  std::int64_t t = kT0;
  // ~25 m per fix: block distance ~125 m over the window
  t = feed_window(p, lat, t, 6, 0.000225, "on_foot", 24);
  p.on_window_close(kT0 + 120 * kS);
  ASSERT_EQ(p.segments().size(), 1u);
  const auto first = p.segments()[0];
  EXPECT_EQ(first.activity(), ActivityLabel::OnFoot);

  t = feed_window(p, lat, t, 6, 0.000225, "on_foot", 24);
  p.on_window_close(kT0 + 240 * kS);
  ASSERT_EQ(p.segments().size(), 1u);  // merged, not appended
  const auto& merged = p.segments()[0];
  // second window spans 120 s from its first to its last fix
  EXPECT_EQ(merged.total_duration_s(), first.total_duration_s() + 100);
  EXPECT_EQ(merged.location_points().size(), 12u);
  EXPECT_EQ(merged.last_location().timestamp_ms, t - 20 * kS);
  EXPECT_GT(merged.total_distance_m(), first.total_distance_m());
}

TEST(ApplyWindow, MergedSpeedIsPairwiseAverage) {
  Pipeline p(PipelineConfig{}, nullptr);
  double lat = 41.4400;
  std::int64_t t = kT0;
  t = feed_window(p, lat, t, 6, 0.000225, "on_foot", 24);
  p.on_window_close(kT0 + 120 * kS);
  const auto first = p.segments()[0];

  feed_window(p, lat, t, 6, 0.000450, "on_foot", 24);  // faster window
  p.on_window_close(kT0 + 240 * kS);
  const auto& merged = p.segments()[0];

  const double second_distance =
      merged.total_distance_m() - first.total_distance_m();
  const double second_duration =
      static_cast<double>(merged.total_duration_s() - first.total_duration_s());
  const double second_speed = second_distance * 3.6 / second_duration;
  EXPECT_NEAR(merged.average_speed_kmh(),
              (first.average_speed_kmh() + second_speed) / 2.0, 1e-9);
}

TEST(ApplyWindow, ShortWalkDemotesToStill) {
  Pipeline p(PipelineConfig{}, nullptr);
  feed_activities(p, "on_foot", 24);
  // ~40 m of block distance, below the 100 m block radius
  std::int64_t t = kT0;
  double lat = 41.4400;
  for (int i = 0; i < 6; ++i) {
    p.on_location(sample(lat, 2.16, 30.0 + i, t));
    lat += 0.000072;  // ~8 m
    t += 20 * kS;
  }
  p.on_window_close(kT0 + 120 * kS);
  ASSERT_EQ(p.segments().size(), 1u);
  const auto& segment = p.segments()[0];
  EXPECT_EQ(segment.activity(), ActivityLabel::Still);
  EXPECT_EQ(segment.total_distance_m(), 0.0);
  EXPECT_EQ(segment.average_speed_kmh(), 0.0);
  ASSERT_EQ(segment.location_points().size(), 1u);
  // the single point is the most accurate buffered fix
  EXPECT_DOUBLE_EQ(segment.location_points()[0].accuracy_m, 30.0);
}

TEST(ApplyWindow, VehicleAfterWalkNeedsSpeed) {
  PipelineConfig config;
  Pipeline p(config, nullptr);
  double lat = 41.4400;
  std::int64_t t = kT0;
  t = feed_window(p, lat, t, 6, 0.000225, "on_foot", 24);
  p.on_window_close(kT0 + 120 * kS);
  ASSERT_EQ(p.segments()[0].activity(), ActivityLabel::OnFoot);

  // vehicle labels but walking pace: folds into the walk
  t = feed_window(p, lat, t, 6, 0.000225, "vehicle", 24);
  p.on_window_close(kT0 + 240 * kS);
  ASSERT_EQ(p.segments().size(), 1u);
  EXPECT_EQ(p.segments()[0].activity(), ActivityLabel::OnFoot);

  // ~30 km/h: a real vehicle segment opens
  t = feed_window(p, lat, t, 6, 0.0015, "vehicle", 24);
  p.on_window_close(kT0 + 360 * kS);
  ASSERT_EQ(p.segments().size(), 2u);
  EXPECT_EQ(p.segments()[1].activity(), ActivityLabel::Vehicle);
  EXPECT_GT(p.segments()[1].average_speed_kmh(), config.max_on_foot_speed_kmh);
}

TEST(ApplyWindow, StillWindowsMergeKeepingOnePoint) {
  Pipeline p(PipelineConfig{}, nullptr);
  for (int window = 0; window < 2; ++window) {
    feed_activities(p, "still", 24);
    std::int64_t t = kT0 + window * 120 * kS;
    for (int i = 0; i < 6; ++i) {
      p.on_location(sample(41.44, 2.16, 50.0 - window * 10.0, t, true));
      t += 20 * kS;
    }
    p.on_window_close(kT0 + (window + 1) * 120 * kS);
  }
  ASSERT_EQ(p.segments().size(), 1u);
  const auto& segment = p.segments()[0];
  EXPECT_EQ(segment.activity(), ActivityLabel::Still);
  ASSERT_EQ(segment.location_points().size(), 1u);
  EXPECT_DOUBLE_EQ(segment.location_points()[0].accuracy_m, 40.0);
}

TEST(ApplyWindow, EmptyWindowEmitsNothing) {
  Pipeline p(PipelineConfig{}, nullptr);
  feed_activities(p, "on_foot", 24);
  p.on_window_close(kT0 + 120 * kS);
  EXPECT_TRUE(p.segments().empty());
}

namespace {

Pipeline underground_pipeline(const TransitNetwork* network) {
  Pipeline p(PipelineConfig{}, network);
  // a good fix near Canyelles, then five underground-grade fixes
  p.on_location(sample(testutil::kCanyellesLat + 0.0003,
                       testutil::kCanyellesLon, 60.0, kT0, true));
  for (int i = 0; i < 5; ++i) {
    p.on_location(
        sample(41.44, 2.16, 1500.0 + i, kT0 + (20 + 20 * i) * kS, true));
  }
  return p;
}

}  // namespace

TEST(Underground, EntersAfterbadAtWindowClose) {
  auto p = underground_pipeline(nullptr);
  EXPECT_EQ(p.state().badloc, 5);
  p.on_window_close(kT0 + 120 * kS);
  EXPECT_TRUE(p.state().afterbad);
  ASSERT_TRUE(p.state().loc1.has_value());
  EXPECT_EQ(p.state().loc1->timestamp_ms, kT0);
  EXPECT_EQ(count_events(p, PipelineEvent::Kind::UndergroundEnter), 1);
  EXPECT_TRUE(p.segments().empty());  // emission suppressed
}

TEST(Underground, RecoversAndRecognizesMetro) {
  const auto network = testutil::barcelona_network();
  auto p = underground_pipeline(&network);
  p.on_window_close(kT0 + 120 * kS);

  // three distinct fixes near Montbau
  for (int i = 0; i < 3; ++i) {
    p.on_location(sample(testutil::kMontbauLat + 0.0001 * i,
                         testutil::kMontbauLon, 50.0,
                         kT0 + (130 + 20 * i) * kS, true));
  }
  EXPECT_EQ(p.state().locgood.size(), 3u);
  p.on_window_close(kT0 + 240 * kS);

  EXPECT_FALSE(p.state().afterbad);
  EXPECT_EQ(p.state().badloc, 0);
  EXPECT_EQ(count_events(p, PipelineEvent::Kind::UndergroundExit), 1);
  EXPECT_EQ(count_events(p, PipelineEvent::Kind::MetroRecognized), 1);

  ASSERT_EQ(p.segments().size(), 1u);
  const auto& metro = p.segments()[0];
  EXPECT_EQ(metro.activity(), ActivityLabel::Metro);
  ASSERT_TRUE(metro.line().has_value());
  EXPECT_EQ(*metro.line(), "L3");
  ASSERT_EQ(metro.location_points().size(), 4u);  // Canyelles..Montbau
  EXPECT_NEAR(metro.total_distance_m(), testutil::kMetroPathDistanceM,
              testutil::kMetroPathDistanceM * 1e-6);
  // duration spans last-good to first-recovered
  EXPECT_EQ(metro.total_duration_s(), 130);
  // traced stations inherit the first timestamp
  for (const auto& point : metro.location_points()) {
    EXPECT_EQ(point.timestamp_ms, kT0);
  }
}

TEST(Underground, RepeatedRecoveryFixesAreDropped) {
  const auto network = testutil::barcelona_network();
  auto p = underground_pipeline(&network);
  p.on_window_close(kT0 + 120 * kS);

  const auto fix = sample(testutil::kMontbauLat, testutil::kMontbauLon, 50.0,
                          kT0 + 130 * kS, true);
  p.on_location(fix);
  auto repeat = fix;
  repeat.timestamp_ms += 20 * kS;
  p.on_location(repeat);  // dropped: same position
  EXPECT_EQ(p.state().locgood.size(), 1u);
  repeat.latitude += 0.0001;
  repeat.timestamp_ms += 20 * kS;
  p.on_location(repeat);
  EXPECT_EQ(p.state().locgood.size(), 2u);
}

TEST(Underground, SameStationIsFalsePositive) {
  const auto network = testutil::barcelona_network();
  auto p = underground_pipeline(&network);
  p.on_window_close(kT0 + 120 * kS);

  // recovery fixes still near Canyelles: origin equals destination
  feed_activities(p, "on_foot", 20);
  for (int i = 0; i < 3; ++i) {
    p.on_location(sample(testutil::kCanyellesLat + 0.0002 * (i + 1),
                         testutil::kCanyellesLon, 50.0,
                         kT0 + (130 + 20 * i) * kS, true));
  }
  p.on_window_close(kT0 + 240 * kS);

  EXPECT_EQ(count_events(p, PipelineEvent::Kind::MetroFalsePositive), 1);
  EXPECT_EQ(count_events(p, PipelineEvent::Kind::MetroRecognized), 0);
  // the recovered fixes went through normal processing instead
  for (const auto& segment : p.segments()) {
    EXPECT_NE(segment.activity(), ActivityLabel::Metro);
  }
}

TEST(Underground, UnresolvedBlackoutFlushesAsVehicle) {
  auto p = underground_pipeline(nullptr);
  p.on_window_close(kT0 + 120 * kS);
  p.on_location(sample(41.4350, 2.1480, 50.0, kT0 + 130 * kS, true));
  p.finish(kT0 + 150 * kS);
  ASSERT_EQ(p.segments().size(), 1u);
  EXPECT_EQ(p.segments()[0].activity(), ActivityLabel::Vehicle);
  EXPECT_EQ(p.segments()[0].first_location().timestamp_ms, kT0);
}

TEST(RunTrace, DeterministicReplay) {
  std::vector<TraceEvent> trace;
  double lat = 41.4400;
  for (int i = 0; i < 40; ++i) {
    TraceEvent act;
    act.type = TraceEvent::Type::Activity;
    act.t_ms = kT0 + i * 15 * kS;
    act.label = i % 7 == 0 ? "still" : "on_foot";
    trace.push_back(act);

    TraceEvent loc;
    loc.type = TraceEvent::Type::Location;
    loc.t_ms = kT0 + i * 15 * kS + kS;
    loc.location = sample(lat, 2.16, 40.0, loc.t_ms);
    lat += 0.0002;
    trace.push_back(loc);
  }

  const PipelineConfig config;
  const auto first = run_trace(trace, config, nullptr);
  const auto second = run_trace(trace, config, nullptr);
  ASSERT_EQ(first.segments.size(), second.segments.size());
  for (std::size_t i = 0; i < first.segments.size(); ++i) {
    EXPECT_EQ(first.segments[i].activity(), second.segments[i].activity());
    EXPECT_EQ(first.segments[i].total_duration_s(),
              second.segments[i].total_duration_s());
    EXPECT_DOUBLE_EQ(first.segments[i].total_distance_m(),
                     second.segments[i].total_distance_m());
  }
}

TEST(RunTrace, SegmentStreamInvariants) {
  std::vector<TraceEvent> trace;
  double lat = 41.4400;
  std::mt19937_64 rng(5);
  const char* labels[] = {"still", "on_foot", "vehicle", "bicycle", "unknown"};
  std::int64_t t = kT0;
  for (int i = 0; i < 400; ++i) {
    TraceEvent act;
    act.type = TraceEvent::Type::Activity;
    act.t_ms = t;
    act.label = labels[rng() % 5];
    trace.push_back(act);
    if (i % 3 == 0) {
      TraceEvent loc;
      loc.type = TraceEvent::Type::Location;
      loc.t_ms = t + kS;
      loc.location = sample(lat, 2.16, 40.0 + double(rng() % 100), loc.t_ms);
      lat += (rng() % 2 ? 0.0006 : 0.00001);
      trace.push_back(loc);
    }
    t += 5 * kS;
  }

  const auto result = run_trace(trace, PipelineConfig{}, nullptr);
  ASSERT_FALSE(result.segments.empty());
  std::int64_t total_duration = 0;
  for (std::size_t i = 0; i < result.segments.size(); ++i) {
    total_duration += result.segments[i].total_duration_s();
    if (i > 0) {
      EXPECT_NE(result.segments[i].activity(),
                result.segments[i - 1].activity());
    }
    if (result.segments[i].activity() == ActivityLabel::Still) {
      EXPECT_EQ(result.segments[i].location_points().size(), 1u);
      EXPECT_EQ(result.segments[i].total_distance_m(), 0.0);
    }
  }
  EXPECT_LE(total_duration, (trace.back().t_ms - trace.front().t_ms) / 1000);
}

TEST(TraceIo, RoundTripAndLineErrors) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "trace_roundtrip.jsonl";

  std::vector<TraceEvent> trace;
  TraceEvent act;
  act.type = TraceEvent::Type::Activity;
  act.t_ms = kT0;
  act.label = "on_foot";
  trace.push_back(act);
  TraceEvent loc;
  loc.type = TraceEvent::Type::Location;
  loc.t_ms = kT0 + kS;
  loc.location = sample(41.44, 2.16, 35.5, kT0 + kS, true);
  trace.push_back(loc);

  write_trace(path, trace);
  const auto loaded = read_trace(path);
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[0].label, "on_foot");
  EXPECT_DOUBLE_EQ(loaded[1].location.accuracy_m, 35.5);
  EXPECT_TRUE(loaded[1].location.wifi_enabled);

  const auto bad = dir / "trace_bad.jsonl";
  std::ofstream(bad) << R"({"type":"loc","lat":41.0})" << "\n"
                     << R"({"type":"act","label":"on_foot","t_ms":1})" << "\n";
  try {
    read_trace(bad);
    FAIL() << "expected a parse error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find(":1:"), std::string::npos);
  }
}

TEST(EventLog, RoundTrip) {
  const auto path =
      std::filesystem::temp_directory_path() / "events_roundtrip.jsonl";
  const std::vector<PipelineEvent> events{
      {PipelineEvent::Kind::GpsEnable, kT0},
      {PipelineEvent::Kind::GpsDisable, kT0 + 240 * kS},
      {PipelineEvent::Kind::UndergroundEnter, kT0 + 360 * kS},
  };
  write_event_log(path, events);
  const auto loaded = read_event_log(path);
  ASSERT_EQ(loaded.size(), 3u);
  EXPECT_EQ(loaded[0].kind, PipelineEvent::Kind::GpsEnable);
  EXPECT_EQ(loaded[2].kind, PipelineEvent::Kind::UndergroundEnter);
  EXPECT_EQ(loaded[1].t_ms, kT0 + 240 * kS);
}
