#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "mobility/pipeline.hpp"

namespace mobility::sim {

enum class LegMode { Walk, Bicycle, Car, Bus, Tram, Train, Metro, Still };
enum class Environment { WifiUrban, NoWifiRoad, Underground };

LegMode parse_leg_mode(std::string_view text);
Environment parse_environment(std::string_view text);

struct Waypoint {
  double latitude = 0.0;
  double longitude = 0.0;
};

struct Leg {
  LegMode mode = LegMode::Still;
  Environment environment = Environment::WifiUrban;
  std::vector<Waypoint> waypoints;  // polyline for moving legs
  double speed_kmh = 0.0;           // moving legs
  double duration_s = 0.0;          // still legs
};

struct Scenario {
  std::uint64_t seed = 0;
  std::int64_t start_epoch_ms = 0;
  double activity_noise = 0.0;  // probability of mislabeling a 5 s sample
  double weight_kg = 70.0;
  std::vector<Leg> legs;
};

/// Throws std::invalid_argument on impossible scenarios (non-positive
/// speeds, moving legs without a polyline, noise outside [0, 1], ...).
void validate_scenario(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& path);

/// Canned journey presets: journey1 (car plus two bus lines), journey2
/// (metro round trip on L3), journey3 (bus round trip), journey4 (pure
/// walk), journey5 (car on a road without Wi-Fi coverage).
Scenario preset(std::string_view name);

struct LegTiming {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
};

/// Ground-truth leg boundaries derived from polyline lengths and speeds.
std::vector<LegTiming> leg_timings(const Scenario& scenario);

/// Ground-truth position before any sensor noise, clamped to the trace span.
Waypoint position_at(const Scenario& scenario, std::int64_t t_ms);

/// Synthesizes the interleaved location/activity stream: 20 s location
/// cadence (5 s while a co-simulated pipeline holds GPS enabled), 5 s
/// activity cadence, per-environment accuracy and noise. A fixed seed
/// reproduces the stream byte for byte.
std::vector<TraceEvent> generate(const Scenario& scenario);

void generate_to_file(const Scenario& scenario,
                      const std::filesystem::path& path);

}  // namespace mobility::sim
