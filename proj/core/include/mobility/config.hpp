#pragma once

#include <filesystem>

namespace mobility {

/// Tunables for the whole pipeline. Defaults follow the reference
/// deployment; every value must be strictly positive and the good-accuracy
/// bound must sit below the bad-accuracy one.
struct PipelineConfig {
  double window_seconds = 120.0;
  double location_interval_seconds = 20.0;
  double gps_interval_seconds = 5.0;
  double activity_interval_seconds = 5.0;

  double good_accuracy_m = 200.0;
  double bad_accuracy_m = 1000.0;
  double block_radius_m = 100.0;
  double max_on_foot_speed_kmh = 10.0;

  double station_search_radius_m = 150.0;
  double schedule_match_radius_m = 200.0;
  double departure_margin_s = 300.0;
  double arrival_margin_s = 180.0;
  double train_station_radius_m = 100.0;

  int gps_max_windows = 2;
  int badloc_trigger = 4;
  int reploc_trigger = 2;

  double earth_radius_m = 6'371'000.0;
  double co2_g_per_km = 140.0;
  double met_slow = 2.3;
  double met_fast = 2.9;
  double met_speed_threshold_kmh = 2.7;
};

/// Throws std::invalid_argument when a value is out of range.
void validate_config(const PipelineConfig& config);

/// Reads a JSON object whose keys are PipelineConfig field names; missing
/// keys keep their defaults, unknown keys are an error.
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace mobility
