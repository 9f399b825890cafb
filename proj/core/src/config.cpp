#include "mobility/config.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mobility {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

}  // namespace

void validate_config(const PipelineConfig& c) {
  require_positive(c.window_seconds, "window_seconds");
  require_positive(c.location_interval_seconds, "location_interval_seconds");
  require_positive(c.gps_interval_seconds, "gps_interval_seconds");
  require_positive(c.activity_interval_seconds, "activity_interval_seconds");
  require_positive(c.good_accuracy_m, "good_accuracy_m");
  require_positive(c.bad_accuracy_m, "bad_accuracy_m");
  require_positive(c.block_radius_m, "block_radius_m");
  require_positive(c.max_on_foot_speed_kmh, "max_on_foot_speed_kmh");
  require_positive(c.station_search_radius_m, "station_search_radius_m");
  require_positive(c.schedule_match_radius_m, "schedule_match_radius_m");
  require_positive(c.departure_margin_s, "departure_margin_s");
  require_positive(c.arrival_margin_s, "arrival_margin_s");
  require_positive(c.train_station_radius_m, "train_station_radius_m");
  require_positive(c.gps_max_windows, "gps_max_windows");
  require_positive(c.badloc_trigger, "badloc_trigger");
  require_positive(c.reploc_trigger, "reploc_trigger");
  require_positive(c.earth_radius_m, "earth_radius_m");
  require_positive(c.co2_g_per_km, "co2_g_per_km");
  require_positive(c.met_slow, "met_slow");
  require_positive(c.met_fast, "met_fast");
  require_positive(c.met_speed_threshold_kmh, "met_speed_threshold_kmh");
  if (!(c.good_accuracy_m < c.bad_accuracy_m)) {
    throw std::invalid_argument(
        "good_accuracy_m must be below bad_accuracy_m");
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path.string());
  }
  nlohmann::json doc = nlohmann::json::parse(in);
  if (!doc.is_object()) {
    throw std::invalid_argument("config file must hold a JSON object");
  }

  PipelineConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (key == "window_seconds") config.window_seconds = value.get<double>();
    else if (key == "location_interval_seconds") config.location_interval_seconds = value.get<double>();
    else if (key == "gps_interval_seconds") config.gps_interval_seconds = value.get<double>();
    else if (key == "activity_interval_seconds") config.activity_interval_seconds = value.get<double>();
    else if (key == "good_accuracy_m") config.good_accuracy_m = value.get<double>();
    else if (key == "bad_accuracy_m") config.bad_accuracy_m = value.get<double>();
    else if (key == "block_radius_m") config.block_radius_m = value.get<double>();
    else if (key == "max_on_foot_speed_kmh") config.max_on_foot_speed_kmh = value.get<double>();
    else if (key == "station_search_radius_m") config.station_search_radius_m = value.get<double>();
    else if (key == "schedule_match_radius_m") config.schedule_match_radius_m = value.get<double>();
    else if (key == "departure_margin_s") config.departure_margin_s = value.get<double>();
    else if (key == "arrival_margin_s") config.arrival_margin_s = value.get<double>();
    else if (key == "train_station_radius_m") config.train_station_radius_m = value.get<double>();
    else if (key == "gps_max_windows") config.gps_max_windows = value.get<int>();
    else if (key == "badloc_trigger") config.badloc_trigger = value.get<int>();
    else if (key == "reploc_trigger") config.reploc_trigger = value.get<int>();
    else if (key == "earth_radius_m") config.earth_radius_m = value.get<double>();
    else if (key == "co2_g_per_km") config.co2_g_per_km = value.get<double>();
    else if (key == "met_slow") config.met_slow = value.get<double>();
    else if (key == "met_fast") config.met_fast = value.get<double>();
    else if (key == "met_speed_threshold_kmh") config.met_speed_threshold_kmh = value.get<double>();
    else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  validate_config(config);
  return config;
}

}  // namespace mobility
