#include "mobility/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mobility/geo.hpp"

namespace mobility::sim {

namespace {

constexpr std::int64_t kActivityIntervalMs = 5'000;
constexpr std::int64_t kLocationIntervalMs = 20'000;
constexpr std::int64_t kGpsIntervalMs = 5'000;
constexpr std::int64_t kWindowMs = 120'000;
constexpr std::int64_t kGpsWarmupMs = 20'000;  // fixes stay poor right after enabling

bool is_moving(LegMode mode) {
  return mode != LegMode::Still;
}

const char* raw_label_for(LegMode mode) {
  switch (mode) {
    case LegMode::Walk:
      return "on_foot";
    case LegMode::Bicycle:
      return "bicycle";
    case LegMode::Car:
    case LegMode::Bus:
    case LegMode::Tram:
    case LegMode::Train:
    case LegMode::Metro:
      return "vehicle";
    case LegMode::Still:
      return "still";
  }
  return "unknown";
}

double leg_length_m(const Leg& leg) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < leg.waypoints.size(); ++i) {
    total += geo::distance_m(leg.waypoints[i].latitude,
                             leg.waypoints[i].longitude,
                             leg.waypoints[i + 1].latitude,
                             leg.waypoints[i + 1].longitude);
  }
  return total;
}

}  // namespace

LegMode parse_leg_mode(std::string_view text) {
  if (text == "walk") return LegMode::Walk;
  if (text == "bicycle") return LegMode::Bicycle;
  if (text == "car") return LegMode::Car;
  if (text == "bus") return LegMode::Bus;
  if (text == "tram") return LegMode::Tram;
  if (text == "train") return LegMode::Train;
  if (text == "metro") return LegMode::Metro;
  if (text == "still") return LegMode::Still;
  throw std::invalid_argument("unknown leg mode: " + std::string(text));
}

Environment parse_environment(std::string_view text) {
  if (text == "wifi_urban") return Environment::WifiUrban;
  if (text == "no_wifi_road") return Environment::NoWifiRoad;
  if (text == "underground") return Environment::Underground;
  throw std::invalid_argument("unknown environment: " + std::string(text));
}

void validate_scenario(const Scenario& scenario) {
  if (scenario.legs.empty()) {
    throw std::invalid_argument("scenario needs at least one leg");
  }
  if (scenario.activity_noise < 0.0 || scenario.activity_noise > 1.0) {
    throw std::invalid_argument("activity_noise must lie in [0, 1]");
  }
  if (!(scenario.weight_kg > 0.0)) {
    throw std::invalid_argument("weight must be positive");
  }
  bool have_position = false;
  for (std::size_t i = 0; i < scenario.legs.size(); ++i) {
    const Leg& leg = scenario.legs[i];
    if (is_moving(leg.mode)) {
      if (!(leg.speed_kmh > 0.0)) {
        throw std::invalid_argument("moving leg " + std::to_string(i) +
                                    " needs a positive speed");
      }
      if (leg.waypoints.size() < 2) {
        throw std::invalid_argument("moving leg " + std::to_string(i) +
                                    " needs a polyline");
      }
      have_position = true;
    } else {
      if (!(leg.duration_s > 0.0)) {
        throw std::invalid_argument("still leg " + std::to_string(i) +
                                    " needs a positive duration");
      }
      if (!leg.waypoints.empty()) {
        have_position = true;
      }
      if (!have_position) {
        throw std::invalid_argument("still leg " + std::to_string(i) +
                                    " has no position");
      }
    }
  }
}

std::vector<LegTiming> leg_timings(const Scenario& scenario) {
  std::vector<LegTiming> timings;
  std::int64_t t = scenario.start_epoch_ms;
  for (const Leg& leg : scenario.legs) {
    std::int64_t duration_ms;
    if (is_moving(leg.mode)) {
      const double meters_per_s = leg.speed_kmh / 3.6;
      duration_ms = static_cast<std::int64_t>(
          std::llround(leg_length_m(leg) / meters_per_s * 1000.0));
    } else {
      duration_ms = static_cast<std::int64_t>(std::llround(leg.duration_s * 1000.0));
    }
    timings.push_back({t, t + duration_ms});
    t += duration_ms;
  }
  return timings;
}

namespace {

Waypoint position_on_leg(const Leg& leg, const LegTiming& timing,
                         std::int64_t t_ms, Waypoint previous_end) {
  if (!is_moving(leg.mode)) {
    return leg.waypoints.empty() ? previous_end : leg.waypoints.front();
  }
  const double meters_per_s = leg.speed_kmh / 3.6;
  double remaining =
      meters_per_s * static_cast<double>(t_ms - timing.start_ms) / 1000.0;
  for (std::size_t i = 0; i + 1 < leg.waypoints.size(); ++i) {
    const Waypoint& a = leg.waypoints[i];
    const Waypoint& b = leg.waypoints[i + 1];
    const double length =
        geo::distance_m(a.latitude, a.longitude, b.latitude, b.longitude);
    if (remaining <= length || i + 2 == leg.waypoints.size()) {
      const double f = length > 0.0 ? std::min(remaining / length, 1.0) : 1.0;
      return {a.latitude + (b.latitude - a.latitude) * f,
              a.longitude + (b.longitude - a.longitude) * f};
    }
    remaining -= length;
  }
  return leg.waypoints.back();
}

Waypoint leg_end_position(const Leg& leg, Waypoint previous_end) {
  if (leg.waypoints.empty()) {
    return previous_end;
  }
  return leg.waypoints.back();
}

}  // namespace

Waypoint position_at(const Scenario& scenario, std::int64_t t_ms) {
  const auto timings = leg_timings(scenario);
  Waypoint previous_end = {0.0, 0.0};
  for (std::size_t i = 0; i < scenario.legs.size(); ++i) {
    const Leg& leg = scenario.legs[i];
    if (t_ms < timings[i].end_ms || i + 1 == scenario.legs.size()) {
      const std::int64_t clamped =
          std::clamp(t_ms, timings[i].start_ms, timings[i].end_ms);
      return position_on_leg(leg, timings[i], clamped, previous_end);
    }
    previous_end = leg_end_position(leg, previous_end);
  }
  throw std::logic_error("scenario has no legs");
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scenario file: " + path.string());
  }
  const nlohmann::json doc = nlohmann::json::parse(in);

  Scenario scenario;
  scenario.seed = doc.value("seed", std::uint64_t{0});
  scenario.start_epoch_ms = doc.value("start_epoch_ms", std::int64_t{0});
  scenario.activity_noise = doc.value("activity_noise", 0.0);
  scenario.weight_kg = doc.value("weight_kg", 70.0);

  for (const auto& entry : doc.at("legs")) {
    Leg leg;
    leg.mode = parse_leg_mode(entry.at("mode").get<std::string>());
    leg.environment =
        parse_environment(entry.at("environment").get<std::string>());
    leg.speed_kmh = entry.value("speed_kmh", 0.0);
    leg.duration_s = entry.value("duration_s", 0.0);
    if (entry.contains("waypoints")) {
      for (const auto& point : entry.at("waypoints")) {
        leg.waypoints.push_back(
            {point.at(0).get<double>(), point.at(1).get<double>()});
      }
    }
    scenario.legs.push_back(std::move(leg));
  }

  validate_scenario(scenario);
  return scenario;
}

namespace {

/// The stream synthesizer. Location accuracy, noise and repetition follow
/// the leg's environment; a co-simulated pipeline drives the 5 s GPS
/// cadence exactly like the real one would.
class Generator {
 public:
  explicit Generator(const Scenario& scenario)
      : scenario_(scenario),
        timings_(leg_timings(scenario)),
        rng_(scenario.seed),
        cosim_(PipelineConfig{}, nullptr) {}

  std::vector<TraceEvent> run() {
    const std::int64_t start = scenario_.start_epoch_ms;
    const std::int64_t end = timings_.back().end_ms;

    std::vector<TraceEvent> events;
    std::int64_t next_close = start + kWindowMs;
    std::int64_t t_activity = start;
    std::int64_t t_location = start;

    while (t_activity <= end || t_location <= end) {
      const bool pick_activity =
          t_activity <= end &&
          (t_location > end || t_activity <= t_location);
      const std::int64_t t = pick_activity ? t_activity : t_location;

      while (t >= next_close) {
        handle_signal(cosim_.on_window_close(next_close), next_close);
        next_close += kWindowMs;
      }

      if (pick_activity) {
        TraceEvent event;
        event.type = TraceEvent::Type::Activity;
        event.t_ms = t;
        event.label = activity_label(t);
        cosim_.on_activity(event.label);
        events.push_back(std::move(event));
        t_activity += kActivityIntervalMs;
      } else {
        TraceEvent event;
        event.type = TraceEvent::Type::Location;
        event.t_ms = t;
        event.location = location_sample(t);
        handle_signal(cosim_.on_location(event.location), t);
        events.push_back(std::move(event));
        t_location += gps_active_ ? kGpsIntervalMs : kLocationIntervalMs;
      }
    }
    return events;
  }

 private:
  std::size_t leg_index_at(std::int64_t t_ms) const {
    for (std::size_t i = 0; i < timings_.size(); ++i) {
      if (t_ms < timings_[i].end_ms) {
        return i;
      }
    }
    return timings_.size() - 1;
  }

  void handle_signal(GpsSignal signal, std::int64_t t_ms) {
    if (signal == GpsSignal::Enable) {
      gps_active_ = true;
      gps_ready_ms_ = t_ms + kGpsWarmupMs;
    } else if (signal == GpsSignal::Disable) {
      gps_active_ = false;
    }
  }

  std::string activity_label(std::int64_t t_ms) {
    const Leg& leg = scenario_.legs[leg_index_at(t_ms)];
    std::string label = raw_label_for(leg.mode);
    if (scenario_.activity_noise > 0.0 &&
        uniform_(rng_) < scenario_.activity_noise) {
      static constexpr const char* kLabels[] = {"vehicle", "bicycle", "on_foot",
                                                "still", "unknown"};
      // uniform confusion over the other four labels
      std::string wrong;
      do {
        wrong = kLabels[std::uniform_int_distribution<int>(0, 4)(rng_)];
      } while (wrong == label);
      label = wrong;
    }
    return label;
  }

  Waypoint noisy_position(Waypoint truth, double accuracy_m) {
    const double sigma = accuracy_m / 2.0;
    std::normal_distribution<double> gauss(0.0, sigma);
    const double east_m = gauss(rng_);
    const double north_m = gauss(rng_);
    const double meters_per_deg_lat =
        geo::kEarthRadiusM * std::numbers::pi / 180.0;
    const double meters_per_deg_lon =
        meters_per_deg_lat * std::cos(truth.latitude * std::numbers::pi / 180.0);
    return {truth.latitude + north_m / meters_per_deg_lat,
            truth.longitude + east_m / meters_per_deg_lon};
  }

  LocationSample location_sample(std::int64_t t_ms) {
    const Leg& leg = scenario_.legs[leg_index_at(t_ms)];
    const Waypoint truth = position_at(scenario_, t_ms);

    LocationSample sample;
    sample.timestamp_ms = t_ms;

    if (leg.environment == Environment::Underground) {
      const double accuracy =
          std::uniform_real_distribution<double>(1001.0, 3000.0)(rng_);
      const Waypoint position = noisy_position(truth, accuracy);
      sample.latitude = position.latitude;
      sample.longitude = position.longitude;
      sample.accuracy_m = accuracy;
      sample.wifi_enabled = true;
    } else if (gps_active_ && t_ms >= gps_ready_ms_) {
      const double accuracy =
          std::uniform_real_distribution<double>(5.0, 15.0)(rng_);
      const Waypoint position = noisy_position(truth, accuracy);
      sample.latitude = position.latitude;
      sample.longitude = position.longitude;
      sample.accuracy_m = accuracy;
      sample.wifi_enabled = leg.environment == Environment::WifiUrban;
    } else if (leg.environment == Environment::WifiUrban) {
      const double accuracy =
          std::uniform_real_distribution<double>(30.0, 150.0)(rng_);
      const Waypoint position = noisy_position(truth, accuracy);
      sample.latitude = position.latitude;
      sample.longitude = position.longitude;
      sample.accuracy_m = accuracy;
      sample.wifi_enabled = true;
    } else {  // no Wi-Fi and no (warm) GPS: the provider repeats itself
      if (last_good_) {
        sample.latitude = last_good_->latitude;
        sample.longitude = last_good_->longitude;
        sample.accuracy_m = last_good_->accuracy_m;
      } else {
        const double accuracy =
            std::uniform_real_distribution<double>(30.0, 150.0)(rng_);
        const Waypoint position = noisy_position(truth, accuracy);
        sample.latitude = position.latitude;
        sample.longitude = position.longitude;
        sample.accuracy_m = accuracy;
      }
      sample.wifi_enabled = false;
    }

    if (sample.accuracy_m < 200.0) {
      last_good_ = sample;
    }
    return sample;
  }

  const Scenario& scenario_;
  std::vector<LegTiming> timings_;
  std::mt19937_64 rng_;
  Pipeline cosim_;
  bool gps_active_ = false;
  std::int64_t gps_ready_ms_ = 0;
  std::optional<LocationSample> last_good_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace

std::vector<TraceEvent> generate(const Scenario& scenario) {
  validate_scenario(scenario);
  return Generator(scenario).run();
}

void generate_to_file(const Scenario& scenario,
                      const std::filesystem::path& path) {
  const auto events = generate(scenario);
  write_trace(path, events);
}

namespace {

// fixture network coordinates reused by the journey presets
constexpr Waypoint kCanyelles{41.4417702469479, 2.16633743592508};
constexpr Waypoint kLesseps{41.4060, 2.1486};

Leg walk(std::vector<Waypoint> waypoints, double speed_kmh = 4.5) {
  Leg leg;
  leg.mode = LegMode::Walk;
  leg.environment = Environment::WifiUrban;
  leg.waypoints = std::move(waypoints);
  leg.speed_kmh = speed_kmh;
  return leg;
}

Leg still(double duration_s, std::vector<Waypoint> waypoints = {}) {
  Leg leg;
  leg.mode = LegMode::Still;
  leg.environment = Environment::WifiUrban;
  leg.duration_s = duration_s;
  leg.waypoints = std::move(waypoints);
  return leg;
}

Leg ride(LegMode mode, Environment environment, std::vector<Waypoint> waypoints,
         double speed_kmh) {
  Leg leg;
  leg.mode = mode;
  leg.environment = environment;
  leg.waypoints = std::move(waypoints);
  leg.speed_kmh = speed_kmh;
  return leg;
}

}  // namespace

Scenario preset(std::string_view name) {
  Scenario scenario;
  scenario.activity_noise = 0.0;
  scenario.weight_kg = 70.0;

  if (name == "journey1") {
    // car plus two bus lines, 06:30 local
    scenario.seed = 1;
    scenario.start_epoch_ms = 1'421'299'800'000;
    scenario.legs = {
        still(180.0, {{41.4468, 2.1723}}),
        ride(LegMode::Car, Environment::NoWifiRoad,
             {{41.4468, 2.1723}, {41.4300, 2.1900}, {41.4150, 2.1850}}, 40.0),
        still(240.0),
        walk({{41.4150, 2.1850}, {41.4120, 2.1800}}),
        still(225.0),
        ride(LegMode::Bus, Environment::WifiUrban,
             {{41.4120, 2.1800}, {41.4050, 2.1700}, {41.3980, 2.1650}}, 21.1),
        walk({{41.3980, 2.1650}, {41.3995, 2.1605}}),
        still(167.0),
        ride(LegMode::Bus, Environment::WifiUrban,
             {{41.3995, 2.1605}, {41.3930, 2.1520}, {41.3880, 2.1400}}, 16.7),
        walk({{41.3880, 2.1400}, {41.3860, 2.1380}}),
    };
  } else if (name == "journey2") {
    // metro round trip Canyelles <-> Lesseps on L3, 08:05 local
    scenario.seed = 2;
    scenario.start_epoch_ms = 1'421'305'500'000;
    scenario.legs = {
        walk({{41.4445, 2.1695}, kCanyelles}),
        ride(LegMode::Metro, Environment::Underground, {kCanyelles, kLesseps},
             30.0),
        walk({kLesseps, {41.4015, 2.1410}}),
        still(600.0),
        walk({{41.4015, 2.1410}, kLesseps}),
        ride(LegMode::Metro, Environment::Underground, {kLesseps, kCanyelles},
             30.0),
        walk({kCanyelles, {41.4445, 2.1695}}),
    };
  } else if (name == "journey3") {
    // bus round trip on line 60, 09:00 local
    scenario.seed = 3;
    scenario.start_epoch_ms = 1'421'308'800'000;
    scenario.legs = {
        walk({{41.4263, 2.1920}, {41.4240, 2.1890}}),
        still(200.0),
        ride(LegMode::Bus, Environment::WifiUrban,
             {{41.4240, 2.1890}, {41.4100, 2.1750}, {41.3895, 2.1155}}, 25.0),
        walk({{41.3895, 2.1155}, {41.3890, 2.1130}}),
        still(1200.0),
        walk({{41.3890, 2.1130}, {41.3895, 2.1155}}),
        still(143.0),
        ride(LegMode::Bus, Environment::WifiUrban,
             {{41.3895, 2.1155}, {41.4100, 2.1750}, {41.4240, 2.1890}}, 25.0),
        walk({{41.4240, 2.1890}, {41.4263, 2.1920}}),
    };
  } else if (name == "journey4") {
    // pure walk, 10:00 local
    scenario.seed = 4;
    scenario.start_epoch_ms = 1'421'312'400'000;
    scenario.legs = {
        walk({{41.3985, 2.1740},
              {41.4000, 2.1680},
              {41.3950, 2.1620},
              {41.3905, 2.1650}}),
    };
  } else if (name == "journey5") {
    // car on a road without Wi-Fi coverage, 17:00 local
    scenario.seed = 5;
    scenario.start_epoch_ms = 1'421'337'600'000;
    scenario.legs = {
        still(120.0, {{41.4900, 2.0500}}),
        ride(LegMode::Car, Environment::NoWifiRoad,
             {{41.4900, 2.0500}, {41.5100, 2.0800}, {41.5300, 2.1200}}, 60.0),
        still(180.0),
    };
  } else {
    throw std::invalid_argument("unknown preset: " + std::string(name));
  }

  validate_scenario(scenario);
  return scenario;
}

}  // namespace mobility::sim
