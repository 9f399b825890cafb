#include "mobility/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mobility/activity.hpp"
#include "mobility/geo.hpp"
#include "mobility/transit.hpp"

namespace mobility {

std::string_view to_string(PipelineEvent::Kind kind) {
  switch (kind) {
    case PipelineEvent::Kind::GpsEnable:
      return "gps_enable";
    case PipelineEvent::Kind::GpsDisable:
      return "gps_disable";
    case PipelineEvent::Kind::UndergroundEnter:
      return "underground_enter";
    case PipelineEvent::Kind::UndergroundExit:
      return "underground_exit";
    case PipelineEvent::Kind::MetroRecognized:
      return "metro_recognized";
    case PipelineEvent::Kind::MetroFalsePositive:
      return "metro_false_positive";
  }
  throw std::logic_error("unreachable event kind");
}

namespace {

PipelineEvent::Kind event_kind_from_string(std::string_view text) {
  for (auto kind : {PipelineEvent::Kind::GpsEnable, PipelineEvent::Kind::GpsDisable,
                    PipelineEvent::Kind::UndergroundEnter,
                    PipelineEvent::Kind::UndergroundExit,
                    PipelineEvent::Kind::MetroRecognized,
                    PipelineEvent::Kind::MetroFalsePositive}) {
    if (to_string(kind) == text) {
      return kind;
    }
  }
  throw std::invalid_argument("unknown pipeline event: " + std::string(text));
}

}  // namespace

Pipeline::Pipeline(PipelineConfig config, const TransitNetwork* network)
    : config_(config), network_(network) {
  validate_config(config_);
}

void Pipeline::emit(PipelineEvent::Kind kind, std::int64_t t_ms) {
  events_.push_back({kind, t_ms});
}

void Pipeline::enable_gps(std::int64_t t_ms) {
  state_.gps_on = true;
  state_.gps_windows_remaining = config_.gps_max_windows;
  emit(PipelineEvent::Kind::GpsEnable, t_ms);
}

GpsSignal Pipeline::on_location(const LocationSample& sample) {
  validate_sample(sample);
  if (sample.timestamp_ms < state_.last_location_t_ms) {
    throw std::invalid_argument("location timestamps must not decrease");
  }
  state_.last_location_t_ms = sample.timestamp_ms;

  GpsSignal signal = GpsSignal::NoChange;

  if (sample.accuracy_m < config_.good_accuracy_m) {
    state_.last_good = sample;
    if (state_.afterbad) {
      // recovery: collect distinct fixes, dropping repeated ones
      if (state_.locgood.empty() ||
          !state_.locgood.back().same_position(sample)) {
        state_.locgood.push_back(sample);
      }
    } else {
      if (!state_.window_buffer.empty()) {
        if (state_.window_buffer.back().same_position(sample)) {
          ++state_.reploc;
        } else {
          state_.reploc = 0;
        }
      }
      state_.window_buffer.push_back(sample);
      if (state_.reploc > config_.reploc_trigger && !state_.gps_on &&
          (state_.counts.vehicle_count > 1 ||
           state_.counts.on_foot_count > 2)) {
        enable_gps(sample.timestamp_ms);
        signal = GpsSignal::Enable;
      }
    }
  } else if (sample.accuracy_m < config_.bad_accuracy_m) {
    if (sample.wifi_enabled && !state_.gps_on) {
      enable_gps(sample.timestamp_ms);
      signal = GpsSignal::Enable;
    }
  } else if (sample.accuracy_m > config_.bad_accuracy_m) {
    if (sample.wifi_enabled) {
      // worse than the underground bound: enabling GPS would not help
      ++state_.badloc;
    }
  }

  return signal;
}

void Pipeline::on_activity(std::string_view raw_label) {
  activity::ingest_label(state_.counts, raw_label);
}

Pipeline::WindowStats Pipeline::window_stats() const {
  WindowStats stats;
  const auto& buffer = state_.window_buffer;
  stats.duration_s = (buffer.back().timestamp_ms - buffer.front().timestamp_ms) / 1000;
  stats.path_m = geo::path_distance_m(buffer, config_.earth_radius_m);
  stats.block_m = geo::block_distance_m(buffer, config_.earth_radius_m);
  stats.speed_kmh = stats.duration_s > 0
                        ? geo::average_speed_kmh(stats.path_m,
                                                 static_cast<double>(stats.duration_s))
                        : 0.0;
  return stats;
}

GpsSignal Pipeline::on_window_close(std::int64_t close_t_ms) {
  GpsSignal signal = GpsSignal::NoChange;

  // 1. GPS countdown
  if (state_.gps_on) {
    --state_.gps_windows_remaining;
    if (state_.gps_windows_remaining <= 0) {
      state_.gps_on = false;
      state_.gps_windows_remaining = 0;
      emit(PipelineEvent::Kind::GpsDisable, close_t_ms);
      signal = GpsSignal::Disable;
    }
  }

  bool suppress = false;
  bool keep_buffer = false;

  // 2. underground entry
  if (state_.badloc > config_.badloc_trigger && state_.last_good &&
      !state_.afterbad) {
    state_.afterbad = true;
    state_.loc1 = state_.last_good;
    suppress = true;
    emit(PipelineEvent::Kind::UndergroundEnter, close_t_ms);
  }

  // 3. underground exit
  if (!suppress && state_.afterbad &&
      state_.locgood.size() > 2) {
    const LocationSample loc2 = state_.locgood.front();
    emit(PipelineEvent::Kind::UndergroundExit, close_t_ms);

    std::optional<transit::MetroRoute> route;
    if (network_ != nullptr) {
      route = transit::recognize_metro(*state_.loc1, loc2, *network_, config_);
    }

    if (route) {
      const std::int64_t duration_s =
          (loc2.timestamp_ms - state_.loc1->timestamp_ms) / 1000;
      const double distance_m = transit::station_path_distance_m(route->stations);
      const double speed_kmh =
          duration_s > 0
              ? geo::average_speed_kmh(distance_m, static_cast<double>(duration_s))
              : 0.0;

      std::vector<LocationSample> points;
      points.reserve(route->stations.size());
      for (const auto& station : route->stations) {
        // traced stations inherit the blackout's first timestamp
        points.push_back({station.latitude, station.longitude, 1.0,
                          state_.loc1->timestamp_ms, false});
      }

      state_.segments.emplace_back(ActivityLabel::Metro, *state_.loc1, loc2,
                                   distance_m, duration_s, speed_kmh,
                                   route->line(), std::move(points));
      state_.last_activity = ActivityLabel::Metro;
      state_.temp_duration_s = duration_s;
      state_.temp_distance_m = distance_m;
      state_.temp_speed_kmh = speed_kmh;
      emit(PipelineEvent::Kind::MetroRecognized, close_t_ms);

      // recovered fixes seed the next window instead of this one
      state_.window_buffer = state_.locgood;
      keep_buffer = true;
    } else {
      emit(PipelineEvent::Kind::MetroFalsePositive, close_t_ms);
      // fall through to normal processing of the recovered fixes
      state_.window_buffer = state_.locgood;
    }
    state_.badloc = 0;
    state_.afterbad = false;
    state_.locgood.clear();
  }

  // 4. normal window
  if (!suppress && !keep_buffer && !state_.window_buffer.empty()) {
    const WindowStats stats = window_stats();
    const ActivityLabel estimated = activity::estimate(state_.counts);
    apply_window(estimated, stats);
  }

  if (!keep_buffer) {
    state_.window_buffer.clear();
  }
  state_.counts.reset();
  return signal;
}

void Pipeline::apply_window(ActivityLabel estimated, const WindowStats& stats) {
  ActivityLabel effective = estimated;
  if (estimated == ActivityLabel::OnFoot &&
      stats.block_m <= config_.block_radius_m) {
    // walking jitter below the block size counts as standing still
    effective = ActivityLabel::Still;
  }

  if (!state_.last_activity.has_value()) {
    open_segment(effective, stats);
    return;
  }

  if (effective == *state_.last_activity &&
      !state_.segments.empty()) {
    merge_window(stats);
    return;
  }

  if (effective == ActivityLabel::Vehicle &&
      *state_.last_activity == ActivityLabel::OnFoot &&
      !state_.segments.empty() &&
      !(stats.speed_kmh > config_.max_on_foot_speed_kmh)) {
    // too slow for a motor vehicle: the window stays with the walk
    merge_window(stats);
    return;
  }

  open_segment(effective, stats);
}

namespace {

const LocationSample& most_accurate(std::span<const LocationSample> samples) {
  const LocationSample* best = &samples.front();
  for (const auto& sample : samples) {
    if (sample.accuracy_m < best->accuracy_m) {
      best = &sample;
    }
  }
  return *best;
}

}  // namespace

void Pipeline::open_segment(ActivityLabel label, const WindowStats& stats) {
  const auto& buffer = state_.window_buffer;

  if (label == ActivityLabel::Still) {
    state_.segments.emplace_back(
        ActivityLabel::Still, buffer.front(), buffer.back(), 0.0,
        stats.duration_s, 0.0, std::nullopt,
        std::vector<LocationSample>{most_accurate(buffer)});
    state_.temp_duration_s = stats.duration_s;
    state_.temp_distance_m = 0.0;
    state_.temp_speed_kmh = 0.0;
  } else {
    state_.segments.emplace_back(label, buffer.front(), buffer.back(),
                                 stats.path_m, stats.duration_s,
                                 stats.speed_kmh, std::nullopt, buffer);
    state_.temp_duration_s = stats.duration_s;
    state_.temp_distance_m = stats.path_m;
    state_.temp_speed_kmh = stats.speed_kmh;
  }
  state_.last_activity = label;
}

void Pipeline::merge_window(const WindowStats& stats) {
  const auto& buffer = state_.window_buffer;
  const Segment& current = state_.segments.back();

  if (current.activity() == ActivityLabel::Still) {
    state_.temp_duration_s += stats.duration_s;
    const LocationSample& candidate = most_accurate(buffer);
    LocationSample point = current.location_points().front();
    if (candidate.accuracy_m < point.accuracy_m) {
      point = candidate;
    }
    state_.segments.back() =
        Segment(ActivityLabel::Still, current.first_location(), buffer.back(),
                0.0, state_.temp_duration_s, 0.0, std::nullopt, {point});
    return;
  }

  state_.temp_duration_s += stats.duration_s;
  state_.temp_distance_m += stats.path_m;
  state_.temp_speed_kmh = (state_.temp_speed_kmh + stats.speed_kmh) / 2.0;

  std::vector<LocationSample> points = current.location_points();
  points.insert(points.end(), buffer.begin(), buffer.end());

  state_.segments.back() =
      Segment(current.activity(), current.first_location(), buffer.back(),
              state_.temp_distance_m, state_.temp_duration_s,
              state_.temp_speed_kmh, current.line(), std::move(points));
}

GpsSignal Pipeline::finish(std::int64_t t_ms) {
  const GpsSignal signal = on_window_close(t_ms);

  if (state_.afterbad) {
    // blackout never resolved: flush what we know as an unclassified vehicle
    std::vector<LocationSample> points{*state_.loc1};
    points.insert(points.end(), state_.locgood.begin(), state_.locgood.end());
    const LocationSample& last = points.back();
    const std::int64_t duration_s =
        (last.timestamp_ms - state_.loc1->timestamp_ms) / 1000;
    const double distance_m =
        geo::path_distance_m(points, config_.earth_radius_m);
    const double speed_kmh =
        duration_s > 0
            ? geo::average_speed_kmh(distance_m, static_cast<double>(duration_s))
            : 0.0;
    state_.segments.emplace_back(ActivityLabel::Vehicle, *state_.loc1, last,
                                 distance_m, duration_s, speed_kmh,
                                 std::nullopt, std::move(points));
    state_.last_activity = ActivityLabel::Vehicle;
    state_.afterbad = false;
    state_.badloc = 0;
    state_.locgood.clear();
  }
  return signal;
}

std::vector<TraceEvent> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trace file: " + path.string());
  }

  std::vector<TraceEvent> events;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) {
      continue;
    }
    try {
      const nlohmann::json entry = nlohmann::json::parse(line);
      TraceEvent event;
      const std::string type = entry.at("type").get<std::string>();
      event.t_ms = entry.at("t_ms").get<std::int64_t>();
      if (type == "loc") {
        event.type = TraceEvent::Type::Location;
        event.location.latitude = entry.at("lat").get<double>();
        event.location.longitude = entry.at("lon").get<double>();
        event.location.accuracy_m = entry.at("accuracy_m").get<double>();
        event.location.timestamp_ms = event.t_ms;
        event.location.wifi_enabled = entry.at("wifi").get<bool>();
        validate_sample(event.location);
      } else if (type == "act") {
        event.type = TraceEvent::Type::Activity;
        event.label = entry.at("label").get<std::string>();
      } else {
        throw std::invalid_argument("unknown trace event type: " + type);
      }
      events.push_back(std::move(event));
    } catch (const std::exception& e) {
      throw std::invalid_argument(path.string() + ":" +
                                  std::to_string(line_number) + ": " + e.what());
    }
  }
  return events;
}

void write_trace(const std::filesystem::path& path,
                 std::span<const TraceEvent> events) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write trace file: " + path.string());
  }
  for (const auto& event : events) {
    nlohmann::ordered_json entry;
    if (event.type == TraceEvent::Type::Location) {
      entry["type"] = "loc";
      entry["lat"] = event.location.latitude;
      entry["lon"] = event.location.longitude;
      entry["accuracy_m"] = event.location.accuracy_m;
      entry["t_ms"] = event.t_ms;
      entry["wifi"] = event.location.wifi_enabled;
    } else {
      entry["type"] = "act";
      entry["label"] = event.label;
      entry["t_ms"] = event.t_ms;
    }
    out << entry.dump() << '\n';
  }
}

RunResult run_trace(std::span<const TraceEvent> trace,
                    const PipelineConfig& config,
                    const TransitNetwork* network) {
  Pipeline pipeline(config, network);
  if (trace.empty()) {
    return {};
  }

  const std::int64_t window_ms =
      static_cast<std::int64_t>(config.window_seconds * 1000.0);
  std::int64_t next_close = trace.front().t_ms + window_ms;
  std::int64_t last_t = trace.front().t_ms;

  for (const auto& event : trace) {
    if (event.t_ms < last_t) {
      throw std::invalid_argument("trace events must be time-ordered");
    }
    last_t = event.t_ms;
    while (event.t_ms >= next_close) {
      pipeline.on_window_close(next_close);
      next_close += window_ms;
    }
    if (event.type == TraceEvent::Type::Location) {
      pipeline.on_location(event.location);
    } else {
      pipeline.on_activity(event.label);
    }
  }
  pipeline.finish(last_t);

  return {pipeline.segments(), pipeline.events()};
}

void write_event_log(const std::filesystem::path& path,
                     std::span<const PipelineEvent> events) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write event log: " + path.string());
  }
  for (const auto& event : events) {
    nlohmann::ordered_json entry;
    entry["t_ms"] = event.t_ms;
    entry["event"] = to_string(event.kind);
    out << entry.dump() << '\n';
  }
}

std::vector<PipelineEvent> read_event_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open event log: " + path.string());
  }
  std::vector<PipelineEvent> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const nlohmann::json entry = nlohmann::json::parse(line);
    events.push_back({event_kind_from_string(entry.at("event").get<std::string>()),
                      entry.at("t_ms").get<std::int64_t>()});
  }
  return events;
}

}  // namespace mobility
