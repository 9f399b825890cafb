#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobility/config.hpp"
#include "mobility/network.hpp"
#include "mobility/types.hpp"

namespace mobility {

/// GPS request emitted back to the location provider (or simulator).
enum class GpsSignal { Enable, Disable, NoChange };

struct PipelineEvent {
  enum class Kind {
    GpsEnable,
    GpsDisable,
    UndergroundEnter,
    UndergroundExit,
    MetroRecognized,
    MetroFalsePositive,
  };
  Kind kind;
  std::int64_t t_ms = 0;
};

std::string_view to_string(PipelineEvent::Kind kind);

/// Mutable state of one trace's location processing.
struct PipelineState {
  std::vector<LocationSample> window_buffer;  // good fixes this window
  ActivityWindowCounts counts;
  int reploc = 0;  // consecutive repeated-location counter
  int badloc = 0;  // count of fixes worse than the bad-accuracy bound
  bool gps_on = false;
  int gps_windows_remaining = 0;
  bool afterbad = false;  // underground-recovery mode
  std::optional<LocationSample> loc1;      // last good fix before blackout
  std::vector<LocationSample> locgood;     // distinct good fixes after blackout
  std::optional<LocationSample> last_good; // most recent good fix overall
  std::optional<ActivityLabel> last_activity;
  std::vector<Segment> segments;
  std::int64_t temp_duration_s = 0;  // running merge accumulators
  double temp_distance_m = 0.0;
  double temp_speed_kmh = 0.0;
  std::int64_t last_location_t_ms = INT64_MIN;
};

/// The windowed location-processing state machine: GPS activation,
/// underground detection and segment creation/merging. One instance per
/// trace; single-threaded per trace.
class Pipeline {
 public:
  /// network may be null; metro recognition then always reports a false
  /// positive (used when co-simulating only the GPS activator).
  Pipeline(PipelineConfig config, const TransitNetwork* network);

  /// Ingests one positioning fix. Fix timestamps must not decrease.
  GpsSignal on_location(const LocationSample& sample);

  /// Ingests one raw 5-second activity label.
  void on_activity(std::string_view raw_label);

  /// Closes the current aggregation window. Must be called every
  /// window_seconds of trace time; close_t_ms stamps emitted events.
  GpsSignal on_window_close(std::int64_t close_t_ms);

  /// End-of-trace flush: closes the final partial window and, if an
  /// unresolved blackout remains, emits an unclassified vehicle segment.
  GpsSignal finish(std::int64_t t_ms);

  const PipelineConfig& config() const { return config_; }
  const PipelineState& state() const { return state_; }
  const std::vector<Segment>& segments() const { return state_.segments; }
  const std::vector<PipelineEvent>& events() const { return events_; }

 private:
  struct WindowStats {
    std::int64_t duration_s = 0;
    double path_m = 0.0;
    double block_m = 0.0;
    double speed_kmh = 0.0;
  };

  WindowStats window_stats() const;
  void apply_window(ActivityLabel estimated, const WindowStats& stats);
  void open_segment(ActivityLabel label, const WindowStats& stats);
  void merge_window(const WindowStats& stats);
  void enable_gps(std::int64_t t_ms);
  void emit(PipelineEvent::Kind kind, std::int64_t t_ms);

  PipelineConfig config_;
  const TransitNetwork* network_;
  PipelineState state_;
  std::vector<PipelineEvent> events_;
};

/// One line of the trace file: a positioning fix or an activity label.
struct TraceEvent {
  enum class Type { Location, Activity };
  Type type = Type::Location;
  std::int64_t t_ms = 0;
  LocationSample location;  // valid when type == Location
  std::string label;        // valid when type == Activity
};

/// Trace files are JSON lines:
///   {"type":"loc","lat":..,"lon":..,"accuracy_m":..,"t_ms":..,"wifi":..}
///   {"type":"act","label":"on_foot","t_ms":..}
/// Errors name the offending line number.
std::vector<TraceEvent> read_trace(const std::filesystem::path& path);
void write_trace(const std::filesystem::path& path,
                 std::span<const TraceEvent> events);

struct RunResult {
  std::vector<Segment> segments;
  std::vector<PipelineEvent> events;
};

/// Replays a trace through a fresh pipeline, closing windows every
/// window_seconds of trace time anchored at the first event.
RunResult run_trace(std::span<const TraceEvent> trace,
                    const PipelineConfig& config,
                    const TransitNetwork* network);

/// Event log sidecar: JSON lines {"t_ms":..,"event":"gps_enable"}.
void write_event_log(const std::filesystem::path& path,
                     std::span<const PipelineEvent> events);
std::vector<PipelineEvent> read_event_log(const std::filesystem::path& path);

}  // namespace mobility
