#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mobility/types.hpp"

namespace mobility::store {

/// Anonymous per-installation identity: 64 lowercase hex characters.
struct UserIdentity {
  std::string id_hex;
};

/// Throws std::invalid_argument unless the id is exactly 64 hex digits.
void validate_identity(const UserIdentity& identity);

/// Inputs folded into a fresh identity; injectable for tests.
struct IdentitySources {
  std::function<std::int64_t()> epoch_ms;
  std::function<double()> random01;  // uniform in [0, 1)
  std::function<int()> process_id;
  std::function<std::array<std::uint8_t, 32>()> random_key;
};

/// SHA-256 of (epoch millis ++ random in [0,1) ++ pid ++ 256-bit random
/// key), hex encoded with two digits per byte.
UserIdentity generate_identity(const IdentitySources& sources);
UserIdentity generate_identity();  // system clock, entropy and pid

std::string sha256_hex(std::string_view data);

/// "HH:MM:SS", 24-hour local wall clock.
std::string format_time_hms(std::int64_t epoch_ms);

/// Inverse of format_time_hms on a fixed reference date; the file format
/// carries no date, it lives in the file name.
std::int64_t parse_time_hms(const std::string& text);

/// Segment file serialization: {"segments":[...]} with per-segment keys
/// "activity", "distance (m)", "duration (s)", optional "line",
/// "speed (Km/h)", "first time", "last time" and a flat "location" array of
/// (latitude, longitude, time) triples. Indented by one space unless
/// compact.
std::string segments_to_json(std::span<const Segment> segments,
                             bool compact = false);

/// Rewrites the whole file on every call, under an exclusive lock.
void write_segments(const std::filesystem::path& path,
                    std::span<const Segment> segments, bool compact = false);

/// Inverse of write_segments up to floating-point round-trip. Throws on
/// malformed JSON, missing keys or a location array that is not a whole
/// number of triples. Accepts the legacy "speed (Km\h)" spelling.
std::vector<Segment> read_segments(const std::filesystem::path& path);
std::vector<Segment> segments_from_json(const std::string& text);

/// "DD-MM-YYYY.json"
std::string daily_filename(std::chrono::year_month_day date);

/// "DD-MM-YYYYlocation_segment.json" -- the device-side history copy.
std::string history_filename(std::chrono::year_month_day date);

/// base_dir / id_hex / DD-MM-YYYY.json
std::filesystem::path daily_path(const std::filesystem::path& base_dir,
                                 const UserIdentity& identity,
                                 std::chrono::year_month_day date);

struct UploadResult {
  bool ok = false;
  std::string target;  // final path or URL
  std::string error;   // set when !ok
};

/// Stores the file's bytes under the per-user layout at the destination:
/// a directory tree, or an HTTP PUT to {base_url}/{id_hex}/{filename} with
/// content-type application/json when the destination is an http(s) URL.
/// The file must parse as valid segments before any transfer happens.
UploadResult upload(const std::filesystem::path& local_file,
                    const std::string& destination,
                    const UserIdentity& identity);

/// Per-day metric totals keyed by "DD-MM-YYYY", persisted as JSON and
/// exported as CSV with a "date,kcal,co2_g" header.
class DailyStats {
 public:
  void set(const std::string& day, double kcal, double co2_g);
  const std::map<std::string, std::pair<double, double>>& days() const {
    return days_;
  }

  static DailyStats load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  std::string to_csv() const;

 private:
  std::map<std::string, std::pair<double, double>> days_;
};

/// GeoJSON FeatureCollection: one LineString per moving segment, a Point
/// for still (and single-fix) segments, activity/line/color as properties.
std::string segments_to_geojson(std::span<const Segment> segments);

}  // namespace mobility::store
