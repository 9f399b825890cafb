#include "mobility/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace mobility::store {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr char kSpeedKey[] = "speed (Km/h)";
constexpr char kLegacySpeedKey[] = "speed (Km\\h)";

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

void validate_identity(const UserIdentity& identity) {
  if (identity.id_hex.size() != 64) {
    throw std::invalid_argument("identity must be 64 hex characters");
  }
  for (char c : identity.id_hex) {
    const bool hex = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!hex) {
      throw std::invalid_argument("identity must be lowercase hexadecimal");
    }
  }
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(length * 2);
  static constexpr char kHexDigits[] = "0123456789abcdef";
  for (unsigned int i = 0; i < length; ++i) {
    // two digits per byte, so the id length invariant actually holds
    hex.push_back(kHexDigits[digest[i] >> 4]);
    hex.push_back(kHexDigits[digest[i] & 0x0F]);
  }
  return hex;
}

UserIdentity generate_identity(const IdentitySources& sources) {
  const auto key = sources.random_key();
  char random_text[64];
  std::snprintf(random_text, sizeof(random_text), "%.17g", sources.random01());

  std::string material = std::to_string(sources.epoch_ms());
  material += random_text;
  material += std::to_string(sources.process_id());
  static constexpr char kHexDigits[] = "0123456789abcdef";
  for (const auto byte : key) {
    material.push_back(kHexDigits[byte >> 4]);
    material.push_back(kHexDigits[byte & 0x0F]);
  }

  UserIdentity identity{sha256_hex(material)};
  validate_identity(identity);
  return identity;
}

UserIdentity generate_identity() {
  IdentitySources sources;
  sources.epoch_ms = [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
  sources.random01 = [] {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  };
  sources.process_id = [] { return static_cast<int>(::getpid()); };
  sources.random_key = [] {
    std::array<std::uint8_t, 32> key{};
    if (RAND_bytes(key.data(), static_cast<int>(key.size())) != 1) {
      throw std::runtime_error("entropy source failed");
    }
    return key;
  };
  return generate_identity(sources);
}

std::string format_time_hms(std::int64_t epoch_ms) {
  std::time_t seconds = static_cast<std::time_t>(epoch_ms / 1000);
  if (epoch_ms < 0 && epoch_ms % 1000 != 0) {
    --seconds;
  }
  std::tm local{};
  localtime_r(&seconds, &local);
  char text[16];
  std::snprintf(text, sizeof(text), "%02d:%02d:%02d", local.tm_hour,
                local.tm_min, local.tm_sec);
  return text;
}

std::int64_t parse_time_hms(const std::string& text) {
  int hour = 0;
  int minute = 0;
  int second = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%2d:%2d:%2d%c", &hour, &minute, &second,
                  &extra) != 3 ||
      text.size() != 8 || hour < 0 || hour > 23 || minute < 0 || minute > 59 ||
      second < 0 || second > 59) {
    throw std::invalid_argument("malformed time of day: " + text);
  }
  // reference date; the actual date lives in the file name
  std::tm local{};
  local.tm_year = 100;  // 2000
  local.tm_mon = 0;
  local.tm_mday = 2;
  local.tm_hour = hour;
  local.tm_min = minute;
  local.tm_sec = second;
  local.tm_isdst = -1;
  const std::time_t seconds = std::mktime(&local);
  if (seconds == static_cast<std::time_t>(-1)) {
    throw std::invalid_argument("unrepresentable time of day: " + text);
  }
  return static_cast<std::int64_t>(seconds) * 1000;
}

std::string segments_to_json(std::span<const Segment> segments, bool compact) {
  ordered_json array = ordered_json::array();
  for (const auto& segment : segments) {
    ordered_json entry;
    entry["activity"] = to_string(segment.activity());
    entry["distance (m)"] = segment.total_distance_m();
    entry["duration (s)"] = segment.total_duration_s();
    if (segment.line()) {
      entry["line"] = *segment.line();
    }
    entry[kSpeedKey] = segment.average_speed_kmh();
    entry["first time"] = format_time_hms(segment.first_location().timestamp_ms);
    entry["last time"] = format_time_hms(segment.last_location().timestamp_ms);
    ordered_json points = ordered_json::array();
    for (const auto& point : segment.location_points()) {
      points.push_back(point.latitude);
      points.push_back(point.longitude);
      points.push_back(format_time_hms(point.timestamp_ms));
    }
    entry["location"] = std::move(points);
    array.push_back(std::move(entry));
  }
  ordered_json document;
  document["segments"] = std::move(array);
  return document.dump(compact ? -1 : 1) + "\n";
}

void write_segments(const std::filesystem::path& path,
                    std::span<const Segment> segments, bool compact) {
  const std::string text = segments_to_json(segments, compact);

  const int fd = ::open(path.c_str(), O_CREAT | O_WRONLY, 0644);
  if (fd < 0) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  ::flock(fd, LOCK_EX);
  bool failed = ::ftruncate(fd, 0) != 0;
  std::size_t written = 0;
  while (!failed && written < text.size()) {
    const ssize_t n = ::write(fd, text.data() + written, text.size() - written);
    if (n < 0) {
      failed = true;
      break;
    }
    written += static_cast<std::size_t>(n);
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
  if (failed) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

namespace {

Segment segment_from_json(const ordered_json& entry) {
  const ActivityLabel activity =
      parse_activity_label(entry.at("activity").get<std::string>());
  const double distance_m = entry.at("distance (m)").get<double>();
  const std::int64_t duration_s = entry.at("duration (s)").get<std::int64_t>();

  double speed_kmh = 0.0;
  if (entry.contains(kSpeedKey)) {
    speed_kmh = entry.at(kSpeedKey).get<double>();
  } else {
    speed_kmh = entry.at(kLegacySpeedKey).get<double>();
  }

  const std::int64_t first_ms =
      parse_time_hms(entry.at("first time").get<std::string>());
  const std::int64_t last_ms =
      parse_time_hms(entry.at("last time").get<std::string>());

  const auto& location = entry.at("location");
  if (!location.is_array() || location.empty() || location.size() % 3 != 0) {
    throw std::invalid_argument(
        "location array must hold whole (latitude, longitude, time) triples");
  }

  std::vector<LocationSample> points;
  points.reserve(location.size() / 3);
  for (std::size_t i = 0; i < location.size(); i += 3) {
    LocationSample point;
    point.latitude = location.at(i).get<double>();
    point.longitude = location.at(i + 1).get<double>();
    point.accuracy_m = 1.0;  // not serialized
    point.timestamp_ms = parse_time_hms(location.at(i + 2).get<std::string>());
    points.push_back(point);
  }

  std::optional<std::string> line;
  if (entry.contains("line") && is_transit(activity)) {
    line = entry.at("line").get<std::string>();
  }

  LocationSample first{points.front().latitude, points.front().longitude, 1.0,
                       first_ms, false};
  LocationSample last{points.back().latitude, points.back().longitude, 1.0,
                      last_ms, false};

  return Segment(activity, first, last, distance_m, duration_s, speed_kmh,
                 std::move(line), std::move(points));
}

}  // namespace

std::vector<Segment> segments_from_json(const std::string& text) {
  const ordered_json document = ordered_json::parse(text);
  const auto& array = document.at("segments");
  if (!array.is_array()) {
    throw std::invalid_argument("\"segments\" must be an array");
  }
  std::vector<Segment> segments;
  segments.reserve(array.size());
  for (const auto& entry : array) {
    segments.push_back(segment_from_json(entry));
  }
  return segments;
}

std::vector<Segment> read_segments(const std::filesystem::path& path) {
  try {
    return segments_from_json(read_file_bytes(path));
  } catch (const std::runtime_error&) {
    throw;  // open failures keep their type
  } catch (const std::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

std::string daily_filename(std::chrono::year_month_day date) {
  char text[32];
  std::snprintf(text, sizeof(text), "%02u-%02u-%04d.json",
                static_cast<unsigned>(date.day()),
                static_cast<unsigned>(date.month()),
                static_cast<int>(date.year()));
  return text;
}

std::string history_filename(std::chrono::year_month_day date) {
  char text[48];
  std::snprintf(text, sizeof(text), "%02u-%02u-%04dlocation_segment.json",
                static_cast<unsigned>(date.day()),
                static_cast<unsigned>(date.month()),
                static_cast<int>(date.year()));
  return text;
}

std::filesystem::path daily_path(const std::filesystem::path& base_dir,
                                 const UserIdentity& identity,
                                 std::chrono::year_month_day date) {
  validate_identity(identity);
  return base_dir / identity.id_hex / daily_filename(date);
}

namespace {

struct ParsedUrl {
  std::string scheme_host_port;  // "http://host:port"
  std::string prefix;            // path prefix, possibly empty
};

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {url, ""};
  }
  std::string prefix = url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') {
    prefix.pop_back();
  }
  return {url.substr(0, path_start), prefix};
}

}  // namespace

UploadResult upload(const std::filesystem::path& local_file,
                    const std::string& destination,
                    const UserIdentity& identity) {
  validate_identity(identity);

  UploadResult result;
  std::string bytes;
  try {
    bytes = read_file_bytes(local_file);
    segments_from_json(bytes);  // reject invalid content before any transfer
  } catch (const std::exception& e) {
    result.error = e.what();
    return result;
  }

  const std::string filename = local_file.filename().string();
  const bool is_http = destination.rfind("http://", 0) == 0 ||
                       destination.rfind("https://", 0) == 0;

  if (is_http) {
    const ParsedUrl url = parse_url(destination);
    const std::string path = url.prefix + "/" + identity.id_hex + "/" + filename;
    result.target = url.scheme_host_port + path;
    httplib::Client client(url.scheme_host_port);
    const auto response = client.Put(path, bytes, "application/json");
    if (!response) {
      result.error = "request failed: " + httplib::to_string(response.error());
      return result;
    }
    if (response->status < 200 || response->status >= 300) {
      result.error = "server returned status " + std::to_string(response->status);
      return result;
    }
    result.ok = true;
    return result;
  }

  try {
    const std::filesystem::path directory =
        std::filesystem::path(destination) / identity.id_hex;
    std::filesystem::create_directories(directory);
    const std::filesystem::path target = directory / filename;
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write: " + target.string());
    }
    out << bytes;
    out.close();
    result.target = target.string();
    result.ok = true;
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

void DailyStats::set(const std::string& day, double kcal, double co2_g) {
  days_[day] = {kcal, co2_g};
}

DailyStats DailyStats::load(const std::filesystem::path& path) {
  DailyStats stats;
  const ordered_json doc = ordered_json::parse(read_file_bytes(path));
  for (const auto& [day, totals] : doc.items()) {
    stats.days_[day] = {totals.at("kcal").get<double>(),
                        totals.at("co2_g").get<double>()};
  }
  return stats;
}

void DailyStats::save(const std::filesystem::path& path) const {
  ordered_json doc;
  for (const auto& [day, totals] : days_) {
    doc[day] = {{"kcal", totals.first}, {"co2_g", totals.second}};
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write stats file: " + path.string());
  }
  out << doc.dump(1) << '\n';
}

std::string DailyStats::to_csv() const {
  std::string csv = "date,kcal,co2_g\n";
  char line[128];
  for (const auto& [day, totals] : days_) {
    std::snprintf(line, sizeof(line), "%s,%.10g,%.10g\n", day.c_str(),
                  totals.first, totals.second);
    csv += line;
  }
  return csv;
}

namespace {

const char* activity_color(ActivityLabel label) {
  switch (label) {
    case ActivityLabel::Still:
      return "#9e9e9e";
    case ActivityLabel::OnFoot:
      return "#4caf50";
    case ActivityLabel::Bicycle:
      return "#9c27b0";
    case ActivityLabel::Vehicle:
      return "#212121";
    case ActivityLabel::Unknown:
      return "#bdbdbd";
    case ActivityLabel::Metro:
      return "#e2001a";
    case ActivityLabel::Bus:
      return "#1e88e5";
    case ActivityLabel::Tram:
      return "#00a19a";
    case ActivityLabel::Train:
      return "#f57c00";
  }
  return "#000000";
}

}  // namespace

std::string segments_to_geojson(std::span<const Segment> segments) {
  ordered_json features = ordered_json::array();
  for (const auto& segment : segments) {
    ordered_json feature;
    feature["type"] = "Feature";

    ordered_json geometry;
    const auto& points = segment.location_points();
    if (points.size() < 2) {
      geometry["type"] = "Point";
      geometry["coordinates"] = {points.front().longitude,
                                 points.front().latitude};
    } else {
      geometry["type"] = "LineString";
      ordered_json coordinates = ordered_json::array();
      for (const auto& point : points) {
        coordinates.push_back({point.longitude, point.latitude});
      }
      geometry["coordinates"] = std::move(coordinates);
    }
    feature["geometry"] = std::move(geometry);

    ordered_json properties;
    properties["activity"] = to_string(segment.activity());
    if (segment.line()) {
      properties["line"] = *segment.line();
    }
    properties["color"] = activity_color(segment.activity());
    properties["distance_m"] = segment.total_distance_m();
    properties["duration_s"] = segment.total_duration_s();
    properties["speed_kmh"] = segment.average_speed_kmh();
    properties["first_time"] = format_time_hms(segment.first_location().timestamp_ms);
    properties["last_time"] = format_time_hms(segment.last_location().timestamp_ms);
    feature["properties"] = std::move(properties);

    features.push_back(std::move(feature));
  }

  ordered_json document;
  document["type"] = "FeatureCollection";
  document["features"] = std::move(features);
  return document.dump(1) + "\n";
}

}  // namespace mobility::store
