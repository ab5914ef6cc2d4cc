#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sunsky/camera.hpp"
#include "sunsky/changedet.hpp"
#include "sunsky/decompose.hpp"
#include "sunsky/gmm.hpp"
#include "sunsky/metrics.hpp"
#include "sunsky/skydome.hpp"
#include "sunsky/synth.hpp"

namespace sunsky {

namespace fs = std::filesystem;

/// One manifest row. The image path is resolved against the manifest's
/// directory; utc/lat/lon may be blank when the sun is given explicitly.
struct ManifestRecord {
  std::string id;
  fs::path image;
  CameraModel camera;
  std::string utc;
  std::optional<double> latitude;
  std::optional<double> longitude;
};

/// CSV with a header naming the columns id, image, fx, fy, cx, cy,
/// r00..r22, tx, ty, tz, width, height and optionally utc, lat, lon (any
/// order). Throws ConfigError on a malformed file or duplicate ids.
std::vector<ManifestRecord> read_manifest(const fs::path& path);
void write_manifest(const std::vector<ManifestRecord>& records, const fs::path& path);

enum class SunSource { Ephemeris, Explicit };
enum class SkyMode { Uniform, Measured };
enum class PhiPooling { PerImage, PerFlight };

struct RunConfig {
  fs::path manifest;
  fs::path mesh;
  fs::path output;
  std::optional<SunSource> sun_source;  // unset: explicit iff angles are given
  std::optional<double> sun_azimuth_deg;
  std::optional<double> sun_elevation_deg;
  SkyMode sky_mode = SkyMode::Uniform;
  fs::path dome;
  PairFilterConfig pairs;
  GmmOptions gmm;
  PhiPooling pooling = PhiPooling::PerImage;
  int sky_samples = 256;
  std::uint64_t seed = 1;
  unsigned workers = 1;  // 0 = all hardware threads
  int confidence_radius = 3;
  bool write_pairs = false;

  /// Sets one `key = value` entry; relative paths are kept as given.
  void set(const std::string& key, const std::string& value);
  /// Reads a `key = value` file. Relative paths are resolved against the
  /// file's directory.
  static RunConfig load(const fs::path& path);
  /// Throws ConfigError on inconsistent settings (both or neither sun source,
  /// measured sky without a dome, and so on).
  void validate() const;
  SunSource effective_sun_source() const;
  std::string to_string() const;
};

/// Processes every manifest image; writes per-image outputs under
/// output/<id>/ plus run_report.json and effective_config.txt.
/// Returns 0 when every image succeeded, 1 otherwise.
int run_decompose(const RunConfig& cfg);

struct SkyMergeConfig {
  fs::path stack_manifest;  // CSV: frame, exposure_seconds
  fs::path output;          // dome EXR
  FisheyeCalibration calibration;
  int width = 1024;
  int height = 512;
  double saturation = 0.98;
  double floor = 0.02;
};
void run_skymerge(const SkyMergeConfig& cfg);

struct ChangeDetectConfig {
  fs::path reference;
  fs::path sources;  // directory of EXR frames
  fs::path output;
  ChangeConfig change;
};
/// Returns 0, or 1 when some frames could not be processed.
int run_changedetect(const ChangeDetectConfig& cfg);

struct MetricsConfig {
  fs::path predictions;
  fs::path ground_truth;
  fs::path output;  // CSV
  MetricSpace space = MetricSpace::Display;
};
/// Pairs files by name. Returns 0, or 1 when some pairs failed.
int run_metrics(const MetricsConfig& cfg);

struct SynthConfig {
  std::optional<fs::path> scene;
  fs::path output;
  int sky_samples = 256;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};
void run_synth(const SynthConfig& cfg);

}  // namespace sunsky
