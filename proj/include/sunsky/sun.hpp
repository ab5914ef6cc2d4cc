#pragma once

#include <string>

#include "sunsky/vec3.hpp"

namespace sunsky {

/// Calendar timestamp in UTC.
struct UtcTime {
  int year = 2000;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  double second = 0.0;

  /// Parses "YYYY-MM-DD[T ]HH:MM[:SS[.fff]][Z]".
  static UtcTime parse(const std::string& text);
  std::string to_string() const;
  double julian_day() const;
};

/// World frame is east-north-up: +x east, +y north, +z up.
struct SunPosition {
  double azimuth_deg = 0.0;    // clockwise from north
  double elevation_deg = 0.0;  // above the horizon
  Vec3 direction;              // unit, toward the sun

  static SunPosition from_angles(double azimuth_deg, double elevation_deg);
};

/// Solar position from the NOAA solar-calculator equations (no atmospheric
/// refraction). Throws ConfigError for |latitude| > 90 or a timestamp outside
/// 1900-2100.
SunPosition sun_direction(double latitude_deg, double longitude_deg, const UtcTime& utc);

}  // namespace sunsky
