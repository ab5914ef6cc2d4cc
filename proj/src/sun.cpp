#include "sunsky/sun.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <regex>

#include "sunsky/error.hpp"

namespace sunsky {

UtcTime UtcTime::parse(const std::string& text) {
  static const std::regex re(R"(^\s*(\d{4})-(\d{2})-(\d{2})[T ](\d{2}):(\d{2})(?::(\d{2}(?:\.\d*)?))?Z?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw ConfigError("cannot parse UTC timestamp '" + text + "'");
  UtcTime t;
  t.year = std::stoi(m[1]);
  t.month = std::stoi(m[2]);
  t.day = std::stoi(m[3]);
  t.hour = std::stoi(m[4]);
  t.minute = std::stoi(m[5]);
  t.second = m[6].matched ? std::stod(m[6]) : 0.0;
  namespace ch = std::chrono;
  const ch::year_month_day ymd{ch::year{t.year}, ch::month{static_cast<unsigned>(t.month)},
                               ch::day{static_cast<unsigned>(t.day)}};
  if (!ymd.ok() || t.hour > 23 || t.minute > 59 || t.second >= 61.0)
    throw ConfigError("invalid UTC timestamp '" + text + "'");
  return t;
}

std::string UtcTime::to_string() const {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%06.3fZ", year, month, day, hour, minute, second);
  return buf;
}

double UtcTime::julian_day() const {
  namespace ch = std::chrono;
  const ch::sys_days d{ch::year_month_day{ch::year{year}, ch::month{static_cast<unsigned>(month)},
                                          ch::day{static_cast<unsigned>(day)}}};
  const double days_since_unix = static_cast<double>(d.time_since_epoch().count());
  return 2440587.5 + days_since_unix + (hour + (minute + second / 60.0) / 60.0) / 24.0;
}

SunPosition SunPosition::from_angles(double azimuth_deg, double elevation_deg) {
  if (elevation_deg < -90.0 || elevation_deg > 90.0) throw ConfigError("sun elevation must lie in [-90, 90]");
  SunPosition s;
  s.azimuth_deg = std::fmod(std::fmod(azimuth_deg, 360.0) + 360.0, 360.0);
  s.elevation_deg = elevation_deg;
  const double az = deg2rad(s.azimuth_deg);
  const double el = deg2rad(elevation_deg);
  s.direction = {std::cos(el) * std::sin(az), std::cos(el) * std::cos(az), std::sin(el)};
  return s;
}

SunPosition sun_direction(double latitude_deg, double longitude_deg, const UtcTime& utc) {
  if (std::abs(latitude_deg) > 90.0) throw ConfigError("latitude must lie in [-90, 90]");
  if (utc.year < 1900 || utc.year > 2100) throw ConfigError("ephemeris is valid for 1900-2100 only");

  const double jc = (utc.julian_day() - 2451545.0) / 36525.0;
  const double mean_long = std::fmod(280.46646 + jc * (36000.76983 + jc * 0.0003032), 360.0);
  const double mean_anom = 357.52911 + jc * (35999.05029 - 0.0001537 * jc);
  const double ecc = 0.016708634 - jc * (0.000042037 + 0.0000001267 * jc);
  const double m = deg2rad(mean_anom);
  const double center = std::sin(m) * (1.914602 - jc * (0.004817 + 0.000014 * jc)) +
                        std::sin(2 * m) * (0.019993 - 0.000101 * jc) + std::sin(3 * m) * 0.000289;
  const double true_long = mean_long + center;
  const double omega = deg2rad(125.04 - 1934.136 * jc);
  const double app_long = true_long - 0.00569 - 0.00478 * std::sin(omega);
  const double obliq_mean =
      23.0 + (26.0 + (21.448 - jc * (46.815 + jc * (0.00059 - jc * 0.001813))) / 60.0) / 60.0;
  const double obliq = deg2rad(obliq_mean + 0.00256 * std::cos(omega));
  const double decl = std::asin(std::sin(obliq) * std::sin(deg2rad(app_long)));

  const double vy = std::tan(obliq / 2) * std::tan(obliq / 2);
  const double l0 = deg2rad(mean_long);
  const double eq_time = 4.0 * rad2deg(vy * std::sin(2 * l0) - 2 * ecc * std::sin(m) +
                                       4 * ecc * vy * std::sin(m) * std::cos(2 * l0) -
                                       0.5 * vy * vy * std::sin(4 * l0) - 1.25 * ecc * ecc * std::sin(2 * m));

  const double minutes = utc.hour * 60.0 + utc.minute + utc.second / 60.0;
  const double true_solar = std::fmod(minutes + eq_time + 4.0 * longitude_deg, 1440.0);
  double hour_angle = true_solar / 4.0 - 180.0;
  if (hour_angle < -180.0) hour_angle += 360.0;
  if (hour_angle > 180.0) hour_angle -= 360.0;

  const double lat = deg2rad(latitude_deg);
  const double h = deg2rad(hour_angle);
  const double sin_el = std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(h);
  const double elevation = rad2deg(std::asin(std::clamp(sin_el, -1.0, 1.0)));
  const double azimuth = rad2deg(std::atan2(-std::cos(decl) * std::sin(h),
                                            std::sin(decl) * std::cos(lat) -
                                                std::cos(decl) * std::cos(h) * std::sin(lat)));
  return SunPosition::from_angles(azimuth, elevation);
}

}  // namespace sunsky
