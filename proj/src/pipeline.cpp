#include "sunsky/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sunsky/error.hpp"
#include "sunsky/hdr.hpp"
#include "sunsky/io.hpp"
#include "sunsky/morphology.hpp"
#include "sunsky/parallel.hpp"
#include "sunsky/sun.hpp"

namespace sunsky {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + what + ": '" + text + "'");
  }
}

int to_int(const std::string& text, const std::string& what) {
  const double v = to_double(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("invalid integer for " + what + ": '" + text + "'");
  return static_cast<int>(v);
}

bool to_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("invalid boolean for " + what + ": '" + text + "'");
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string read_text(const fs::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string("cannot open ") + what + " " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

// Header-indexed CSV rows; blank lines are skipped.
struct CsvTable {
  std::map<std::string, std::size_t> columns;
  std::vector<std::vector<std::string>> rows;

  const std::string& get(const std::vector<std::string>& row, const std::string& name) const {
    static const std::string empty;
    auto it = columns.find(name);
    if (it == columns.end() || it->second >= row.size()) return empty;
    return row[it->second];
  }
  bool has(const std::string& name) const { return columns.count(name) != 0; }
};

CsvTable read_csv(const fs::path& path, const char* what) {
  std::istringstream in(read_text(path, what));
  CsvTable table;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_csv(line);
    if (header) {
      for (std::size_t i = 0; i < cells.size(); ++i) table.columns[cells[i]] = i;
      header = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  if (header) throw ConfigError(std::string(what) + " " + path.string() + " is empty");
  return table;
}

LinearImage normal_image(const GeometryBuffers& b) {
  LinearImage out(b.width, b.height, 3);
  for (int y = 0; y < b.height; ++y)
    for (int x = 0; x < b.width; ++x) {
      const Vec3& n = b.normals[b.index(x, y)];
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = static_cast<float>(n[c]);
    }
  return out;
}

LinearImage mask_image(const BinaryMask& m) {
  LinearImage out(m.width(), m.height(), 1);
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) out.at(x, y) = m.get(x, y) ? 1.0f : 0.0f;
  return out;
}

std::vector<fs::path> exr_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".exr") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

const char* to_string(SunSource s) { return s == SunSource::Explicit ? "explicit" : "ephemeris"; }
const char* to_string(SkyMode s) { return s == SkyMode::Measured ? "measured" : "uniform"; }
const char* to_string(PhiPooling p) { return p == PhiPooling::PerFlight ? "per-flight" : "per-image"; }

}  // namespace

// ---------------------------------------------------------------------------
// Manifest

std::vector<ManifestRecord> read_manifest(const fs::path& path) {
  const CsvTable table = read_csv(path, "manifest");
  static const char* required[] = {"id", "image", "fx", "fy", "cx", "cy", "r00", "r01", "r02", "r10", "r11",
                                   "r12", "r20", "r21", "r22", "tx", "ty", "tz", "width", "height"};
  for (const char* c : required)
    if (!table.has(c)) throw ConfigError("manifest " + path.string() + " lacks column '" + c + "'");
  const fs::path base = path.parent_path();
  std::vector<ManifestRecord> out;
  std::set<std::string> ids;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "manifest row " + std::to_string(r + 1);
    ManifestRecord rec;
    rec.id = table.get(row, "id");
    if (rec.id.empty() || rec.id.find_first_of("/\\") != std::string::npos || rec.id == "." || rec.id == "..")
      throw ConfigError(where + ": invalid id '" + rec.id + "'");
    if (!ids.insert(rec.id).second) throw ConfigError(where + ": duplicate id '" + rec.id + "'");
    rec.image = base / table.get(row, "image");
    auto num = [&](const char* col) { return to_double(table.get(row, col), where + " " + col); };
    rec.camera.fx = num("fx");
    rec.camera.fy = num("fy");
    rec.camera.cx = num("cx");
    rec.camera.cy = num("cy");
    static const char* rot[] = {"r00", "r01", "r02", "r10", "r11", "r12", "r20", "r21", "r22"};
    for (int i = 0; i < 9; ++i) rec.camera.rotation.m[i] = num(rot[i]);
    rec.camera.translation = {num("tx"), num("ty"), num("tz")};
    rec.camera.width = to_int(table.get(row, "width"), where + " width");
    rec.camera.height = to_int(table.get(row, "height"), where + " height");
    rec.camera.validate();
    rec.utc = table.get(row, "utc");
    if (!table.get(row, "lat").empty()) rec.latitude = num("lat");
    if (!table.get(row, "lon").empty()) rec.longitude = num("lon");
    out.push_back(std::move(rec));
  }
  return out;
}

void write_manifest(const std::vector<ManifestRecord>& records, const fs::path& path) {
  std::ostringstream os;
  os << "id,image,fx,fy,cx,cy,r00,r01,r02,r10,r11,r12,r20,r21,r22,tx,ty,tz,width,height,utc,lat,lon\n";
  for (const auto& r : records) {
    const auto& c = r.camera;
    os << r.id << "," << r.image.generic_string() << "," << fmt(c.fx) << "," << fmt(c.fy) << "," << fmt(c.cx) << ","
       << fmt(c.cy);
    for (double v : c.rotation.m) os << "," << fmt(v);
    os << "," << fmt(c.translation.x) << "," << fmt(c.translation.y) << "," << fmt(c.translation.z) << ","
       << c.width << "," << c.height << "," << r.utc << "," << (r.latitude ? fmt(*r.latitude) : "") << ","
       << (r.longitude ? fmt(*r.longitude) : "") << "\n";
  }
  write_text(path, os.str());
}

// ---------------------------------------------------------------------------
// RunConfig

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "manifest") manifest = value;
  else if (key == "mesh") mesh = value;
  else if (key == "output") output = value;
  else if (key == "sun") {
    if (value == "ephemeris") sun_source = SunSource::Ephemeris;
    else if (value == "explicit") sun_source = SunSource::Explicit;
    else throw ConfigError("sun must be 'ephemeris' or 'explicit'");
  } else if (key == "sun_azimuth_deg") sun_azimuth_deg = to_double(value, key);
  else if (key == "sun_elevation_deg") sun_elevation_deg = to_double(value, key);
  else if (key == "sky") {
    if (value == "uniform") sky_mode = SkyMode::Uniform;
    else if (value == "measured") sky_mode = SkyMode::Measured;
    else throw ConfigError("sky must be 'uniform' or 'measured'");
  } else if (key == "dome") dome = value;
  else if (key == "boundary_search_radius") pairs.boundary_search_radius = to_int(value, key);
  else if (key == "max_normal_angle_deg") pairs.max_normal_angle_deg = to_double(value, key);
  else if (key == "max_depth_diff") pairs.max_depth_diff = to_double(value, key);
  else if (key == "min_shadow_brightness") pairs.min_shadow_brightness = to_double(value, key);
  else if (key == "max_sky_shading_diff") pairs.max_sky_shading_diff = to_double(value, key);
  else if (key == "min_pairs") pairs.min_pairs = to_int(value, key);
  else if (key == "gmm_max_iter") gmm.max_iter = to_int(value, key);
  else if (key == "gmm_tol") gmm.tol = to_double(value, key);
  else if (key == "gmm_variance_floor") gmm.variance_floor = to_double(value, key);
  else if (key == "pooling") {
    if (value == "per-image") pooling = PhiPooling::PerImage;
    else if (value == "per-flight") pooling = PhiPooling::PerFlight;
    else throw ConfigError("pooling must be 'per-image' or 'per-flight'");
  } else if (key == "sky_samples") sky_samples = to_int(value, key);
  else if (key == "seed") {
    const double v = to_double(value, key);
    if (v < 0 || v != std::floor(v)) throw ConfigError("seed must be a non-negative integer");
    seed = std::stoull(value);
  } else if (key == "workers") {
    const int v = to_int(value, key);
    if (v < 0) throw ConfigError("workers must be >= 0");
    workers = static_cast<unsigned>(v);
  } else if (key == "confidence_radius") confidence_radius = to_int(value, key);
  else if (key == "write_pairs") write_pairs = to_bool(value, key);
  else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig RunConfig::load(const fs::path& path) {
  RunConfig cfg;
  std::istringstream in(read_text(path, "config"));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  const fs::path base = path.parent_path();
  for (fs::path* p : {&cfg.manifest, &cfg.mesh, &cfg.output, &cfg.dome})
    if (!p->empty() && p->is_relative()) *p = base / *p;
  return cfg;
}

SunSource RunConfig::effective_sun_source() const {
  if (sun_source) return *sun_source;
  return (sun_azimuth_deg || sun_elevation_deg) ? SunSource::Explicit : SunSource::Ephemeris;
}

void RunConfig::validate() const {
  if (manifest.empty()) throw ConfigError("no manifest given");
  if (mesh.empty()) throw ConfigError("no mesh given");
  if (output.empty()) throw ConfigError("no output directory given");
  const bool angles = sun_azimuth_deg || sun_elevation_deg;
  if (effective_sun_source() == SunSource::Explicit) {
    if (!sun_azimuth_deg || !sun_elevation_deg)
      throw ConfigError("explicit sun needs both sun_azimuth_deg and sun_elevation_deg");
  } else if (angles) {
    throw ConfigError("ephemeris sun source excludes explicit sun angles");
  }
  if (sky_mode == SkyMode::Measured && dome.empty()) throw ConfigError("measured sky requires a dome path");
  if (sky_mode == SkyMode::Uniform && !dome.empty()) throw ConfigError("a dome path needs sky = measured");
  pairs.validate();
  if (gmm.max_iter < 1 || !(gmm.tol > 0) || !(gmm.variance_floor > 0))
    throw ConfigError("GMM parameters must be positive");
  if (sky_samples < kMinSkySamples) throw ConfigError("sky_samples must be >= " + std::to_string(kMinSkySamples));
  if (confidence_radius < 0) throw ConfigError("confidence_radius must be >= 0");
}

std::string RunConfig::to_string() const {
  std::ostringstream os;
  os << "manifest = " << manifest.string() << "\n"
     << "mesh = " << mesh.string() << "\n"
     << "output = " << output.string() << "\n"
     << "sun = " << sunsky::to_string(effective_sun_source()) << "\n";
  if (sun_azimuth_deg) os << "sun_azimuth_deg = " << fmt(*sun_azimuth_deg) << "\n";
  if (sun_elevation_deg) os << "sun_elevation_deg = " << fmt(*sun_elevation_deg) << "\n";
  os << "sky = " << sunsky::to_string(sky_mode) << "\n";
  if (!dome.empty()) os << "dome = " << dome.string() << "\n";
  os << "boundary_search_radius = " << pairs.boundary_search_radius << "\n"
     << "max_normal_angle_deg = " << fmt(pairs.max_normal_angle_deg) << "\n"
     << "max_depth_diff = " << fmt(pairs.max_depth_diff) << "\n";
  if (pairs.min_shadow_brightness) os << "min_shadow_brightness = " << fmt(*pairs.min_shadow_brightness) << "\n";
  os << "max_sky_shading_diff = " << fmt(pairs.max_sky_shading_diff) << "\n"
     << "min_pairs = " << pairs.min_pairs << "\n"
     << "gmm_max_iter = " << gmm.max_iter << "\n"
     << "gmm_tol = " << fmt(gmm.tol) << "\n"
     << "gmm_variance_floor = " << fmt(gmm.variance_floor) << "\n"
     << "pooling = " << sunsky::to_string(pooling) << "\n"
     << "sky_samples = " << sky_samples << "\n"
     << "seed = " << seed << "\n"
     << "workers = " << workers << "\n"
     << "confidence_radius = " << confidence_radius << "\n"
     << "write_pairs = " << (write_pairs ? "true" : "false") << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// decompose

namespace {

struct ImageState {
  const ManifestRecord* record = nullptr;
  std::string error;
  LinearImage image;
  GeometryBuffers buffers;
  ShadingMaps shading;
  SunPosition sun;
  std::optional<double> dome_gain;
  std::vector<LitShadowPair> pairs;
  std::vector<Rgb> phi_samples;
  std::optional<SunSkyRatio> ratio;
};

json rgb_json(const Rgb& c) { return json::array({c[0], c[1], c[2]}); }

void prepare_image(ImageState& st, const RunConfig& cfg, const TriangleMesh& mesh, const SkyDome* dome,
                   std::uint64_t image_seed) {
  const ManifestRecord& rec = *st.record;
  const CameraModel& cam = rec.camera;
  st.image = read_linear_exr(rec.image);
  if (st.image.channels() != 3) throw IngestError(rec.image.string() + ": expected an RGB image");
  if (!st.image.same_size(cam.width, cam.height))
    throw ShapeError(rec.image.string() + ": image size does not match the camera resolution");

  if (cfg.effective_sun_source() == SunSource::Explicit) {
    st.sun = SunPosition::from_angles(*cfg.sun_azimuth_deg, *cfg.sun_elevation_deg);
  } else {
    if (rec.utc.empty() || !rec.latitude || !rec.longitude)
      throw ConfigError("image " + rec.id + " lacks utc/lat/lon for the ephemeris");
    st.sun = sun_direction(*rec.latitude, *rec.longitude, UtcTime::parse(rec.utc));
  }
  if (st.sun.elevation_deg <= 0.0) throw EstimationError("sun below the horizon for image " + rec.id);

  st.buffers = render_geometry(mesh, cam);
  st.buffers.sun_visibility = compute_sun_visibility(mesh, st.buffers, cam, st.sun.direction);
  LinearImage s_sun = compute_sun_shading(st.buffers, st.buffers.sun_visibility, st.sun);
  LinearImage s_sky = compute_sky_shading_uniform(st.buffers, mesh, cam, cfg.sky_samples, image_seed);
  if (dome) {
    SkyDome raw = *dome;
    raw.gain = 1.0;
    const LinearImage measured = compute_sky_shading_measured(st.buffers, mesh, cam, raw, cfg.sky_samples, image_seed);
    SkyDome aligned = *dome;
    aligned.gain = align_sky_dome(s_sky, measured, st.buffers.hit);
    st.dome_gain = aligned.gain;
    s_sky = compute_sky_shading_measured(st.buffers, mesh, cam, aligned, cfg.sky_samples, image_seed);
  }
  st.shading = make_shading(st.buffers, std::move(s_sun), std::move(s_sky));
  st.pairs = detect_lit_shadow_pairs(st.image, st.buffers, st.shading, cfg.pairs);
  for (const auto& p : st.pairs)
    if (auto phi = phi_per_pair(p)) st.phi_samples.push_back(*phi);
}

void write_image_outputs(const ImageState& st, const RunConfig& cfg, const SunSkyRatio& ratio, bool pooled,
                         const fs::path& dir) {
  fs::create_directories(dir);
  const AlbedoResult albedo = recover_albedo(st.image, ratio.phi, st.shading);
  const BinaryMask geo = detect_geometric_error_regions(st.buffers);
  const BinaryMask conf = build_confidence_mask(st.buffers, st.buffers.sun_visibility, geo, cfg.confidence_radius);
  write_linear_exr(albedo.albedo, dir / "albedo.exr");
  write_linear_exr(st.shading.s_sun, dir / "s_sun.exr");
  write_linear_exr(st.shading.s_sky, dir / "s_sky.exr");
  write_linear_exr(st.buffers.depth, dir / "depth.exr");
  write_linear_exr(normal_image(st.buffers), dir / "normal.exr");
  write_mask_png(conf, dir / "confidence.png");
  write_mask_png(albedo.flagged, dir / "flagged.png");

  json rec;
  rec["id"] = st.record->id;
  rec["phi"] = rgb_json(ratio.phi);
  rec["pooled"] = pooled;
  rec["pair_count"] = st.pairs.size();
  rec["sample_count"] = st.phi_samples.size();
  rec["sun_azimuth_deg"] = st.sun.azimuth_deg;
  rec["sun_elevation_deg"] = st.sun.elevation_deg;
  if (st.dome_gain) rec["dome_gain"] = *st.dome_gain;
  json fits = json::array();
  for (const auto& f : ratio.fits)
    fits.push_back({{"signal_mean", f.signal_mean()},
                    {"signal_variance", f.variance[f.signal]},
                    {"signal_weight", f.weight[f.signal]},
                    {"iterations", f.iterations},
                    {"converged", f.converged},
                    {"degenerate", f.degenerate}});
  rec["gmm"] = fits;
  rec["confident_pixels"] = conf.count();
  write_text(dir / "phi.json", rec.dump(2) + "\n");

  if (cfg.write_pairs) {
    std::ostringstream os;
    os << "lit_x,lit_y,shadow_x,shadow_y,s_sun_lit,s_sky_lit,s_sky_shadow,phi_r,phi_g,phi_b\n";
    for (const auto& p : st.pairs) {
      const auto phi = phi_per_pair(p);
      os << p.lit.x << "," << p.lit.y << "," << p.shadow.x << "," << p.shadow.y << "," << fmt(p.s_sun_lit) << ","
         << fmt(p.s_sky_lit) << "," << fmt(p.s_sky_shadow);
      for (int c = 0; c < 3; ++c) os << "," << (phi ? fmt((*phi)[c]) : "");
      os << "\n";
    }
    write_text(dir / "pairs.csv", os.str());
  }
}

}  // namespace

int run_decompose(const RunConfig& cfg) {
  cfg.validate();
  set_worker_count(cfg.workers);
  const auto records = read_manifest(cfg.manifest);
  if (!fs::exists(cfg.mesh)) throw ConfigError("mesh not found: " + cfg.mesh.string());
  const TriangleMesh mesh = load_obj(cfg.mesh);
  if (mesh.empty()) throw ConfigError("mesh has no triangles: " + cfg.mesh.string());
  std::optional<SkyDome> dome;
  if (cfg.sky_mode == SkyMode::Measured) {
    if (!fs::exists(cfg.dome)) throw ConfigError("dome not found: " + cfg.dome.string());
    dome = SkyDome{read_linear_exr(cfg.dome), std::nullopt};
  }
  fs::create_directories(cfg.output);
  write_text(cfg.output / "effective_config.txt", cfg.to_string());

  // Images run one after another; each stage is parallel over pixel rows.
  std::vector<ImageState> states(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    states[i].record = &records[i];
    try {
      prepare_image(states[i], cfg, mesh, dome ? &*dome : nullptr, cfg.seed + i);
    } catch (const ConfigError& e) {
      states[i].error = e.what();
    } catch (const Error& e) {
      states[i].error = e.what();
    }
  }

  std::optional<SunSkyRatio> pooled;
  std::string pooled_error;
  if (cfg.pooling == PhiPooling::PerFlight) {
    std::vector<Rgb> all;
    for (const auto& st : states)
      if (st.error.empty()) all.insert(all.end(), st.phi_samples.begin(), st.phi_samples.end());
    try {
      pooled = fit_phi_gmm(all, cfg.gmm, cfg.pairs.min_pairs);
    } catch (const Error& e) {
      pooled_error = e.what();
    }
  }

  json report;
  report["images"] = json::array();
  std::size_t failures = 0;
  for (auto& st : states) {
    json entry;
    entry["id"] = st.record->id;
    if (st.error.empty()) {
      try {
        SunSkyRatio ratio;
        if (cfg.pooling == PhiPooling::PerFlight) {
          if (!pooled) throw EstimationError("pooled phi unavailable: " + pooled_error);
          ratio = *pooled;
        } else {
          ratio = fit_phi_gmm(st.phi_samples, cfg.gmm, cfg.pairs.min_pairs);
        }
        write_image_outputs(st, cfg, ratio, cfg.pooling == PhiPooling::PerFlight, cfg.output / st.record->id);
        entry["phi"] = rgb_json(ratio.phi);
        entry["pair_count"] = st.pairs.size();
      } catch (const Error& e) {
        st.error = e.what();
      }
    }
    if (st.error.empty()) {
      entry["status"] = "ok";
    } else {
      entry["status"] = "failed";
      entry["error"] = st.error;
      ++failures;
    }
    report["images"].push_back(entry);
    st = ImageState{};  // release rasters early
  }
  report["succeeded"] = records.size() - failures;
  report["failed"] = failures;
  report["exit_code"] = failures == 0 ? 0 : 1;
  write_text(cfg.output / "run_report.json", report.dump(2) + "\n");
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// skymerge

void run_skymerge(const SkyMergeConfig& cfg) {
  const CsvTable table = read_csv(cfg.stack_manifest, "stack manifest");
  if (!table.has("frame") || !table.has("exposure_seconds"))
    throw ConfigError("stack manifest needs columns frame, exposure_seconds");
  const fs::path base = cfg.stack_manifest.parent_path();
  std::vector<std::pair<double, fs::path>> entries;
  for (const auto& row : table.rows)
    entries.emplace_back(to_double(table.get(row, "exposure_seconds"), "exposure_seconds"),
                         base / table.get(row, "frame"));
  std::sort(entries.begin(), entries.end());
  ExposureStack stack;
  for (const auto& [t, path] : entries) {
    LinearImage frame = read_linear_exr(path);
    if (frame.channels() != 1) frame = luma(frame);
    stack.frames.push_back(std::move(frame));
    stack.exposure_times.push_back(t);
  }
  stack.validate();
  const LinearImage radiance = merge_hdr(stack, cfg.saturation, cfg.floor);
  const SkyDome dome = fisheye_to_equirect(radiance, cfg.calibration, cfg.width, cfg.height);
  if (!cfg.output.parent_path().empty()) fs::create_directories(cfg.output.parent_path());
  write_linear_exr(dome.equirect, cfg.output);
}

// ---------------------------------------------------------------------------
// changedetect

int run_changedetect(const ChangeDetectConfig& cfg) {
  cfg.change.validate();
  const LinearImage reference = read_linear_exr(cfg.reference);
  const auto files = exr_files(cfg.sources);
  fs::create_directories(cfg.output);
  std::ostringstream summary;
  summary << "frame,changed_pixels,blobs,status\n";
  int failures = 0;
  for (const auto& f : files) {
    const std::string id = f.stem().string();
    try {
      const BinaryMask mask = change_mask(reference, read_linear_exr(f), cfg.change);
      write_mask_png(mask, cfg.output / (id + "_mask.png"));
      summary << id << "," << mask.count() << "," << label_components(mask).count << ",ok\n";
    } catch (const Error& e) {
      log_warning("change detection failed for " + f.string() + ": " + e.what());
      summary << id << ",,,failed\n";
      ++failures;
    }
  }
  write_text(cfg.output / "summary.csv", summary.str());
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// metrics

int run_metrics(const MetricsConfig& cfg) {
  const auto gt_files = exr_files(cfg.ground_truth);
  std::ostringstream os;
  os << std::setprecision(17);
  os << "image,psnr,ssim,pixel_count,status\n";
  double psnr_sum = 0.0, ssim_sum = 0.0;
  std::size_t ok = 0;
  int failures = 0;
  for (const auto& g : gt_files) {
    const fs::path p = cfg.predictions / g.filename();
    const std::string name = g.filename().string();
    try {
      if (!fs::exists(p)) throw IngestError("missing prediction " + p.string());
      const MetricReport r = evaluate_pair(read_linear_exr(p), read_linear_exr(g), cfg.space);
      os << name << "," << r.psnr << "," << r.ssim << "," << r.pixel_count << ",ok\n";
      psnr_sum += r.psnr;
      ssim_sum += r.ssim;
      ++ok;
    } catch (const Error& e) {
      log_warning("metrics failed for " + name + ": " + e.what());
      os << name << ",,,,failed\n";
      ++failures;
    }
  }
  if (ok > 0) os << "mean," << psnr_sum / ok << "," << ssim_sum / ok << ",,\n";
  if (!cfg.output.parent_path().empty()) fs::create_directories(cfg.output.parent_path());
  write_text(cfg.output, os.str());
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// synth

void run_synth(const SynthConfig& cfg) {
  if (cfg.sky_samples < kMinSkySamples) throw ConfigError("sky_samples must be >= " + std::to_string(kMinSkySamples));
  set_worker_count(cfg.workers);
  const SceneSpec spec = cfg.scene ? SceneSpec::load(*cfg.scene) : SceneSpec{};
  const SyntheticScene scene = build_scene(spec);
  fs::create_directories(cfg.output);
  write_text(cfg.output / "scene.cfg", spec.to_string());
  save_obj(scene.mesh, cfg.output / "mesh.obj");

  std::vector<ManifestRecord> records;
  for (std::size_t k = 0; k < scene.cameras.size(); ++k) {
    const std::string id = "cam" + std::to_string(k);
    const fs::path dir = cfg.output / id;
    fs::create_directories(dir);
    // Same per-image seed as a decompose run with the emitted config.
    const GroundTruth gt = render_ground_truth(scene, k, cfg.sky_samples, cfg.seed + k);
    write_linear_exr(gt.image, dir / "image.exr");
    write_linear_exr(gt.albedo, dir / "albedo.exr");
    write_linear_exr(gt.shading.s_sun, dir / "s_sun.exr");
    write_linear_exr(gt.shading.s_sky, dir / "s_sky.exr");
    write_linear_exr(gt.buffers.depth, dir / "depth.exr");
    write_linear_exr(normal_image(gt.buffers), dir / "normal.exr");
    write_linear_exr(gt.buffers.sky_visibility, dir / "sky_visibility.exr");
    write_linear_exr(mask_image(gt.buffers.sun_visibility), dir / "sun_visibility.exr");
    write_mask_png(gt.buffers.hit, dir / "hit.png");
    write_gray8_png(to_display_gray8(gt.image), dir / "preview.png");
    records.push_back({id, fs::path(id) / "image.exr", scene.cameras[k], "", std::nullopt, std::nullopt});
  }
  write_manifest(records, cfg.output / "manifest.csv");

  json truth;
  truth["phi"] = rgb_json(scene.phi_true);
  truth["sun_azimuth_deg"] = scene.sun.azimuth_deg;
  truth["sun_elevation_deg"] = scene.sun.elevation_deg;
  write_text(cfg.output / "truth.json", truth.dump(2) + "\n");

  std::ostringstream dc;
  dc << "manifest = manifest.csv\n"
     << "mesh = mesh.obj\n"
     << "output = decomposed\n"
     << "sun = explicit\n"
     << "sun_azimuth_deg = " << fmt(spec.sun_azimuth_deg) << "\n"
     << "sun_elevation_deg = " << fmt(spec.sun_elevation_deg) << "\n"
     << "sky = uniform\n"
     << "sky_samples = " << cfg.sky_samples << "\n"
     << "seed = " << cfg.seed << "\n";
  write_text(cfg.output / "decompose.cfg", dc.str());
}

}  // namespace sunsky
