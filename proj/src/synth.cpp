#include "sunsky/synth.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "sunsky/error.hpp"
#include "sunsky/rng.hpp"

namespace sunsky {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> numbers(const std::string& key, const std::string& value, std::size_t expected) {
  std::istringstream in(value);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof() || out.size() != expected)
    throw ConfigError("scene key '" + key + "' expects " + std::to_string(expected) + " numbers");
  return out;
}

Rgb rgb(const std::vector<double>& v, std::size_t offset = 0) { return {v[offset], v[offset + 1], v[offset + 2]}; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void add_quad(std::vector<Vec3>& verts, std::vector<TriangleMesh::Triangle>& tris, const Vec3& a, const Vec3& b,
              const Vec3& c, const Vec3& d) {
  const auto base = static_cast<std::uint32_t>(verts.size());
  verts.insert(verts.end(), {a, b, c, d});
  tris.push_back({base, base + 1, base + 2});
  tris.push_back({base, base + 2, base + 3});
}

}  // namespace

void SceneSpec::validate() const {
  auto albedo_ok = [](const Rgb& c) {
    for (double v : c)
      if (!(v > 0.0 && v <= 1.0)) return false;
    return true;
  };
  if (!(plane_size > 0.0) || checker_cells < 1) throw ConfigError("plane size and checker cells must be positive");
  if (!albedo_ok(checker_a) || !albedo_ok(checker_b)) throw ConfigError("checker albedo must lie in (0, 1]");
  if (albedo_jitter < 0.0 || albedo_jitter >= 1.0) throw ConfigError("albedo jitter must lie in [0, 1)");
  for (double c : checker_a)
    if (c * (1.0 + albedo_jitter) > 1.0) throw ConfigError("jittered checker albedo exceeds 1");
  for (double c : checker_b)
    if (c * (1.0 + albedo_jitter) > 1.0) throw ConfigError("jittered checker albedo exceeds 1");
  for (const auto& b : boxes) {
    if (!(b.size_x > 0 && b.size_y > 0 && b.height > 0)) throw ConfigError("box dimensions must be positive");
    if (!albedo_ok(b.albedo)) throw ConfigError("box albedo must lie in (0, 1]");
  }
  if (!(sun_elevation_deg > 0.0 && sun_elevation_deg <= 90.0)) throw ConfigError("sun elevation must lie in (0, 90]");
  for (double p : phi)
    if (!(p > 0.0)) throw ConfigError("phi must be positive");
  if (camera_count < 1 || width < 1 || height < 1 || !(focal > 0.0) || !(altitude > 0.0))
    throw ConfigError("camera parameters must be positive");
  if (tilt_deg < 0.0 || tilt_deg >= 80.0) throw ConfigError("camera tilt must lie in [0, 80) degrees");
}

SceneSpec SceneSpec::parse(const std::string& text) {
  SceneSpec spec;
  bool boxes_replaced = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("scene line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto one = [&] { return numbers(key, value, 1)[0]; };
    if (key == "plane_size") spec.plane_size = one();
    else if (key == "checker_cells") spec.checker_cells = static_cast<int>(one());
    else if (key == "checker_a") spec.checker_a = rgb(numbers(key, value, 3));
    else if (key == "checker_b") spec.checker_b = rgb(numbers(key, value, 3));
    else if (key == "albedo_jitter") spec.albedo_jitter = one();
    else if (key == "box") {
      if (!boxes_replaced) spec.boxes.clear();
      boxes_replaced = true;
      const auto v = numbers(key, value, 8);
      spec.boxes.push_back({v[0], v[1], v[2], v[3], v[4], rgb(v, 5)});
    } else if (key == "sun_azimuth_deg") spec.sun_azimuth_deg = one();
    else if (key == "sun_elevation_deg") spec.sun_elevation_deg = one();
    else if (key == "phi") spec.phi = rgb(numbers(key, value, 3));
    else if (key == "camera_count") spec.camera_count = static_cast<int>(one());
    else if (key == "width") spec.width = static_cast<int>(one());
    else if (key == "height") spec.height = static_cast<int>(one());
    else if (key == "focal") spec.focal = one();
    else if (key == "altitude") spec.altitude = one();
    else if (key == "tilt_deg") spec.tilt_deg = one();
    else if (key == "seed") spec.seed = static_cast<std::uint64_t>(one());
    else throw ConfigError("unknown scene key '" + key + "'");
  }
  spec.validate();
  return spec;
}

SceneSpec SceneSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scene file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string SceneSpec::to_string() const {
  std::ostringstream os;
  auto triple = [](const Rgb& c) { return fmt(c[0]) + " " + fmt(c[1]) + " " + fmt(c[2]); };
  os << "plane_size = " << fmt(plane_size) << "\n"
     << "checker_cells = " << checker_cells << "\n"
     << "checker_a = " << triple(checker_a) << "\n"
     << "checker_b = " << triple(checker_b) << "\n"
     << "albedo_jitter = " << fmt(albedo_jitter) << "\n";
  for (const auto& b : boxes)
    os << "box = " << fmt(b.center_x) << " " << fmt(b.center_y) << " " << fmt(b.size_x) << " " << fmt(b.size_y)
       << " " << fmt(b.height) << " " << triple(b.albedo) << "\n";
  os << "sun_azimuth_deg = " << fmt(sun_azimuth_deg) << "\n"
     << "sun_elevation_deg = " << fmt(sun_elevation_deg) << "\n"
     << "phi = " << triple(phi) << "\n"
     << "camera_count = " << camera_count << "\n"
     << "width = " << width << "\n"
     << "height = " << height << "\n"
     << "focal = " << fmt(focal) << "\n"
     << "altitude = " << fmt(altitude) << "\n"
     << "tilt_deg = " << fmt(tilt_deg) << "\n"
     << "seed = " << seed << "\n";
  return os.str();
}

SyntheticScene build_scene(const SceneSpec& spec) {
  spec.validate();
  SyntheticScene scene;
  std::vector<Vec3> verts;
  std::vector<TriangleMesh::Triangle> tris;

  std::mt19937_64 rng = pixel_rng(spec.seed, 0);
  const double half = spec.plane_size / 2.0;
  const double cell = spec.plane_size / spec.checker_cells;
  for (int j = 0; j < spec.checker_cells; ++j)
    for (int i = 0; i < spec.checker_cells; ++i) {
      const double x0 = -half + i * cell;
      const double y0 = -half + j * cell;
      add_quad(verts, tris, {x0, y0, 0}, {x0 + cell, y0, 0}, {x0 + cell, y0 + cell, 0}, {x0, y0 + cell, 0});
      const Rgb& base = ((i + j) % 2 == 0) ? spec.checker_a : spec.checker_b;
      const double scale = 1.0 + spec.albedo_jitter * (2.0 * uniform01(rng) - 1.0);
      const Rgb c{base[0] * scale, base[1] * scale, base[2] * scale};
      for (int k = 0; k < 2; ++k) {
        scene.triangle_albedo.push_back(c);
        scene.triangle_object.push_back(0);
      }
    }

  int object = 0;
  for (const auto& b : spec.boxes) {
    ++object;
    const double x0 = b.center_x - b.size_x / 2, x1 = b.center_x + b.size_x / 2;
    const double y0 = b.center_y - b.size_y / 2, y1 = b.center_y + b.size_y / 2;
    const double h = b.height;
    add_quad(verts, tris, {x0, y0, h}, {x1, y0, h}, {x1, y1, h}, {x0, y1, h});
    add_quad(verts, tris, {x0, y0, 0}, {x1, y0, 0}, {x1, y0, h}, {x0, y0, h});
    add_quad(verts, tris, {x1, y0, 0}, {x1, y1, 0}, {x1, y1, h}, {x1, y0, h});
    add_quad(verts, tris, {x1, y1, 0}, {x0, y1, 0}, {x0, y1, h}, {x1, y1, h});
    add_quad(verts, tris, {x0, y1, 0}, {x0, y0, 0}, {x0, y0, h}, {x0, y1, h});
    for (int k = 0; k < 10; ++k) {
      scene.triangle_albedo.push_back(b.albedo);
      scene.triangle_object.push_back(object);
    }
  }
  scene.mesh = TriangleMesh(std::move(verts), tris);
  scene.phi_true = spec.phi;
  scene.sun = SunPosition::from_angles(spec.sun_azimuth_deg, spec.sun_elevation_deg);

  // Cameras sit on a ring around the origin, each tilted toward it.
  const double offset = spec.altitude * std::tan(deg2rad(spec.tilt_deg));
  for (int k = 0; k < spec.camera_count; ++k) {
    const double a = 2.0 * kPi * k / spec.camera_count;
    const Vec3 eye{offset * std::sin(a), -offset * std::cos(a), spec.altitude};
    const Vec3 up = spec.tilt_deg < 1.0 ? Vec3{std::sin(a), -std::cos(a), 0.0} * -1.0 : Vec3{0, 0, 1};
    scene.cameras.push_back(CameraModel::look_at(eye, {0, 0, 0}, up, spec.focal, spec.width, spec.height));
  }

  bool any_shadow = false;
  for (const auto& cam : scene.cameras) {
    const GeometryBuffers buf = render_geometry(scene.mesh, cam);
    const BinaryMask vis = compute_sun_visibility(scene.mesh, buf, cam, scene.sun.direction);
    for (int y = 0; y < cam.height && !any_shadow; ++y)
      for (int x = 0; x < cam.width; ++x)
        if (buf.hit.get(x, y) && !vis.get(x, y) && dot(buf.normals[buf.index(x, y)], scene.sun.direction) > 0) {
          any_shadow = true;
          break;
        }
  }
  if (!any_shadow) log_warning("synthetic scene has no visible cast shadow; no lit-shadow pairs will exist");
  return scene;
}

LinearImage albedo_from_triangles(const GeometryBuffers& buffers, const TriangleMesh& mesh,
                                  const std::vector<Rgb>& triangle_albedo) {
  LinearImage out(buffers.width, buffers.height, 3);
  for (int y = 0; y < buffers.height; ++y)
    for (int x = 0; x < buffers.width; ++x) {
      const std::int32_t t = buffers.triangle[buffers.index(x, y)];
      if (t < 0) continue;
      const Rgb& c = triangle_albedo.at(mesh.source_index(static_cast<std::uint32_t>(t)));
      for (int ch = 0; ch < 3; ++ch) out.at(x, y, ch) = static_cast<float>(c[ch]);
    }
  return out;
}

GroundTruth render_ground_truth(const SyntheticScene& scene, std::size_t cam_index, int sky_samples,
                                std::uint64_t seed) {
  const CameraModel& cam = scene.cameras.at(cam_index);
  GroundTruth gt;
  gt.buffers = render_geometry(scene.mesh, cam);
  gt.buffers.sun_visibility = compute_sun_visibility(scene.mesh, gt.buffers, cam, scene.sun.direction);
  gt.buffers.sky_visibility = compute_sky_visibility(scene.mesh, gt.buffers, cam, sky_samples, seed);
  LinearImage s_sun = compute_sun_shading(gt.buffers, gt.buffers.sun_visibility, scene.sun);
  LinearImage s_sky = compute_sky_shading_uniform(gt.buffers, scene.mesh, cam, sky_samples, seed);
  gt.shading = make_shading(gt.buffers, std::move(s_sun), std::move(s_sky));
  gt.albedo = albedo_from_triangles(gt.buffers, scene.mesh, scene.triangle_albedo);
  gt.image = compose_image(gt.albedo, scene.phi_true, gt.shading);
  return gt;
}

}  // namespace sunsky
