#include "sunsky/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "sunsky/error.hpp"

namespace sunsky {

namespace {

constexpr std::uint32_t kLeafSize = 4;

bool ray_box(const Ray& ray, const Vec3& inv, const Vec3& lo, const Vec3& hi, double t_min, double t_max) {
  for (int a = 0; a < 3; ++a) {
    double t0 = (lo[a] - ray.origin[a]) * inv[a];
    double t1 = (hi[a] - ray.origin[a]) * inv[a];
    if (t0 > t1) std::swap(t0, t1);
    // NaN (0 * inf) when the origin lies on a slab plane of a flat box; treat as inside.
    if (!(t0 != t0)) t_min = std::max(t_min, t0);
    if (!(t1 != t1)) t_max = std::min(t_max, t1);
    if (t_min > t_max) return false;
  }
  return true;
}

}  // namespace

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, const std::vector<Triangle>& triangles)
    : vertices_(std::move(vertices)) {
  for (std::size_t i = 0; i < triangles.size(); ++i) {
    const auto& t = triangles[i];
    if (t[0] >= vertices_.size() || t[1] >= vertices_.size() || t[2] >= vertices_.size()) continue;
    const Vec3 n = cross(vertices_[t[1]] - vertices_[t[0]], vertices_[t[2]] - vertices_[t[0]]);
    const double len = norm(n);
    if (!(len > 0.0) || !std::isfinite(len)) continue;
    triangles_.push_back(t);
    normals_.push_back(n / len);
    source_index_.push_back(i);
  }
  build();
}

void TriangleMesh::build() {
  nodes_.clear();
  order_.resize(triangles_.size());
  if (triangles_.empty()) return;
  std::vector<Vec3> centroids(triangles_.size());
  for (std::uint32_t i = 0; i < triangles_.size(); ++i) {
    order_[i] = i;
    const auto& t = triangles_[i];
    centroids[i] = (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
  }
  nodes_.reserve(2 * triangles_.size());
  build_node(0, static_cast<std::uint32_t>(triangles_.size()), centroids);
  bounds_min_ = nodes_[0].lo;
  bounds_max_ = nodes_[0].hi;
}

std::uint32_t TriangleMesh::build_node(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi = -lo;
  Vec3 clo = lo, chi = hi;
  for (std::uint32_t i = begin; i < end; ++i) {
    for (auto v : triangles_[order_[i]]) {
      lo = min(lo, vertices_[v]);
      hi = max(hi, vertices_[v]);
    }
    clo = min(clo, centroids[order_[i]]);
    chi = max(chi, centroids[order_[i]]);
  }
  nodes_[index].lo = lo;
  nodes_[index].hi = hi;

  const Vec3 extent = chi - clo;
  int axis = 0;
  if (extent.y > extent[axis]) axis = 1;
  if (extent.z > extent[axis]) axis = 2;
  if (end - begin <= kLeafSize || extent[axis] <= 0.0) {
    nodes_[index].first = begin;
    nodes_[index].count = end - begin;
    return index;
  }
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = centroids[a][axis], cb = centroids[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  build_node(begin, mid, centroids);
  const std::uint32_t right = build_node(mid, end, centroids);
  nodes_[index].first = right;
  nodes_[index].count = 0;
  return index;
}

// Moller-Trumbore, double precision, two-sided.
bool TriangleMesh::intersect_triangle(const Ray& ray, std::uint32_t tri, double t_min, double t_max,
                                      double& t) const {
  const auto& idx = triangles_[tri];
  const Vec3& v0 = vertices_[idx[0]];
  const Vec3 e1 = vertices_[idx[1]] - v0;
  const Vec3 e2 = vertices_[idx[2]] - v0;
  const Vec3 p = cross(ray.direction, e2);
  const double det = dot(e1, p);
  if (det == 0.0) return false;
  const double inv = 1.0 / det;
  const Vec3 s = ray.origin - v0;
  const double u = dot(s, p) * inv;
  if (u < 0.0 || u > 1.0) return false;
  const Vec3 q = cross(s, e1);
  const double v = dot(ray.direction, q) * inv;
  if (v < 0.0 || u + v > 1.0) return false;
  t = dot(e2, q) * inv;
  return t > t_min && t < t_max;
}

std::optional<Hit> TriangleMesh::intersect(const Ray& ray, double t_min, double t_max) const {
  if (nodes_.empty()) return std::nullopt;
  const Vec3 inv{1.0 / ray.direction.x, 1.0 / ray.direction.y, 1.0 / ray.direction.z};
  std::optional<Hit> best;
  double best_t = t_max;
  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const std::uint32_t ni = stack[--top];
    const Node& node = nodes_[ni];
    // Inclusive upper bound so an equal-t triangle with a lower index is still visited.
    if (!ray_box(ray, inv, node.lo, node.hi, t_min, best_t)) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const std::uint32_t tri = order_[i];
        double t;
        if (!intersect_triangle(ray, tri, t_min, std::nextafter(best_t, std::numeric_limits<double>::infinity()), t)) continue;
        if (!best || t < best->t || (t == best->t && tri < best->triangle)) {
          best = Hit{t, tri};
          best_t = t;
        }
      }
    } else {
      stack[top++] = node.first;
      stack[top++] = ni + 1;
    }
  }
  return best;
}

bool TriangleMesh::occluded(const Ray& ray, double t_min, double t_max) const {
  if (nodes_.empty()) return false;
  const Vec3 inv{1.0 / ray.direction.x, 1.0 / ray.direction.y, 1.0 / ray.direction.z};
  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const std::uint32_t ni = stack[--top];
    const Node& node = nodes_[ni];
    if (!ray_box(ray, inv, node.lo, node.hi, t_min, t_max)) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        double t;
        if (intersect_triangle(ray, order_[i], t_min, t_max, t)) return true;
      }
    } else {
      stack[top++] = node.first;
      stack[top++] = ni + 1;
    }
  }
  return false;
}

TriangleMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open mesh " + path.string());
  std::vector<Vec3> vertices;
  std::vector<TriangleMesh::Triangle> triangles;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x >> v.y >> v.z)) throw IngestError(path.string() + ":" + std::to_string(line_no) + ": bad vertex");
      vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<long> idx;
      std::string tok;
      while (ls >> tok) {
        const long i = std::stol(tok.substr(0, tok.find('/')));
        // Negative indices are relative to the end of the current vertex list.
        idx.push_back(i < 0 ? static_cast<long>(vertices.size()) + i : i - 1);
      }
      if (idx.size() < 3) throw IngestError(path.string() + ":" + std::to_string(line_no) + ": face needs 3 vertices");
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
        if (idx[0] < 0 || idx[k] < 0 || idx[k + 1] < 0)
          throw IngestError(path.string() + ":" + std::to_string(line_no) + ": vertex index out of range");
        triangles.push_back({static_cast<std::uint32_t>(idx[0]), static_cast<std::uint32_t>(idx[k]),
                             static_cast<std::uint32_t>(idx[k + 1])});
      }
    }
  }
  for (const auto& t : triangles)
    for (auto i : t)
      if (i >= vertices.size()) throw IngestError(path.string() + ": vertex index out of range");
  return TriangleMesh(std::move(vertices), triangles);
}

void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path.string());
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const auto& t : mesh.triangles()) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

}  // namespace sunsky
