#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <vector>

#include "sunsky/vec3.hpp"

namespace sunsky {

struct Ray {
  Vec3 origin;
  Vec3 direction;  // need not be unit length; t is measured in its units
};

struct Hit {
  double t = 0.0;
  std::uint32_t triangle = 0;
};

/// Triangle soup with a bounding-volume hierarchy.
///
/// Degenerate (zero-area) triangles and out-of-range indices are removed when
/// the mesh is built; source_index() maps a kept triangle back to its position
/// in the input list. The mesh is immutable once built and safe to query from
/// many threads.
class TriangleMesh {
 public:
  using Triangle = std::array<std::uint32_t, 3>;

  TriangleMesh() = default;
  TriangleMesh(std::vector<Vec3> vertices, const std::vector<Triangle>& triangles);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  std::size_t triangle_count() const { return triangles_.size(); }
  std::size_t source_index(std::uint32_t tri) const { return source_index_[tri]; }
  bool empty() const { return triangles_.empty(); }

  /// Unit geometric normal (v1 - v0) x (v2 - v0).
  Vec3 normal(std::uint32_t tri) const { return normals_[tri]; }

  Vec3 bounds_min() const { return bounds_min_; }
  Vec3 bounds_max() const { return bounds_max_; }
  double diagonal() const { return empty() ? 0.0 : norm(bounds_max_ - bounds_min_); }

  /// Nearest hit with t in (t_min, t_max). Equal t is resolved to the lowest
  /// triangle index.
  std::optional<Hit> intersect(const Ray& ray, double t_min = 0.0,
                               double t_max = std::numeric_limits<double>::infinity()) const;

  /// True if any triangle is hit with t in (t_min, t_max).
  bool occluded(const Ray& ray, double t_min = 0.0,
                double t_max = std::numeric_limits<double>::infinity()) const;

 private:
  struct Node {
    Vec3 lo, hi;
    std::uint32_t first = 0;  // leaf: first primitive in order_; inner: right child
    std::uint32_t count = 0;  // 0 for inner nodes
  };

  void build();
  std::uint32_t build_node(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids);
  bool intersect_triangle(const Ray& ray, std::uint32_t tri, double t_min, double t_max, double& t) const;

  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Vec3> normals_;
  std::vector<std::size_t> source_index_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
  Vec3 bounds_min_, bounds_max_;
};

/// Loads `v` and `f` records from a Wavefront OBJ file. Faces with more than
/// three vertices are fan-triangulated; texture/normal indices, materials and
/// all other records are ignored.
TriangleMesh load_obj(const std::filesystem::path& path);
void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

}  // namespace sunsky
