#include <algorithm>
#include <atomic>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "sunsky/error.hpp"
#include "sunsky/parallel.hpp"
#include "sunsky/vec3.hpp"

namespace sunsky {

namespace {
std::atomic<unsigned> g_workers{1};
std::mutex g_log_mutex;
}  // namespace

void log_warning(const std::string& message) {
  std::lock_guard lock(g_log_mutex);
  std::cerr << "warning: " << message << '\n';
}

void set_worker_count(unsigned workers) { g_workers = workers; }

unsigned worker_count() {
  unsigned w = g_workers.load();
  if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
  return w;
}

void parallel_rows(int rows, const std::function<void(int)>& fn) {
  const int workers = static_cast<int>(std::min<unsigned>(worker_count(), std::max(rows, 1)));
  if (workers <= 1) {
    for (int r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int w = 0; w < workers; ++w) {
    const int begin = rows * w / workers;
    const int end = rows * (w + 1) / workers;
    threads.emplace_back([&, begin, end] {
      try {
        for (int r = begin; r < end; ++r) fn(r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

Mat3 axis_angle(const Vec3& axis, double radians) {
  const Vec3 a = normalized(axis);
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  const double t = 1.0 - c;
  return Mat3{{t * a.x * a.x + c, t * a.x * a.y - s * a.z, t * a.x * a.z + s * a.y,
               t * a.x * a.y + s * a.z, t * a.y * a.y + c, t * a.y * a.z - s * a.x,
               t * a.x * a.z - s * a.y, t * a.y * a.z + s * a.x, t * a.z * a.z + c}};
}

// Duff et al., "Building an Orthonormal Basis, Revisited".
Frame Frame::around(const Vec3& n) {
  const double sign = std::copysign(1.0, n.z);
  const double a = -1.0 / (sign + n.z);
  const double b = n.x * n.y * a;
  return Frame{{1.0 + sign * n.x * n.x * a, sign * b, -sign * n.x},
               {b, sign + n.y * n.y * a, -n.y},
               n};
}

}  // namespace sunsky
