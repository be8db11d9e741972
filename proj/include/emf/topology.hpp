#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

namespace emf {

struct Point2D {
  double x = 0.0;  // m
  double y = 0.0;  // m

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

struct Window {
  double x_min = 0.0;
  double y_min = 0.0;
  double width = 0.0;   // m
  double height = 0.0;  // m

  double area() const noexcept { return width * height; }
  bool contains(const Point2D& p) const noexcept;
  Point2D center() const noexcept { return {x_min + 0.5 * width, y_min + 0.5 * height}; }

  friend bool operator==(const Window&, const Window&) = default;
};

enum class DeploymentMode { ppp, grid };

struct DeploymentConfig {
  Window window;
  DeploymentMode mode = DeploymentMode::ppp;
  double cell_radius_m = 0.0;
  std::uint64_t seed = 0;
  std::size_t ue_count = 1;

  void validate() const;
  /// BS intensity in points per square metre: one BS per average disc of radius cell_radius.
  double intensity() const noexcept;
};

struct Topology {
  Window window;
  std::vector<Point2D> bs_positions;
  std::vector<Point2D> ue_positions;
  std::vector<double> head_azimuth;  // rad, device -> head, in [0, 2pi)
  std::uint64_t seed_used = 0;
  unsigned bs_attempts = 1;  // PPP draws needed to obtain a non-empty deployment

  std::size_t bs_count() const noexcept { return bs_positions.size(); }
  std::size_t ue_count() const noexcept { return ue_positions.size(); }

  friend bool operator==(const Topology&, const Topology&) = default;
};

inline constexpr unsigned kMaxDeploymentAttempts = 8;

Topology sample_topology(const DeploymentConfig& config);

double distance(const Point2D& a, const Point2D& b) noexcept;
double squared_distance(const Point2D& a, const Point2D& b) noexcept;

/// Bearing of `target` seen from `origin`, in [0, 2pi). Throws on coincident points.
double azimuth(const Point2D& origin, const Point2D& target);

/// Wrap an angle difference onto [-pi, pi].
double wrap_pi(double angle) noexcept;

/// Minimal absolute difference between two bearings, in [0, pi].
double angular_separation(double a, double b) noexcept;

/// A direction given either as a target point or as an absolute bearing.
using Bearing = std::variant<Point2D, double>;

double azimuth_separation(const Point2D& origin, const Bearing& a, const Bearing& b);

}  // namespace emf
