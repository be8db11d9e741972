#include "emf/topology.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "emf/error.hpp"
#include "emf/rng.hpp"

namespace emf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Stream ids for derive_seed. BS attempts use kBsStream + attempt.
constexpr std::uint64_t kBsStream = 0x100;
constexpr std::uint64_t kUeStream = 0x200;
constexpr std::uint64_t kHeadStream = 0x300;

bool finite(const Point2D& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

Point2D uniform_point(Engine& eng, const Window& w) {
  const double x = uniform(eng, w.x_min, w.x_min + w.width);
  const double y = uniform(eng, w.y_min, w.y_min + w.height);
  return {x, y};
}

std::vector<Point2D> sample_ppp(const DeploymentConfig& cfg, std::uint64_t seed) {
  Engine eng(seed);
  std::poisson_distribution<long long> count(cfg.intensity() * cfg.window.area());
  const long long n = count(eng);
  std::vector<Point2D> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) pts.push_back(uniform_point(eng, cfg.window));
  return pts;
}

// Centres of a square tiling with side 2R whose corner sits at the window origin.
std::vector<Point2D> sample_grid(const DeploymentConfig& cfg) {
  const double spacing = 2.0 * cfg.cell_radius_m;
  const Window& w = cfg.window;
  std::vector<Point2D> pts;
  for (std::size_t j = 0;; ++j) {
    const double y = w.y_min + cfg.cell_radius_m + spacing * static_cast<double>(j);
    if (!(y < w.y_min + w.height)) break;
    for (std::size_t i = 0;; ++i) {
      const double x = w.x_min + cfg.cell_radius_m + spacing * static_cast<double>(i);
      if (!(x < w.x_min + w.width)) break;
      pts.push_back({x, y});
    }
  }
  return pts;
}

}  // namespace

bool Window::contains(const Point2D& p) const noexcept {
  return p.x >= x_min && p.x <= x_min + width && p.y >= y_min && p.y <= y_min + height;
}

void DeploymentConfig::validate() const {
  if (!(cell_radius_m > 0.0) || !std::isfinite(cell_radius_m))
    throw Error("deployment: cell_radius must be > 0");
  if (!(window.width > 0.0) || !(window.height > 0.0) || !std::isfinite(window.area()) ||
      !std::isfinite(window.x_min) || !std::isfinite(window.y_min))
    throw Error("deployment: window area must be > 0");
  if (ue_count < 1) throw Error("deployment: ue_count must be >= 1");
}

double DeploymentConfig::intensity() const noexcept {
  return 1.0 / (std::numbers::pi * cell_radius_m * cell_radius_m);
}

Topology sample_topology(const DeploymentConfig& config) {
  config.validate();

  Topology topo;
  topo.window = config.window;
  topo.seed_used = config.seed;

  if (config.mode == DeploymentMode::grid) {
    topo.bs_positions = sample_grid(config);
    topo.bs_attempts = 1;
  } else {
    for (unsigned attempt = 0; attempt < kMaxDeploymentAttempts; ++attempt) {
      topo.bs_positions = sample_ppp(config, derive_seed(config.seed, kBsStream + attempt));
      topo.bs_attempts = attempt + 1;
      if (!topo.bs_positions.empty()) break;
    }
  }
  if (topo.bs_positions.empty()) throw Error("empty deployment");

  Engine ue_eng(derive_seed(config.seed, kUeStream));
  topo.ue_positions.reserve(config.ue_count);
  for (std::size_t i = 0; i < config.ue_count; ++i)
    topo.ue_positions.push_back(uniform_point(ue_eng, config.window));

  Engine head_eng(derive_seed(config.seed, kHeadStream));
  topo.head_azimuth.reserve(config.ue_count);
  for (std::size_t i = 0; i < config.ue_count; ++i)
    topo.head_azimuth.push_back(kTwoPi * uniform01(head_eng));

  return topo;
}

double squared_distance(const Point2D& a, const Point2D& b) noexcept {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  return dx * dx + dy * dy;
}

double distance(const Point2D& a, const Point2D& b) noexcept { return std::sqrt(squared_distance(a, b)); }

double azimuth(const Point2D& origin, const Point2D& target) {
  if (!finite(origin) || !finite(target)) throw Error("undefined azimuth: non-finite point");
  const double dx = target.x - origin.x;
  const double dy = target.y - origin.y;
  if (dx == 0.0 && dy == 0.0) throw Error("undefined azimuth: coincident points");
  double a = std::atan2(dy, dx);
  if (a < 0.0) a += kTwoPi;
  // atan2 of a tiny negative dy can round up to exactly 2pi after the shift.
  if (a >= kTwoPi) a = 0.0;
  return a;
}

double wrap_pi(double angle) noexcept { return std::remainder(angle, kTwoPi); }

double angular_separation(double a, double b) noexcept {
  const double s = std::fabs(wrap_pi(a - b));
  return s > std::numbers::pi ? std::numbers::pi : s;
}

double azimuth_separation(const Point2D& origin, const Bearing& a, const Bearing& b) {
  auto bearing = [&](const Bearing& d) {
    if (const auto* p = std::get_if<Point2D>(&d)) return azimuth(origin, *p);
    return std::get<double>(d);
  };
  return angular_separation(bearing(a), bearing(b));
}

}  // namespace emf
