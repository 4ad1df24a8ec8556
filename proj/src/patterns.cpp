#include "electroar/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "electroar/error.hpp"

namespace electroar {

void BarPattern::validate() const {
  if (std::find(std::begin(kBarOrientations), std::end(kBarOrientations), orientation_deg) ==
      std::end(kBarOrientations))
    fail(ErrorCode::InvalidArgument, "bar orientation must be 0, 45, 90 or 135 degrees");
  if (!(thickness_sensels > 0.0)) fail(ErrorCode::InvalidArgument, "bar thickness must be positive");
}

namespace {

struct Direction {
  double cos;
  double sin;
};

// Exact unit vectors so 0/90 degree distances carry no trigonometric residue.
Direction direction_of(int orientation_deg) {
  constexpr double r = std::numbers::sqrt2 / 2.0;
  switch (orientation_deg) {
    case 0: return {1.0, 0.0};
    case 45: return {r, r};
    case 90: return {0.0, 1.0};
    default: return {-r, r};
  }
}

}  // namespace

PressureGrid generate_bar(const BarPattern& pattern, const GridGeometry& geometry) {
  pattern.validate();
  geometry.validate();
  const Direction d = direction_of(pattern.orientation_deg);
  const double cx = (geometry.width - 1) / 2.0;
  const double cy = (geometry.height - 1) / 2.0;
  const double half = pattern.thickness_sensels / 2.0 + 1e-12;
  std::vector<std::uint16_t> values(geometry.cell_count(), 0);
  for (std::uint32_t j = 0; j < geometry.height; ++j) {
    for (std::uint32_t i = 0; i < geometry.width; ++i) {
      const double distance = std::abs(-(i - cx) * d.sin + (j - cy) * d.cos);
      if (distance <= half) values[static_cast<std::size_t>(j) * geometry.width + i] = pattern.amplitude;
    }
  }
  return PressureGrid(geometry, std::move(values));
}

std::string bar_label(int orientation_deg) { return "bar_" + std::to_string(orientation_deg); }

int vertex_count(CrossSection section) noexcept {
  switch (section) {
    case CrossSection::Circle: return 0;
    case CrossSection::Triangle: return 3;
    case CrossSection::Square: return 4;
    case CrossSection::Hexagon: return 6;
  }
  return 0;
}

std::string_view to_string(CrossSection section) noexcept {
  switch (section) {
    case CrossSection::Circle: return "circle";
    case CrossSection::Triangle: return "triangle";
    case CrossSection::Square: return "square";
    case CrossSection::Hexagon: return "hexagon";
  }
  return "unknown";
}

std::optional<CrossSection> cross_section_from_name(std::string_view name) noexcept {
  for (auto section : kCrossSections)
    if (to_string(section) == name) return section;
  return std::nullopt;
}

void PrismSpec::validate() const {
  if (!(stick_length_mm > 0.0 && section_length_mm > 0.0 && stick_radius_mm > 0.0 && circumradius_mm > 0.0))
    fail(ErrorCode::InvalidArgument, "prism dimensions must be positive");
}

double scroll_phase(std::uint64_t frame, std::uint32_t frames_per_cycle) noexcept {
  const double u = static_cast<double>(frame % frames_per_cycle) / frames_per_cycle;
  return std::numbers::pi * (1.0 - std::abs(1.0 - 2.0 * u));
}

bool ridge_active(CrossSection section, double phase) noexcept {
  const int n = vertex_count(section);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (int m = 0; m < n; ++m) {
    double delta = std::fmod(phase - two_pi * m / n, two_pi);
    if (delta < 0.0) delta += two_pi;
    const double distance = std::min(delta, two_pi - delta);
    if (distance < kRidgeHalfWidth - 1e-9) return true;
  }
  return false;
}

ScrollSequence generate_scroll(const PrismSpec& spec, std::uint32_t frames_per_cycle, std::uint32_t cycles,
                               std::uint16_t amplitude) {
  spec.validate();
  if (frames_per_cycle < 8) fail(ErrorCode::InvalidArgument, "frames_per_cycle must be at least 8");
  if (cycles < 1) fail(ErrorCode::InvalidArgument, "cycles must be at least 1");

  const auto sensor = GridGeometry::sensor_preset();
  const PressureGrid base = generate_bar({90, kScrollBandThickness, amplitude}, sensor);
  const auto raised = static_cast<std::uint16_t>(std::min<std::uint32_t>(65535u, (3u * amplitude + 1u) / 2u));
  const PressureGrid ridge = generate_bar({90, kScrollBandThickness, raised}, sensor);

  ScrollSequence seq;
  seq.prism = spec;
  seq.frames_per_cycle = frames_per_cycle;
  seq.cycles = cycles;
  seq.amplitude = amplitude;
  seq.frames.reserve(static_cast<std::size_t>(frames_per_cycle) * cycles);
  for (std::uint64_t t = 0; t < static_cast<std::uint64_t>(frames_per_cycle) * cycles; ++t) {
    const double phase = scroll_phase(t, frames_per_cycle);
    const bool index_ridge = ridge_active(spec.cross_section, phase);
    const bool thumb_ridge = ridge_active(spec.cross_section, phase + std::numbers::pi);
    seq.frames.push_back({index_ridge ? ridge : base, thumb_ridge ? ridge : base, phase, index_ridge, thumb_ridge});
  }
  return seq;
}

}  // namespace electroar
