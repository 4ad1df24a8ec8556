#include "electroar/grid.hpp"

#include <algorithm>
#include <string>

#include "electroar/error.hpp"

namespace electroar {

std::optional<FingerId> finger_from_code(std::uint8_t code) noexcept {
  if (code > 2) return std::nullopt;
  return static_cast<FingerId>(code);
}

std::optional<FingerId> finger_from_name(std::string_view name) noexcept {
  if (name == "thumb") return FingerId::Thumb;
  if (name == "index") return FingerId::Index;
  if (name == "middle") return FingerId::Middle;
  return std::nullopt;
}

std::string_view to_string(FingerId finger) noexcept {
  switch (finger) {
    case FingerId::Thumb: return "thumb";
    case FingerId::Index: return "index";
    case FingerId::Middle: return "middle";
  }
  return "unknown";
}

void GridGeometry::validate() const {
  if (width < 1 || height < 1)
    fail(ErrorCode::InvalidArgument, "grid dimensions must be at least 1x1");
  if (!(pitch_mm > 0.0)) fail(ErrorCode::InvalidArgument, "pitch must be positive");
}

PressureGrid::PressureGrid(GridGeometry geometry, std::vector<std::uint16_t> values)
    : geometry_(geometry), values_(std::move(values)) {
  geometry_.validate();
  if (values_.size() != geometry_.cell_count())
    fail(ErrorCode::GeometryMismatch,
         "expected " + std::to_string(geometry_.cell_count()) + " values, got " +
             std::to_string(values_.size()));
}

PressureGrid PressureGrid::filled(GridGeometry geometry, std::uint16_t value) {
  return PressureGrid(geometry, std::vector<std::uint16_t>(geometry.cell_count(), value));
}

std::uint16_t PressureGrid::at(std::uint32_t i, std::uint32_t j) const {
  if (i >= geometry_.width || j >= geometry_.height)
    fail(ErrorCode::InvalidArgument, "grid index out of range");
  return values_[static_cast<std::size_t>(j) * geometry_.width + i];
}

std::uint16_t PressureGrid::max_value() const noexcept {
  return values_.empty() ? 0 : *std::max_element(values_.begin(), values_.end());
}

PressureGrid spatial_filter(const PressureGrid& input) {
  const auto w = input.width();
  const auto h = input.height();
  if (w < 2 || h < 2) fail(ErrorCode::DegenerateGrid, "spatial filter needs at least 2x2");

  const auto in = input.values();
  const GridGeometry out_geometry{w - 1, h - 1, input.geometry().pitch_mm};
  std::vector<std::uint16_t> out(out_geometry.cell_count());
  for (std::uint32_t j = 0; j + 1 < h; ++j) {
    for (std::uint32_t i = 0; i + 1 < w; ++i) {
      const std::size_t top = static_cast<std::size_t>(j) * w + i;
      const std::size_t bottom = top + w;
      const std::uint32_t sum = std::uint32_t{in[top]} + in[top + 1] + in[bottom] + in[bottom + 1];
      // floor(sum / 4 + 1/2) in exact integer arithmetic.
      out[static_cast<std::size_t>(j) * (w - 1) + i] = static_cast<std::uint16_t>((sum + 2) / 4);
    }
  }
  return PressureGrid(out_geometry, std::move(out));
}

PressureGrid resample_to_electrodes(const PressureGrid& filtered, const GridGeometry& target,
                                    std::optional<std::span<const std::uint32_t>> row_map) {
  target.validate();
  std::span<const std::uint32_t> rows;
  if (row_map) {
    rows = *row_map;
    if (rows.size() != target.height)
      fail(ErrorCode::GeometryMismatch, "row map length must equal target height");
    for (auto r : rows)
      if (r >= filtered.height()) fail(ErrorCode::GeometryMismatch, "row map index out of range");
  } else {
    const GridGeometry filtered_sensor{GridGeometry::sensor_preset().width - 1,
                                       GridGeometry::sensor_preset().height - 1, 2.0};
    if (!filtered.geometry().same_shape(filtered_sensor) ||
        !target.same_shape(GridGeometry::electrode_preset()))
      fail(ErrorCode::GeometryMismatch,
           "default decimation maps 4x9 onto 4x5; supply a row map for other shapes");
    rows = kDefaultRowMap;
  }
  if (filtered.width() != target.width)
    fail(ErrorCode::GeometryMismatch, "width axis must pass through unchanged");

  const auto in = filtered.values();
  std::vector<std::uint16_t> out;
  out.reserve(target.cell_count());
  for (auto r : rows) {
    const auto row = in.subspan(static_cast<std::size_t>(r) * filtered.width(), filtered.width());
    out.insert(out.end(), row.begin(), row.end());
  }
  return PressureGrid(target, std::move(out));
}

}  // namespace electroar
