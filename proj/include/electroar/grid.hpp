#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace electroar {

// Transport encoding is the underlying value.
enum class FingerId : std::uint8_t { Thumb = 0, Index = 1, Middle = 2 };

std::optional<FingerId> finger_from_code(std::uint8_t code) noexcept;
std::optional<FingerId> finger_from_name(std::string_view name) noexcept;
std::string_view to_string(FingerId finger) noexcept;

struct GridGeometry {
  std::uint32_t width = 1;
  std::uint32_t height = 1;
  double pitch_mm = 2.0;

  // 5 x 10 sensels per finger on a 2.0 mm pitch.
  static constexpr GridGeometry sensor_preset() { return {5, 10, 2.0}; }
  // 4 x 5 electrodes per finger on a 2.0 mm pitch.
  static constexpr GridGeometry electrode_preset() { return {4, 5, 2.0}; }

  std::size_t cell_count() const noexcept {
    return static_cast<std::size_t>(width) * height;
  }
  bool same_shape(const GridGeometry& other) const noexcept {
    return width == other.width && height == other.height;
  }
  void validate() const;

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

// Row-major grid of raw sensor counts. i indexes width (column), j indexes
// height (row); storage offset is j * width + i. Immutable once built.
class PressureGrid {
 public:
  PressureGrid(GridGeometry geometry, std::vector<std::uint16_t> values);

  static PressureGrid filled(GridGeometry geometry, std::uint16_t value);

  const GridGeometry& geometry() const noexcept { return geometry_; }
  std::uint32_t width() const noexcept { return geometry_.width; }
  std::uint32_t height() const noexcept { return geometry_.height; }
  std::span<const std::uint16_t> values() const noexcept { return values_; }

  std::uint16_t at(std::uint32_t i, std::uint32_t j) const;
  std::uint16_t max_value() const noexcept;

  friend bool operator==(const PressureGrid&, const PressureGrid&) = default;

 private:
  GridGeometry geometry_;
  std::vector<std::uint16_t> values_;
};

// 2x2 box mean: out[i,j] = round_half_up((in[i,j] + in[i+1,j] + in[i,j+1] +
// in[i+1,j+1]) / 4). W x H becomes (W-1) x (H-1) with the same pitch.
PressureGrid spatial_filter(const PressureGrid& input);

// Rows of the filtered 4x9 sensor lattice picked for the 4x5 electrode lattice.
inline constexpr std::uint32_t kDefaultRowMap[] = {0, 2, 4, 6, 8};

// Width passes through; height is decimated by row selection. Without a
// row map only the filtered-sensor (4x9) -> electrode (4x5) presets are
// accepted.
PressureGrid resample_to_electrodes(
    const PressureGrid& filtered, const GridGeometry& target,
    std::optional<std::span<const std::uint32_t>> row_map = std::nullopt);

}  // namespace electroar
