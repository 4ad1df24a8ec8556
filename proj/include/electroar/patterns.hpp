#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "electroar/grid.hpp"
#include "electroar/modulator.hpp"
#include "electroar/transport.hpp"

namespace electroar {

// Orientation is measured from the width axis toward increasing row index.
// The 5x10 sensor's long (height) axis runs along the finger.
struct BarPattern {
  int orientation_deg = 0;  // 0, 45, 90 or 135
  double thickness_sensels = 1.5;
  std::uint16_t amplitude = 40000;

  void validate() const;
};

inline constexpr int kBarOrientations[] = {0, 45, 90, 135};

// A cell is lit iff its centre lies within thickness/2 sensels of the line
// through the grid centre.
PressureGrid generate_bar(const BarPattern& pattern,
                          const GridGeometry& geometry = GridGeometry::sensor_preset());

std::string bar_label(int orientation_deg);

enum class CrossSection { Circle, Triangle, Square, Hexagon };

inline constexpr CrossSection kCrossSections[] = {CrossSection::Circle, CrossSection::Triangle,
                                                  CrossSection::Square, CrossSection::Hexagon};

int vertex_count(CrossSection section) noexcept;
std::string_view to_string(CrossSection section) noexcept;
std::optional<CrossSection> cross_section_from_name(std::string_view name) noexcept;

struct PrismSpec {
  CrossSection cross_section = CrossSection::Circle;
  double stick_length_mm = 150.0;
  double section_length_mm = 28.0;
  double stick_radius_mm = 9.0;
  double circumradius_mm = 5.0;

  void validate() const;
};

inline constexpr double kScrollBandThickness = 3.0;
inline constexpr double kRidgeHalfWidth = 3.14159265358979323846 / 12.0;
inline constexpr std::uint32_t kDefaultFramesPerCycle = 720;
inline constexpr std::uint32_t kDefaultCycles = 10;
inline constexpr std::uint16_t kDefaultScrollAmplitude = 43690;

// Back-and-forth roll: phase climbs 0 -> pi over the first half cycle and
// returns to 0 over the second.
double scroll_phase(std::uint64_t frame, std::uint32_t frames_per_cycle) noexcept;

// True while some vertex (at phases 2 pi m / n) lies within the ridge
// half-width of the contact phase. Never true for a circle.
bool ridge_active(CrossSection section, double phase) noexcept;

struct ScrollFrame {
  PressureGrid index;
  PressureGrid thumb;  // opposite side of the stick: phase + pi
  double phase = 0.0;
  bool index_ridge = false;
  bool thumb_ridge = false;
};

struct ScrollSequence {
  PrismSpec prism;
  std::uint32_t frames_per_cycle = kDefaultFramesPerCycle;
  std::uint32_t cycles = kDefaultCycles;
  std::uint32_t ticks_per_frame = 1;
  std::uint16_t amplitude = kDefaultScrollAmplitude;
  std::vector<ScrollFrame> frames;
};

// Synthetic contact model: a 90 degree band of kScrollBandThickness sensels
// at `amplitude`, raised to min(1.5 amplitude, 65535) while a vertex is in
// contact.
ScrollSequence generate_scroll(const PrismSpec& spec, std::uint32_t frames_per_cycle,
                               std::uint32_t cycles, std::uint16_t amplitude);

// ---------------------------------------------------------------------------
// Recording files: a text header terminated by a blank line, then encoded
// frames back to back.
//
//   earlog 1
//   geometry 5x10
//   tick_rate 120
//   meta <key> <value>
//   <blank line>
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kRecordingVersion = 1;

struct RecordingHeader {
  std::uint32_t version = kRecordingVersion;
  GridGeometry geometry = GridGeometry::sensor_preset();
  std::uint32_t tick_rate = 120;
  std::vector<std::pair<std::string, std::string>> meta;

  const std::string* find(std::string_view key) const;
  void set(std::string key, std::string value);
};

struct Recording {
  RecordingHeader header;
  std::vector<LogicalFrame> frames;
};

Recording bar_recording(const BarPattern& pattern, std::uint64_t frame_count,
                        FingerId finger = FingerId::Index);
Recording scroll_recording(const ScrollSequence& sequence);

class RecordingWriter {
 public:
  RecordingWriter(const std::filesystem::path& path, const RecordingHeader& header);

  void write(const LogicalFrame& frame);
  void close();
  std::uint64_t frames_written() const noexcept { return written_; }

 private:
  std::filesystem::path path_;
  RecordingHeader header_;
  std::vector<std::uint8_t> buffer_;
  std::optional<std::uint64_t> last_tick_;
  std::uint64_t written_ = 0;
  bool closed_ = false;
};

class RecordingReader {
 public:
  explicit RecordingReader(const std::filesystem::path& path);

  const RecordingHeader& header() const noexcept { return header_; }

  // Next frame, or nullopt at a clean end of body. A partial or damaged
  // frame raises CorruptFrame; frames before it have already been returned.
  std::optional<LogicalFrame> next();

 private:
  RecordingHeader header_;
  std::vector<std::uint8_t> body_;
  std::size_t offset_ = 0;
  std::optional<std::uint64_t> last_tick_;
};

void record(const std::filesystem::path& path, const Recording& recording);

// Reads every frame; with a wall-clock pacer each frame is released at its tick.
Recording replay(const std::filesystem::path& path, const TickPacer* pacer = nullptr);

}  // namespace electroar
