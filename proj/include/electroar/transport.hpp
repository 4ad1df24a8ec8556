#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "electroar/grid.hpp"

namespace electroar {

// ---------------------------------------------------------------------------
// Wire format (all integers little-endian):
//
//   offset  size  field
//        0     4  magic "EARF"
//        4     1  version (1)
//        5     1  frame_type (0 pressure, 1 stimulus-echo, 2 control)
//        6     1  finger (0 thumb, 1 index, 2 middle)
//        7     1  flags (reserved, 0)
//        8     4  sequence
//       12     8  tick (1/120 s)
//       20     1  width
//       21     1  height
//       22  2*wh  payload, row-major u16
//   22+2wh     4  IEEE CRC-32 of every preceding byte
// ---------------------------------------------------------------------------

inline constexpr std::array<std::uint8_t, 4> kFrameMagic = {'E', 'A', 'R', 'F'};
inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kFrameHeaderSize = 22;
inline constexpr std::size_t kFrameCrcSize = 4;

enum class FrameType : std::uint8_t { Pressure = 0, StimulusEcho = 1, Control = 2 };

struct LogicalFrame {
  FrameType type = FrameType::Pressure;
  FingerId finger = FingerId::Index;
  std::uint32_t sequence = 0;
  std::uint64_t tick = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint16_t> values;

  // Builds a frame from wide counts, rejecting anything above 65535.
  static LogicalFrame from_counts(FrameType type, FingerId finger, std::uint32_t sequence,
                                  std::uint64_t tick, std::uint32_t width, std::uint32_t height,
                                  std::span<const std::uint32_t> counts);

  PressureGrid to_grid(double pitch_mm = 2.0) const;

  friend bool operator==(const LogicalFrame&, const LogicalFrame&) = default;
};

constexpr std::size_t encoded_size(std::uint32_t width, std::uint32_t height) noexcept {
  return kFrameHeaderSize + 2 * static_cast<std::size_t>(width) * height + kFrameCrcSize;
}

std::uint32_t crc32(std::span<const std::uint8_t> bytes) noexcept;

std::vector<std::uint8_t> encode(const LogicalFrame& frame);

struct DecodedFrame {
  LogicalFrame frame;
  std::size_t consumed = 0;
};

// Parses one frame at the front of `bytes`; trailing bytes are left
// unconsumed. Checks run in order: magic, version, length, CRC, fields.
DecodedFrame decode(std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// Simulated link
// ---------------------------------------------------------------------------

struct LinkModel {
  std::uint64_t latency_ticks = 1;
  std::uint64_t jitter_ticks = 0;  // extra delay uniform in [-jitter, +jitter]
  double loss_probability = 0.0;
  double reorder_probability = 0.0;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct Transmission {
  std::vector<std::uint8_t> bytes;
  std::uint64_t tick = 0;
};

struct Delivery {
  std::vector<std::uint8_t> bytes;
  std::uint64_t sent_tick = 0;
  std::uint64_t delivery_tick = 0;
};

struct LinkStats {
  std::uint64_t sent = 0;
  std::uint64_t dropped = 0;
  std::uint64_t swapped = 0;
  std::uint64_t delivered = 0;
};

// Lossy, delaying link advanced in integer ticks. Per frame the draw order is
// loss, jitter, reorder, so a seed fixes the whole delivery schedule.
class SimulatedLink {
 public:
  explicit SimulatedLink(const LinkModel& model);

  void send(std::vector<std::uint8_t> bytes, std::uint64_t tick);

  // Everything due at or before `tick`, ordered by (delivery tick, send order).
  std::vector<Delivery> advance(std::uint64_t tick);
  std::vector<Delivery> drain();

  std::size_t pending() const noexcept { return pending_.size(); }
  const LinkStats& stats() const noexcept { return stats_; }

 private:
  struct Pending {
    Delivery delivery;
    std::uint64_t order = 0;
  };

  LinkModel model_;
  std::mt19937_64 rng_;
  std::vector<Pending> pending_;
  std::uint64_t next_order_ = 0;
  LinkStats stats_;

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::vector<Delivery> take_due(std::uint64_t tick, bool all);
};

// Batch form: every frame is sent at its tick and the link drained.
std::vector<Delivery> link_transmit(std::span<const Transmission> frames, const LinkModel& model);

// ---------------------------------------------------------------------------
// Sessions
// ---------------------------------------------------------------------------

enum class Role { Follower, Leader };

struct StreamKey {
  FingerId finger = FingerId::Index;
  FrameType type = FrameType::Pressure;

  friend auto operator<=>(const StreamKey&, const StreamKey&) = default;
};

// Stamps outgoing frames with per-(finger, type) sequence numbers.
class FollowerSession {
 public:
  LogicalFrame make_pressure_frame(const PressureGrid& grid, FingerId finger, std::uint64_t tick);
  std::uint32_t next_sequence(StreamKey key) const;

 private:
  std::map<StreamKey, std::uint32_t> next_;
};

struct SessionCounters {
  std::uint64_t received = 0;
  std::uint64_t handed_off = 0;
  std::uint64_t gap_count = 0;  // sequence numbers skipped
  std::uint64_t stale_count = 0;
  std::uint64_t out_of_order_count = 0;
  std::uint64_t decode_errors = 0;
};

// Latest-wins consumer: a frame whose tick is not newer than the newest one
// already handed off on its stream is discarded.
class LeaderSession {
 public:
  std::optional<LogicalFrame> ingest(const LogicalFrame& frame);

  // Decodes and ingests; decode failures only bump the counter.
  std::optional<LogicalFrame> ingest_bytes(std::span<const std::uint8_t> bytes);

  const SessionCounters& counters() const noexcept { return counters_; }
  std::optional<std::uint32_t> last_sequence(StreamKey key) const;
  const LogicalFrame* latest(FingerId finger) const;

 private:
  struct StreamState {
    std::uint32_t last_sequence = 0;
    std::uint64_t newest_tick = 0;
  };
  std::map<StreamKey, StreamState> streams_;
  std::map<FingerId, LogicalFrame> held_;
  SessionCounters counters_;
};

// ---------------------------------------------------------------------------
// UDP datagrams, one frame per datagram (IPv4).
// ---------------------------------------------------------------------------

class UdpSocket {
 public:
  // Binds to 127.0.0.1:port when `bind_port` is set; port 0 picks a free one.
  static UdpSocket bound(std::uint16_t bind_port);
  static UdpSocket unbound();

  UdpSocket(UdpSocket&& other) noexcept;
  UdpSocket& operator=(UdpSocket&& other) noexcept;
  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;
  ~UdpSocket();

  std::uint16_t local_port() const;
  void send_to(const std::string& host, std::uint16_t port, std::span<const std::uint8_t> bytes) const;
  // Empty optional on timeout.
  std::optional<std::vector<std::uint8_t>> receive(int timeout_ms) const;

 private:
  explicit UdpSocket(int fd) : fd_(fd) {}
  int fd_ = -1;
};

}  // namespace electroar
