#include "electroar/transport.hpp"

#include "electroar/error.hpp"

namespace electroar {

LogicalFrame FollowerSession::make_pressure_frame(const PressureGrid& grid, FingerId finger,
                                                  std::uint64_t tick) {
  const StreamKey key{finger, FrameType::Pressure};
  auto& next = next_[key];
  LogicalFrame frame;
  frame.type = FrameType::Pressure;
  frame.finger = finger;
  frame.sequence = next++;
  frame.tick = tick;
  frame.width = grid.width();
  frame.height = grid.height();
  frame.values.assign(grid.values().begin(), grid.values().end());
  return frame;
}

std::uint32_t FollowerSession::next_sequence(StreamKey key) const {
  const auto it = next_.find(key);
  return it == next_.end() ? 0 : it->second;
}

std::optional<LogicalFrame> LeaderSession::ingest(const LogicalFrame& frame) {
  ++counters_.received;
  const StreamKey key{frame.finger, frame.type};
  const auto it = streams_.find(key);
  if (it != streams_.end()) {
    StreamState& state = it->second;
    if (frame.sequence < state.last_sequence) ++counters_.out_of_order_count;
    if (frame.tick <= state.newest_tick) {
      ++counters_.stale_count;
      return std::nullopt;
    }
    if (frame.sequence > state.last_sequence + 1ull)
      counters_.gap_count += frame.sequence - state.last_sequence - 1ull;
    state.last_sequence = std::max(state.last_sequence, frame.sequence);
    state.newest_tick = frame.tick;
  } else {
    streams_.emplace(key, StreamState{frame.sequence, frame.tick});
  }
  ++counters_.handed_off;
  if (frame.type == FrameType::Pressure) held_.insert_or_assign(frame.finger, frame);
  return frame;
}

std::optional<LogicalFrame> LeaderSession::ingest_bytes(std::span<const std::uint8_t> bytes) {
  try {
    return ingest(decode(bytes).frame);
  } catch (const Error&) {
    ++counters_.decode_errors;
    return std::nullopt;
  }
}

std::optional<std::uint32_t> LeaderSession::last_sequence(StreamKey key) const {
  const auto it = streams_.find(key);
  if (it == streams_.end()) return std::nullopt;
  return it->second.last_sequence;
}

const LogicalFrame* LeaderSession::latest(FingerId finger) const {
  const auto it = held_.find(finger);
  return it == held_.end() ? nullptr : &it->second;
}

}  // namespace electroar
