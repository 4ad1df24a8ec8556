#include "electroar/transport.hpp"

#include <zlib.h>

#include <algorithm>
#include <string>

#include "electroar/error.hpp"

namespace electroar {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int shift = 0; shift < 64; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(bytes[offset + i]) << (8 * i);
  return v;
}

}  // namespace

LogicalFrame LogicalFrame::from_counts(FrameType type, FingerId finger, std::uint32_t sequence,
                                       std::uint64_t tick, std::uint32_t width, std::uint32_t height,
                                       std::span<const std::uint32_t> counts) {
  if (counts.size() != static_cast<std::size_t>(width) * height)
    fail(ErrorCode::GeometryMismatch, "payload length does not match width x height");
  LogicalFrame frame{type, finger, sequence, tick, width, height, {}};
  frame.values.reserve(counts.size());
  for (auto c : counts) {
    if (c > 0xFFFF) fail(ErrorCode::ValueOverflow, "value " + std::to_string(c) + " exceeds 65535");
    frame.values.push_back(static_cast<std::uint16_t>(c));
  }
  return frame;
}

PressureGrid LogicalFrame::to_grid(double pitch_mm) const {
  return PressureGrid({width, height, pitch_mm}, values);
}

std::uint32_t crc32(std::span<const std::uint8_t> bytes) noexcept {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks for very large buffers.
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - offset, 1u << 30));
    crc = ::crc32(crc, bytes.data() + offset, chunk);
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> encode(const LogicalFrame& frame) {
  if (frame.width > 255 || frame.height > 255)
    fail(ErrorCode::GeometryOverflow, "width and height must fit in one byte");
  if (frame.values.size() != static_cast<std::size_t>(frame.width) * frame.height)
    fail(ErrorCode::GeometryMismatch, "payload length does not match width x height");

  std::vector<std::uint8_t> out;
  out.reserve(encoded_size(frame.width, frame.height));
  for (auto b : kFrameMagic) out.push_back(b);
  out.push_back(kWireVersion);
  out.push_back(static_cast<std::uint8_t>(frame.type));
  out.push_back(static_cast<std::uint8_t>(frame.finger));
  out.push_back(0);  // flags
  put_u32(out, frame.sequence);
  put_u64(out, frame.tick);
  out.push_back(static_cast<std::uint8_t>(frame.width));
  out.push_back(static_cast<std::uint8_t>(frame.height));
  for (auto v : frame.values) put_u16(out, v);
  put_u32(out, crc32(out));
  return out;
}

DecodedFrame decode(std::span<const std::uint8_t> bytes) {
  const std::size_t prefix = std::min(bytes.size(), kFrameMagic.size());
  if (!std::equal(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(prefix), kFrameMagic.begin()))
    fail(ErrorCode::BadMagic, "frame does not start with EARF");
  if (bytes.size() < 5) fail(ErrorCode::TruncatedFrame, "frame ends before version byte");
  if (bytes[4] != kWireVersion)
    fail(ErrorCode::UnsupportedVersion, "wire version " + std::to_string(bytes[4]));
  if (bytes.size() < kFrameHeaderSize) fail(ErrorCode::TruncatedFrame, "frame ends inside header");

  const std::uint32_t width = bytes[20];
  const std::uint32_t height = bytes[21];
  const std::size_t total = encoded_size(width, height);
  if (bytes.size() < total)
    fail(ErrorCode::TruncatedFrame,
         "need " + std::to_string(total) + " bytes, have " + std::to_string(bytes.size()));

  const std::size_t body = total - kFrameCrcSize;
  if (crc32(bytes.first(body)) != get_le<std::uint32_t>(bytes, body))
    fail(ErrorCode::ChecksumMismatch, "CRC-32 does not match frame contents");

  if (bytes[5] > static_cast<std::uint8_t>(FrameType::Control))
    fail(ErrorCode::InvalidField, "unknown frame type " + std::to_string(bytes[5]));
  const auto finger = finger_from_code(bytes[6]);
  if (!finger) fail(ErrorCode::InvalidField, "unknown finger code " + std::to_string(bytes[6]));
  if (bytes[7] != 0) fail(ErrorCode::InvalidField, "reserved flags byte must be zero");

  DecodedFrame out;
  out.consumed = total;
  LogicalFrame& f = out.frame;
  f.type = static_cast<FrameType>(bytes[5]);
  f.finger = *finger;
  f.sequence = get_le<std::uint32_t>(bytes, 8);
  f.tick = get_le<std::uint64_t>(bytes, 12);
  f.width = width;
  f.height = height;
  f.values.resize(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = get_le<std::uint16_t>(bytes, kFrameHeaderSize + 2 * i);
  return out;
}

}  // namespace electroar
