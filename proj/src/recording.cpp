#include <fstream>
#include <iterator>
#include <sstream>

#include "electroar/error.hpp"
#include "electroar/patterns.hpp"
#include "text.hpp"

namespace electroar {

const std::string* RecordingHeader::find(std::string_view key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return &v;
  return nullptr;
}

void RecordingHeader::set(std::string key, std::string value) {
  for (auto& [k, v] : meta) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  meta.emplace_back(std::move(key), std::move(value));
}

Recording bar_recording(const BarPattern& pattern, std::uint64_t frame_count, FingerId finger) {
  if (frame_count == 0) fail(ErrorCode::InvalidArgument, "bar recording needs at least one frame");
  const PressureGrid grid = generate_bar(pattern);
  Recording rec;
  rec.header.geometry = grid.geometry();
  rec.header.set("kind", "bar");
  rec.header.set("label", bar_label(pattern.orientation_deg));
  rec.header.set("orientation_deg", std::to_string(pattern.orientation_deg));
  rec.header.set("thickness", text::format_exact(pattern.thickness_sensels));
  rec.header.set("amplitude", std::to_string(pattern.amplitude));
  rec.header.set("finger", std::string(to_string(finger)));
  rec.header.set("synthetic", "true");
  FollowerSession follower;
  rec.frames.reserve(frame_count);
  for (std::uint64_t t = 0; t < frame_count; ++t) rec.frames.push_back(follower.make_pressure_frame(grid, finger, t));
  return rec;
}

Recording scroll_recording(const ScrollSequence& seq) {
  Recording rec;
  rec.header.geometry = GridGeometry::sensor_preset();
  rec.header.set("kind", "scroll");
  rec.header.set("label", std::string(to_string(seq.prism.cross_section)));
  rec.header.set("shape", std::string(to_string(seq.prism.cross_section)));
  rec.header.set("frames_per_cycle", std::to_string(seq.frames_per_cycle));
  rec.header.set("cycles", std::to_string(seq.cycles));
  rec.header.set("amplitude", std::to_string(seq.amplitude));
  rec.header.set("synthetic", "true");
  FollowerSession follower;
  rec.frames.reserve(seq.frames.size() * 2);
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    const std::uint64_t tick = t * seq.ticks_per_frame;
    rec.frames.push_back(follower.make_pressure_frame(seq.frames[t].index, FingerId::Index, tick));
    rec.frames.push_back(follower.make_pressure_frame(seq.frames[t].thumb, FingerId::Thumb, tick));
  }
  return rec;
}

namespace {

std::string header_text(const RecordingHeader& header) {
  std::ostringstream out;
  out << "earlog " << header.version << '\n'
      << "geometry " << header.geometry.width << 'x' << header.geometry.height << '\n'
      << "tick_rate " << header.tick_rate << '\n';
  for (const auto& [k, v] : header.meta) {
    if (k.empty() || k.find_first_of(" \n") != std::string::npos || v.find('\n') != std::string::npos)
      fail(ErrorCode::InvalidArgument, "meta keys need no spaces and values no newlines");
    out << "meta " << k << ' ' << v << '\n';
  }
  out << '\n';
  return out.str();
}

}  // namespace

RecordingWriter::RecordingWriter(const std::filesystem::path& path, const RecordingHeader& header)
    : path_(path), header_(header) {
  if (header_.version != kRecordingVersion) fail(ErrorCode::VersionMismatch, "only recording version 1 is written");
  header_.geometry.validate();
  const auto text = header_text(header_);
  buffer_.assign(text.begin(), text.end());
}

void RecordingWriter::write(const LogicalFrame& frame) {
  if (closed_) fail(ErrorCode::InvalidArgument, "recording already closed");
  if (frame.width != header_.geometry.width || frame.height != header_.geometry.height)
    fail(ErrorCode::GeometryMismatch, "frame geometry differs from recording header");
  if (last_tick_ && frame.tick < *last_tick_) fail(ErrorCode::InvalidArgument, "recording frames must be tick-ordered");
  const auto bytes = encode(frame);
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
  last_tick_ = frame.tick;
  ++written_;
}

void RecordingWriter::close() {
  if (closed_) return;
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path_.string());
  out.write(reinterpret_cast<const char*>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
  if (!out) fail(ErrorCode::IoError, "write failed for " + path_.string());
  closed_ = true;
}

RecordingReader::RecordingReader(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::size_t pos = 0;
  auto next_line = [&]() -> std::optional<std::string> {
    const auto start = pos;
    while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    if (pos >= bytes.size()) return std::nullopt;
    std::string line(bytes.begin() + static_cast<std::ptrdiff_t>(start), bytes.begin() + static_cast<std::ptrdiff_t>(pos));
    ++pos;
    return line;
  };

  const auto first = next_line();
  if (!first || first->rfind("earlog ", 0) != 0) fail(ErrorCode::BadHeader, "missing `earlog` signature line");
  const auto version = text::parse_int<std::uint32_t>(std::string_view(*first).substr(7));
  if (!version) fail(ErrorCode::BadHeader, "malformed version in signature line");
  if (*version != kRecordingVersion)
    fail(ErrorCode::VersionMismatch, "recording version " + std::to_string(*version));
  header_.version = *version;

  bool have_geometry = false;
  bool have_rate = false;
  while (true) {
    const auto line = next_line();
    if (!line) fail(ErrorCode::BadHeader, "header is not terminated by a blank line");
    if (line->empty()) break;
    const std::string_view view(*line);
    if (view.rfind("geometry ", 0) == 0) {
      const auto dims = text::split(view.substr(9), 'x');
      const auto w = dims.size() == 2 ? text::parse_int<std::uint32_t>(dims[0]) : std::nullopt;
      const auto h = dims.size() == 2 ? text::parse_int<std::uint32_t>(dims[1]) : std::nullopt;
      if (!w || !h || *w < 1 || *h < 1) fail(ErrorCode::BadHeader, "malformed geometry line");
      header_.geometry = {*w, *h, 2.0};
      have_geometry = true;
    } else if (view.rfind("tick_rate ", 0) == 0) {
      const auto rate = text::parse_int<std::uint32_t>(view.substr(10));
      if (!rate || *rate == 0) fail(ErrorCode::BadHeader, "malformed tick_rate line");
      header_.tick_rate = *rate;
      have_rate = true;
    } else if (view.rfind("meta ", 0) == 0) {
      const auto rest = view.substr(5);
      const auto space = rest.find(' ');
      if (space == std::string_view::npos || space == 0) fail(ErrorCode::BadHeader, "malformed meta line");
      header_.meta.emplace_back(std::string(rest.substr(0, space)), std::string(rest.substr(space + 1)));
    } else {
      fail(ErrorCode::BadHeader, "unknown header line: " + *line);
    }
  }
  if (!have_geometry || !have_rate) fail(ErrorCode::BadHeader, "header needs geometry and tick_rate lines");
  body_.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
}

std::optional<LogicalFrame> RecordingReader::next() {
  if (offset_ >= body_.size()) return std::nullopt;
  DecodedFrame decoded;
  try {
    decoded = decode(std::span<const std::uint8_t>(body_).subspan(offset_));
  } catch (const Error& e) {
    fail(ErrorCode::CorruptFrame, "at body offset " + std::to_string(offset_) + ": " + e.what());
  }
  const LogicalFrame& frame = decoded.frame;
  if (frame.width != header_.geometry.width || frame.height != header_.geometry.height)
    fail(ErrorCode::GeometryMismatch, "body frame geometry differs from header");
  if (last_tick_ && frame.tick < *last_tick_)
    fail(ErrorCode::CorruptFrame, "body frames are not tick-ordered");
  last_tick_ = frame.tick;
  offset_ += decoded.consumed;
  return std::move(decoded.frame);
}

void record(const std::filesystem::path& path, const Recording& recording) {
  RecordingWriter writer(path, recording.header);
  for (const auto& frame : recording.frames) writer.write(frame);
  writer.close();
}

Recording replay(const std::filesystem::path& path, const TickPacer* pacer) {
  RecordingReader reader(path);
  Recording rec;
  rec.header = reader.header();
  while (auto frame = reader.next()) {
    if (pacer) pacer->wait_for(frame->tick);
    rec.frames.push_back(std::move(*frame));
  }
  return rec;
}

}  // namespace electroar
