#include <numbers>

#include "doctest.h"
#include "electroar/patterns.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace electroar;
using support::code_of;

TEST_CASE("0 degree bar lights exactly rows 4 and 5") {
  const auto g = generate_bar({0, 1.5, 40000});
  for (std::uint32_t j = 0; j < 10; ++j)
    for (std::uint32_t i = 0; i < 5; ++i) CHECK(g.at(i, j) == ((j == 4 || j == 5) ? 40000 : 0));
}

TEST_CASE("bars match the distance predicate") {
  for (int deg : kBarOrientations) {
    for (double t : {0.5, 1.0, 1.5, 2.0, 3.0, 4.5}) {
      const auto g = generate_bar({deg, t, 1234});
      for (int j = 0; j < 10; ++j)
        for (int i = 0; i < 5; ++i) {
          INFO("deg " << deg << " t " << t << " cell " << i << "," << j);
          CHECK((g.at(i, j) == 1234) == oracle::bar_lit(deg, t, i, j, 5, 10));
          CHECK((g.at(i, j) == 0 || g.at(i, j) == 1234));
        }
    }
  }
}

TEST_CASE("bars on other geometries") {
  const GridGeometry g{7, 7, 2.0};
  for (int deg : kBarOrientations) {
    const auto bar = generate_bar({deg, 1.0, 5}, g);
    for (int j = 0; j < 7; ++j)
      for (int i = 0; i < 7; ++i) CHECK((bar.at(i, j) == 5) == oracle::bar_lit(deg, 1.0, i, j, 7, 7));
  }
}

TEST_CASE("amplitude 0 gives an empty grid") {
  for (int deg : kBarOrientations) {
    const auto bar = generate_bar({deg, 1.5, 0});
    for (auto v : bar.values()) CHECK(v == 0);
  }
}

TEST_CASE("45 and 135 degree bars mirror each other") {
  const auto a = generate_bar({45, 1.5, 40000});
  const auto b = generate_bar({135, 1.5, 40000});
  for (std::uint32_t j = 0; j < 10; ++j)
    for (std::uint32_t i = 0; i < 5; ++i) CHECK(a.at(i, j) == b.at(4 - i, j));
}

TEST_CASE("bar validation and labels") {
  CHECK(code_of([] { generate_bar({30, 1.5, 1}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { generate_bar({0, 0.0, 1}); }) == ErrorCode::InvalidArgument);
  CHECK(bar_label(135) == "bar_135");
}

TEST_CASE("scroll phase is a triangle wave") {
  for (std::uint64_t f = 0; f < 2000; ++f)
    CHECK(scroll_phase(f, 360) == doctest::Approx(oracle::scroll_phase(f, 360)).epsilon(1e-12));
  CHECK(scroll_phase(180, 360) == doctest::Approx(std::numbers::pi));
  CHECK(scroll_phase(0, 360) == 0.0);
}

TEST_CASE("ridge intervals per cycle follow the vertex count") {
  const std::pair<CrossSection, int> cases[] = {
      {CrossSection::Circle, 0}, {CrossSection::Triangle, 3}, {CrossSection::Square, 4}, {CrossSection::Hexagon, 6}};
  for (auto [section, want] : cases) {
    PrismSpec spec;
    spec.cross_section = section;
    const auto seq = generate_scroll(spec, 360, 1, 30000);
    std::vector<bool> ridge;
    std::vector<bool> expected;
    for (std::size_t f = 0; f < seq.frames.size(); ++f) {
      ridge.push_back(seq.frames[f].index_ridge);
      expected.push_back(oracle::vertex_contact(vertex_count(section), oracle::scroll_phase(f, 360)));
    }
    INFO(to_string(section));
    CHECK(ridge == expected);
    CHECK(oracle::cyclic_runs(ridge) == want);
  }
}

TEST_CASE("scroll grids: band, ridge, thumb offset and clipping") {
  PrismSpec spec;
  spec.cross_section = CrossSection::Triangle;
  const auto seq = generate_scroll(spec, 120, 2, 50000);
  for (std::size_t f = 0; f < seq.frames.size(); ++f) {
    const auto& fr = seq.frames[f];
    const bool thumb_contact = oracle::vertex_contact(3, oracle::scroll_phase(f, 120) + std::numbers::pi);
    CHECK(fr.thumb_ridge == thumb_contact);
    for (int j = 0; j < 10; ++j)
      for (int i = 0; i < 5; ++i) {
        const bool lit = oracle::bar_lit(90, 3.0, i, j, 5, 10);
        const std::uint16_t index_level = fr.index_ridge ? 65535 : 50000;  // 75000 clips
        const std::uint16_t thumb_level = fr.thumb_ridge ? 65535 : 50000;
        CHECK(fr.index.at(i, j) == (lit ? index_level : 0));
        CHECK(fr.thumb.at(i, j) == (lit ? thumb_level : 0));
      }
  }
}

TEST_CASE("unclipped ridge is 1.5x the base") {
  PrismSpec spec;
  spec.cross_section = CrossSection::Square;
  const auto seq = generate_scroll(spec, 360, 1, 20000);
  CHECK(seq.frames[0].index_ridge);
  CHECK(seq.frames[0].index.at(2, 0) == 30000);
  CHECK(seq.frames[45].index.at(2, 0) == 20000);
  CHECK(seq.frames[45].index.at(0, 0) == 0);
}

TEST_CASE("circle frames never change") {
  const auto seq = generate_scroll(PrismSpec{}, 72, 3, 43690);
  for (const auto& f : seq.frames) {
    CHECK(f.index == seq.frames[0].index);
    CHECK(f.thumb == seq.frames[0].index);
    CHECK_FALSE(f.index_ridge);
  }
}

TEST_CASE("ten cycles repeat the first exactly") {
  PrismSpec spec;
  spec.cross_section = CrossSection::Hexagon;
  const auto seq = generate_scroll(spec, 96, 10, 43690);
  REQUIRE(seq.frames.size() == 960);
  for (std::size_t f = 96; f < seq.frames.size(); ++f) {
    CHECK(seq.frames[f].index == seq.frames[f % 96].index);
    CHECK(seq.frames[f].thumb == seq.frames[f % 96].thumb);
  }
}

TEST_CASE("scroll validation and names") {
  CHECK(code_of([] { generate_scroll(PrismSpec{}, 4, 1, 1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { generate_scroll(PrismSpec{}, 360, 0, 1); }) == ErrorCode::InvalidArgument);
  PrismSpec bad;
  bad.stick_radius_mm = 0;
  CHECK(code_of([&] { generate_scroll(bad, 360, 1, 1); }) == ErrorCode::InvalidArgument);
  CHECK(cross_section_from_name("hexagon") == CrossSection::Hexagon);
  CHECK_FALSE(cross_section_from_name("pentagon").has_value());
  CHECK(vertex_count(CrossSection::Circle) == 0);
}

TEST_CASE("recording round trip of a 1200-frame scroll") {
  support::TempDir dir("rec");
  PrismSpec spec;
  spec.cross_section = CrossSection::Square;
  const auto rec = scroll_recording(generate_scroll(spec, 120, 5, 43690));
  REQUIRE(rec.frames.size() == 1200);
  record(dir / "s.earlog", rec);
  const auto back = replay(dir / "s.earlog");
  CHECK(back.frames == rec.frames);
  CHECK(back.header.meta == rec.header.meta);
  CHECK(back.header.geometry == rec.header.geometry);
  CHECK(*back.header.find("kind") == "scroll");
  CHECK(*back.header.find("label") == "square");
  CHECK(rec.frames[0].finger == FingerId::Index);
  CHECK(rec.frames[1].finger == FingerId::Thumb);
  CHECK(rec.frames[1].tick == 0);
  CHECK(rec.frames[2].tick == 1);
}

TEST_CASE("truncated recording yields complete frames then CorruptFrame") {
  support::TempDir dir("trunc");
  const auto rec = bar_recording({45, 1.5, 40000}, 10);
  record(dir / "b.earlog", rec);
  const auto full = support::slurp(dir / "b.earlog");
  const auto body = full.find("\n\n") + 2;
  const auto frame = encoded_size(5, 10);
  REQUIRE(full.size() == body + 10 * frame);
  support::spit(dir / "cut.earlog", full.substr(0, body + 3 * frame + frame / 2));
  RecordingReader reader(dir / "cut.earlog");
  for (int i = 0; i < 3; ++i) CHECK(reader.next().has_value());
  CHECK(code_of([&] { reader.next(); }) == ErrorCode::CorruptFrame);
}

TEST_CASE("header-only recording is an empty stream") {
  support::TempDir dir("empty");
  support::spit(dir / "e.earlog", "earlog 1\ngeometry 5x10\ntick_rate 120\nmeta kind bar\n\n");
  RecordingReader reader(dir / "e.earlog");
  CHECK_FALSE(reader.next().has_value());
  CHECK(reader.header().tick_rate == 120);
  CHECK(*reader.header().find("kind") == "bar");
}

TEST_CASE("recording header errors") {
  support::TempDir dir("hdr");
  auto code_for = [&](const std::string& content) {
    support::spit(dir / "x.earlog", content);
    return code_of([&] { RecordingReader r(dir / "x.earlog"); });
  };
  CHECK(code_for("") == ErrorCode::BadHeader);
  CHECK(code_for("hello\n\n") == ErrorCode::BadHeader);
  CHECK(code_for("earlog 2\ngeometry 5x10\ntick_rate 120\n\n") == ErrorCode::VersionMismatch);
  CHECK(code_for("earlog 1\ngeometry 5x10\n\n") == ErrorCode::BadHeader);
  CHECK(code_for("earlog 1\ngeometry 5x10\ntick_rate 120\n") == ErrorCode::BadHeader);
  CHECK(code_for("earlog 1\ngeometry fivexten\ntick_rate 120\n\n") == ErrorCode::BadHeader);
  CHECK(code_of([&] { RecordingReader r(dir / "missing.earlog"); }) == ErrorCode::IoError);
}

TEST_CASE("body frames must match the header geometry") {
  support::TempDir dir("geom");
  auto text = std::string("earlog 1\ngeometry 4x5\ntick_rate 120\n\n");
  LogicalFrame f;
  f.width = 5;
  f.height = 10;
  f.values.assign(50, 1);
  const auto bytes = encode(f);
  text.append(bytes.begin(), bytes.end());
  support::spit(dir / "g.earlog", text);
  RecordingReader reader(dir / "g.earlog");
  CHECK(code_of([&] { reader.next(); }) == ErrorCode::GeometryMismatch);
}

TEST_CASE("writer rejects mismatched or backwards frames") {
  support::TempDir dir("writer");
  RecordingWriter w(dir / "w.earlog", RecordingHeader{});
  LogicalFrame f;
  f.width = 5;
  f.height = 10;
  f.values.assign(50, 0);
  f.tick = 5;
  w.write(f);
  f.tick = 4;
  CHECK(code_of([&] { w.write(f); }) == ErrorCode::InvalidArgument);
  LogicalFrame small;
  small.width = 1;
  small.height = 1;
  small.values = {0};
  small.tick = 9;
  CHECK(code_of([&] { w.write(small); }) == ErrorCode::GeometryMismatch);
  w.close();
  CHECK(w.frames_written() == 1);
  CHECK(replay(dir / "w.earlog").frames.size() == 1);
}

TEST_CASE("bar recording carries one frame per tick") {
  const auto rec = bar_recording({90, 1.5, 40000}, 50, FingerId::Middle);
  REQUIRE(rec.frames.size() == 50);
  for (std::size_t t = 0; t < 50; ++t) {
    CHECK(rec.frames[t].tick == t);
    CHECK(rec.frames[t].sequence == t);
    CHECK(rec.frames[t].finger == FingerId::Middle);
    CHECK(rec.frames[t].to_grid() == generate_bar({90, 1.5, 40000}));
  }
  CHECK(*rec.header.find("label") == "bar_90");
  CHECK(*rec.header.find("finger") == "middle");
}
