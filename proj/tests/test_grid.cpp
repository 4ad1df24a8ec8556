#include <random>

#include "doctest.h"
#include "electroar/error.hpp"
#include "electroar/grid.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace electroar;
using support::code_of;

namespace {

PressureGrid make(std::uint32_t w, std::uint32_t h, std::vector<std::uint16_t> v) {
  return PressureGrid(GridGeometry{w, h, 2.0}, std::move(v));
}

}  // namespace

TEST_CASE("2x2 filter of [[4,8],[0,4]] is [4]") {
  const auto out = spatial_filter(make(2, 2, {4, 8, 0, 4}));
  CHECK(out.width() == 1);
  CHECK(out.height() == 1);
  CHECK(out.at(0, 0) == 4);
}

TEST_CASE("constant sensor grid filters to the same constant") {
  for (std::uint16_t c : {0, 1, 777, 65535}) {
    const auto out = spatial_filter(PressureGrid::filled(GridGeometry::sensor_preset(), c));
    CHECK(out.width() == 4);
    CHECK(out.height() == 9);
    for (auto v : out.values()) CHECK(v == c);
  }
}

TEST_CASE("filter rounds half up") {
  CHECK(spatial_filter(make(2, 2, {1, 1, 0, 0})).at(0, 0) == 1);  // 0.5
  CHECK(spatial_filter(make(2, 2, {1, 0, 0, 0})).at(0, 0) == 0);  // 0.25
  CHECK(spatial_filter(make(2, 2, {3, 3, 0, 0})).at(0, 0) == 2);  // 1.5
  CHECK(spatial_filter(make(2, 2, {3, 0, 0, 0})).at(0, 0) == 1);  // 0.75
  CHECK(spatial_filter(make(2, 2, {65535, 65535, 65535, 65534})).at(0, 0) == 65535);
}

TEST_CASE("filter matches brute-force oracle on random grids") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> value(0, 65535);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint16_t> in(50);
    for (auto& v : in) v = static_cast<std::uint16_t>(value(rng));
    const auto got = spatial_filter(make(5, 10, in));
    const auto want = oracle::box_filter(in, 5, 10);
    REQUIRE(got.values().size() == want.size());
    for (std::size_t k = 0; k < want.size(); ++k) CHECK(got.values()[k] == want[k]);
  }
}

TEST_CASE("filter on arbitrary shapes keeps the storage convention") {
  std::vector<std::uint16_t> in(7 * 3);
  for (std::size_t k = 0; k < in.size(); ++k) in[k] = static_cast<std::uint16_t>(k * 13);
  const auto got = spatial_filter(make(7, 3, in));
  CHECK(got.width() == 6);
  CHECK(got.height() == 2);
  const auto want = oracle::box_filter(in, 7, 3);
  for (std::size_t k = 0; k < want.size(); ++k) CHECK(got.values()[k] == want[k]);
}

TEST_CASE("degenerate grids are rejected by the filter") {
  CHECK(code_of([] { spatial_filter(make(1, 5, {1, 2, 3, 4, 5})); }) == ErrorCode::DegenerateGrid);
  CHECK(code_of([] { spatial_filter(make(3, 1, {1, 2, 3})); }) == ErrorCode::DegenerateGrid);
}

TEST_CASE("grid construction validates size") {
  CHECK(code_of([] { make(2, 2, {1, 2, 3}); }) == ErrorCode::GeometryMismatch);
  CHECK(code_of([] { make(0, 2, {}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { make(2, 2, {1, 2, 3, 4}).at(2, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("resampling picks rows 0,2,4,6,8") {
  std::vector<std::uint16_t> in;
  for (std::uint16_t j = 0; j < 9; ++j)
    for (int i = 0; i < 4; ++i) in.push_back(j);
  const auto out = resample_to_electrodes(make(4, 9, in), GridGeometry::electrode_preset());
  REQUIRE(out.width() == 4);
  REQUIRE(out.height() == 5);
  for (std::uint32_t j = 0; j < 5; ++j)
    for (std::uint32_t i = 0; i < 4; ++i) CHECK(out.at(i, j) == 2 * j);
}

TEST_CASE("resampling a constant grid stays constant") {
  const auto out =
      resample_to_electrodes(PressureGrid::filled({4, 9, 2.0}, 4242), GridGeometry::electrode_preset());
  for (auto v : out.values()) CHECK(v == 4242);
}

TEST_CASE("columns pass through resampling untouched") {
  std::vector<std::uint16_t> in(36);
  for (std::size_t k = 0; k < in.size(); ++k) in[k] = static_cast<std::uint16_t>(100 * (k / 4) + k % 4);
  const auto out = resample_to_electrodes(make(4, 9, in), GridGeometry::electrode_preset());
  for (std::uint32_t j = 0; j < 5; ++j)
    for (std::uint32_t i = 0; i < 4; ++i) CHECK(out.at(i, j) == in[(2 * j) * 4 + i]);
}

TEST_CASE("custom row maps and mismatches") {
  std::vector<std::uint16_t> in(12);
  for (std::size_t k = 0; k < in.size(); ++k) in[k] = static_cast<std::uint16_t>(k);
  const std::uint32_t rows[] = {2, 0};
  const auto out = resample_to_electrodes(make(4, 3, in), {4, 2, 2.0}, std::span<const std::uint32_t>(rows));
  CHECK(out.at(0, 0) == 8);
  CHECK(out.at(3, 1) == 3);

  CHECK(code_of([] { resample_to_electrodes(PressureGrid::filled({5, 9, 2.0}, 1), {4, 5, 2.0}); }) ==
        ErrorCode::GeometryMismatch);
  CHECK(code_of([] { resample_to_electrodes(PressureGrid::filled({4, 8, 2.0}, 1), {4, 5, 2.0}); }) ==
        ErrorCode::GeometryMismatch);
  const std::uint32_t bad[] = {0, 9};
  CHECK(code_of([&] {
          resample_to_electrodes(PressureGrid::filled({4, 9, 2.0}, 1), {4, 2, 2.0}, std::span<const std::uint32_t>(bad));
        }) == ErrorCode::GeometryMismatch);
}

TEST_CASE("finger codes and names") {
  CHECK(finger_from_code(0) == FingerId::Thumb);
  CHECK(finger_from_code(2) == FingerId::Middle);
  CHECK_FALSE(finger_from_code(3).has_value());
  CHECK(finger_from_name("index") == FingerId::Index);
  CHECK(to_string(FingerId::Thumb) == "thumb");
}
