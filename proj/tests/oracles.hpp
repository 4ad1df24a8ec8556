#pragma once
// Reference implementations written straight from the definitions. None of
// these call into the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace oracle {

// 2x2 mean rounded half up, computed the slow way in floating point.
inline std::vector<std::uint16_t> box_filter(const std::vector<std::uint16_t>& in, int w, int h) {
  std::vector<std::uint16_t> out;
  for (int j = 0; j + 1 < h; ++j) {
    for (int i = 0; i + 1 < w; ++i) {
      double s = 0;
      for (int dj = 0; dj < 2; ++dj)
        for (int di = 0; di < 2; ++di) s += in[(j + dj) * w + (i + di)];
      out.push_back(static_cast<std::uint16_t>(std::floor(s / 4.0 + 0.5)));
    }
  }
  return out;
}

// Bit-at-a-time reflected CRC-32, polynomial 0xEDB88320.
inline std::uint32_t crc32(const std::uint8_t* p, std::size_t n) {
  std::uint32_t c = 0xFFFFFFFFu;
  for (std::size_t k = 0; k < n; ++k) {
    c ^= p[k];
    for (int b = 0; b < 8; ++b) c = (c & 1u) ? (c >> 1) ^ 0xEDB88320u : c >> 1;
  }
  return ~c;
}

inline void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int b = 0; b < bytes; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

// Frame bytes assembled field by field from the documented layout.
inline std::vector<std::uint8_t> frame_bytes(int type, int finger, std::uint32_t seq, std::uint64_t tick, int w,
                                             int h, const std::vector<std::uint16_t>& values) {
  std::vector<std::uint8_t> out = {'E', 'A', 'R', 'F', 1};
  out.push_back(static_cast<std::uint8_t>(type));
  out.push_back(static_cast<std::uint8_t>(finger));
  out.push_back(0);
  put_le(out, seq, 4);
  put_le(out, tick, 8);
  out.push_back(static_cast<std::uint8_t>(w));
  out.push_back(static_cast<std::uint8_t>(h));
  for (auto v : values) put_le(out, v, 2);
  put_le(out, crc32(out.data(), out.size()), 4);
  return out;
}

// Rewrites the trailing CRC after a deliberate edit.
inline void reseal(std::vector<std::uint8_t>& frame) {
  const auto n = frame.size() - 4;
  const auto c = crc32(frame.data(), n);
  for (int b = 0; b < 4; ++b) frame[n + b] = static_cast<std::uint8_t>(c >> (8 * b));
}

inline double sigmoid(double a, double b, double k, double p) { return k / (1.0 + std::exp(a - b * p)); }

// Bar membership with exact arithmetic. Coordinates are doubled so the grid
// centre ((w-1)/2, (h-1)/2) becomes an integer point.
inline bool bar_lit(int deg, double thickness, int i, int j, int w, int h) {
  const long x = 2L * i - (w - 1);  // 2 (i - cx)
  const long y = 2L * j - (h - 1);  // 2 (j - cy)
  const double half2 = thickness;   // 2 * thickness / 2, in doubled units
  switch (deg) {
    case 0: return std::abs(y) <= half2;
    case 90: return std::abs(x) <= half2;
    // |y - x| / sqrt 2 <= half2  <=>  (y - x)^2 <= 2 half2^2
    case 45: return static_cast<double>((y - x) * (y - x)) <= 2.0 * half2 * half2 + 1e-9;
    case 135: return static_cast<double>((y + x) * (y + x)) <= 2.0 * half2 * half2 + 1e-9;
    default: return false;
  }
}

// Back-and-forth scroll phase: 0 -> pi over the first half cycle, back to 0.
inline double scroll_phase(std::uint64_t frame, std::uint32_t fpc) {
  const double u = static_cast<double>(frame % fpc) / fpc;
  return u <= 0.5 ? 2.0 * std::numbers::pi * u : 2.0 * std::numbers::pi * (1.0 - u);
}

inline bool vertex_contact(int vertices, double phase) {
  if (vertices == 0) return false;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int m = 0; m < vertices; ++m) {
    double d = std::fmod(std::abs(phase - two_pi * m / vertices), two_pi);
    d = std::min(d, two_pi - d);
    if (d < std::numbers::pi / 12.0 - 1e-9) return true;
  }
  return false;
}

// Maximal runs of `true` in a cyclic sequence; all-true counts as zero.
inline int cyclic_runs(const std::vector<bool>& v) {
  const auto n = v.size();
  int runs = 0;
  std::size_t on = 0;
  for (std::size_t i = 0; i < n; ++i) {
    on += v[i];
    if (v[i] && !v[(i + n - 1) % n]) ++runs;
  }
  return on == n ? 0 : runs;
}

// sorted[floor(q (n - 1))]
inline double lower_quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  return v[static_cast<std::size_t>(std::floor(q * (v.size() - 1)))];
}

}  // namespace oracle
