#pragma once

#include <cstdint>
#include <string_view>

namespace octmc {

// World frame: micrometres, Z grows downward (deeper into tissue), origin at
// the scanner's top-of-window corner.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

// Segmentation classes, stored one byte per voxel.
enum class Label : std::uint8_t { background = 0, ilm = 1, rpe = 2, needle = 3 };

inline constexpr int kLabelCount = 4;

constexpr std::uint8_t to_byte(Label label) { return static_cast<std::uint8_t>(label); }

constexpr std::string_view label_name(Label label) {
  switch (label) {
    case Label::background:
      return "background";
    case Label::ilm:
      return "ILM";
    case Label::rpe:
      return "RPE";
    case Label::needle:
      return "needle";
  }
  return "unknown";
}

}  // namespace octmc
