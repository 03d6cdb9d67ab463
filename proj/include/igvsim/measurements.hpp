// SPDX-License-Identifier: Apache-2.0
// measurements.hpp
// Values that cross the wire: sensor readings and the motor command. These
// carry no dependency on the simulated world, so navigation code can use them
// against any sensor backend.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace igvsim {

struct Rgb8 {
  std::uint8_t r{0};
  std::uint8_t g{0};
  std::uint8_t b{0};
  friend constexpr bool operator==(Rgb8, Rgb8) = default;
};

/// Desired forward speed (m/s) and turn rate (deg/s, CCW positive).
struct MotorCommand {
  double linear{0.0};
  double angular{0.0};
  friend bool operator==(const MotorCommand&, const MotorCommand&) = default;
};

struct LidarScan {
  std::vector<double> ranges;  // meters; beam 0 is the most clockwise (-fov/2)
  friend bool operator==(const LidarScan&, const LidarScan&) = default;
};

struct GpsFix {
  double lat{0.0};  // degrees
  double lon{0.0};  // degrees
  friend bool operator==(const GpsFix&, const GpsFix&) = default;
};

struct HeadingReading {
  double heading{0.0};  // degrees clockwise from north, [0, 360)
  friend bool operator==(const HeadingReading&, const HeadingReading&) = default;
};

struct CameraFrame {
  int width{0};
  int height{0};
  std::vector<std::uint8_t> pixels;  // RGB8, row-major, top row first

  Rgb8 at(int col, int row) const {
    const std::size_t i =
        (static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col)) * 3;
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }
  friend bool operator==(const CameraFrame&, const CameraFrame&) = default;
};

}  // namespace igvsim
