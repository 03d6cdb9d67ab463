// SPDX-License-Identifier: Apache-2.0
// recording.hpp
// Record of the inputs a control loop consumed, one entry per cycle, and a
// driver that replays it through stub sensors.
//
// File layout: a sequence of wire frames. Each cycle is a 16-byte header frame
// (u64 lidar seq, u64 camera seq; 0 = no frame), the lidar payload frame, then
// the camera payload frame when the camera seq is nonzero.
#pragma once

#include "igvsim/measurements.hpp"
#include "igvsim/stubs.hpp"
#include "igvsim/wire.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace igvsim {

struct RecordedCycle {
  std::uint64_t lidar_seq{0};
  LidarScan scan;
  std::uint64_t camera_seq{0};
  std::optional<CameraFrame> frame;
};

class StreamRecorder {
 public:
  explicit StreamRecorder(const std::string& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot open recording file: " + path);
  }

  void append(std::uint64_t lidar_seq, const LidarScan& scan, std::uint64_t camera_seq, const CameraFrame* frame) {
    if (frame == nullptr) camera_seq = 0;
    wire::Bytes header;
    wire::put_u32(header, static_cast<std::uint32_t>(lidar_seq));
    wire::put_u32(header, static_cast<std::uint32_t>(lidar_seq >> 32));
    wire::put_u32(header, static_cast<std::uint32_t>(camera_seq));
    wire::put_u32(header, static_cast<std::uint32_t>(camera_seq >> 32));
    write(wire::frame_write(header));
    write(wire::frame_write(wire::encode_lidar(scan)));
    if (camera_seq != 0) write(wire::frame_write(wire::encode_camera(*frame)));
    out_.flush();
  }

 private:
  void write(const wire::Bytes& b) { out_.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size())); }
  std::ofstream out_;
};

namespace detail {
struct FileSource {
  std::ifstream& in;
  std::size_t read_some(std::span<std::uint8_t> buf) {
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    return static_cast<std::size_t>(in.gcount());
  }
};
inline std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t at) {
  return static_cast<std::uint64_t>(wire::get_u32(in, at)) | (static_cast<std::uint64_t>(wire::get_u32(in, at + 4)) << 32);
}
}  // namespace detail

inline std::vector<RecordedCycle> load_recording(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open recording file: " + path);
  detail::FileSource src{in};
  std::vector<RecordedCycle> out;
  while (auto header = wire::frame_read(src)) {
    if (header->size() != 16) throw std::runtime_error("corrupt recording: bad cycle header");
    RecordedCycle c;
    c.lidar_seq = detail::get_u64(*header, 0);
    c.camera_seq = detail::get_u64(*header, 8);
    auto lidar = wire::frame_read(src);
    if (!lidar) throw std::runtime_error("corrupt recording: missing lidar payload");
    auto scan = wire::decode_lidar(*lidar);
    if (!scan) throw std::runtime_error("corrupt recording: " + scan.error());
    c.scan = std::move(scan.value());
    if (c.camera_seq != 0) {
      auto cam = wire::frame_read(src);
      if (!cam) throw std::runtime_error("corrupt recording: missing camera payload");
      auto frame = wire::decode_camera(*cam);
      if (!frame) throw std::runtime_error("corrupt recording: " + frame.error());
      c.frame = std::move(frame.value());
    }
    out.push_back(std::move(c));
  }
  return out;
}

/// Feeds recorded cycles to stub sensors in lockstep with the loop: each
/// cycle's readings are published only after the previous command arrived.
/// Closes the LIDAR stub at the end so the loop exits.
inline bool replay_recording(const std::vector<RecordedCycle>& cycles, StubSensor<LidarScan>& lidar,
                             StubSensor<CameraFrame>* camera, StubMotorController& motor,
                             std::chrono::milliseconds per_cycle_timeout = std::chrono::milliseconds(5000)) {
  bool ok = true;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const RecordedCycle& c = cycles[i];
    if (camera != nullptr && c.frame) camera->push(*c.frame, c.camera_seq);
    lidar.push(c.scan, c.lidar_seq);
    if (!motor.wait_for(i + 1, per_cycle_timeout)) {
      ok = false;
      break;
    }
  }
  lidar.close();
  if (camera != nullptr) camera->close();
  return ok;
}

}  // namespace igvsim
