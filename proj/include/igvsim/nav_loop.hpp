// SPDX-License-Identifier: Apache-2.0
// nav_loop.hpp
// Fixed-rate (or scan-driven) control loop. It sees only SensorRole and
// MotorControllerRole, so any backend can be plugged in without changes here.
#pragma once

#include "igvsim/measurements.hpp"
#include "igvsim/nav.hpp"
#include "igvsim/roles.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <thread>

namespace igvsim {

struct NavInputs {
  SensorRole<LidarScan>& lidar;
  SensorRole<CameraFrame>* camera{nullptr};
  SensorRole<GpsFix>* gps{nullptr};
  SensorRole<HeadingReading>* compass{nullptr};
};

struct ControlLoopOptions {
  double control_rate{20.0};  // Hz, periodic mode
  /// One command per new LIDAR scan, after the camera frame of the same
  /// sequence number arrives (or the wait times out).
  bool lockstep{false};
  std::chrono::milliseconds camera_sync_timeout{2000};
  std::uint64_t max_cycles{0};  // 0 = unbounded
  const std::atomic<bool>* stop{nullptr};
};

struct CycleRecord {
  std::uint64_t cycle{0};
  double wall_time{0.0};
  std::uint64_t lidar_seq{0};
  std::uint64_t camera_seq{0};
  double min_front_range{0.0};
  MotorCommand command;
  const LidarScan* scan{nullptr};
  const CameraFrame* frame{nullptr};
};

struct LoopSummary {
  std::uint64_t cycles{0};
  std::string exit_reason;
  SensorStatus lidar{SensorStatus::none_yet};
  SensorStatus camera{SensorStatus::none_yet};
  SensorStatus gps{SensorStatus::none_yet};
  SensorStatus compass{SensorStatus::none_yet};
};

inline const char* to_string(SensorStatus s) {
  switch (s) {
    case SensorStatus::none_yet: return "none-yet";
    case SensorStatus::live: return "live";
    case SensorStatus::closed: return "closed";
  }
  return "unknown";
}

using CycleObserver = std::function<void(const CycleRecord&)>;

inline LoopSummary run_control_loop(NavInputs in, MotorControllerRole& motor, const NavParams& params,
                                    const ControlLoopOptions& opt, const CycleObserver& observe = {}) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const auto period = std::chrono::duration_cast<clock::duration>(
      std::chrono::duration<double>(1.0 / (opt.control_rate > 0.0 ? opt.control_rate : 20.0)));
  constexpr auto kPoll = std::chrono::microseconds(200);

  LoopSummary summary;
  std::uint64_t last_lidar_seq = 0;
  auto next_wake = start;
  auto stopping = [&] { return opt.stop != nullptr && opt.stop->load(); };

  while (true) {
    if (stopping()) {
      summary.exit_reason = "stop requested";
      break;
    }
    if (opt.max_cycles != 0 && summary.cycles >= opt.max_cycles) {
      summary.exit_reason = "cycle limit";
      break;
    }

    Latest<LidarScan> scan = in.lidar.latest();
    if (opt.lockstep) {
      if (scan.seq() <= last_lidar_seq) {
        if (scan.closed()) {
          summary.exit_reason = "lidar channel closed";
          break;
        }
        std::this_thread::sleep_for(kPoll);
        continue;
      }
    } else {
      std::this_thread::sleep_until(next_wake);
      next_wake += period;
      scan = in.lidar.latest();
      if (scan.closed()) {
        summary.exit_reason = "lidar channel closed";
        break;
      }
      if (!scan.reading) continue;
    }

    std::optional<Reading<CameraFrame>> frame;
    if (in.camera != nullptr) {
      Latest<CameraFrame> cam = in.camera->latest();
      if (opt.lockstep) {
        const auto deadline = clock::now() + opt.camera_sync_timeout;
        while (cam.status != SensorStatus::closed && cam.seq() < scan.seq() && clock::now() < deadline &&
               !stopping()) {
          std::this_thread::sleep_for(kPoll);
          cam = in.camera->latest();
        }
      }
      frame = cam.reading;
    }
    std::optional<Reading<GpsFix>> fix;
    if (in.gps != nullptr) fix = in.gps->latest().reading;

    const LidarScan& ranges = scan.reading->value;
    const NavDecision d = navigate_decide(ranges, frame ? &frame->value : nullptr, fix ? &fix->value : nullptr, params);
    motor.set_speeds(d.command.linear, d.command.angular);
    last_lidar_seq = scan.seq();
    ++summary.cycles;

    if (observe) {
      CycleRecord rec;
      rec.cycle = summary.cycles;
      rec.wall_time = std::chrono::duration<double>(clock::now() - start).count();
      rec.lidar_seq = scan.seq();
      rec.camera_seq = frame ? frame->seq : 0;
      rec.min_front_range = d.min_front_range;
      rec.command = d.command;
      rec.scan = &ranges;
      rec.frame = frame ? &frame->value : nullptr;
      observe(rec);
    }
  }

  summary.lidar = in.lidar.latest().status;
  if (in.camera != nullptr) summary.camera = in.camera->latest().status;
  if (in.gps != nullptr) summary.gps = in.gps->latest().status;
  if (in.compass != nullptr) summary.compass = in.compass->latest().status;
  return summary;
}

inline const char* kNavLogHeader = "cycle,wall_time,lidar_seq,min_front_range_m,cmd_linear_mps,cmd_angular_degps\n";

inline std::string format_nav_log_row(const CycleRecord& r) {
  char buf[192];
  std::snprintf(buf, sizeof(buf), "%llu,%.6f,%llu,%.6f,%.6f,%.6f\n", static_cast<unsigned long long>(r.cycle),
                r.wall_time, static_cast<unsigned long long>(r.lidar_seq), r.min_front_range, r.command.linear,
                r.command.angular);
  return buf;
}

}  // namespace igvsim
