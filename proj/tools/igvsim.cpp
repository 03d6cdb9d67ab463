// SPDX-License-Identifier: Apache-2.0
// igvsim: headless simulator. Connects to the robot software's listeners,
// steps the world at a fixed rate and streams sensor frames.

#include "igvsim/sim.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv) {
  using namespace igvsim;
  CLI::App app{"Headless IGVC course simulator"};

  SimConfig cfg;
  std::string host = "127.0.0.1";
  std::optional<std::uint16_t> gps_port, compass_port, lidar_port, camera_port;
  std::uint16_t motor_port = 0;
  bool realtime = false, fast = false;
  bool no_camera = false, no_lidar = false, no_gps = false, no_compass = false;
  double duration = 0.0, cmd_timeout = 0.0, connect_timeout = 10.0;
  std::string drive_params_path;

  app.add_option("--scene", cfg.scene_path, "Scene JSON file")->required()->check(CLI::ExistingFile);
  app.add_option("--host", host, "Host running the robot software");
  app.add_option("--gps-port", gps_port);
  app.add_option("--compass-port", compass_port);
  app.add_option("--lidar-port", lidar_port);
  app.add_option("--camera-port", camera_port);
  app.add_option("--motor-port", motor_port)->required();
  app.add_option("--rate", cfg.tick_rate, "Physics rate in Hz")->check(CLI::PositiveNumber);
  auto* rt = app.add_flag("--realtime", realtime, "Hold wall-clock pace (default)");
  app.add_flag("--fast", fast, "Never sleep between ticks")->excludes(rt);
  app.add_flag("--lockstep", cfg.lockstep, "After each LIDAR scan wait for a motor frame before stepping on");
  app.add_option("--duration", duration, "Simulated seconds to run")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed);
  app.add_option("--dump-trajectory", cfg.dump_trajectory, "Per-tick CSV");
  app.add_option("--dump-frames", cfg.dump_frames, "Directory for PPM camera frames");
  app.add_option("--cmd-timeout", cmd_timeout, "Zero the command after this many silent seconds")
      ->check(CLI::PositiveNumber);
  app.add_option("--connect-timeout", connect_timeout)->check(CLI::NonNegativeNumber);
  app.add_option("--drive-params", drive_params_path, "JSON with v_max, w_max, a_max, alpha_max, footprint_radius")
      ->check(CLI::ExistingFile);
  app.add_option("--gps-noise", cfg.gps_noise_std, "GPS noise std-dev in meters")->check(CLI::NonNegativeNumber);
  app.add_option("--compass-noise", cfg.compass_noise_std, "Compass noise std-dev in degrees")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--lidar-noise", cfg.lidar.noise_std, "LIDAR range noise std-dev in meters")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--no-camera", no_camera);
  app.add_flag("--no-lidar", no_lidar);
  app.add_flag("--no-gps", no_gps);
  app.add_flag("--no-compass", no_compass);
  CLI11_PARSE(app, argc, argv);

  cfg.pacing = fast ? Pacing::fast : Pacing::realtime;
  if (duration > 0.0) cfg.duration = duration;
  if (cmd_timeout > 0.0) cfg.cmd_timeout = cmd_timeout;
  cfg.connect_timeout = std::chrono::milliseconds(static_cast<long long>(connect_timeout * 1000.0));

  try {
    if (!drive_params_path.empty()) {
      std::ifstream in(drive_params_path);
      cfg.drive = drive_params_from_json(nlohmann::json::parse(in));
    }
  } catch (const std::exception& e) {
    std::cerr << "igvsim: drive parameters: " << e.what() << "\n";
    return 2;
  }

  auto add = [&](ChannelKind kind, std::optional<std::uint16_t> port, bool disabled) {
    if (port && !disabled) cfg.channels.push_back({kind, host, *port});
  };
  add(ChannelKind::gps, gps_port, no_gps);
  add(ChannelKind::compass, compass_port, no_compass);
  add(ChannelKind::lidar, lidar_port, no_lidar);
  add(ChannelKind::camera, camera_port, no_camera);
  cfg.channels.push_back({ChannelKind::motor, host, motor_port});

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::signal(SIGPIPE, SIG_IGN);

  try {
    const SimReport report = run_simulation(cfg, &g_stop);
    std::cout << report_to_json(report).dump(2) << std::endl;
    return 0;
  } catch (const SceneError& e) {
    std::cerr << "igvsim: " << e.what() << "\n";
    return 2;
  } catch (const StartupError& e) {
    std::cerr << "igvsim: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "igvsim: " << e.what() << "\n";
    return 1;
  }
}
