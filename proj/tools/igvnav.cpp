// SPDX-License-Identifier: Apache-2.0
// igvnav: demo reactive navigator. Listens for the simulator's channels, or
// replays a recorded stream through stub sensors, and runs the control loop.

#include "igvsim/client.hpp"
#include "igvsim/nav_loop.hpp"
#include "igvsim/recording.hpp"
#include "igvsim/stubs.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

struct CycleLog {
  std::ofstream file;
  std::unique_ptr<igvsim::StreamRecorder> recorder;

  void operator()(const igvsim::CycleRecord& r) {
    if (file.is_open()) file << igvsim::format_nav_log_row(r) << std::flush;
    if (recorder) recorder->append(r.lidar_seq, *r.scan, r.camera_seq, r.frame);
  }
};

void print_summary(const igvsim::LoopSummary& s, std::uint64_t commands) {
  std::cerr << "igvnav: exit (" << s.exit_reason << "), cycles " << s.cycles << ", commands " << commands
            << "; lidar " << igvsim::to_string(s.lidar) << ", camera " << igvsim::to_string(s.camera) << ", gps "
            << igvsim::to_string(s.gps) << ", compass " << igvsim::to_string(s.compass) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace igvsim;
  CLI::App app{"Demo navigator: widest-gap following with line avoidance"};

  ChannelPorts ports;
  std::string params_path, log_path, record_path, replay_path;
  ControlLoopOptions opt;
  double accept_timeout = 30.0;

  app.add_option("--gps-port", ports.gps);
  app.add_option("--compass-port", ports.compass);
  app.add_option("--lidar-port", ports.lidar);
  app.add_option("--camera-port", ports.camera);
  app.add_option("--motor-port", ports.motor);
  app.add_option("--control-rate", opt.control_rate, "Hz")->check(CLI::PositiveNumber);
  app.add_option("--params", params_path, "NavParams JSON")->check(CLI::ExistingFile);
  app.add_option("--log", log_path, "Per-cycle CSV log");
  app.add_flag("--lockstep", opt.lockstep, "One cycle per new LIDAR scan instead of a fixed rate");
  app.add_option("--record", record_path, "Record the consumed sensor stream");
  app.add_option("--replay", replay_path, "Drive the loop from a recording through stub sensors")
      ->check(CLI::ExistingFile);
  app.add_option("--accept-timeout", accept_timeout, "Seconds to wait for the simulator")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  NavParams params;
  try {
    if (!params_path.empty()) {
      std::ifstream in(params_path);
      params = nav_params_from_json(nlohmann::json::parse(in));
    }
  } catch (const std::exception& e) {
    std::cerr << "igvnav: parameters: " << e.what() << "\n";
    return 2;
  }

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::signal(SIGPIPE, SIG_IGN);
  opt.stop = &g_stop;

  CycleLog log;
  if (!log_path.empty()) {
    log.file.open(log_path, std::ios::trunc);
    if (!log.file) {
      std::cerr << "igvnav: cannot open log " << log_path << "\n";
      return 2;
    }
    log.file << kNavLogHeader;
  }
  try {
    if (!record_path.empty()) log.recorder = std::make_unique<StreamRecorder>(record_path);
  } catch (const std::exception& e) {
    std::cerr << "igvnav: " << e.what() << "\n";
    return 2;
  }
  CycleObserver observe = [&log](const CycleRecord& r) { log(r); };

  if (!replay_path.empty()) {
    std::vector<RecordedCycle> cycles;
    try {
      cycles = load_recording(replay_path);
    } catch (const std::exception& e) {
      std::cerr << "igvnav: " << e.what() << "\n";
      return 2;
    }
    StubSensor<LidarScan> lidar;
    StubSensor<CameraFrame> camera;
    StubMotorController motor;
    const bool with_camera = std::any_of(cycles.begin(), cycles.end(), [](const auto& c) { return c.frame.has_value(); });
    NavInputs in{lidar, with_camera ? &camera : nullptr, nullptr, nullptr};
    ControlLoopOptions replay_opt = opt;
    replay_opt.lockstep = true;
    std::thread feeder([&] { replay_recording(cycles, lidar, with_camera ? &camera : nullptr, motor); });
    const LoopSummary s = run_control_loop(in, motor, params, replay_opt, observe);
    feeder.join();
    print_summary(s, motor.commands().size());
    return 0;
  }

  ChannelSet channels;
  try {
    if (!ports.lidar) throw ClientError("--lidar-port is required");
    if (ports.motor == 0) throw ClientError("--motor-port is required");
    channels = serve_and_accept(ports, std::chrono::milliseconds(static_cast<long long>(accept_timeout * 1000.0)),
                                [](const ChannelSet&) { std::cerr << "igvnav: listening" << std::endl; });
  } catch (const std::exception& e) {
    std::cerr << "igvnav: " << e.what() << "\n";
    return 3;
  }
  std::cerr << "igvnav: simulator connected" << std::endl;

  NavInputs in{*channels.lidar, channels.camera.get(), channels.gps.get(), channels.compass.get()};
  const LoopSummary s = run_control_loop(in, *channels.motor, params, opt, observe);
  const std::uint64_t sent = channels.motor->sent();
  channels.close_all();
  print_summary(s, sent);
  return 0;
}
