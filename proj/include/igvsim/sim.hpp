// SPDX-License-Identifier: Apache-2.0
// sim.hpp
// Simulator runtime: the world and its fixed-timestep tick, the connection
// manager that dials out to the robot software, and the run loop with its
// trajectory and frame dumps.
#pragma once

#include "igvsim/dynamics.hpp"
#include "igvsim/log.hpp"
#include "igvsim/net.hpp"
#include "igvsim/scene.hpp"
#include "igvsim/sensors.hpp"
#include "igvsim/wire.hpp"
#include "json.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace igvsim {

using wire::ChannelKind;

// ---------------------------------------------------------------------------
// Configuration and report

struct ChannelConfig {
  ChannelKind kind{ChannelKind::gps};
  std::string host{"127.0.0.1"};
  std::uint16_t port{0};
};

enum class Pacing { realtime, fast };

struct SimConfig {
  std::string scene_path;
  std::vector<ChannelConfig> channels;
  double tick_rate{50.0};
  Pacing pacing{Pacing::realtime};
  /// After each tick that emitted a LIDAR scan, wait for one motor frame
  /// before stepping again. Makes closed-loop runs reproducible.
  bool lockstep{false};
  std::chrono::milliseconds lockstep_timeout{5000};
  std::optional<double> duration;  // seconds; unbounded when empty
  std::uint64_t seed{0};
  DriveParams drive;
  LidarConfig lidar;
  CameraMount camera;
  double gps_rate{10.0};
  double compass_rate{25.0};
  double gps_noise_std{0.0};      // meters
  double compass_noise_std{0.0};  // degrees
  std::optional<std::string> dump_trajectory;
  std::optional<std::string> dump_frames;
  std::optional<double> cmd_timeout;  // seconds of motor silence before zeroing
  std::chrono::milliseconds connect_timeout{10000};
  bool reconnect{false};
};

struct SimReport {
  std::uint64_t ticks{0};
  double sim_time{0.0};
  double wall_time{0.0};
  std::map<std::string, std::uint64_t> messages_enqueued;
  std::map<std::string, std::uint64_t> messages_sent;
  std::map<std::string, std::uint64_t> messages_dropped;
  std::uint64_t commands_received{0};
  std::uint64_t command_decode_errors{0};
  std::uint64_t collision_ticks{0};
  bool goal_reached{false};
  std::optional<double> goal_time;
  std::vector<std::string> closed_channels;
  std::string stop_reason;
  RobotState final_state;
};

class StartupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// The world side of the link: where sensor frames go and motor frames come from.

class SimLink {
 public:
  virtual ~SimLink() = default;
  virtual void send(ChannelKind kind, wire::Bytes payload) = 0;
  virtual std::vector<wire::Bytes> drain_motor() = 0;
};

/// In-memory link for driving a world without sockets.
class MemoryLink final : public SimLink {
 public:
  void send(ChannelKind kind, wire::Bytes payload) override { sent[kind].push_back(std::move(payload)); }
  std::vector<wire::Bytes> drain_motor() override { return std::exchange(pending_motor, {}); }

  std::map<ChannelKind, std::vector<wire::Bytes>> sent;
  std::vector<wire::Bytes> pending_motor;
};

struct TickOutcome {
  bool lidar_emitted{false};
  std::optional<CameraFrame> camera_frame;
  bool goal_reached_now{false};
};

/// World state plus everything a tick needs. Owned by exactly one thread.
class World {
 public:
  World(Scene scene, const SimConfig& cfg)
      : scene_(std::move(scene)),
        cfg_(cfg),
        rng_(cfg.seed),
        gps_clock_(cfg.gps_rate),
        compass_clock_(cfg.compass_rate),
        lidar_clock_(cfg.lidar.rate),
        camera_clock_(cfg.camera.rate) {
    state_.pose = scene_.spawn;
    for (const ChannelConfig& c : cfg.channels) enabled_[static_cast<std::size_t>(c.kind)] = true;
  }

  /// Enables a sensor without a channel entry (in-memory use).
  void enable(ChannelKind kind, bool on = true) { enabled_[static_cast<std::size_t>(kind)] = on; }
  bool enabled(ChannelKind kind) const { return enabled_[static_cast<std::size_t>(kind)]; }

  /// One fixed step: ingest motor frames, step physics, emit due sensors.
  TickOutcome tick(SimLink& link) {
    TickOutcome out;
    const double dt = 1.0 / cfg_.tick_rate;

    std::optional<MotorCommand> latest;
    for (const wire::Bytes& frame : link.drain_motor()) {
      wire::Decoded<MotorCommand> cmd = wire::decode_motor(frame);
      if (!cmd) {
        ++decode_errors_;
        continue;
      }
      latest = *cmd;
      ++commands_received_;
    }
    if (latest) {
      state_.commanded = *latest;
      last_command_time_ = sim_time();
    } else if (cfg_.cmd_timeout && sim_time() - last_command_time_ >= *cfg_.cmd_timeout) {
      state_.commanded = MotorCommand{};
    }

    state_ = step_world(state_, scene_, cfg_.drive, dt);
    ++ticks_;
    if (state_.collided) ++collision_ticks_;
    const double now = sim_time();

    auto emit = [&](ChannelKind kind, wire::Bytes payload) {
      ++enqueued_[static_cast<std::size_t>(kind)];
      link.send(kind, std::move(payload));
    };
    if (enabled(ChannelKind::gps) && gps_clock_.poll_due(now)) {
      emit(ChannelKind::gps, wire::encode_gps(measure_gps(state_.pose, scene_.geo, cfg_.gps_noise_std, rng_)));
    }
    if (enabled(ChannelKind::compass) && compass_clock_.poll_due(now)) {
      emit(ChannelKind::compass, wire::encode_compass(measure_compass(state_.pose, cfg_.compass_noise_std, rng_)));
    }
    // Camera goes out before LIDAR so a scan-driven client finds the frame of
    // the same tick already in flight.
    if (enabled(ChannelKind::camera) && camera_clock_.poll_due(now)) {
      CameraFrame frame = render_camera(scene_, state_, cfg_.camera);
      emit(ChannelKind::camera, wire::encode_camera(frame));
      out.camera_frame = std::move(frame);
    }
    if (enabled(ChannelKind::lidar) && lidar_clock_.poll_due(now)) {
      emit(ChannelKind::lidar, wire::encode_lidar(scan_lidar(scene_, state_, cfg_.lidar, rng_), cfg_.lidar.beams));
      out.lidar_emitted = true;
    }

    if (!goal_time_ && scene_.goal &&
        norm(Vec2{state_.pose.x, state_.pose.y} - scene_.goal->center) <= scene_.goal->radius) {
      goal_time_ = now;
      out.goal_reached_now = true;
    }
    return out;
  }

  const Scene& scene() const { return scene_; }
  const RobotState& state() const { return state_; }
  RobotState& mutable_state() { return state_; }
  std::uint64_t ticks() const { return ticks_; }
  double sim_time() const { return static_cast<double>(ticks_) / cfg_.tick_rate; }
  std::uint64_t enqueued(ChannelKind kind) const { return enqueued_[static_cast<std::size_t>(kind)]; }
  std::uint64_t commands_received() const { return commands_received_; }
  std::uint64_t decode_errors() const { return decode_errors_; }
  std::uint64_t collision_ticks() const { return collision_ticks_; }
  std::optional<double> goal_time() const { return goal_time_; }

 private:
  Scene scene_;
  SimConfig cfg_;
  RobotState state_;
  SensorRng rng_;
  FreshnessClock gps_clock_;
  FreshnessClock compass_clock_;
  FreshnessClock lidar_clock_;
  FreshnessClock camera_clock_;
  std::array<bool, 5> enabled_{};
  std::array<std::uint64_t, 5> enqueued_{};
  std::uint64_t ticks_{0};
  std::uint64_t commands_received_{0};
  std::uint64_t decode_errors_{0};
  std::uint64_t collision_ticks_{0};
  double last_command_time_{0.0};
  std::optional<double> goal_time_;
};

// ---------------------------------------------------------------------------
// Bounded queue with drop-oldest overflow

template <class T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {}

  /// Returns false when an older item had to be dropped to make room.
  bool push(T item) {
    bool dropped = false;
    {
      std::lock_guard lock(mu_);
      if (closed_) return true;
      if (items_.size() >= capacity_) {
        items_.pop_front();
        dropped = true;
      }
      items_.push_back(std::move(item));
    }
    cv_.notify_all();
    return !dropped;
  }

  /// Blocks until an item is available or the queue is closed and empty.
  std::optional<T> pop() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !items_.empty() || closed_; });
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.front());
    items_.pop_front();
    return item;
  }

  std::vector<T> drain() {
    std::lock_guard lock(mu_);
    std::vector<T> out(std::make_move_iterator(items_.begin()), std::make_move_iterator(items_.end()));
    items_.clear();
    return out;
  }

  bool wait_nonempty(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    return cv_.wait_for(lock, timeout, [&] { return !items_.empty() || closed_; }) && !items_.empty();
  }

  void close() {
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return items_.size();
  }

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<T> items_;
  std::size_t capacity_;
  bool closed_{false};
};

inline constexpr std::size_t kCameraQueueDepth = 2;
inline constexpr std::size_t kSensorQueueDepth = 16;
inline constexpr std::size_t kMotorQueueDepth = 1024;

// ---------------------------------------------------------------------------
// Connection manager

/// One outbound TCP connection per sensor channel and one inbound motor
/// connection. Network I/O runs on per-channel threads; the tick thread only
/// touches the queues.
class ConnectionManager final : public SimLink {
 public:
  ConnectionManager() = default;
  ConnectionManager(const ConnectionManager&) = delete;
  ConnectionManager& operator=(const ConnectionManager&) = delete;
  ~ConnectionManager() override { close_all(); }

  /// Dials every configured channel. Throws StartupError naming each channel
  /// that could not be reached within the timeout.
  void connect_channels(const SimConfig& cfg) {
    std::vector<std::string> failed;
    std::vector<std::pair<ChannelConfig, net::Socket>> sockets;
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + cfg.connect_timeout;
    for (const ChannelConfig& c : cfg.channels) {
      const auto remaining = std::max(std::chrono::milliseconds(1),
                                      std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()));
      try {
        sockets.emplace_back(c, net::connect_with_retry(c.host, c.port, remaining));
      } catch (const net::NetError& e) {
        failed.push_back(std::string(wire::to_string(c.kind)) + " (" + c.host + ":" + std::to_string(c.port) +
                         ": " + e.what() + ")");
      }
    }
    if (!failed.empty()) {
      std::string msg = "could not connect channel(s): ";
      for (std::size_t i = 0; i < failed.size(); ++i) msg += (i ? ", " : "") + failed[i];
      throw StartupError(msg);
    }
    for (auto& [c, sock] : sockets) {
      auto ch = std::make_unique<Channel>(c.kind, std::move(sock));
      if (c.kind == ChannelKind::motor) {
        ch->thread = std::thread([this, raw = ch.get()] { motor_loop(*raw); });
      } else {
        ch->thread = std::thread([this, raw = ch.get()] { sender_loop(*raw); });
      }
      channels_[static_cast<std::size_t>(c.kind)] = std::move(ch);
    }
  }

  void send(ChannelKind kind, wire::Bytes payload) override {
    Channel* ch = channels_[static_cast<std::size_t>(kind)].get();
    if (ch == nullptr || ch->closed.load()) return;
    if (!ch->queue.push(wire::frame_write(payload))) ++ch->dropped;
  }

  std::vector<wire::Bytes> drain_motor() override { return motor_queue_.drain(); }

  /// Waits for at least one inbound motor frame; returns immediately when the
  /// motor channel is gone.
  bool wait_motor(std::chrono::milliseconds timeout) {
    Channel* ch = channels_[static_cast<std::size_t>(ChannelKind::motor)].get();
    if (ch == nullptr || ch->closed.load()) return false;
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (std::chrono::steady_clock::now() < deadline) {
      if (motor_queue_.wait_nonempty(std::chrono::milliseconds(20))) return true;
      if (ch->closed.load()) return motor_queue_.size() > 0;
    }
    return false;
  }

  bool configured(ChannelKind kind) const { return channels_[static_cast<std::size_t>(kind)] != nullptr; }
  bool closed(ChannelKind kind) const {
    const Channel* ch = channels_[static_cast<std::size_t>(kind)].get();
    return ch == nullptr || ch->closed.load();
  }
  /// True when the far end went away before the simulator shut down.
  bool closed_by_peer(ChannelKind kind) const {
    const Channel* ch = channels_[static_cast<std::size_t>(kind)].get();
    return ch != nullptr && ch->peer_closed.load();
  }
  bool all_closed() const {
    bool any = false;
    for (const auto& ch : channels_) {
      if (!ch) continue;
      any = true;
      if (!ch->closed.load()) return false;
    }
    return any;
  }
  std::uint64_t sent(ChannelKind kind) const {
    const Channel* ch = channels_[static_cast<std::size_t>(kind)].get();
    return ch ? ch->sent.load() : 0;
  }
  std::uint64_t dropped(ChannelKind kind) const {
    const Channel* ch = channels_[static_cast<std::size_t>(kind)].get();
    return ch ? ch->dropped.load() : 0;
  }

  /// Flushes what can be flushed within `grace`, then tears every channel down.
  void close_all(std::chrono::milliseconds grace = std::chrono::milliseconds(1000)) {
    shutting_down_ = true;
    for (auto& ch : channels_) {
      if (ch) ch->queue.close();
    }
    const auto deadline = std::chrono::steady_clock::now() + grace;
    for (auto& ch : channels_) {
      if (!ch || ch->kind == ChannelKind::motor) continue;
      while (!ch->finished.load() && std::chrono::steady_clock::now() < deadline) {
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
      }
    }
    for (auto& ch : channels_) {
      if (!ch) continue;
      ch->socket.shutdown();
      if (ch->thread.joinable()) ch->thread.join();
      ch->socket.close();
    }
    motor_queue_.close();
  }

 private:
  struct Channel {
    Channel(ChannelKind k, net::Socket s)
        : kind(k),
          socket(std::move(s)),
          queue(k == ChannelKind::camera ? kCameraQueueDepth : kSensorQueueDepth) {}
    ChannelKind kind;
    net::Socket socket;
    BoundedQueue<wire::Bytes> queue;
    std::thread thread;
    std::atomic<bool> closed{false};
    std::atomic<bool> finished{false};
    std::atomic<bool> peer_closed{false};
    std::atomic<std::uint64_t> sent{0};
    std::atomic<std::uint64_t> dropped{0};
  };

  void sender_loop(Channel& ch) {
    while (auto frame = ch.queue.pop()) {
      if (!ch.socket.write_all(*frame)) {
        if (shutting_down_.load()) break;
        ch.peer_closed = true;
        if (!ch.closed.exchange(true)) {
          log_line("igvsim", std::string(wire::to_string(ch.kind)) + ": channel closed by peer");
        }
        ch.queue.close();
        break;
      }
      ++ch.sent;
    }
    ch.finished = true;
  }

  void motor_loop(Channel& ch) {
    try {
      while (auto frame = wire::frame_read(ch.socket)) motor_queue_.push(std::move(*frame));
    } catch (const wire::WireError& e) {
      log_line("igvsim", std::string("motor: stream error: ") + e.what());
    }
    if (!shutting_down_.load()) ch.peer_closed = true;
    if (!ch.closed.exchange(true)) log_line("igvsim", "motor: channel closed");
    ch.finished = true;
  }

  std::array<std::unique_ptr<Channel>, 5> channels_{};
  BoundedQueue<wire::Bytes> motor_queue_{kMotorQueueDepth};
  std::atomic<bool> shutting_down_{false};
};

// ---------------------------------------------------------------------------
// Drive parameters file and report output

inline DriveParams drive_params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("drive parameters must be a JSON object");
  DriveParams d;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (!it->is_number()) throw std::invalid_argument("drive parameter \"" + k + "\" must be a number");
    const double v = it->get<double>();
    if (k == "v_max") d.v_max = v;
    else if (k == "w_max") d.w_max = v;
    else if (k == "a_max") d.a_max = v;
    else if (k == "alpha_max") d.alpha_max = v;
    else if (k == "footprint_radius") d.footprint_radius = v;
    else throw std::invalid_argument("unknown drive parameter \"" + k + "\"");
  }
  if (!d.valid()) throw std::invalid_argument("drive parameters must all be > 0");
  return d;
}

inline nlohmann::json report_to_json(const SimReport& r) {
  nlohmann::json j;
  j["ticks"] = r.ticks;
  j["sim_time_s"] = r.sim_time;
  j["wall_time_s"] = r.wall_time;
  j["realtime_factor"] = r.wall_time > 0.0 ? r.sim_time / r.wall_time : 0.0;
  j["messages_enqueued"] = r.messages_enqueued;
  j["messages_sent"] = r.messages_sent;
  j["messages_dropped"] = r.messages_dropped;
  j["commands_received"] = r.commands_received;
  j["command_decode_errors"] = r.command_decode_errors;
  j["collision_ticks"] = r.collision_ticks;
  j["goal_reached"] = r.goal_reached;
  j["goal_time_s"] = r.goal_time ? nlohmann::json(*r.goal_time) : nlohmann::json(nullptr);
  j["closed_channels"] = r.closed_channels;
  j["stop_reason"] = r.stop_reason;
  j["final_pose"] = {{"x_m", r.final_state.pose.x}, {"y_m", r.final_state.pose.y},
                     {"heading_rad", r.final_state.pose.heading}};
  return j;
}

// ---------------------------------------------------------------------------
// Dumps

inline const char* kTrajectoryHeader =
    "tick,sim_time_s,x_m,y_m,heading_rad,v_mps,w_radps,cmd_linear_mps,cmd_angular_degps,collided\n";

inline std::string format_trajectory_row(std::uint64_t tick, double sim_time, const RobotState& s) {
  char buf[320];
  std::snprintf(buf, sizeof(buf), "%llu,%.6f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%d\n",
                static_cast<unsigned long long>(tick), sim_time, s.pose.x, s.pose.y, s.pose.heading, s.v, s.w,
                s.commanded.linear, s.commanded.angular, s.collided ? 1 : 0);
  return buf;
}

inline void write_ppm(const std::string& path, const CameraFrame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write frame dump " + path);
  out << "P6\n" << frame.width << " " << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.pixels.data()), static_cast<std::streamsize>(frame.pixels.size()));
}

inline std::string frame_dump_name(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06llu.ppm", static_cast<unsigned long long>(index));
  return buf;
}

// ---------------------------------------------------------------------------
// Run loop

/// Runs a world against any link until the duration elapses, the goal is
/// reached, or `stop` is raised. Links with wait_motor() pace lockstep runs.
template <class Link>
SimReport run_world(World& world, Link& link, const SimConfig& cfg, const std::atomic<bool>* stop = nullptr) {
  using clock = std::chrono::steady_clock;
  SimReport report;
  std::ofstream trajectory;
  if (cfg.dump_trajectory) {
    trajectory.open(*cfg.dump_trajectory, std::ios::binary | std::ios::trunc);
    if (!trajectory) throw std::runtime_error("cannot open trajectory dump " + *cfg.dump_trajectory);
    trajectory << kTrajectoryHeader;
  }
  if (cfg.dump_frames) std::filesystem::create_directories(*cfg.dump_frames);

  const std::optional<std::uint64_t> max_ticks =
      cfg.duration ? std::optional<std::uint64_t>(static_cast<std::uint64_t>(std::llround(*cfg.duration * cfg.tick_rate)))
                   : std::nullopt;
  const auto start = clock::now();
  const auto period = std::chrono::duration<double>(1.0 / cfg.tick_rate);
  std::uint64_t frames_dumped = 0;
  bool await_reply = false;

  while (true) {
    if (max_ticks && world.ticks() >= *max_ticks) {
      report.stop_reason = "duration elapsed";
      break;
    }
    if (stop != nullptr && stop->load()) {
      report.stop_reason = "stop requested";
      break;
    }
    if constexpr (requires { link.all_closed(); }) {
      if (link.all_closed()) {
        report.stop_reason = "all channels closed";
        break;
      }
    }
    if constexpr (requires { link.wait_motor(std::chrono::milliseconds(1)); }) {
      if (cfg.lockstep && await_reply) link.wait_motor(cfg.lockstep_timeout);
    }

    TickOutcome out = world.tick(link);
    await_reply = out.lidar_emitted;
    if (trajectory.is_open()) trajectory << format_trajectory_row(world.ticks(), world.sim_time(), world.state());
    if (cfg.dump_frames && out.camera_frame) {
      write_ppm((std::filesystem::path(*cfg.dump_frames) / frame_dump_name(frames_dumped++)).string(), *out.camera_frame);
    }
    if (out.goal_reached_now) {
      report.stop_reason = "goal reached";
      break;
    }
    if (cfg.pacing == Pacing::realtime) {
      std::this_thread::sleep_until(start + std::chrono::duration_cast<clock::duration>(
                                                period * static_cast<double>(world.ticks())));
    }
  }

  report.ticks = world.ticks();
  report.sim_time = world.sim_time();
  report.wall_time = std::chrono::duration<double>(clock::now() - start).count();
  for (ChannelKind k : wire::kAllChannels) {
    if (k == ChannelKind::motor || !world.enabled(k)) continue;
    report.messages_enqueued[std::string(wire::to_string(k))] = world.enqueued(k);
  }
  report.commands_received = world.commands_received();
  report.command_decode_errors = world.decode_errors();
  report.collision_ticks = world.collision_ticks();
  report.goal_time = world.goal_time();
  report.goal_reached = report.goal_time.has_value();
  report.final_state = world.state();
  return report;
}

/// Loads and validates the scene, connects every channel, and runs the loop.
/// Throws SceneError (bad scene) or StartupError (connection failure).
inline SimReport run_simulation(const SimConfig& cfg, const std::atomic<bool>* stop = nullptr) {
  Scene scene = load_scene_file(cfg.scene_path);
  if (const auto violations = validate_scene(scene); !violations.empty()) {
    std::string msg = "invalid scene:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw SceneError(msg);
  }
  if (!(cfg.tick_rate > 0.0)) throw std::invalid_argument("tick rate must be > 0");
  if (cfg.duration && !(*cfg.duration > 0.0)) throw std::invalid_argument("duration must be > 0");
  for (std::size_t i = 0; i < cfg.channels.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.channels.size(); ++j) {
      if (cfg.channels[i].port == cfg.channels[j].port && cfg.channels[i].host == cfg.channels[j].host) {
        throw std::invalid_argument("channels " + std::string(wire::to_string(cfg.channels[i].kind)) + " and " +
                                    std::string(wire::to_string(cfg.channels[j].kind)) + " share a port");
      }
    }
  }

  World world(std::move(scene), cfg);
  ConnectionManager connections;
  connections.connect_channels(cfg);
  log_line("igvsim", "all channels connected; starting physics");
  SimReport report = run_world(world, connections, cfg, stop);
  connections.close_all();
  for (ChannelKind k : wire::kAllChannels) {
    if (!connections.configured(k)) continue;
    const std::string name(wire::to_string(k));
    if (connections.closed_by_peer(k)) report.closed_channels.push_back(name);
    if (k != ChannelKind::motor) {
      report.messages_sent[name] = connections.sent(k);
      report.messages_dropped[name] = connections.dropped(k);
    }
  }
  return report;
}

}  // namespace igvsim
