// SPDX-License-Identifier: Apache-2.0
// client.hpp
// Simulation-backed implementations of the sensor and motor roles. The robot
// side listens; the simulator connects one TCP stream per channel.
#pragma once

#define IGVSIM_SIMULATION_TRANSPORT 1

#include "igvsim/log.hpp"
#include "igvsim/measurements.hpp"
#include "igvsim/net.hpp"
#include "igvsim/roles.hpp"
#include "igvsim/wire.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace igvsim {

class ClientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Owns one listening channel and its reader thread. Subclasses receive each
/// complete frame payload through message_received().
class SimulationSensorBase {
 public:
  explicit SimulationSensorBase(wire::ChannelKind kind) : kind_(kind) {}
  SimulationSensorBase(const SimulationSensorBase&) = delete;
  SimulationSensorBase& operator=(const SimulationSensorBase&) = delete;
  virtual ~SimulationSensorBase() { stop_transport(); }

  wire::ChannelKind kind() const { return kind_; }

  void listen(std::uint16_t port) { listener_ = net::Listener::bind(port); }
  std::uint16_t port() const { return listener_.port(); }

  bool accept(std::chrono::milliseconds timeout) {
    auto s = listener_.accept(timeout);
    if (!s) return false;
    socket_ = std::move(*s);
    listener_.close();
    return true;
  }

  bool connected() const { return socket_.valid(); }

  void start() {
    reader_ = std::thread([this] { read_loop(); });
  }

  std::uint64_t frames_received() const { return frames_.load(); }
  std::uint64_t malformed() const { return malformed_.load(); }

 protected:
  /// Called once per complete frame, on the reader thread.
  virtual void message_received(std::span<const std::uint8_t> payload) = 0;
  /// Called once when the stream ends for any reason.
  virtual void connection_closed() {}

  void note_malformed(const std::string& why) {
    const std::uint64_t n = ++malformed_;
    if (n <= 5 || (n & (n - 1)) == 0) {
      log_line("igvnav", std::string(wire::to_string(kind_)) + ": dropped malformed message (" + why + ")");
    }
  }

  void stop_transport() {
    socket_.shutdown();
    if (reader_.joinable()) reader_.join();
    socket_.close();
    listener_.close();
  }

 private:
  void read_loop() {
    try {
      while (true) {
        std::optional<wire::Bytes> payload = wire::frame_read(socket_);
        if (!payload) break;
        ++frames_;
        message_received(*payload);
      }
    } catch (const wire::WireError& e) {
      log_line("igvnav", std::string(wire::to_string(kind_)) + ": stream error: " + e.what());
    }
    log_line("igvnav", std::string(wire::to_string(kind_)) + ": channel closed");
    connection_closed();
  }

  wire::ChannelKind kind_;
  net::Listener listener_;
  net::Socket socket_;
  std::thread reader_;
  std::atomic<std::uint64_t> frames_{0};
  std::atomic<std::uint64_t> malformed_{0};
};

/// Sensor fed by a simulator channel; decoded values land in a latest-value
/// cell that the control loop reads without blocking.
template <class T>
class SimulationSensor : public SensorRole<T>, public SimulationSensorBase {
 public:
  SimulationSensor() : SimulationSensorBase(wire::Codec<T>::kind) {}
  ~SimulationSensor() override { close(); }

  void initialize(const Endpoint& endpoint) override { listen(endpoint.port); }
  Latest<T> latest() const override { return cell_.read(); }
  void close() override {
    stop_transport();
    cell_.close();
  }

 protected:
  void message_received(std::span<const std::uint8_t> payload) override {
    wire::Decoded<T> value = wire::Codec<T>::decode(payload);
    if (!value) {
      note_malformed(value.error());
      return;
    }
    cell_.put(std::move(value.value()));
  }
  void connection_closed() override { cell_.close(); }

 private:
  LatestCell<T> cell_;
};

using SimulationGps = SimulationSensor<GpsFix>;
using SimulationCompass = SimulationSensor<HeadingReading>;
using SimulationLidar = SimulationSensor<LidarScan>;
using SimulationCamera = SimulationSensor<CameraFrame>;

/// Sends motor commands back to the simulator over the motor channel.
class SimulationMotorController final : public MotorControllerRole {
 public:
  ~SimulationMotorController() override { close(); }

  void initialize(const Endpoint& endpoint) { listener_ = net::Listener::bind(endpoint.port); }
  std::uint16_t port() const { return listener_.port(); }

  bool accept(std::chrono::milliseconds timeout) {
    auto s = listener_.accept(timeout);
    if (!s) return false;
    std::lock_guard lock(mu_);
    socket_ = std::move(*s);
    listener_.close();
    return true;
  }

  void set_speeds(double linear, double angular) override {
    const wire::Bytes frame = wire::frame_write(wire::encode_motor({linear, angular}));
    std::lock_guard lock(mu_);
    if (closed_ || !socket_.valid()) return;
    if (!socket_.write_all(frame)) {
      closed_ = true;
      log_line("igvnav", "motor: channel closed");
      return;
    }
    ++sent_;
  }

  void close() override {
    std::lock_guard lock(mu_);
    closed_ = true;
    socket_.shutdown();
    socket_.close();
    listener_.close();
  }

  bool closed() const {
    std::lock_guard lock(mu_);
    return closed_;
  }
  std::uint64_t sent() const {
    std::lock_guard lock(mu_);
    return sent_;
  }

 private:
  mutable std::mutex mu_;
  net::Listener listener_;
  net::Socket socket_;
  bool closed_{false};
  std::uint64_t sent_{0};
};

/// Ports to listen on; an empty optional leaves that sensor out.
struct ChannelPorts {
  std::optional<std::uint16_t> gps;
  std::optional<std::uint16_t> compass;
  std::optional<std::uint16_t> lidar;
  std::optional<std::uint16_t> camera;
  std::uint16_t motor{0};
};

struct ChannelSet {
  std::unique_ptr<SimulationGps> gps;
  std::unique_ptr<SimulationCompass> compass;
  std::unique_ptr<SimulationLidar> lidar;
  std::unique_ptr<SimulationCamera> camera;
  std::unique_ptr<SimulationMotorController> motor;

  void close_all() {
    if (motor) motor->close();
    if (gps) gps->close();
    if (compass) compass->close();
    if (lidar) lidar->close();
    if (camera) camera->close();
  }
};

/// Listens on every configured port, then waits for the simulator to connect
/// to all of them. Starts the per-channel readers before returning.
inline ChannelSet serve_and_accept(const ChannelPorts& ports, std::chrono::milliseconds accept_timeout,
                                   const std::function<void(const ChannelSet&)>& on_listening = {}) {
  ChannelSet set;
  auto bind_sensor = [](auto& slot, std::optional<std::uint16_t> port, wire::ChannelKind kind) {
    if (!port) return;
    using Sensor = typename std::decay_t<decltype(slot)>::element_type;
    slot = std::make_unique<Sensor>();
    try {
      slot->initialize(Endpoint{"0.0.0.0", *port});
    } catch (const net::NetError& e) {
      throw ClientError(std::string(wire::to_string(kind)) + ": cannot listen: " + e.what());
    }
  };
  bind_sensor(set.gps, ports.gps, wire::ChannelKind::gps);
  bind_sensor(set.compass, ports.compass, wire::ChannelKind::compass);
  bind_sensor(set.lidar, ports.lidar, wire::ChannelKind::lidar);
  bind_sensor(set.camera, ports.camera, wire::ChannelKind::camera);
  set.motor = std::make_unique<SimulationMotorController>();
  try {
    set.motor->initialize(Endpoint{"0.0.0.0", ports.motor});
  } catch (const net::NetError& e) {
    throw ClientError(std::string("motor: cannot listen: ") + e.what());
  }
  if (on_listening) on_listening(set);

  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + accept_timeout;
  auto remaining = [&] {
    return std::max(std::chrono::milliseconds(0),
                    std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()));
  };
  std::vector<std::string> missing;
  auto accept_sensor = [&](auto& slot) {
    if (slot && !slot->accept(remaining())) missing.emplace_back(wire::to_string(slot->kind()));
  };
  accept_sensor(set.gps);
  accept_sensor(set.compass);
  accept_sensor(set.lidar);
  accept_sensor(set.camera);
  if (!set.motor->accept(remaining())) missing.emplace_back("motor");
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    set.close_all();
    throw ClientError("simulator never connected on: " + names);
  }
  if (set.gps) set.gps->start();
  if (set.compass) set.compass->start();
  if (set.lidar) set.lidar->start();
  if (set.camera) set.camera->start();
  return set;
}

}  // namespace igvsim
