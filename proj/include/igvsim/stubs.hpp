// SPDX-License-Identifier: Apache-2.0
// stubs.hpp
// In-process sensor and motor backends. They stand in for hardware drivers:
// a producer pushes readings, the motor stub records what it was told.
#pragma once

#include "igvsim/measurements.hpp"
#include "igvsim/roles.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <vector>

namespace igvsim {

template <class T>
class StubSensor final : public SensorRole<T> {
 public:
  void initialize(const Endpoint&) override {}
  Latest<T> latest() const override { return cell_.read(); }
  void close() override { cell_.close(); }

  std::uint64_t push(T value) { return cell_.put(std::move(value)); }
  void push(T value, std::uint64_t seq) { cell_.put_with_seq(std::move(value), seq); }

 private:
  LatestCell<T> cell_;
};

class StubMotorController final : public MotorControllerRole {
 public:
  void set_speeds(double linear, double angular) override {
    {
      std::lock_guard lock(mu_);
      if (closed_) return;
      commands_.push_back({linear, angular});
    }
    cv_.notify_all();
  }

  void close() override {
    std::lock_guard lock(mu_);
    closed_ = true;
  }

  std::vector<MotorCommand> commands() const {
    std::lock_guard lock(mu_);
    return commands_;
  }

  /// Blocks until at least `n` commands have been received.
  bool wait_for(std::size_t n, std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    return cv_.wait_for(lock, timeout, [&] { return commands_.size() >= n; });
  }

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::vector<MotorCommand> commands_;
  bool closed_{false};
};

}  // namespace igvsim
