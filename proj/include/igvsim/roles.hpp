// SPDX-License-Identifier: Apache-2.0
// roles.hpp
// Backend-neutral sensor and motor-controller interfaces. Navigation code
// holds references to these and never to a concrete transport.
#pragma once

#include "igvsim/measurements.hpp"

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>

namespace igvsim {

/// Where a sensor backend attaches; simulation sensors listen on `port`.
struct Endpoint {
  std::string host{"0.0.0.0"};
  std::uint16_t port{0};
};

enum class SensorStatus { none_yet, live, closed };

template <class T>
struct Reading {
  T value;
  std::uint64_t seq{0};
};

/// Snapshot returned by SensorRole::latest(). `reading` holds the newest value
/// whenever one has ever arrived, including after the channel closed.
template <class T>
struct Latest {
  SensorStatus status{SensorStatus::none_yet};
  std::optional<Reading<T>> reading;

  bool closed() const { return status == SensorStatus::closed; }
  std::uint64_t seq() const { return reading ? reading->seq : 0; }
};

/// Single-slot, replace-on-write holder shared by one writer and one reader.
template <class T>
class LatestCell {
 public:
  std::uint64_t put(T value) {
    std::lock_guard lock(mu_);
    if (closed_) return seq_;
    value_ = std::move(value);
    return ++seq_;
  }

  /// Stores a value under an externally chosen sequence number (replay).
  void put_with_seq(T value, std::uint64_t seq) {
    std::lock_guard lock(mu_);
    if (closed_) return;
    value_ = std::move(value);
    seq_ = seq;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
  }

  Latest<T> read() const {
    std::lock_guard lock(mu_);
    Latest<T> out;
    if (value_) out.reading = Reading<T>{*value_, seq_};
    out.status = closed_ ? SensorStatus::closed : (value_ ? SensorStatus::live : SensorStatus::none_yet);
    return out;
  }

  std::uint64_t seq() const {
    std::lock_guard lock(mu_);
    return seq_;
  }

 private:
  mutable std::mutex mu_;
  std::optional<T> value_;
  std::uint64_t seq_{0};
  bool closed_{false};
};

/// A source of readings of type T.
template <class T>
class SensorRole {
 public:
  virtual ~SensorRole() = default;

  /// Performs all communications setup for the backend.
  virtual void initialize(const Endpoint& endpoint) = 0;
  /// Newest value and its sequence number; never blocks.
  virtual Latest<T> latest() const = 0;
  /// Releases the backend. Idempotent.
  virtual void close() = 0;
};

class MotorControllerRole {
 public:
  virtual ~MotorControllerRole() = default;

  /// linear in m/s, angular in deg/s (CCW positive). Last call wins.
  virtual void set_speeds(double linear, double angular) = 0;
  virtual void close() = 0;
};

}  // namespace igvsim
