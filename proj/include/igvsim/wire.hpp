// SPDX-License-Identifier: Apache-2.0
// wire.hpp
// Channel payload encodings and length-prefixed stream framing.
//
// Everything on the wire is little-endian. A frame is a u32 payload length
// followed by the payload; payloads are fixed layouts per channel kind (see
// PROTOCOL.md).
#pragma once

#include "igvsim/dynamics.hpp"
#include "igvsim/sensors.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace igvsim::wire {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::uint32_t kMaxFrameLength = 16u * 1024u * 1024u;

enum class ChannelKind { gps, compass, lidar, camera, motor };

inline constexpr ChannelKind kAllChannels[] = {ChannelKind::gps, ChannelKind::compass, ChannelKind::lidar,
                                               ChannelKind::camera, ChannelKind::motor};

constexpr std::string_view to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::gps: return "gps";
    case ChannelKind::compass: return "compass";
    case ChannelKind::lidar: return "lidar";
    case ChannelKind::camera: return "camera";
    case ChannelKind::motor: return "motor";
  }
  return "unknown";
}

/// Motor is the only channel that flows from the robot to the simulator.
constexpr bool is_inbound_to_simulator(ChannelKind k) { return k == ChannelKind::motor; }

class WireError : public std::runtime_error {
 public:
  enum class Kind { oversize, empty, truncated, protocol, encode };
  WireError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// ---------------------------------------------------------------------------
// Little-endian primitives

inline void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

inline void put_f32(Bytes& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

inline std::uint16_t get_u16(std::span<const std::uint8_t> in, std::size_t at) {
  return static_cast<std::uint16_t>(in[at] | (in[at + 1] << 8));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  return static_cast<std::uint32_t>(in[at]) | (static_cast<std::uint32_t>(in[at + 1]) << 8) |
         (static_cast<std::uint32_t>(in[at + 2]) << 16) | (static_cast<std::uint32_t>(in[at + 3]) << 24);
}

inline float get_f32(std::span<const std::uint8_t> in, std::size_t at) { return std::bit_cast<float>(get_u32(in, at)); }

// ---------------------------------------------------------------------------
// Framing

inline Bytes frame_write(std::span<const std::uint8_t> payload) {
  if (payload.empty()) throw WireError(WireError::Kind::empty, "frame payload must not be empty");
  if (payload.size() > kMaxFrameLength) {
    throw WireError(WireError::Kind::oversize, "frame payload exceeds 16 MiB: " + std::to_string(payload.size()));
  }
  Bytes out;
  out.reserve(4 + payload.size());
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

/// A byte stream that may hand back any number of bytes per call; 0 means end
/// of stream.
template <class T>
concept ByteSource = requires(T& src, std::span<std::uint8_t> buf) {
  { src.read_some(buf) } -> std::convertible_to<std::size_t>;
};

namespace detail {
template <ByteSource Source>
bool read_exact(Source& src, std::span<std::uint8_t> buf) {
  std::size_t got = 0;
  while (got < buf.size()) {
    const std::size_t n = src.read_some(buf.subspan(got));
    if (n == 0) {
      if (got == 0) return false;
      throw WireError(WireError::Kind::truncated, "stream ended mid-frame");
    }
    got += n;
  }
  return true;
}
}  // namespace detail

/// Reads one complete frame. Returns nullopt on a clean end of stream at a
/// frame boundary; throws on truncation or an invalid length.
template <ByteSource Source>
std::optional<Bytes> frame_read(Source& src) {
  std::uint8_t header[4];
  if (!detail::read_exact(src, header)) return std::nullopt;
  const std::uint32_t len = get_u32(header, 0);
  if (len == 0) throw WireError(WireError::Kind::protocol, "frame length 0");
  if (len > kMaxFrameLength) throw WireError(WireError::Kind::protocol, "frame length exceeds 16 MiB");
  Bytes payload(len);
  if (!detail::read_exact(src, payload)) throw WireError(WireError::Kind::truncated, "stream ended mid-frame");
  return payload;
}

/// Push-style reassembler for callers that receive arbitrary chunks.
class FrameAssembler {
 public:
  /// Appends bytes and returns every frame completed by them.
  std::vector<Bytes> feed(std::span<const std::uint8_t> chunk) {
    buffer_.insert(buffer_.end(), chunk.begin(), chunk.end());
    std::vector<Bytes> out;
    std::size_t pos = 0;
    while (buffer_.size() - pos >= 4) {
      const std::uint32_t len = get_u32(buffer_, pos);
      if (len == 0 || len > kMaxFrameLength) {
        buffer_.clear();
        throw WireError(WireError::Kind::protocol, "invalid frame length " + std::to_string(len));
      }
      if (buffer_.size() - pos - 4 < len) break;
      out.emplace_back(buffer_.begin() + static_cast<std::ptrdiff_t>(pos + 4),
                       buffer_.begin() + static_cast<std::ptrdiff_t>(pos + 4 + len));
      pos += 4 + len;
    }
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(pos));
    return out;
  }

  std::size_t pending() const { return buffer_.size(); }

 private:
  Bytes buffer_;
};

// ---------------------------------------------------------------------------
// Payloads

using Payload = std::variant<GpsFix, HeadingReading, LidarScan, CameraFrame, MotorCommand>;

inline Bytes encode_gps(const GpsFix& v) {
  Bytes out;
  put_f32(out, static_cast<float>(v.lat));
  put_f32(out, static_cast<float>(v.lon));
  return out;
}

inline Bytes encode_compass(const HeadingReading& v) {
  Bytes out;
  float h = static_cast<float>(v.heading);
  if (h >= 360.0f) h = 0.0f;
  put_f32(out, h);
  return out;
}

inline Bytes encode_lidar(const LidarScan& v, std::optional<int> expected_beams = std::nullopt) {
  if (v.ranges.empty()) throw WireError(WireError::Kind::encode, "lidar scan has no beams");
  if (expected_beams && static_cast<std::size_t>(*expected_beams) != v.ranges.size()) {
    throw WireError(WireError::Kind::encode, "lidar scan length " + std::to_string(v.ranges.size()) +
                                                 " does not match configured beam count " +
                                                 std::to_string(*expected_beams));
  }
  Bytes out;
  out.reserve(4 + 4 * v.ranges.size());
  put_u32(out, static_cast<std::uint32_t>(v.ranges.size()));
  for (double r : v.ranges) put_f32(out, static_cast<float>(r));
  return out;
}

inline Bytes encode_camera(const CameraFrame& v) {
  if (v.width <= 0 || v.height <= 0 || v.width > 0xffff || v.height > 0xffff) {
    throw WireError(WireError::Kind::encode, "camera dimensions out of range");
  }
  const std::size_t expect = static_cast<std::size_t>(v.width) * static_cast<std::size_t>(v.height) * 3;
  if (v.pixels.size() != expect) {
    throw WireError(WireError::Kind::encode, "camera buffer holds " + std::to_string(v.pixels.size()) +
                                                 " bytes, expected " + std::to_string(expect));
  }
  Bytes out;
  out.reserve(4 + expect);
  put_u16(out, static_cast<std::uint16_t>(v.width));
  put_u16(out, static_cast<std::uint16_t>(v.height));
  out.insert(out.end(), v.pixels.begin(), v.pixels.end());
  return out;
}

inline Bytes encode_motor(const MotorCommand& v) {
  Bytes out;
  put_f32(out, static_cast<float>(v.linear));
  put_f32(out, static_cast<float>(v.angular));
  return out;
}

/// Encodes `value`, which must hold the alternative matching `kind`.
inline Bytes encode_payload(ChannelKind kind, const Payload& value) {
  auto mismatch = [&] {
    return WireError(WireError::Kind::encode, "payload does not match channel " + std::string(to_string(kind)));
  };
  switch (kind) {
    case ChannelKind::gps:
      if (auto* v = std::get_if<GpsFix>(&value)) return encode_gps(*v);
      throw mismatch();
    case ChannelKind::compass:
      if (auto* v = std::get_if<HeadingReading>(&value)) return encode_compass(*v);
      throw mismatch();
    case ChannelKind::lidar:
      if (auto* v = std::get_if<LidarScan>(&value)) return encode_lidar(*v);
      throw mismatch();
    case ChannelKind::camera:
      if (auto* v = std::get_if<CameraFrame>(&value)) return encode_camera(*v);
      throw mismatch();
    case ChannelKind::motor:
      if (auto* v = std::get_if<MotorCommand>(&value)) return encode_motor(*v);
      throw mismatch();
  }
  throw mismatch();
}

/// Outcome of a decode: either a value or a message describing why the bytes
/// were rejected.
template <class T>
class Decoded {
 public:
  Decoded(T value) : state_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  static Decoded failure(std::string message) { return Decoded(Error{std::move(message)}); }

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }
  const T& value() const { return std::get<T>(state_); }
  T& value() { return std::get<T>(state_); }
  const T& operator*() const { return value(); }
  const T* operator->() const { return &value(); }
  const std::string& error() const { return std::get<Error>(state_).message; }

 private:
  struct Error {
    std::string message;
  };
  explicit Decoded(Error e) : state_(std::move(e)) {}
  std::variant<T, Error> state_;
};

namespace detail {
inline std::string size_error(std::string_view kind, std::size_t got, std::size_t want) {
  return std::string(kind) + " payload is " + std::to_string(got) + " bytes, expected " + std::to_string(want);
}
}  // namespace detail

inline Decoded<GpsFix> decode_gps(std::span<const std::uint8_t> in) {
  if (in.size() != 8) return Decoded<GpsFix>::failure(detail::size_error("gps", in.size(), 8));
  const float lat = get_f32(in, 0);
  const float lon = get_f32(in, 4);
  if (!std::isfinite(lat) || !std::isfinite(lon)) return Decoded<GpsFix>::failure("gps payload is not finite");
  return GpsFix{lat, lon};
}

inline Decoded<HeadingReading> decode_compass(std::span<const std::uint8_t> in) {
  if (in.size() != 4) return Decoded<HeadingReading>::failure(detail::size_error("compass", in.size(), 4));
  const float h = get_f32(in, 0);
  if (!std::isfinite(h)) return Decoded<HeadingReading>::failure("compass payload is not finite");
  return HeadingReading{h};
}

inline Decoded<LidarScan> decode_lidar(std::span<const std::uint8_t> in) {
  if (in.size() < 4) return Decoded<LidarScan>::failure(detail::size_error("lidar", in.size(), 4));
  const std::uint32_t n = get_u32(in, 0);
  if (n == 0) return Decoded<LidarScan>::failure("lidar payload declares zero beams");
  if (static_cast<std::uint64_t>(n) * 4 + 4 != in.size()) {
    return Decoded<LidarScan>::failure(detail::size_error("lidar", in.size(), 4 + 4 * static_cast<std::size_t>(n)));
  }
  LidarScan scan;
  scan.ranges.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const float r = get_f32(in, 4 + 4 * static_cast<std::size_t>(i));
    if (!std::isfinite(r)) return Decoded<LidarScan>::failure("lidar range is not finite");
    scan.ranges[i] = r;
  }
  return scan;
}

inline Decoded<CameraFrame> decode_camera(std::span<const std::uint8_t> in) {
  if (in.size() < 4) return Decoded<CameraFrame>::failure(detail::size_error("camera", in.size(), 4));
  const std::uint16_t w = get_u16(in, 0);
  const std::uint16_t h = get_u16(in, 2);
  if (w == 0 || h == 0) return Decoded<CameraFrame>::failure("camera payload has a zero dimension");
  const std::size_t expect = 4 + static_cast<std::size_t>(w) * h * 3;
  if (in.size() != expect) return Decoded<CameraFrame>::failure(detail::size_error("camera", in.size(), expect));
  CameraFrame f;
  f.width = w;
  f.height = h;
  f.pixels.assign(in.begin() + 4, in.end());
  return f;
}

inline Decoded<MotorCommand> decode_motor(std::span<const std::uint8_t> in) {
  if (in.size() != 8) return Decoded<MotorCommand>::failure(detail::size_error("motor", in.size(), 8));
  const float linear = get_f32(in, 0);
  const float angular = get_f32(in, 4);
  if (!std::isfinite(linear) || !std::isfinite(angular)) {
    return Decoded<MotorCommand>::failure("motor command is not finite");
  }
  return MotorCommand{linear, angular};
}

inline Decoded<Payload> decode_payload(ChannelKind kind, std::span<const std::uint8_t> in) {
  auto lift = [](auto d) -> Decoded<Payload> {
    if (!d) return Decoded<Payload>::failure(d.error());
    return Payload{std::move(d.value())};
  };
  switch (kind) {
    case ChannelKind::gps: return lift(decode_gps(in));
    case ChannelKind::compass: return lift(decode_compass(in));
    case ChannelKind::lidar: return lift(decode_lidar(in));
    case ChannelKind::camera: return lift(decode_camera(in));
    case ChannelKind::motor: return lift(decode_motor(in));
  }
  return Decoded<Payload>::failure("unknown channel kind");
}

/// Typed codec lookup used by the generic channel code.
template <class T>
struct Codec;

template <>
struct Codec<GpsFix> {
  static constexpr ChannelKind kind = ChannelKind::gps;
  static Bytes encode(const GpsFix& v) { return encode_gps(v); }
  static Decoded<GpsFix> decode(std::span<const std::uint8_t> in) { return decode_gps(in); }
};
template <>
struct Codec<HeadingReading> {
  static constexpr ChannelKind kind = ChannelKind::compass;
  static Bytes encode(const HeadingReading& v) { return encode_compass(v); }
  static Decoded<HeadingReading> decode(std::span<const std::uint8_t> in) { return decode_compass(in); }
};
template <>
struct Codec<LidarScan> {
  static constexpr ChannelKind kind = ChannelKind::lidar;
  static Bytes encode(const LidarScan& v) { return encode_lidar(v); }
  static Decoded<LidarScan> decode(std::span<const std::uint8_t> in) { return decode_lidar(in); }
};
template <>
struct Codec<CameraFrame> {
  static constexpr ChannelKind kind = ChannelKind::camera;
  static Bytes encode(const CameraFrame& v) { return encode_camera(v); }
  static Decoded<CameraFrame> decode(std::span<const std::uint8_t> in) { return decode_camera(in); }
};
template <>
struct Codec<MotorCommand> {
  static constexpr ChannelKind kind = ChannelKind::motor;
  static Bytes encode(const MotorCommand& v) { return encode_motor(v); }
  static Decoded<MotorCommand> decode(std::span<const std::uint8_t> in) { return decode_motor(in); }
};

}  // namespace igvsim::wire
