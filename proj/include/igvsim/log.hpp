// SPDX-License-Identifier: Apache-2.0
// log.hpp
// Minimal line logger to stderr, safe to call from any thread.
#pragma once

#include <cstdio>
#include <mutex>
#include <string>
#include <string_view>

namespace igvsim {

inline std::mutex& log_mutex() {
  static std::mutex mu;
  return mu;
}

inline void log_line(std::string_view component, const std::string& message) {
  std::lock_guard lock(log_mutex());
  std::fprintf(stderr, "[%.*s] %s\n", static_cast<int>(component.size()), component.data(), message.c_str());
  std::fflush(stderr);
}

}  // namespace igvsim
