#pragma once

#include <mutex>

namespace rangelab::detail {

// FFTW planning is not thread-safe; every planner call holds this lock.
inline std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace rangelab::detail
