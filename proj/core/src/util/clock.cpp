#include "lsa/clock.hpp"

#include <ctime>
#include <memory>
#include <mutex>

#include <fmt/format.h>

namespace lsa {

WallClock system_wall_clock() {
  return [] { return std::chrono::system_clock::now(); };
}

MonotonicClock steady_monotonic_clock() {
  return [] { return std::chrono::steady_clock::now(); };
}

WallClock stepping_wall_clock(std::chrono::system_clock::time_point start,
                              std::chrono::milliseconds step) {
  struct Shared {
    std::mutex mutex;
    std::chrono::system_clock::time_point next;
  };
  auto shared = std::make_shared<Shared>();
  shared->next = start;
  return [shared, step] {
    std::lock_guard lock(shared->mutex);
    const auto now = shared->next;
    shared->next += step;
    return now;
  };
}

std::string format_utc(std::chrono::system_clock::time_point t) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch());
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(ms);
  auto millis = (ms - secs).count();
  if (millis < 0) {
    millis += 1000;
    secs -= std::chrono::seconds(1);
  }
  const std::time_t tt = static_cast<std::time_t>(secs.count());
  std::tm tm{};
  gmtime_r(&tt, &tm);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:03}Z", tm.tm_year + 1900, tm.tm_mon + 1,
                     tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, millis);
}

}  // namespace lsa
