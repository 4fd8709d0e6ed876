#pragma once

#include <chrono>
#include <functional>
#include <string>

namespace lsa {

using WallClock = std::function<std::chrono::system_clock::time_point()>;
using MonotonicClock = std::function<std::chrono::steady_clock::time_point()>;

WallClock system_wall_clock();
MonotonicClock steady_monotonic_clock();

/// Deterministic clock for tests and golden files: returns start, then
/// start + step, start + 2*step, ...
WallClock stepping_wall_clock(std::chrono::system_clock::time_point start,
                              std::chrono::milliseconds step);

/// "2024-01-31T12:00:00.123Z"
std::string format_utc(std::chrono::system_clock::time_point t);

}  // namespace lsa
