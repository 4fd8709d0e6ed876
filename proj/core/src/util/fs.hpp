#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace lsa::util {

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file, fsyncs, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Appends bytes and fsyncs before returning.
void append_durable(const std::filesystem::path& path, std::string_view bytes);

/// Exclusive advisory lock (flock) held for the object's lifetime. Throws
/// Locked when another holder exists.
class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& path);
  ~FileLock();
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;
  FileLock(FileLock&& other) noexcept;
  FileLock& operator=(FileLock&& other) noexcept;

 private:
  int fd_ = -1;
};

}  // namespace lsa::util
