#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lsa::util {

std::string sha256_hex(std::string_view data);
std::uint32_t crc32(std::string_view data);
std::string hex32(std::uint32_t value);

}  // namespace lsa::util
