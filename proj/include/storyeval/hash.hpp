#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace storyeval {

std::array<std::uint8_t, 32> sha256(std::string_view data);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace storyeval
