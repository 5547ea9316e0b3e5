#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qaes {

std::string to_hex(std::span<const std::uint8_t> bytes);

// Accepts upper or lower case; throws InvalidArgument on odd length or a
// non-hex character.
std::vector<std::uint8_t> from_hex(std::string_view hex);

// One lowercase-hex key per line; blank lines are skipped.
std::vector<std::vector<std::uint8_t>> read_key_file(const std::string& path);
void write_key_file(const std::string& path, const std::vector<std::vector<std::uint8_t>>& keys);

}  // namespace qaes
