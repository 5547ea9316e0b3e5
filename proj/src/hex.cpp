#include "qaes/hex.hpp"

#include <filesystem>
#include <fstream>

#include "qaes/errors.hpp"

namespace qaes {

namespace {

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw InvalidArgument("hex string has odd length");
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = nibble(hex[2 * i]);
        const int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw InvalidArgument("invalid hex character");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

std::vector<std::vector<std::uint8_t>> read_key_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open key file: " + path);
    std::vector<std::vector<std::uint8_t>> keys;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        keys.push_back(from_hex(line));
    }
    return keys;
}

void write_key_file(const std::string& path, const std::vector<std::vector<std::uint8_t>>& keys) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write key file: " + path);
    for (const auto& k : keys) out << to_hex(k) << '\n';
    out.close();
    // Key material: owner read/write only.
    std::filesystem::permissions(path,
                                 std::filesystem::perms::owner_read | std::filesystem::perms::owner_write,
                                 std::filesystem::perm_options::replace);
}

}  // namespace qaes
