#pragma once

// Quantum-keyed AES block mode.
//
// The plaintext is PKCS#7 padded and split into blocks P_1..P_n. Block i is
// encrypted with its own key material taken, in order, from a KeyProvider:
//
//   PerBlockKey  C_i = AES(P_i) under key_expansion(qk_i)
//   PerRoundKey  C_i = AES(P_i) under a schedule whose Nr+1 round keys are the
//                next (Nr+1)*16 bytes of the key sequence; no expansion
//
// Every block is independent of every other block, so decryption may run in
// any order and a corrupted block affects only itself.
//
// Container layout (all multi-byte integers big-endian):
//   offset 0  4 bytes  magic "QAES"
//   offset 4  1 byte   version (1)
//   offset 5  1 byte   key size code: 1 = 128, 2 = 192, 3 = 256 bits
//   offset 6  1 byte   key mode: 0 = per-block, 1 = per-round
//   offset 7  8 bytes  block count n
//   offset 15 16*n     ciphertext blocks

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qaes/bb84.hpp"
#include "qaes/key_provider.hpp"

namespace qaes {

enum class KeyMode : std::uint8_t { PerBlockKey = 0, PerRoundKey = 1 };

std::string_view to_string(KeyMode mode);
// Accepts "per-block" or "per-round"; throws InvalidArgument otherwise.
KeyMode parse_key_mode(std::string_view text);

struct QaesConfig {
    std::size_t key_size_bits = 128;
    KeyMode key_mode = KeyMode::PerBlockKey;
    bb84::ChannelConfig channel;

    std::size_t key_bytes() const { return key_size_bits / 8; }
    // Throws InvalidKeyLength unless key_size_bits is 128, 192 or 256.
    int rounds() const;
};

inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr std::size_t kHeaderSize = 15;

struct QaesHeader {
    std::uint8_t version = kContainerVersion;
    std::uint8_t key_size_code = 1;
    KeyMode key_mode = KeyMode::PerBlockKey;
    std::uint64_t block_count = 0;

    std::size_t key_size_bits() const;
};

std::uint8_t key_size_code_for(std::size_t key_size_bits);

struct QaesCiphertext {
    QaesHeader header;
    std::vector<std::uint8_t> body;

    std::vector<std::uint8_t> serialize() const;
    // Throws HeaderMismatch on bad magic, version, codes or body length.
    static QaesCiphertext parse(std::span<const std::uint8_t> bytes);
};

struct QaesStats {
    std::uint64_t blocks = 0;
    std::uint64_t keys_drawn = 0;
    std::uint64_t stream_bytes_consumed = 0;
    std::uint64_t stream_chunks_per_block = 0;  // 16-byte chunks; per-round mode only
};

QaesCiphertext qaes_encrypt(std::span<const std::uint8_t> plaintext, const QaesConfig& config, KeyProvider& provider,
                            QaesStats* stats = nullptr);

// Throws HeaderMismatch when the header disagrees with config, BadPadding
// when the recovered padding is malformed (wrong keys or corrupted data).
std::vector<std::uint8_t> qaes_decrypt(const QaesCiphertext& ciphertext, const QaesConfig& config,
                                       KeyProvider& provider, QaesStats* stats = nullptr);

}  // namespace qaes
