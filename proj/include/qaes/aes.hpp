#pragma once

// Table-driven AES (FIPS-197) for 128/192/256-bit keys.
//
// NOTE: this implementation is NOT constant time. S-box lookups are
// data-dependent memory accesses and leak through caches. It exists to drive
// the quantum-keyed block mode and its benchmarks, not to protect real data.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qaes::aes {

inline constexpr std::size_t kBlockSize = 16;

using Block = std::array<std::uint8_t, kBlockSize>;

enum class SboxDirection { Forward, Inverse };

std::uint8_t sbox_lookup(std::uint8_t b, SboxDirection direction);

// The 4x4 byte state. Input bytes fill it column by column, so the byte at
// (row, col) is block[row + 4 * col].
class StateMatrix {
public:
    StateMatrix() = default;
    explicit StateMatrix(const Block& block) : cells_(block) {}

    std::uint8_t& at(std::size_t row, std::size_t col) { return cells_[row + 4 * col]; }
    std::uint8_t at(std::size_t row, std::size_t col) const { return cells_[row + 4 * col]; }

    const Block& bytes() const { return cells_; }

    void sub_bytes();
    void inv_sub_bytes();
    void shift_rows();
    void inv_shift_rows();
    void mix_columns();
    void inv_mix_columns();
    void add_round_key(const Block& round_key);

private:
    Block cells_{};
};

// A validated AES key of 16, 24 or 32 bytes.
class CipherKey {
public:
    // Throws InvalidKeyLength for any other length.
    explicit CipherKey(std::span<const std::uint8_t> bytes);

    std::span<const std::uint8_t> bytes() const { return bytes_; }
    std::size_t size() const { return bytes_.size(); }
    int rounds() const;

private:
    std::vector<std::uint8_t> bytes_;
};

// Number of rounds for a key of `key_bytes` bytes (10, 12 or 14).
int rounds_for_key_bytes(std::size_t key_bytes);

enum class ScheduleSource { Expanded, QuantumStream };

// Nr+1 round keys. Built either by the standard key expansion or directly
// from externally supplied key material (per-round quantum keying).
class RoundKeySchedule {
public:
    // Throws InvalidArgument unless round_keys.size() is 11, 13 or 15.
    RoundKeySchedule(std::vector<Block> round_keys, ScheduleSource source);

    // Builds a schedule from (Nr+1)*16 bytes, 16 per round key, in order.
    static RoundKeySchedule from_stream(std::span<const std::uint8_t> material, int rounds);

    int rounds() const { return static_cast<int>(round_keys_.size()) - 1; }
    const Block& round_key(std::size_t i) const { return round_keys_[i]; }
    const std::vector<Block>& round_keys() const { return round_keys_; }
    ScheduleSource source() const { return source_; }

    // The expansion as 32-bit big-endian words w[0..4(Nr+1)).
    std::vector<std::uint32_t> words() const;

private:
    std::vector<Block> round_keys_;
    ScheduleSource source_;
};

RoundKeySchedule key_expansion(const CipherKey& key);

Block encrypt_block(const Block& block, const RoundKeySchedule& schedule);
Block decrypt_block(const Block& block, const RoundKeySchedule& schedule);

// PKCS#7 to a 16-byte boundary. A full padding block is appended when the
// input is already aligned.
std::vector<std::uint8_t> pkcs7_pad(std::span<const std::uint8_t> data);
// Throws BadPadding on malformed padding or a length that is not a positive
// multiple of 16.
std::vector<std::uint8_t> pkcs7_unpad(std::span<const std::uint8_t> data);

// Electronic codebook with PKCS#7 under one schedule; the baseline cipher.
std::vector<std::uint8_t> ecb_encrypt(std::span<const std::uint8_t> plaintext, const RoundKeySchedule& schedule);
std::vector<std::uint8_t> ecb_decrypt(std::span<const std::uint8_t> ciphertext, const RoundKeySchedule& schedule);

}  // namespace qaes::aes
