#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "qaes/aes.hpp"
#include "qaes/bb84.hpp"

namespace qaes {

enum class ProviderKind { LiveBB84, DerivedFromMaster, Fixed, KeyList };

std::string_view to_string(ProviderKind kind);

// Source of the key sequence qk_1, qk_2, ... Indices start at 1. Sender and
// receiver each hold a provider; decryption needs one that replays the
// sequence used for encryption.
class KeyProvider {
public:
    virtual ~KeyProvider() = default;
    virtual ProviderKind kind() const = 0;
    virtual std::size_t key_bytes() const = 0;
    virtual std::vector<std::uint8_t> next_key(std::uint64_t index) = 0;
};

// Same key for every index. Testing only.
class FixedKeyProvider final : public KeyProvider {
public:
    explicit FixedKeyProvider(std::span<const std::uint8_t> key);
    ProviderKind kind() const override { return ProviderKind::Fixed; }
    std::size_t key_bytes() const override { return key_.size(); }
    std::vector<std::uint8_t> next_key(std::uint64_t) override { return key_; }

private:
    std::vector<std::uint8_t> key_;
};

// Expands one master quantum key: qk_i is AES under the master key of the
// big-endian counters i*m, i*m+1, ..., i*m+m-1 (m = ceil(key_bytes / 16)),
// truncated to key_bytes. Both endpoints compute the same sequence.
class DerivedKeyProvider final : public KeyProvider {
public:
    DerivedKeyProvider(std::span<const std::uint8_t> master_key, std::size_t key_bytes);
    ProviderKind kind() const override { return ProviderKind::DerivedFromMaster; }
    std::size_t key_bytes() const override { return key_bytes_; }
    std::vector<std::uint8_t> next_key(std::uint64_t index) override;

private:
    aes::RoundKeySchedule master_;
    std::size_t key_bytes_;
};

// A finite list of keys (e.g. read from a key file). Throws
// KeyStreamExhausted past the end.
class KeyListProvider final : public KeyProvider {
public:
    explicit KeyListProvider(std::vector<std::vector<std::uint8_t>> keys);
    ProviderKind kind() const override { return ProviderKind::KeyList; }
    std::size_t key_bytes() const override { return keys_.front().size(); }
    std::vector<std::uint8_t> next_key(std::uint64_t index) override;

private:
    std::vector<std::vector<std::uint8_t>> keys_;
};

// Runs a fresh BB84 session for every key. Session i is seeded from the
// channel seed and i, so the receiver's provider replays the same sessions
// and takes its own copy of each key. QberAbort propagates.
class LiveBB84Provider final : public KeyProvider {
public:
    enum class Role { Sender, Receiver };

    LiveBB84Provider(std::size_t key_bytes, bb84::ChannelConfig channel, Role role,
                     bb84::KeyGenOptions options = {});
    ProviderKind kind() const override { return ProviderKind::LiveBB84; }
    std::size_t key_bytes() const override { return key_bytes_; }
    std::vector<std::uint8_t> next_key(std::uint64_t index) override;

    std::chrono::nanoseconds total_generation_time() const { return total_time_; }
    std::size_t total_pulses() const { return total_pulses_; }

private:
    std::size_t key_bytes_;
    bb84::ChannelConfig channel_;
    Role role_;
    bb84::KeyGenOptions options_;
    std::chrono::nanoseconds total_time_{0};
    std::size_t total_pulses_ = 0;
};

// Ordered consumer of a provider. Hands out whole keys (per-block keying) or
// arbitrary byte runs cut from the concatenated key sequence (per-round
// keying), with exact accounting of what was consumed.
class KeyStream {
public:
    explicit KeyStream(KeyProvider& provider) : provider_(&provider) {}

    std::vector<std::uint8_t> next_key();
    std::vector<std::uint8_t> take(std::size_t n);

    std::uint64_t keys_drawn() const { return keys_drawn_; }
    std::uint64_t bytes_consumed() const { return bytes_consumed_; }
    ProviderKind provider_kind() const { return provider_->kind(); }

private:
    KeyProvider* provider_;
    std::vector<std::uint8_t> buffer_;
    std::size_t buffer_pos_ = 0;
    std::uint64_t keys_drawn_ = 0;
    std::uint64_t bytes_consumed_ = 0;
};

}  // namespace qaes
