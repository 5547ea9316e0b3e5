#include "qaes/key_provider.hpp"

#include <algorithm>

#include "qaes/errors.hpp"

namespace qaes {

std::string_view to_string(ProviderKind kind) {
    switch (kind) {
        case ProviderKind::LiveBB84: return "live-bb84";
        case ProviderKind::DerivedFromMaster: return "derived";
        case ProviderKind::Fixed: return "fixed";
        case ProviderKind::KeyList: return "key-list";
    }
    return "?";
}

FixedKeyProvider::FixedKeyProvider(std::span<const std::uint8_t> key) : key_(key.begin(), key.end()) {
    aes::rounds_for_key_bytes(key_.size());
}

DerivedKeyProvider::DerivedKeyProvider(std::span<const std::uint8_t> master_key, std::size_t key_bytes)
    : master_(aes::key_expansion(aes::CipherKey(master_key))), key_bytes_(key_bytes) {
    aes::rounds_for_key_bytes(key_bytes_);
}

std::vector<std::uint8_t> DerivedKeyProvider::next_key(std::uint64_t index) {
    const std::uint64_t per_key = (key_bytes_ + aes::kBlockSize - 1) / aes::kBlockSize;
    std::vector<std::uint8_t> key;
    key.reserve(per_key * aes::kBlockSize);
    for (std::uint64_t j = 0; j < per_key; ++j) {
        const std::uint64_t counter = index * per_key + j;
        aes::Block block{};
        for (int b = 0; b < 8; ++b) block[15 - b] = static_cast<std::uint8_t>(counter >> (8 * b));
        const auto out = aes::encrypt_block(block, master_);
        key.insert(key.end(), out.begin(), out.end());
    }
    key.resize(key_bytes_);
    return key;
}

KeyListProvider::KeyListProvider(std::vector<std::vector<std::uint8_t>> keys) : keys_(std::move(keys)) {
    if (keys_.empty()) throw KeyStreamExhausted("key list is empty");
    for (const auto& k : keys_) {
        aes::rounds_for_key_bytes(k.size());
        if (k.size() != keys_.front().size()) throw InvalidKeyLength("keys in a key list must share one length");
    }
}

std::vector<std::uint8_t> KeyListProvider::next_key(std::uint64_t index) {
    if (index == 0 || index > keys_.size())
        throw KeyStreamExhausted("key list holds " + std::to_string(keys_.size()) + " keys, key " +
                                 std::to_string(index) + " requested");
    return keys_[index - 1];
}

LiveBB84Provider::LiveBB84Provider(std::size_t key_bytes, bb84::ChannelConfig channel, Role role,
                                   bb84::KeyGenOptions options)
    : key_bytes_(key_bytes), channel_(channel), role_(role), options_(options) {
    aes::rounds_for_key_bytes(key_bytes_);
    channel_.validate();
}

std::vector<std::uint8_t> LiveBB84Provider::next_key(std::uint64_t index) {
    bb84::ChannelConfig session = channel_;
    session.rng_seed = derive_seed(channel_.rng_seed, 0x1000 + index);
    const auto key = bb84::generate_key(8 * key_bytes_, session, options_);
    total_time_ += key.generation_time;
    total_pulses_ += key.pulses_pumped;
    return role_ == Role::Sender ? key.to_bytes() : key.receiver_bytes();
}

std::vector<std::uint8_t> KeyStream::next_key() {
    auto key = provider_->next_key(++keys_drawn_);
    bytes_consumed_ += key.size();
    return key;
}

std::vector<std::uint8_t> KeyStream::take(std::size_t n) {
    std::vector<std::uint8_t> out;
    out.reserve(n);
    while (out.size() < n) {
        if (buffer_pos_ == buffer_.size()) {
            buffer_ = provider_->next_key(++keys_drawn_);
            buffer_pos_ = 0;
        }
        const std::size_t chunk = std::min(n - out.size(), buffer_.size() - buffer_pos_);
        out.insert(out.end(), buffer_.begin() + static_cast<std::ptrdiff_t>(buffer_pos_),
                   buffer_.begin() + static_cast<std::ptrdiff_t>(buffer_pos_ + chunk));
        buffer_pos_ += chunk;
    }
    bytes_consumed_ += n;
    return out;
}

}  // namespace qaes
