#include "qaes/qaes.hpp"

#include <algorithm>
#include <array>

#include "qaes/errors.hpp"

namespace qaes {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'Q', 'A', 'E', 'S'};

void check_provider(const QaesConfig& config, const KeyProvider& provider) {
    config.rounds();
    if (provider.key_bytes() != config.key_bytes())
        throw InvalidArgument("key provider yields " + std::to_string(8 * provider.key_bytes()) +
                              "-bit keys, configuration needs " + std::to_string(config.key_size_bits));
}

aes::Block load_block(std::span<const std::uint8_t> data, std::size_t index) {
    aes::Block b;
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(index * aes::kBlockSize), aes::kBlockSize, b.begin());
    return b;
}

// Produces the schedule for the next block in stream order.
class ScheduleSource {
public:
    ScheduleSource(const QaesConfig& config, KeyProvider& provider)
        : mode_(config.key_mode), rounds_(config.rounds()), stream_(provider) {}

    aes::RoundKeySchedule next() {
        if (mode_ == KeyMode::PerBlockKey) return aes::key_expansion(aes::CipherKey(stream_.next_key()));
        const auto material = stream_.take(chunks_per_block() * aes::kBlockSize);
        return aes::RoundKeySchedule::from_stream(material, rounds_);
    }

    std::uint64_t chunks_per_block() const {
        return mode_ == KeyMode::PerRoundKey ? static_cast<std::uint64_t>(rounds_ + 1) : 0;
    }

    void fill(QaesStats* stats, std::uint64_t blocks) const {
        if (!stats) return;
        stats->blocks = blocks;
        stats->keys_drawn = stream_.keys_drawn();
        stats->stream_bytes_consumed = stream_.bytes_consumed();
        stats->stream_chunks_per_block = chunks_per_block();
    }

private:
    KeyMode mode_;
    int rounds_;
    KeyStream stream_;
};

}  // namespace

std::string_view to_string(KeyMode mode) { return mode == KeyMode::PerBlockKey ? "per-block" : "per-round"; }

KeyMode parse_key_mode(std::string_view text) {
    if (text == "per-block") return KeyMode::PerBlockKey;
    if (text == "per-round") return KeyMode::PerRoundKey;
    throw InvalidArgument("key mode must be per-block or per-round");
}

int QaesConfig::rounds() const {
    if (key_size_bits % 8 != 0) throw InvalidKeyLength("key size must be 128, 192 or 256 bits");
    return aes::rounds_for_key_bytes(key_bytes());
}

std::uint8_t key_size_code_for(std::size_t key_size_bits) {
    switch (key_size_bits) {
        case 128: return 1;
        case 192: return 2;
        case 256: return 3;
        default: throw InvalidKeyLength("key size must be 128, 192 or 256 bits");
    }
}

std::size_t QaesHeader::key_size_bits() const {
    switch (key_size_code) {
        case 1: return 128;
        case 2: return 192;
        case 3: return 256;
        default: throw HeaderMismatch("unknown key size code " + std::to_string(key_size_code));
    }
}

std::vector<std::uint8_t> QaesCiphertext::serialize() const {
    std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
    out.push_back(header.version);
    out.push_back(header.key_size_code);
    out.push_back(static_cast<std::uint8_t>(header.key_mode));
    for (int b = 7; b >= 0; --b) out.push_back(static_cast<std::uint8_t>(header.block_count >> (8 * b)));
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

QaesCiphertext QaesCiphertext::parse(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize) throw HeaderMismatch("container shorter than its header");
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) throw HeaderMismatch("bad container magic");
    QaesCiphertext c;
    c.header.version = bytes[4];
    if (c.header.version != kContainerVersion)
        throw HeaderMismatch("unsupported container version " + std::to_string(c.header.version));
    c.header.key_size_code = bytes[5];
    c.header.key_size_bits();
    if (bytes[6] > 1) throw HeaderMismatch("unknown key mode code " + std::to_string(bytes[6]));
    c.header.key_mode = static_cast<KeyMode>(bytes[6]);
    for (std::size_t i = 7; i < kHeaderSize; ++i) c.header.block_count = (c.header.block_count << 8) | bytes[i];
    const auto body = bytes.subspan(kHeaderSize);
    if (c.header.block_count == 0 || body.size() / aes::kBlockSize != c.header.block_count ||
        body.size() % aes::kBlockSize != 0)
        throw HeaderMismatch("body length does not match block count");
    c.body.assign(body.begin(), body.end());
    return c;
}

QaesCiphertext qaes_encrypt(std::span<const std::uint8_t> plaintext, const QaesConfig& config, KeyProvider& provider,
                            QaesStats* stats) {
    check_provider(config, provider);
    ScheduleSource schedules(config, provider);

    QaesCiphertext out;
    out.header.key_size_code = key_size_code_for(config.key_size_bits);
    out.header.key_mode = config.key_mode;
    out.body = aes::pkcs7_pad(plaintext);
    const std::uint64_t blocks = out.body.size() / aes::kBlockSize;
    out.header.block_count = blocks;

    for (std::uint64_t i = 0; i < blocks; ++i) {
        const auto c = aes::encrypt_block(load_block(out.body, i), schedules.next());
        std::copy(c.begin(), c.end(), out.body.begin() + static_cast<std::ptrdiff_t>(i * aes::kBlockSize));
    }
    schedules.fill(stats, blocks);
    return out;
}

std::vector<std::uint8_t> qaes_decrypt(const QaesCiphertext& ciphertext, const QaesConfig& config,
                                       KeyProvider& provider, QaesStats* stats) {
    const auto& h = ciphertext.header;
    if (h.version != kContainerVersion) throw HeaderMismatch("unsupported container version");
    if (h.key_size_bits() != config.key_size_bits)
        throw HeaderMismatch("container was encrypted with " + std::to_string(h.key_size_bits()) + "-bit keys");
    if (h.key_mode != config.key_mode)
        throw HeaderMismatch("container was encrypted in " + std::string(to_string(h.key_mode)) + " mode");
    if (h.block_count == 0 || ciphertext.body.size() != h.block_count * aes::kBlockSize)
        throw HeaderMismatch("body length does not match block count");
    check_provider(config, provider);

    ScheduleSource schedules(config, provider);
    std::vector<std::uint8_t> plain(ciphertext.body.size());
    for (std::uint64_t i = 0; i < h.block_count; ++i) {
        const auto p = aes::decrypt_block(load_block(ciphertext.body, i), schedules.next());
        std::copy(p.begin(), p.end(), plain.begin() + static_cast<std::ptrdiff_t>(i * aes::kBlockSize));
    }
    schedules.fill(stats, h.block_count);
    return aes::pkcs7_unpad(plain);
}

}  // namespace qaes
