#include "qaes/aes.hpp"

#include <algorithm>

#include "qaes/errors.hpp"

namespace qaes::aes {

namespace {

constexpr std::array<std::uint8_t, 256> kSbox = {
0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
};

constexpr std::array<std::uint8_t, 256> kInvSbox = {
    0x52, 0x09, 0x6a, 0xd5, 0x30, 0x36, 0xa5, 0x38, 0xbf, 0x40, 0xa3, 0x9e, 0x81, 0xf3, 0xd7, 0xfb,
    0x7c, 0xe3, 0x39, 0x82, 0x9b, 0x2f, 0xff, 0x87, 0x34, 0x8e, 0x43, 0x44, 0xc4, 0xde, 0xe9, 0xcb,
    0x54, 0x7b, 0x94, 0x32, 0xa6, 0xc2, 0x23, 0x3d, 0xee, 0x4c, 0x95, 0x0b, 0x42, 0xfa, 0xc3, 0x4e,
    0x08, 0x2e, 0xa1, 0x66, 0x28, 0xd9, 0x24, 0xb2, 0x76, 0x5b, 0xa2, 0x49, 0x6d, 0x8b, 0xd1, 0x25,
    0x72, 0xf8, 0xf6, 0x64, 0x86, 0x68, 0x98, 0x16, 0xd4, 0xa4, 0x5c, 0xcc, 0x5d, 0x65, 0xb6, 0x92,
    0x6c, 0x70, 0x48, 0x50, 0xfd, 0xed, 0xb9, 0xda, 0x5e, 0x15, 0x46, 0x57, 0xa7, 0x8d, 0x9d, 0x84,
    0x90, 0xd8, 0xab, 0x00, 0x8c, 0xbc, 0xd3, 0x0a, 0xf7, 0xe4, 0x58, 0x05, 0xb8, 0xb3, 0x45, 0x06,
    0xd0, 0x2c, 0x1e, 0x8f, 0xca, 0x3f, 0x0f, 0x02, 0xc1, 0xaf, 0xbd, 0x03, 0x01, 0x13, 0x8a, 0x6b,
    0x3a, 0x91, 0x11, 0x41, 0x4f, 0x67, 0xdc, 0xea, 0x97, 0xf2, 0xcf, 0xce, 0xf0, 0xb4, 0xe6, 0x73,
    0x96, 0xac, 0x74, 0x22, 0xe7, 0xad, 0x35, 0x85, 0xe2, 0xf9, 0x37, 0xe8, 0x1c, 0x75, 0xdf, 0x6e,
    0x47, 0xf1, 0x1a, 0x71, 0x1d, 0x29, 0xc5, 0x89, 0x6f, 0xb7, 0x62, 0x0e, 0xaa, 0x18, 0xbe, 0x1b,
    0xfc, 0x56, 0x3e, 0x4b, 0xc6, 0xd2, 0x79, 0x20, 0x9a, 0xdb, 0xc0, 0xfe, 0x78, 0xcd, 0x5a, 0xf4,
    0x1f, 0xdd, 0xa8, 0x33, 0x88, 0x07, 0xc7, 0x31, 0xb1, 0x12, 0x10, 0x59, 0x27, 0x80, 0xec, 0x5f,
    0x60, 0x51, 0x7f, 0xa9, 0x19, 0xb5, 0x4a, 0x0d, 0x2d, 0xe5, 0x7a, 0x9f, 0x93, 0xc9, 0x9c, 0xef,
    0xa0, 0xe0, 0x3b, 0x4d, 0xae, 0x2a, 0xf5, 0xb0, 0xc8, 0xeb, 0xbb, 0x3c, 0x83, 0x53, 0x99, 0x61,
    0x17, 0x2b, 0x04, 0x7e, 0xba, 0x77, 0xd6, 0x26, 0xe1, 0x69, 0x14, 0x63, 0x55, 0x21, 0x0c, 0x7d,
};

constexpr std::array<std::uint8_t, 10> kRcon = {0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1b, 0x36};

constexpr std::uint8_t xtime(std::uint8_t x) {
    return static_cast<std::uint8_t>((x << 1) ^ ((x & 0x80) ? 0x1b : 0x00));
}

constexpr std::uint8_t gmul(std::uint8_t a, std::uint8_t b) {
    std::uint8_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        a = xtime(a);
        b >>= 1;
    }
    return r;
}

std::uint32_t sub_word(std::uint32_t w) {
    return (std::uint32_t{kSbox[w >> 24]} << 24) | (std::uint32_t{kSbox[(w >> 16) & 0xff]} << 16) |
           (std::uint32_t{kSbox[(w >> 8) & 0xff]} << 8) | std::uint32_t{kSbox[w & 0xff]};
}

std::uint32_t rot_word(std::uint32_t w) { return (w << 8) | (w >> 24); }

}  // namespace

std::uint8_t sbox_lookup(std::uint8_t b, SboxDirection direction) {
    return direction == SboxDirection::Forward ? kSbox[b] : kInvSbox[b];
}

void StateMatrix::sub_bytes() {
    for (auto& c : cells_) c = kSbox[c];
}

void StateMatrix::inv_sub_bytes() {
    for (auto& c : cells_) c = kInvSbox[c];
}

// Row r rotates left by r positions.
void StateMatrix::shift_rows() {
    for (std::size_t r = 1; r < 4; ++r) {
        std::array<std::uint8_t, 4> row{};
        for (std::size_t c = 0; c < 4; ++c) row[c] = at(r, (c + r) % 4);
        for (std::size_t c = 0; c < 4; ++c) at(r, c) = row[c];
    }
}

void StateMatrix::inv_shift_rows() {
    for (std::size_t r = 1; r < 4; ++r) {
        std::array<std::uint8_t, 4> row{};
        for (std::size_t c = 0; c < 4; ++c) row[(c + r) % 4] = at(r, c);
        for (std::size_t c = 0; c < 4; ++c) at(r, c) = row[c];
    }
}

void StateMatrix::mix_columns() {
    for (std::size_t c = 0; c < 4; ++c) {
        const std::uint8_t a0 = at(0, c), a1 = at(1, c), a2 = at(2, c), a3 = at(3, c);
        const std::uint8_t all = a0 ^ a1 ^ a2 ^ a3;
        at(0, c) = a0 ^ all ^ xtime(a0 ^ a1);
        at(1, c) = a1 ^ all ^ xtime(a1 ^ a2);
        at(2, c) = a2 ^ all ^ xtime(a2 ^ a3);
        at(3, c) = a3 ^ all ^ xtime(a3 ^ a0);
    }
}

void StateMatrix::inv_mix_columns() {
    for (std::size_t c = 0; c < 4; ++c) {
        const std::uint8_t a0 = at(0, c), a1 = at(1, c), a2 = at(2, c), a3 = at(3, c);
        at(0, c) = gmul(a0, 0x0e) ^ gmul(a1, 0x0b) ^ gmul(a2, 0x0d) ^ gmul(a3, 0x09);
        at(1, c) = gmul(a0, 0x09) ^ gmul(a1, 0x0e) ^ gmul(a2, 0x0b) ^ gmul(a3, 0x0d);
        at(2, c) = gmul(a0, 0x0d) ^ gmul(a1, 0x09) ^ gmul(a2, 0x0e) ^ gmul(a3, 0x0b);
        at(3, c) = gmul(a0, 0x0b) ^ gmul(a1, 0x0d) ^ gmul(a2, 0x09) ^ gmul(a3, 0x0e);
    }
}

void StateMatrix::add_round_key(const Block& round_key) {
    for (std::size_t i = 0; i < kBlockSize; ++i) cells_[i] ^= round_key[i];
}

int rounds_for_key_bytes(std::size_t key_bytes) {
    switch (key_bytes) {
        case 16: return 10;
        case 24: return 12;
        case 32: return 14;
        default:
            throw InvalidKeyLength("AES key must be 16, 24 or 32 bytes, got " + std::to_string(key_bytes));
    }
}

CipherKey::CipherKey(std::span<const std::uint8_t> bytes) : bytes_(bytes.begin(), bytes.end()) {
    rounds_for_key_bytes(bytes_.size());
}

int CipherKey::rounds() const { return rounds_for_key_bytes(bytes_.size()); }

RoundKeySchedule::RoundKeySchedule(std::vector<Block> round_keys, ScheduleSource source)
    : round_keys_(std::move(round_keys)), source_(source) {
    const auto n = round_keys_.size();
    if (n != 11 && n != 13 && n != 15)
        throw InvalidArgument("round key schedule must hold 11, 13 or 15 keys, got " + std::to_string(n));
}

RoundKeySchedule RoundKeySchedule::from_stream(std::span<const std::uint8_t> material, int rounds) {
    const auto count = static_cast<std::size_t>(rounds + 1);
    if (material.size() != count * kBlockSize)
        throw LengthMismatch("per-round key material must be (Nr+1)*16 bytes");
    std::vector<Block> keys(count);
    for (std::size_t i = 0; i < count; ++i)
        std::copy_n(material.begin() + static_cast<std::ptrdiff_t>(i * kBlockSize), kBlockSize, keys[i].begin());
    return RoundKeySchedule(std::move(keys), ScheduleSource::QuantumStream);
}

std::vector<std::uint32_t> RoundKeySchedule::words() const {
    std::vector<std::uint32_t> w;
    w.reserve(round_keys_.size() * 4);
    for (const auto& rk : round_keys_)
        for (std::size_t i = 0; i < 4; ++i)
            w.push_back((std::uint32_t{rk[4 * i]} << 24) | (std::uint32_t{rk[4 * i + 1]} << 16) |
                        (std::uint32_t{rk[4 * i + 2]} << 8) | std::uint32_t{rk[4 * i + 3]});
    return w;
}

RoundKeySchedule key_expansion(const CipherKey& key) {
    const std::size_t nk = key.size() / 4;
    const auto nr = static_cast<std::size_t>(key.rounds());
    const std::size_t total = 4 * (nr + 1);
    const auto kb = key.bytes();

    std::vector<std::uint32_t> w(total);
    for (std::size_t i = 0; i < nk; ++i)
        w[i] = (std::uint32_t{kb[4 * i]} << 24) | (std::uint32_t{kb[4 * i + 1]} << 16) |
               (std::uint32_t{kb[4 * i + 2]} << 8) | std::uint32_t{kb[4 * i + 3]};
    for (std::size_t i = nk; i < total; ++i) {
        std::uint32_t t = w[i - 1];
        if (i % nk == 0)
            t = sub_word(rot_word(t)) ^ (std::uint32_t{kRcon[i / nk - 1]} << 24);
        else if (nk > 6 && i % nk == 4)
            t = sub_word(t);
        w[i] = w[i - nk] ^ t;
    }

    std::vector<Block> keys(nr + 1);
    for (std::size_t r = 0; r <= nr; ++r)
        for (std::size_t j = 0; j < 4; ++j) {
            const std::uint32_t word = w[4 * r + j];
            keys[r][4 * j] = static_cast<std::uint8_t>(word >> 24);
            keys[r][4 * j + 1] = static_cast<std::uint8_t>(word >> 16);
            keys[r][4 * j + 2] = static_cast<std::uint8_t>(word >> 8);
            keys[r][4 * j + 3] = static_cast<std::uint8_t>(word);
        }
    return RoundKeySchedule(std::move(keys), ScheduleSource::Expanded);
}

Block encrypt_block(const Block& block, const RoundKeySchedule& schedule) {
    const int nr = schedule.rounds();
    StateMatrix s(block);
    s.add_round_key(schedule.round_key(0));
    for (int r = 1; r < nr; ++r) {
        s.sub_bytes();
        s.shift_rows();
        s.mix_columns();
        s.add_round_key(schedule.round_key(static_cast<std::size_t>(r)));
    }
    s.sub_bytes();
    s.shift_rows();
    s.add_round_key(schedule.round_key(static_cast<std::size_t>(nr)));
    return s.bytes();
}

Block decrypt_block(const Block& block, const RoundKeySchedule& schedule) {
    const int nr = schedule.rounds();
    StateMatrix s(block);
    s.add_round_key(schedule.round_key(static_cast<std::size_t>(nr)));
    for (int r = nr - 1; r >= 1; --r) {
        s.inv_shift_rows();
        s.inv_sub_bytes();
        s.add_round_key(schedule.round_key(static_cast<std::size_t>(r)));
        s.inv_mix_columns();
    }
    s.inv_shift_rows();
    s.inv_sub_bytes();
    s.add_round_key(schedule.round_key(0));
    return s.bytes();
}

std::vector<std::uint8_t> pkcs7_pad(std::span<const std::uint8_t> data) {
    const std::size_t pad = kBlockSize - data.size() % kBlockSize;
    std::vector<std::uint8_t> out(data.begin(), data.end());
    out.insert(out.end(), pad, static_cast<std::uint8_t>(pad));
    return out;
}

std::vector<std::uint8_t> pkcs7_unpad(std::span<const std::uint8_t> data) {
    if (data.empty() || data.size() % kBlockSize != 0)
        throw BadPadding("padded data length is not a positive multiple of 16");
    const std::uint8_t pad = data.back();
    if (pad == 0 || pad > kBlockSize) throw BadPadding("invalid PKCS#7 padding length");
    for (std::size_t i = data.size() - pad; i < data.size(); ++i)
        if (data[i] != pad) throw BadPadding("inconsistent PKCS#7 padding bytes");
    return {data.begin(), data.end() - pad};
}

std::vector<std::uint8_t> ecb_encrypt(std::span<const std::uint8_t> plaintext, const RoundKeySchedule& schedule) {
    std::vector<std::uint8_t> out = pkcs7_pad(plaintext);
    Block b;
    for (std::size_t off = 0; off < out.size(); off += kBlockSize) {
        std::copy_n(out.begin() + static_cast<std::ptrdiff_t>(off), kBlockSize, b.begin());
        b = encrypt_block(b, schedule);
        std::copy(b.begin(), b.end(), out.begin() + static_cast<std::ptrdiff_t>(off));
    }
    return out;
}

std::vector<std::uint8_t> ecb_decrypt(std::span<const std::uint8_t> ciphertext, const RoundKeySchedule& schedule) {
    if (ciphertext.empty() || ciphertext.size() % kBlockSize != 0)
        throw BadPadding("ciphertext length is not a positive multiple of 16");
    std::vector<std::uint8_t> out(ciphertext.begin(), ciphertext.end());
    Block b;
    for (std::size_t off = 0; off < out.size(); off += kBlockSize) {
        std::copy_n(out.begin() + static_cast<std::ptrdiff_t>(off), kBlockSize, b.begin());
        b = decrypt_block(b, schedule);
        std::copy(b.begin(), b.end(), out.begin() + static_cast<std::ptrdiff_t>(off));
    }
    return pkcs7_unpad(out);
}

}  // namespace qaes::aes
