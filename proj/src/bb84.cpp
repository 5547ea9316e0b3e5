#include "qaes/bb84.hpp"

#include <algorithm>
#include <cmath>

#include "qaes/errors.hpp"

namespace qaes::bb84 {

std::string_view to_string(Basis b) { return b == Basis::Rectilinear ? "rectilinear" : "diagonal"; }

std::string_view to_string(Polarization p) {
    switch (p) {
        case Polarization::H: return "H";
        case Polarization::V: return "V";
        case Polarization::LD: return "LD";
        case Polarization::RD: return "RD";
    }
    return "?";
}

Basis basis_of(Polarization p) {
    return (p == Polarization::H || p == Polarization::V) ? Basis::Rectilinear : Basis::Diagonal;
}

Polarization encode(unsigned bit, Basis basis) {
    if (basis == Basis::Rectilinear) return bit ? Polarization::V : Polarization::H;
    return bit ? Polarization::RD : Polarization::LD;
}

unsigned decode(Polarization p) { return (p == Polarization::V || p == Polarization::RD) ? 1u : 0u; }

void ChannelConfig::validate() const {
    if (!(noise_level >= 0.0 && noise_level <= 1.0))
        throw InvalidArgument("noise level must be a probability in [0, 1]");
}

std::vector<PulseRecord> prepare_pulses(std::span<const std::uint8_t> bits, std::span<const Basis> bases) {
    if (bits.size() != bases.size()) throw LengthMismatch("prepare_pulses: bits and bases differ in length");
    std::vector<PulseRecord> out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        auto& p = out[i];
        p.sender_bit = bits[i] & 1u;
        p.sender_basis = bases[i];
        p.polarization_sent = encode(p.sender_bit, p.sender_basis);
        p.polarization_arrived = p.polarization_sent;
    }
    return out;
}

std::vector<PulseRecord> apply_channel(std::vector<PulseRecord> pulses, const ChannelConfig& config, Rng& rng) {
    config.validate();
    for (auto& p : pulses) {
        if (config.eve_enabled) {
            const Basis eve_basis = rng.bit() ? Basis::Diagonal : Basis::Rectilinear;
            const unsigned eve_bit =
                basis_of(p.polarization_arrived) == eve_basis ? decode(p.polarization_arrived) : rng.bit();
            p.polarization_arrived = encode(eve_bit, eve_basis);
            p.intercepted = true;
        }
        if (config.noise_level > 0.0 && rng.bernoulli(config.noise_level)) {
            p.polarization_arrived = static_cast<Polarization>(rng.uniform_index(4));
            p.disturbed_by_noise = true;
        }
    }
    return pulses;
}

std::vector<std::uint8_t> measure_pulses(std::span<PulseRecord> pulses, std::span<const Basis> bases, Rng& rng) {
    if (pulses.size() != bases.size()) throw LengthMismatch("measure_pulses: pulses and bases differ in length");
    std::vector<std::uint8_t> bits(pulses.size());
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        auto& p = pulses[i];
        p.receiver_basis = bases[i];
        p.received_bit = static_cast<std::uint8_t>(
            basis_of(p.polarization_arrived) == bases[i] ? decode(p.polarization_arrived) : rng.bit());
        bits[i] = p.received_bit;
    }
    return bits;
}

SiftResult sift(std::span<const Basis> sender_bases, std::span<const Basis> receiver_bases,
                std::span<const std::uint8_t> sender_bits, std::span<const std::uint8_t> receiver_bits) {
    const std::size_t n = sender_bases.size();
    if (receiver_bases.size() != n || sender_bits.size() != n || receiver_bits.size() != n)
        throw LengthMismatch("sift: input sequences differ in length");
    SiftResult r;
    for (std::size_t i = 0; i < n; ++i) {
        if (sender_bases[i] != receiver_bases[i]) continue;
        r.sender_bits.push_back(sender_bits[i]);
        r.receiver_bits.push_back(receiver_bits[i]);
        r.kept_indices.push_back(i);
    }
    return r;
}

std::vector<std::size_t> choose_sample_positions(std::size_t n, std::size_t count, Rng& rng) {
    if (count > n) throw InvalidArgument("sample larger than population");
    // Partial Fisher-Yates over the index range.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::size_t sample_size_for(std::size_t n, double sacrifice_fraction) {
    if (n == 0) return 0;
    const auto k = static_cast<std::size_t>(std::llround(sacrifice_fraction * static_cast<double>(n)));
    return std::clamp<std::size_t>(k, 1, n);
}

QberEstimate estimate_qber(std::span<const std::uint8_t> sender_bits, std::span<const std::uint8_t> receiver_bits,
                           double sacrifice_fraction, Rng& rng) {
    if (sender_bits.size() != receiver_bits.size())
        throw LengthMismatch("estimate_qber: sifted sequences are not aligned");
    if (sender_bits.empty()) throw EmptyInput("estimate_qber: no sifted bits");
    if (!(sacrifice_fraction > 0.0 && sacrifice_fraction < 1.0))
        throw InvalidArgument("sacrifice fraction must lie strictly between 0 and 1");

    const std::size_t n = sender_bits.size();
    const auto positions = choose_sample_positions(n, sample_size_for(n, sacrifice_fraction), rng);

    QberEstimate est;
    est.sample_size = positions.size();
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (next < positions.size() && positions[next] == i) {
            if (sender_bits[i] != receiver_bits[i]) ++est.mismatches;
            ++next;
            continue;
        }
        est.sender_survivors.push_back(sender_bits[i]);
        est.receiver_survivors.push_back(receiver_bits[i]);
    }
    est.qber = static_cast<double>(est.mismatches) / static_cast<double>(est.sample_size);
    return est;
}

std::size_t QuantumKey::residual_errors() const {
    std::size_t e = 0;
    for (std::size_t i = 0; i < bits.size() && i < receiver_bits.size(); ++i) e += bits[i] != receiver_bits[i];
    return e;
}

std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits) {
    if (bits.size() % 8 != 0) throw InvalidArgument("bit count is not a multiple of 8");
    std::vector<std::uint8_t> out(bits.size() / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    return out;
}

std::vector<std::uint8_t> QuantumKey::to_bytes() const { return pack_bits(bits); }

std::vector<std::uint8_t> QuantumKey::receiver_bytes() const { return pack_bits(receiver_bits); }

}  // namespace qaes::bb84
