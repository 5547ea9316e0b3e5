#pragma once

// BB84 quantum key distribution, simulated.
//
// Single photons are modelled as PulseRecords. The quantum channel applies an
// optional intercept-resend eavesdropper and depolarizing noise; the parties
// then sift over a classical channel, sacrifice a random sample of the sifted
// bits to estimate the QBER, and keep the rest as key.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qaes/rng.hpp"

namespace qaes {
class Transcript;
}

namespace qaes::bb84 {

enum class Basis : std::uint8_t { Rectilinear, Diagonal };

enum class Polarization : std::uint8_t { H, V, LD, RD };

std::string_view to_string(Basis b);
std::string_view to_string(Polarization p);

Basis basis_of(Polarization p);

// Encoding table: Rectilinear 0->H, 1->V; Diagonal 0->LD, 1->RD.
Polarization encode(unsigned bit, Basis basis);

// The bit a matched-basis measurement of `p` yields.
unsigned decode(Polarization p);

struct ChannelConfig {
    double noise_level = 0.0;  // per-pulse depolarizing probability
    bool eve_enabled = false;
    std::uint64_t rng_seed = 0;

    // Throws InvalidArgument unless 0 <= noise_level <= 1.
    void validate() const;
};

struct PulseRecord {
    std::uint8_t sender_bit = 0;
    Basis sender_basis = Basis::Rectilinear;
    Polarization polarization_sent = Polarization::H;
    // What reaches the receiver after eavesdropping and noise.
    Polarization polarization_arrived = Polarization::H;
    bool disturbed_by_noise = false;
    bool intercepted = false;
    Basis receiver_basis = Basis::Rectilinear;
    std::uint8_t received_bit = 0;
};

// Throws LengthMismatch when the sequences differ in length.
std::vector<PulseRecord> prepare_pulses(std::span<const std::uint8_t> bits, std::span<const Basis> bases);

// Per pulse: if Eve is enabled she measures in a uniformly random basis and
// resends the collapsed state; then, with probability noise_level, the
// polarization is replaced by a uniform draw from all four states.
std::vector<PulseRecord> apply_channel(std::vector<PulseRecord> pulses, const ChannelConfig& config, Rng& rng);

// Measures each arriving pulse in the given basis and records basis and bit
// in the pulse. Matched basis decodes deterministically, otherwise the
// outcome is a fair coin.
std::vector<std::uint8_t> measure_pulses(std::span<PulseRecord> pulses, std::span<const Basis> bases, Rng& rng);

struct SiftResult {
    std::vector<std::uint8_t> sender_bits;
    std::vector<std::uint8_t> receiver_bits;
    std::vector<std::size_t> kept_indices;
};

SiftResult sift(std::span<const Basis> sender_bases, std::span<const Basis> receiver_bases,
                std::span<const std::uint8_t> sender_bits, std::span<const std::uint8_t> receiver_bits);

// `count` distinct positions in [0, n), uniformly chosen, ascending.
std::vector<std::size_t> choose_sample_positions(std::size_t n, std::size_t count, Rng& rng);

// Sample size for a sacrifice fraction: round(fraction * n), clamped to [1, n].
std::size_t sample_size_for(std::size_t n, double sacrifice_fraction);

struct QberEstimate {
    double qber = 0.0;
    std::size_t sample_size = 0;
    std::size_t mismatches = 0;
    std::vector<std::uint8_t> sender_survivors;
    std::vector<std::uint8_t> receiver_survivors;
};

// Publicly compares and discards a uniformly chosen sacrifice_fraction of
// the aligned sifted bits. Throws EmptyInput on empty input, LengthMismatch
// on misaligned input, InvalidArgument unless 0 < sacrifice_fraction < 1.
QberEstimate estimate_qber(std::span<const std::uint8_t> sender_bits, std::span<const std::uint8_t> receiver_bits,
                           double sacrifice_fraction, Rng& rng);

struct KeyGenOptions {
    double sacrifice_fraction = 0.2;
    double abort_threshold = 0.11;
    // A target-driven session is not accepted before at least this many sifted
    // bits have been disclosed for QBER estimation.
    std::size_t min_qber_sample = 96;
    std::size_t min_batch_pulses = 16;
    std::size_t max_pulses = 10'000'000;
    bool record_pulses = false;
    Transcript* transcript = nullptr;
};

struct QuantumKey {
    std::vector<std::uint8_t> bits;           // sender's copy
    std::vector<std::uint8_t> receiver_bits;  // receiver's copy, same length
    double qber_estimate = 0.0;
    std::size_t qber_sample_size = 0;
    std::size_t pulses_pumped = 0;
    std::size_t sifted_bits = 0;
    std::chrono::nanoseconds generation_time{0};  // T_qkg

    // Positions where the two copies disagree (residual channel errors).
    std::size_t residual_errors() const;

    // Bits packed most-significant first. Throws InvalidArgument unless the
    // key length is a multiple of 8.
    std::vector<std::uint8_t> to_bytes() const;
    std::vector<std::uint8_t> receiver_bytes() const;
};

enum class SessionStatus { Accepted, QberAborted, Exhausted };

struct SessionOutcome {
    SessionStatus status = SessionStatus::Accepted;
    QuantumKey key;
    std::vector<PulseRecord> pulse_log;           // only with record_pulses
    std::vector<std::size_t> sifted_pulse_indices;  // indices into pulse_log
};

// Pumps batches until at least target_bits survive (and the QBER sample
// reaches min_qber_sample), then truncates to target_bits.
// Throws QberAbort or ExhaustionLimit.
QuantumKey generate_key(std::size_t target_bits, const ChannelConfig& config, const KeyGenOptions& options = {});

// One batch of exactly `pulses` pulses, sifted and sampled by fraction only.
// Never throws on abort; the outcome carries the status.
SessionOutcome run_fixed_session(std::size_t pulses, const ChannelConfig& config, const KeyGenOptions& options = {});

std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits);

}  // namespace qaes::bb84
