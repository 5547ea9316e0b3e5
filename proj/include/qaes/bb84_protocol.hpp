#pragma once

// Two-party BB84 session: a sender and a receiver state machine talking over
// an explicit quantum link and a classical duplex channel.
//
// Message flow per batch:
//   sender   --pulses-------------> receiver   (quantum)
//   receiver --BasisAnnouncement--> sender
//   sender   --SiftDecision-------> receiver
//   sender   --SampleDisclosure---> receiver
//   receiver --SampleResponse-----> sender
//   sender   --Verdict------------> receiver   (continue / accept / abort)
// The first batch is preceded by a SessionRequest from the sender.

#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "qaes/bb84.hpp"
#include "qaes/rng.hpp"

namespace qaes::bb84 {

enum class Side { Sender, Receiver };

struct SessionRequest {
    std::uint64_t target_bits = 0;   // target-driven session when > 0
    std::uint64_t pulse_budget = 0;  // single fixed batch when > 0
};

struct BasisAnnouncement {
    std::vector<Basis> bases;
};

struct SiftDecision {
    std::vector<std::uint8_t> keep;  // 1 where the bases agree
};

// Positions index the receiver's pool of unrevealed sifted bits.
struct SampleDisclosure {
    std::vector<std::uint64_t> positions;
    std::vector<std::uint8_t> bits;
};

struct SampleResponse {
    std::vector<std::uint8_t> bits;
};

struct Verdict {
    enum class Kind : std::uint8_t { Continue, Accept, Abort, Exhausted };
    Kind kind = Kind::Continue;
    double qber = 0.0;
    std::uint64_t key_bits = 0;
};

using ClassicalMessage =
    std::variant<SessionRequest, BasisAnnouncement, SiftDecision, SampleDisclosure, SampleResponse, Verdict>;

std::string_view message_kind(const ClassicalMessage& msg);

class ClassicalChannel {
public:
    explicit ClassicalChannel(Transcript* transcript = nullptr) : transcript_(transcript) {}

    void send(Side from, ClassicalMessage msg);
    std::optional<ClassicalMessage> receive(Side to);
    bool empty() const { return to_sender_.empty() && to_receiver_.empty(); }

private:
    std::deque<ClassicalMessage> to_sender_;
    std::deque<ClassicalMessage> to_receiver_;
    Transcript* transcript_;
};

// One-way sender-to-receiver photon link. Noise and the eavesdropper draw
// from their own stream of the channel seed.
class QuantumChannel {
public:
    explicit QuantumChannel(const ChannelConfig& config, Transcript* transcript = nullptr);

    void transmit(std::vector<PulseRecord> pulses);
    std::optional<std::vector<PulseRecord>> receive();

private:
    ChannelConfig config_;
    Rng rng_;
    std::deque<std::vector<PulseRecord>> in_flight_;
    Transcript* transcript_;
};

class SenderParty {
public:
    SenderParty(SessionRequest request, KeyGenOptions options, std::uint64_t seed);

    // Handles at most one inbound message; returns whether anything happened.
    bool step(ClassicalChannel& classical, QuantumChannel& quantum);
    bool done() const { return state_ == State::Done; }

    SessionStatus status() const { return status_; }
    const std::vector<std::uint8_t>& key_bits() const { return pool_; }
    double qber() const;
    std::size_t sample_size() const { return sample_total_; }
    std::size_t pulses_pumped() const { return pumped_; }
    std::size_t sifted_bits() const { return sifted_total_; }

private:
    enum class State { Start, AwaitBases, AwaitSampleResponse, Done };

    void pump_batch(QuantumChannel& quantum);
    std::size_t next_batch_size() const;
    Verdict decide() const;

    SessionRequest request_;
    KeyGenOptions options_;
    Rng rng_;
    State state_ = State::Start;
    SessionStatus status_ = SessionStatus::Accepted;

    std::vector<std::uint8_t> batch_bits_;
    std::vector<Basis> batch_bases_;
    std::vector<std::uint8_t> pool_;
    std::vector<std::uint64_t> pending_positions_;
    std::vector<std::uint8_t> pending_bits_;
    std::size_t pumped_ = 0;
    std::size_t sifted_total_ = 0;
    std::size_t sample_total_ = 0;
    std::size_t mismatches_total_ = 0;
};

class ReceiverParty {
public:
    ReceiverParty(KeyGenOptions options, std::uint64_t seed);

    bool step(ClassicalChannel& classical, QuantumChannel& quantum);
    bool done() const { return state_ == State::Done; }

    const std::vector<std::uint8_t>& key_bits() const { return pool_; }
    const std::vector<PulseRecord>& pulse_log() const { return pulse_log_; }
    const std::vector<std::size_t>& sifted_pulse_indices() const { return sifted_indices_; }

private:
    enum class State { AwaitRequest, AwaitPulses, AwaitSift, AwaitSample, AwaitVerdict, Done };

    KeyGenOptions options_;
    Rng rng_;
    State state_ = State::AwaitRequest;

    std::vector<Basis> batch_bases_;
    std::vector<std::uint8_t> batch_bits_;
    std::vector<PulseRecord> batch_pulses_;
    std::vector<std::uint8_t> pool_;
    std::vector<PulseRecord> pulse_log_;
    std::vector<std::size_t> sifted_indices_;
};

// Reference execution: single-threaded, interleaving the two parties until
// both finish. Wall-clock time of the whole session is the key's
// generation_time.
SessionOutcome run_session(const SessionRequest& request, const ChannelConfig& config, const KeyGenOptions& options);

}  // namespace qaes::bb84
