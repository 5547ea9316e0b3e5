#include "qaes/bb84_protocol.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "qaes/errors.hpp"
#include "qaes/transcript.hpp"

namespace qaes::bb84 {

namespace {

// Sub-streams of the session seed.
constexpr std::uint64_t kSenderStream = 1;
constexpr std::uint64_t kReceiverStream = 2;
constexpr std::uint64_t kChannelStream = 3;

std::string_view side_name(Side s) { return s == Side::Sender ? "sender" : "receiver"; }

std::string_view verdict_name(Verdict::Kind k) {
    switch (k) {
        case Verdict::Kind::Continue: return "continue";
        case Verdict::Kind::Accept: return "accept";
        case Verdict::Kind::Abort: return "abort";
        case Verdict::Kind::Exhausted: return "exhausted";
    }
    return "?";
}

nlohmann::ordered_json summarize(const ClassicalMessage& msg) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    std::visit(
        [&j](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, SessionRequest>) {
                j["target_bits"] = m.target_bits;
                j["pulse_budget"] = m.pulse_budget;
            } else if constexpr (std::is_same_v<T, BasisAnnouncement>) {
                j["count"] = m.bases.size();
            } else if constexpr (std::is_same_v<T, SiftDecision>) {
                std::size_t kept = 0;
                for (auto k : m.keep) kept += k;
                j["count"] = m.keep.size();
                j["kept"] = kept;
            } else if constexpr (std::is_same_v<T, SampleDisclosure>) {
                j["count"] = m.positions.size();
            } else if constexpr (std::is_same_v<T, SampleResponse>) {
                j["count"] = m.bits.size();
            } else if constexpr (std::is_same_v<T, Verdict>) {
                j["decision"] = verdict_name(m.kind);
                j["qber"] = m.qber;
                j["key_bits"] = m.key_bits;
            }
        },
        msg);
    return j;
}

template <typename T>
T expect(std::optional<ClassicalMessage> msg) {
    if (auto* m = std::get_if<T>(&*msg)) return std::move(*m);
    throw std::logic_error("bb84 protocol: unexpected message " + std::string(message_kind(*msg)));
}

void remove_positions(std::vector<std::uint8_t>& pool, const std::vector<std::uint64_t>& positions) {
    std::size_t next = 0, out = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (next < positions.size() && positions[next] == i) {
            ++next;
            continue;
        }
        pool[out++] = pool[i];
    }
    pool.resize(out);
}

}  // namespace

std::string_view message_kind(const ClassicalMessage& msg) {
    static constexpr std::string_view names[] = {"request", "bases", "sift", "sample", "sample_response", "verdict"};
    return names[msg.index()];
}

void ClassicalChannel::send(Side from, ClassicalMessage msg) {
    if (transcript_) {
        const Side to = from == Side::Sender ? Side::Receiver : Side::Sender;
        transcript_->record("classical", side_name(from), side_name(to), message_kind(msg), summarize(msg).dump());
    }
    (from == Side::Sender ? to_receiver_ : to_sender_).push_back(std::move(msg));
}

std::optional<ClassicalMessage> ClassicalChannel::receive(Side to) {
    auto& q = to == Side::Sender ? to_sender_ : to_receiver_;
    if (q.empty()) return std::nullopt;
    ClassicalMessage m = std::move(q.front());
    q.pop_front();
    return m;
}

QuantumChannel::QuantumChannel(const ChannelConfig& config, Transcript* transcript)
    : config_(config), rng_(derive_seed(config.rng_seed, kChannelStream)), transcript_(transcript) {
    config_.validate();
}

void QuantumChannel::transmit(std::vector<PulseRecord> pulses) {
    auto arrived = apply_channel(std::move(pulses), config_, rng_);
    if (transcript_) {
        std::size_t intercepted = 0, disturbed = 0;
        for (const auto& p : arrived) {
            intercepted += p.intercepted;
            disturbed += p.disturbed_by_noise;
        }
        nlohmann::ordered_json j;
        j["count"] = arrived.size();
        j["intercepted"] = intercepted;
        j["disturbed"] = disturbed;
        transcript_->record("quantum", "sender", "receiver", "pulses", j.dump());
    }
    in_flight_.push_back(std::move(arrived));
}

std::optional<std::vector<PulseRecord>> QuantumChannel::receive() {
    if (in_flight_.empty()) return std::nullopt;
    auto p = std::move(in_flight_.front());
    in_flight_.pop_front();
    return p;
}

SenderParty::SenderParty(SessionRequest request, KeyGenOptions options, std::uint64_t seed)
    : request_(request), options_(options), rng_(derive_seed(seed, kSenderStream)) {
    if ((request_.target_bits == 0) == (request_.pulse_budget == 0))
        throw InvalidArgument("session needs exactly one of target_bits or pulse_budget");
    if (!(options_.sacrifice_fraction > 0.0 && options_.sacrifice_fraction < 1.0))
        throw InvalidArgument("sacrifice fraction must lie strictly between 0 and 1");
}

double SenderParty::qber() const {
    return sample_total_ ? static_cast<double>(mismatches_total_) / static_cast<double>(sample_total_) : 0.0;
}

std::size_t SenderParty::next_batch_size() const {
    if (request_.pulse_budget > 0) return request_.pulse_budget;

    // Expected yield: half the pulses sift, (1 - f) of those survive.
    const double f = options_.sacrifice_fraction;
    const double missing = static_cast<double>(request_.target_bits - std::min<std::size_t>(pool_.size(), request_.target_bits));
    const double sifted_for_key = missing / (1.0 - f);
    double sample_gap = 0.0;
    if (sample_total_ < options_.min_qber_sample)
        sample_gap = std::max(0.0, static_cast<double>(options_.min_qber_sample - sample_total_) - f * sifted_for_key);
    const auto pulses = static_cast<std::size_t>(std::ceil(2.0 * (sifted_for_key + sample_gap)));
    const std::size_t budget_left = options_.max_pulses - std::min(options_.max_pulses, pumped_);
    return std::min(std::max(pulses, options_.min_batch_pulses), budget_left);
}

void SenderParty::pump_batch(QuantumChannel& quantum) {
    const std::size_t n = next_batch_size();
    batch_bits_.resize(n);
    batch_bases_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        batch_bits_[i] = static_cast<std::uint8_t>(rng_.bit());
        batch_bases_[i] = rng_.bit() ? Basis::Diagonal : Basis::Rectilinear;
    }
    pumped_ += n;
    quantum.transmit(prepare_pulses(batch_bits_, batch_bases_));
}

Verdict SenderParty::decide() const {
    Verdict v;
    v.qber = qber();
    const double threshold = options_.abort_threshold;

    if (request_.pulse_budget > 0) {
        v.kind = (sample_total_ > 0 && v.qber > threshold) ? Verdict::Kind::Abort : Verdict::Kind::Accept;
        v.key_bits = v.kind == Verdict::Kind::Accept ? pool_.size() : 0;
        return v;
    }

    const bool sample_ready = sample_total_ > 0 && sample_total_ >= options_.min_qber_sample;
    if (sample_ready && v.qber > threshold) {
        v.kind = Verdict::Kind::Abort;
    } else if (sample_ready && pool_.size() >= request_.target_bits) {
        v.kind = Verdict::Kind::Accept;
        v.key_bits = request_.target_bits;
    } else if (pumped_ >= options_.max_pulses) {
        v.kind = Verdict::Kind::Exhausted;
    } else {
        v.kind = Verdict::Kind::Continue;
    }
    return v;
}

bool SenderParty::step(ClassicalChannel& classical, QuantumChannel& quantum) {
    switch (state_) {
        case State::Start:
            classical.send(Side::Sender, request_);
            pump_batch(quantum);
            state_ = State::AwaitBases;
            return true;

        case State::AwaitBases: {
            auto msg = classical.receive(Side::Sender);
            if (!msg) return false;
            const auto announced = expect<BasisAnnouncement>(std::move(msg));
            if (announced.bases.size() != batch_bases_.size())
                throw std::logic_error("bb84 protocol: basis announcement length mismatch");

            SiftDecision decision;
            decision.keep.resize(batch_bases_.size());
            const std::size_t pool_start = pool_.size();
            for (std::size_t i = 0; i < batch_bases_.size(); ++i) {
                decision.keep[i] = announced.bases[i] == batch_bases_[i];
                if (decision.keep[i]) pool_.push_back(batch_bits_[i]);
            }
            classical.send(Side::Sender, std::move(decision));

            const std::size_t fresh = pool_.size() - pool_start;
            sifted_total_ += fresh;
            std::size_t count = sample_size_for(fresh, options_.sacrifice_fraction);
            if (request_.target_bits > 0 && sample_total_ + count < options_.min_qber_sample)
                count = std::min(fresh, options_.min_qber_sample - sample_total_);

            SampleDisclosure disclosure;
            for (std::size_t p : choose_sample_positions(fresh, count, rng_)) {
                disclosure.positions.push_back(pool_start + p);
                disclosure.bits.push_back(pool_[pool_start + p]);
            }
            pending_positions_ = disclosure.positions;
            pending_bits_ = disclosure.bits;
            classical.send(Side::Sender, std::move(disclosure));
            state_ = State::AwaitSampleResponse;
            return true;
        }

        case State::AwaitSampleResponse: {
            auto msg = classical.receive(Side::Sender);
            if (!msg) return false;
            const auto response = expect<SampleResponse>(std::move(msg));
            if (response.bits.size() != pending_bits_.size())
                throw std::logic_error("bb84 protocol: sample response length mismatch");
            for (std::size_t i = 0; i < pending_bits_.size(); ++i) mismatches_total_ += pending_bits_[i] != response.bits[i];
            sample_total_ += pending_bits_.size();
            remove_positions(pool_, pending_positions_);

            const Verdict v = decide();
            classical.send(Side::Sender, v);
            switch (v.kind) {
                case Verdict::Kind::Continue:
                    pump_batch(quantum);
                    state_ = State::AwaitBases;
                    break;
                case Verdict::Kind::Accept:
                    pool_.resize(v.key_bits);
                    status_ = SessionStatus::Accepted;
                    state_ = State::Done;
                    break;
                case Verdict::Kind::Abort:
                    pool_.clear();
                    status_ = SessionStatus::QberAborted;
                    state_ = State::Done;
                    break;
                case Verdict::Kind::Exhausted:
                    pool_.clear();
                    status_ = SessionStatus::Exhausted;
                    state_ = State::Done;
                    break;
            }
            return true;
        }

        case State::Done:
            return false;
    }
    return false;
}

ReceiverParty::ReceiverParty(KeyGenOptions options, std::uint64_t seed)
    : options_(options), rng_(derive_seed(seed, kReceiverStream)) {}

bool ReceiverParty::step(ClassicalChannel& classical, QuantumChannel& quantum) {
    switch (state_) {
        case State::AwaitRequest: {
            auto msg = classical.receive(Side::Receiver);
            if (!msg) return false;
            expect<SessionRequest>(std::move(msg));
            state_ = State::AwaitPulses;
            return true;
        }

        case State::AwaitPulses: {
            auto pulses = quantum.receive();
            if (!pulses) return false;
            batch_pulses_ = std::move(*pulses);
            batch_bases_.resize(batch_pulses_.size());
            for (auto& b : batch_bases_) b = rng_.bit() ? Basis::Diagonal : Basis::Rectilinear;
            batch_bits_ = measure_pulses(batch_pulses_, batch_bases_, rng_);
            classical.send(Side::Receiver, BasisAnnouncement{batch_bases_});
            state_ = State::AwaitSift;
            return true;
        }

        case State::AwaitSift: {
            auto msg = classical.receive(Side::Receiver);
            if (!msg) return false;
            const auto decision = expect<SiftDecision>(std::move(msg));
            if (decision.keep.size() != batch_bits_.size())
                throw std::logic_error("bb84 protocol: sift decision length mismatch");
            const std::size_t log_base = pulse_log_.size();
            for (std::size_t i = 0; i < decision.keep.size(); ++i) {
                if (!decision.keep[i]) continue;
                pool_.push_back(batch_bits_[i]);
                if (options_.record_pulses) sifted_indices_.push_back(log_base + i);
            }
            if (options_.record_pulses) pulse_log_.insert(pulse_log_.end(), batch_pulses_.begin(), batch_pulses_.end());
            state_ = State::AwaitSample;
            return true;
        }

        case State::AwaitSample: {
            auto msg = classical.receive(Side::Receiver);
            if (!msg) return false;
            const auto disclosure = expect<SampleDisclosure>(std::move(msg));
            SampleResponse response;
            for (auto p : disclosure.positions) {
                if (p >= pool_.size()) throw std::logic_error("bb84 protocol: sample position out of range");
                response.bits.push_back(pool_[p]);
            }
            remove_positions(pool_, disclosure.positions);
            classical.send(Side::Receiver, std::move(response));
            state_ = State::AwaitVerdict;
            return true;
        }

        case State::AwaitVerdict: {
            auto msg = classical.receive(Side::Receiver);
            if (!msg) return false;
            const auto v = expect<Verdict>(std::move(msg));
            if (v.kind == Verdict::Kind::Continue) {
                state_ = State::AwaitPulses;
            } else {
                if (v.kind == Verdict::Kind::Accept) pool_.resize(v.key_bits);
                else pool_.clear();
                state_ = State::Done;
            }
            return true;
        }

        case State::Done:
            return false;
    }
    return false;
}

SessionOutcome run_session(const SessionRequest& request, const ChannelConfig& config, const KeyGenOptions& options) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    ClassicalChannel classical(options.transcript);
    QuantumChannel quantum(config, options.transcript);
    SenderParty sender(request, options, config.rng_seed);
    ReceiverParty receiver(options, config.rng_seed);

    while (!(sender.done() && receiver.done())) {
        bool progressed = sender.step(classical, quantum);
        progressed = receiver.step(classical, quantum) || progressed;
        if (!progressed) throw std::logic_error("bb84 protocol: session deadlocked");
    }

    const auto elapsed = std::chrono::steady_clock::now() - start;

    SessionOutcome out;
    out.status = sender.status();
    out.key.bits = sender.key_bits();
    out.key.receiver_bits = receiver.key_bits();
    out.key.qber_estimate = sender.qber();
    out.key.qber_sample_size = sender.sample_size();
    out.key.pulses_pumped = sender.pulses_pumped();
    out.key.sifted_bits = sender.sifted_bits();
    // Clamp to one tick so T_qkg is strictly positive even on coarse clocks.
    out.key.generation_time = std::max(std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed),
                                       std::chrono::nanoseconds{1});
    if (options.record_pulses) {
        out.pulse_log = receiver.pulse_log();
        out.sifted_pulse_indices = receiver.sifted_pulse_indices();
    }
    return out;
}

QuantumKey generate_key(std::size_t target_bits, const ChannelConfig& config, const KeyGenOptions& options) {
    if (target_bits == 0) throw InvalidArgument("target key length must be positive");
    auto outcome = run_session(SessionRequest{target_bits, 0}, config, options);
    switch (outcome.status) {
        case SessionStatus::QberAborted:
            throw QberAbort(outcome.key.qber_estimate, options.abort_threshold);
        case SessionStatus::Exhausted:
            throw ExhaustionLimit("pulse budget of " + std::to_string(options.max_pulses) +
                                  " exhausted before reaching " + std::to_string(target_bits) + " key bits");
        case SessionStatus::Accepted:
            break;
    }
    return std::move(outcome.key);
}

SessionOutcome run_fixed_session(std::size_t pulses, const ChannelConfig& config, const KeyGenOptions& options) {
    if (pulses == 0) throw InvalidArgument("pulse count must be positive");
    return run_session(SessionRequest{0, pulses}, config, options);
}

}  // namespace qaes::bb84
