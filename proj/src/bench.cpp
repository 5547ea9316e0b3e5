#include "qaes/bench.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <tuple>

#include "qaes/aes.hpp"
#include "qaes/key_provider.hpp"
#include "qaes/rng.hpp"

namespace qaes::bench {

namespace {

using Clock = std::chrono::steady_clock;
using std::chrono::nanoseconds;

std::vector<std::uint8_t> make_input(std::size_t size_kb, std::uint64_t seed) {
    Rng rng(derive_seed(seed, size_kb));
    std::vector<std::uint8_t> data(size_kb * kBytesPerKb);
    for (auto& b : data) b = rng.byte();
    return data;
}

std::string format_us(nanoseconds ns) {
    char buf[48];
    const auto v = ns.count();
    std::snprintf(buf, sizeof buf, "%" PRId64 ".%03" PRId64, static_cast<std::int64_t>(v / 1000),
                  static_cast<std::int64_t>(v % 1000));
    return buf;
}

void check_block_count(std::size_t input_bytes, std::size_t ciphertext_bytes) {
    if (ciphertext_bytes != (input_bytes + 1 + 15) / 16 * 16)
        throw std::runtime_error("benchmark: ciphertext block count is not ceil((size+1)/16)");
}

struct Phases {
    nanoseconds keygen{0};
    nanoseconds encrypt{0};
};

class AesRunner {
public:
    AesRunner(const BenchConfig& config, std::uint64_t seed) : key_(config.key_size_bits / 8) {
        Rng rng(seed);
        for (auto& b : key_) b = rng.byte();
    }

    Phases run(const std::vector<std::uint8_t>& input) {
        const auto t0 = Clock::now();
        const auto schedule = aes::key_expansion(aes::CipherKey(key_));
        last_ = aes::ecb_encrypt(input, schedule);
        const auto t1 = Clock::now();
        return {nanoseconds{0}, std::chrono::duration_cast<nanoseconds>(t1 - t0)};
    }

    void verify(const std::vector<std::uint8_t>& input) const {
        check_block_count(input.size(), last_.size());
        if (aes::ecb_decrypt(last_, aes::key_expansion(aes::CipherKey(key_))) != input)
            throw std::runtime_error("benchmark: AES round trip mismatch");
    }

private:
    std::vector<std::uint8_t> key_;
    std::vector<std::uint8_t> last_;
};

class QaesRunner {
public:
    explicit QaesRunner(const BenchConfig& config) : config_(config) {
        qaes_config_.key_size_bits = config.key_size_bits;
        qaes_config_.key_mode = config.key_mode;
        qaes_config_.channel = config.channel;
    }

    Phases run(const std::vector<std::uint8_t>& input, std::uint64_t session_seed) {
        bb84::ChannelConfig channel = config_.channel;
        channel.rng_seed = session_seed;

        const auto k0 = Clock::now();
        const auto key = bb84::generate_key(config_.key_size_bits, channel);
        const auto k1 = Clock::now();

        const auto e0 = Clock::now();
        DerivedKeyProvider provider(key.to_bytes(), qaes_config_.key_bytes());
        last_ = qaes_encrypt(input, qaes_config_, provider);
        const auto e1 = Clock::now();

        master_ = key.to_bytes();
        return {std::chrono::duration_cast<nanoseconds>(k1 - k0), std::chrono::duration_cast<nanoseconds>(e1 - e0)};
    }

    void verify(const std::vector<std::uint8_t>& input) const {
        check_block_count(input.size(), last_.body.size());
        DerivedKeyProvider receiver(master_, qaes_config_.key_bytes());
        if (qaes_decrypt(last_, qaes_config_, receiver) != input)
            throw std::runtime_error("benchmark: QAES round trip mismatch");
    }

private:
    BenchConfig config_;
    QaesConfig qaes_config_;
    QaesCiphertext last_;
    std::vector<std::uint8_t> master_;
};

}  // namespace

std::string_view to_string(Algorithm a) { return a == Algorithm::AES ? "AES" : "QAES"; }

template <typename T>
T median(std::vector<T> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty range");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return (values[mid - 1] + values[mid]) / 2;
}

template double median<double>(std::vector<double>);
template nanoseconds median<nanoseconds>(std::vector<nanoseconds>);

std::vector<BenchRecord> run_benchmark(std::span<const std::size_t> sizes_kb, std::span<const Algorithm> algorithms,
                                       const BenchConfig& config) {
    if (config.repetitions == 0) throw std::invalid_argument("benchmark needs at least one repetition");
    for (auto s : sizes_kb)
        if (s == 0) throw std::invalid_argument("benchmark sizes must be positive");

    std::vector<BenchRecord> records;
    const std::uint64_t seed = config.channel.rng_seed;
    for (auto algorithm : algorithms) {
        for (auto size_kb : sizes_kb) {
            const auto input = make_input(size_kb, seed);
            AesRunner aes_runner(config, derive_seed(seed, 0xae5));
            QaesRunner qaes_runner(config);

            std::uint64_t session = 0;
            auto run_once = [&]() -> Phases {
                if (algorithm == Algorithm::AES) return aes_runner.run(input);
                return qaes_runner.run(input, derive_seed(seed, (size_kb << 20) + session++));
            };

            for (std::size_t w = 0; w < config.warmup; ++w) run_once();
            for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
                const Phases ph = run_once();
                if (rep == 0) {
                    if (algorithm == Algorithm::AES) aes_runner.verify(input);
                    else qaes_runner.verify(input);
                }
                BenchRecord r;
                r.algorithm = algorithm;
                r.key_size_bits = config.key_size_bits;
                r.input_size_kb = size_kb;
                r.rep = rep;
                r.t_keygen = ph.keygen;
                r.t_encrypt = ph.encrypt;
                r.t_total = ph.keygen + ph.encrypt;
                r.repetitions = config.repetitions;
                r.timestamp = std::chrono::system_clock::now();
                records.push_back(r);
            }
        }
    }
    return records;
}

std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records) {
    std::map<std::tuple<int, std::size_t, std::size_t>, std::vector<const BenchRecord*>> groups;
    for (const auto& r : records)
        groups[{static_cast<int>(r.algorithm), r.key_size_bits, r.input_size_kb}].push_back(&r);

    std::vector<BenchSummary> out;
    for (const auto& [key, group] : groups) {
        std::vector<nanoseconds> keygen, encrypt, total;
        for (const auto* r : group) {
            keygen.push_back(r->t_keygen);
            encrypt.push_back(r->t_encrypt);
            total.push_back(r->t_total);
        }
        BenchSummary s;
        s.algorithm = group.front()->algorithm;
        s.key_size_bits = std::get<1>(key);
        s.input_size_kb = std::get<2>(key);
        s.median_keygen = median(keygen);
        s.median_encrypt = median(encrypt);
        s.median_total = median(total);
        out.push_back(s);
    }
    return out;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
    out << "algorithm,key_size,input_kb,rep,t_keygen_us,t_encrypt_us,t_total_us\n";
    for (const auto& r : records)
        out << to_string(r.algorithm) << ',' << r.key_size_bits << ',' << r.input_size_kb << ',' << r.rep << ','
            << format_us(r.t_keygen) << ',' << format_us(r.t_encrypt) << ',' << format_us(r.t_total) << '\n';
}

void write_plot_data(std::ostream& out, const std::vector<BenchSummary>& summaries) {
    out << "# algorithm key_size input_kb median_keygen_us median_encrypt_us median_total_us\n";
    for (const auto& s : summaries)
        out << to_string(s.algorithm) << ' ' << s.key_size_bits << ' ' << s.input_size_kb << ' '
            << format_us(s.median_keygen) << ' ' << format_us(s.median_encrypt) << ' ' << format_us(s.median_total)
            << '\n';
}

std::vector<KeygenProfileRow> keygen_profile(std::span<const std::size_t> qubit_budgets,
                                             std::span<const double> noise_levels, std::span<const bool> eve_settings,
                                             std::size_t sessions, std::uint64_t base_seed,
                                             const bb84::KeyGenOptions& options) {
    std::vector<KeygenProfileRow> rows;
    for (auto pulses : qubit_budgets)
        for (auto noise : noise_levels)
            for (auto eve : eve_settings) {
                KeygenProfileRow row;
                row.pulses = pulses;
                row.noise_level = noise;
                row.eve_enabled = eve;
                row.sessions = sessions;
                std::vector<double> bits, qber;
                std::vector<nanoseconds> times;
                for (std::size_t s = 0; s < sessions; ++s) {
                    bb84::ChannelConfig channel{noise, eve, derive_seed(base_seed, s)};
                    const auto outcome = bb84::run_fixed_session(pulses, channel, options);
                    if (outcome.status != bb84::SessionStatus::Accepted) {
                        ++row.aborted;
                        continue;
                    }
                    bits.push_back(static_cast<double>(outcome.key.bits.size()));
                    qber.push_back(outcome.key.qber_estimate);
                    times.push_back(outcome.key.generation_time);
                }
                if (!bits.empty()) {
                    row.median_surviving_bits = median(bits);
                    row.median_qber = median(qber);
                    row.median_time = median(times);
                }
                rows.push_back(row);
            }
    return rows;
}

void write_profile_csv(std::ostream& out, const std::vector<KeygenProfileRow>& rows) {
    out << "pulses,noise,eve,sessions,aborted,median_key_bits,median_qber,median_t_qkg_us\n";
    for (const auto& r : rows) {
        char buf[64];
        out << r.pulses << ',';
        std::snprintf(buf, sizeof buf, "%.4f", r.noise_level);
        out << buf << ',' << (r.eve_enabled ? 1 : 0) << ',' << r.sessions << ',' << r.aborted << ',';
        if (r.aborted == r.sessions) {
            out << ",,\n";
            continue;
        }
        std::snprintf(buf, sizeof buf, "%.1f,%.4f,", r.median_surviving_bits, r.median_qber);
        out << buf << format_us(r.median_time) << '\n';
    }
}

}  // namespace qaes::bench
