#pragma once

// Timing harness comparing plain AES with quantum-keyed AES.
//
// For QAES the two phases are timed disjointly and summed, so every record
// satisfies t_total = t_keygen + t_encrypt exactly:
//   t_keygen   one live BB84 session producing the master key (T_qkg)
//   t_encrypt  qaes_encrypt of the whole input with keys derived from it
// Plain AES records have t_keygen = 0 and time key expansion plus ECB.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "qaes/bb84.hpp"
#include "qaes/qaes.hpp"

namespace qaes::bench {

enum class Algorithm { AES, QAES };

std::string_view to_string(Algorithm a);

inline constexpr std::size_t kBytesPerKb = 1024;

struct BenchRecord {
    Algorithm algorithm = Algorithm::AES;
    std::size_t key_size_bits = 128;
    std::size_t input_size_kb = 0;
    std::size_t rep = 0;
    std::chrono::nanoseconds t_total{0};
    std::chrono::nanoseconds t_keygen{0};
    std::chrono::nanoseconds t_encrypt{0};
    std::size_t repetitions = 0;
    std::chrono::system_clock::time_point timestamp;
};

struct BenchConfig {
    std::size_t key_size_bits = 128;
    KeyMode key_mode = KeyMode::PerBlockKey;
    std::size_t repetitions = 10;
    std::size_t warmup = 3;
    bb84::ChannelConfig channel;  // seed also drives the input data
};

// One record per (algorithm, size, repetition). Each input is decrypted once
// outside the timed sections and compared with the original; a mismatch or a
// wrong block count throws std::runtime_error.
std::vector<BenchRecord> run_benchmark(std::span<const std::size_t> sizes_kb, std::span<const Algorithm> algorithms,
                                       const BenchConfig& config);

struct BenchSummary {
    Algorithm algorithm = Algorithm::AES;
    std::size_t key_size_bits = 128;
    std::size_t input_size_kb = 0;
    std::chrono::nanoseconds median_keygen{0};
    std::chrono::nanoseconds median_encrypt{0};
    std::chrono::nanoseconds median_total{0};
};

std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records);

// Header: algorithm,key_size,input_kb,rep,t_keygen_us,t_encrypt_us,t_total_us
void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);
// Whitespace-separated medians, one row per (algorithm, size), for gnuplot.
void write_plot_data(std::ostream& out, const std::vector<BenchSummary>& summaries);

struct KeygenProfileRow {
    std::size_t pulses = 0;
    double noise_level = 0.0;
    bool eve_enabled = false;
    std::size_t sessions = 0;
    std::size_t aborted = 0;
    // Medians over the accepted sessions; zero when every session aborted.
    double median_surviving_bits = 0.0;
    double median_qber = 0.0;
    std::chrono::nanoseconds median_time{0};
};

// Fixed-budget sessions for every (pulses, noise, eve) combination, each
// repeated over `sessions` seeds. Aborts are counted, not thrown.
std::vector<KeygenProfileRow> keygen_profile(std::span<const std::size_t> qubit_budgets,
                                             std::span<const double> noise_levels, std::span<const bool> eve_settings,
                                             std::size_t sessions, std::uint64_t base_seed,
                                             const bb84::KeyGenOptions& options = {});

// Header: pulses,noise,eve,sessions,aborted,median_key_bits,median_qber,median_t_qkg_us
void write_profile_csv(std::ostream& out, const std::vector<KeygenProfileRow>& rows);

// Median of a non-empty range (mean of the middle pair for even sizes).
template <typename T>
T median(std::vector<T> values);

}  // namespace qaes::bench
