#pragma once

// Twelve statistical randomness tests after NIST SP 800-22 rev. 1a, each
// producing one or more p-values. A sequence passes a test when every
// p-value is at least kAlpha.

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qaes::nist {

inline constexpr double kAlpha = 0.01;

class BitSequence {
public:
    BitSequence() = default;
    // Each element must be 0 or 1.
    explicit BitSequence(std::vector<std::uint8_t> bits);

    // Bytes unpacked most-significant bit first, truncated to max_bits.
    static BitSequence from_bytes(std::span<const std::uint8_t> bytes,
                                  std::size_t max_bits = std::numeric_limits<std::size_t>::max());
    // "0110..." (whitespace ignored).
    static BitSequence from_string(std::string_view text);

    std::size_t size() const { return bits_.size(); }
    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
    std::span<const std::uint8_t> bits() const { return bits_; }

    BitSequence complement() const;

private:
    std::vector<std::uint8_t> bits_;
};

enum class TestId {
    Frequency,
    BlockFrequency,
    CumulativeSums,
    Runs,
    LongestRun,
    Rank,
    Spectral,
    NonOverlappingTemplate,
    OverlappingTemplate,
    Universal,
    ApproximateEntropy,
    Serial,
};

const std::array<TestId, 12>& all_tests();
std::string_view test_name(TestId id);
std::optional<TestId> parse_test_name(std::string_view name);

// Defaults are the SP 800-22 choices for n = 10^6.
struct SuiteParameters {
    std::size_t block_frequency_m = 128;
    std::string non_overlapping_template = "000000001";
    std::size_t non_overlapping_blocks = 8;
    std::string overlapping_template = "111111111";
    std::size_t overlapping_block = 1032;
    std::size_t approximate_entropy_m = 10;
    std::size_t serial_m = 16;
    // Only for the worked textbook examples; production runs keep the checks.
    bool enforce_min_length = true;
};

struct TestResult {
    std::string test_name;
    std::vector<std::pair<std::string, double>> statistics;
    std::vector<double> p_values;
    bool passed = false;
    // Set when the test could not be evaluated (too short, prerequisite
    // failed); such a test counts as not passed.
    std::string error_kind;
    std::string error_message;
};

// Each throws SequenceTooShort below its minimum length.
TestResult run_monobit(const BitSequence& seq, const SuiteParameters& params = {});
TestResult run_block_frequency(const BitSequence& seq, const SuiteParameters& params = {});
TestResult run_cumulative_sums(const BitSequence& seq, const SuiteParameters& params = {});
// Also throws PrerequisiteFailed when the ones fraction is too far from 1/2.
TestResult run_runs(const BitSequence& seq, const SuiteParameters& params = {});
TestResult run_longest_run(const BitSequence& seq, const SuiteParameters& params = {});
TestResult run_rank(const BitSequence& seq, const SuiteParameters& params = {});
TestResult run_spectral(const BitSequence& seq, const SuiteParameters& params = {});
TestResult run_non_overlapping_template(const BitSequence& seq, const SuiteParameters& params = {});
TestResult run_overlapping_template(const BitSequence& seq, const SuiteParameters& params = {});
TestResult run_universal(const BitSequence& seq, const SuiteParameters& params = {});
TestResult run_approximate_entropy(const BitSequence& seq, const SuiteParameters& params = {});
TestResult run_serial(const BitSequence& seq, const SuiteParameters& params = {});

TestResult run_test(TestId id, const BitSequence& seq, const SuiteParameters& params = {});

// GF(2) rank of a square bit matrix given as rows (bit j of row = column j).
int gf2_rank(std::vector<std::uint32_t> rows, int columns);

struct SuiteReport {
    std::size_t sequence_length = 0;
    std::vector<TestResult> results;  // in all_tests() order

    std::size_t passed() const;
    std::size_t not_passed() const { return results.size() - passed(); }
    bool accepted(std::size_t max_failures) const { return not_passed() <= max_failures; }

    // One JSON object per line per test, then a summary line.
    std::string to_jsonl() const;
    std::string summary_table() const;
};

// Runs the selected tests; per-test failures to evaluate are recorded in the
// result, never thrown.
SuiteReport run_suite(const BitSequence& seq, std::span<const TestId> selected, const SuiteParameters& params = {});

}  // namespace qaes::nist
