#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qaes/errors.hpp"
#include "qaes/nist.hpp"
#include "qaes/rng.hpp"

using namespace qaes;
using namespace qaes::nist;

namespace {

constexpr std::size_t kBits = 1'000'000;

BitSequence splitmix_sequence(std::uint64_t seed) {
    std::uint64_t state = seed;
    std::vector<std::uint8_t> bytes;
    while (bytes.size() * 8 < kBits) {
        const std::uint64_t w = splitmix64(state);
        for (int s = 56; s >= 0; s -= 8) bytes.push_back(static_cast<std::uint8_t>(w >> s));
    }
    return BitSequence::from_bytes(bytes, kBits);
}

BitSequence counter_sequence() {
    std::vector<std::uint8_t> bytes;
    for (std::uint32_t i = 0; bytes.size() * 8 < kBits; ++i)
        for (int s = 24; s >= 0; s -= 8) bytes.push_back(static_cast<std::uint8_t>(i >> s));
    return BitSequence::from_bytes(bytes, kBits);
}

using Oracle = std::map<std::string, std::vector<double>>;

// Produced by tests/oracles/nist_oracle.py (independent numpy/scipy code).
const Oracle kSplitmix1 = {
    {"frequency", {0.7308462860917476}},
    {"block_frequency", {0.3479724409832202}},
    {"cumulative_sums", {0.9491172999628954, 0.8637415622889391}},
    {"runs", {0.04257230246181708}},
    {"longest_run", {0.3676891883764996}},
    {"rank", {0.35888359498976335}},
    {"spectral", {0.4628692987552162}},
    {"non_overlapping_template", {0.8610248276659347}},
    {"overlapping_template", {0.8938188531194806}},
    {"universal", {0.09617274241522368}},
    {"approximate_entropy", {0.8717734612951568}},
    {"serial", {0.7609525768965074, 0.930231377699756}},
};

const Oracle kSplitmix2 = {
    {"frequency", {0.745938034230899}},
    {"block_frequency", {0.2858929958535569}},
    {"cumulative_sums", {0.7617146030293591, 0.9081561792752145}},
    {"runs", {0.934563229357085}},
    {"longest_run", {0.8131522864012791}},
    {"rank", {0.960881319611416}},
    {"spectral", {0.5819094438689294}},
    {"non_overlapping_template", {0.8010173499175142}},
    {"overlapping_template", {0.4025991128935017}},
    {"universal", {0.16593151324466915}},
    {"approximate_entropy", {0.5869759060755066}},
    {"serial", {0.5420954425129241, 0.7241384291057474}},
};

void check_against(const Oracle& oracle, const SuiteReport& report) {
    REQUIRE(report.results.size() == 12);
    for (const auto& r : report.results) {
        INFO(r.test_name);
        REQUIRE(oracle.count(r.test_name) == 1);
        const auto& want = oracle.at(r.test_name);
        REQUIRE(r.p_values.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) CHECK(r.p_values[i] == doctest::Approx(want[i]).epsilon(1e-7));
        CHECK(r.passed);
    }
}

SuiteParameters textbook() {
    SuiteParameters p;
    p.enforce_min_length = false;
    return p;
}

}  // namespace

TEST_CASE("p-values agree with the independent oracle") {
    check_against(kSplitmix1, run_suite(splitmix_sequence(1), all_tests()));
    check_against(kSplitmix2, run_suite(splitmix_sequence(2), all_tests()));
}

TEST_CASE("monobit worked example") {
    const auto r = run_monobit(BitSequence::from_string("1011010101"), textbook());
    REQUIRE(r.p_values.size() == 1);
    CHECK(r.p_values[0] == doctest::Approx(0.5270892568655381).epsilon(1e-12));
    CHECK(r.passed);
    CHECK_THROWS_AS(run_monobit(BitSequence::from_string("1011010101")), SequenceTooShort);
}

TEST_CASE("monobit extremes") {
    const BitSequence zeros(std::vector<std::uint8_t>(1000, 0));
    const auto r = run_monobit(zeros);
    CHECK(r.p_values[0] < 1e-6);
    CHECK_FALSE(r.passed);

    std::vector<std::uint8_t> balanced(1000);
    for (std::size_t i = 0; i < balanced.size(); ++i) balanced[i] = i % 2;
    CHECK(run_monobit(BitSequence(balanced)).p_values[0] == 1.0);
}

TEST_CASE("monobit is invariant under complement") {
    const auto seq = splitmix_sequence(9);
    CHECK(run_monobit(seq).p_values[0] == run_monobit(seq.complement()).p_values[0]);
}

TEST_CASE("runs") {
    std::vector<std::uint8_t> alt(100);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2;
    const auto r = run_runs(BitSequence(alt));
    CHECK(r.p_values[0] < 1e-10);
    CHECK_FALSE(r.passed);
    CHECK_THROWS_AS(run_runs(BitSequence(std::vector<std::uint8_t>(1000, 1))), PrerequisiteFailed);
}

TEST_CASE("all-zero input is rejected by monobit and runs") {
    const auto report = run_suite(BitSequence(std::vector<std::uint8_t>(kBits, 0)), all_tests());
    for (const auto& r : report.results) {
        if (r.test_name == "frequency") CHECK_FALSE(r.passed);
        if (r.test_name == "runs") {
            CHECK_FALSE(r.passed);
            CHECK(r.error_kind == "PrerequisiteFailed");
        }
    }
    CHECK_FALSE(report.accepted(1));
}

TEST_CASE("counter sequence fails serial and approximate entropy") {
    const auto seq = counter_sequence();
    const auto apen = run_approximate_entropy(seq);
    const auto serial = run_serial(seq);
    CHECK_FALSE(apen.passed);
    CHECK_FALSE(serial.passed);
    CHECK(apen.p_values[0] < 1e-10);
    for (double p : serial.p_values) CHECK(p < 1e-10);
}

TEST_CASE("minimum lengths") {
    const BitSequence tiny(std::vector<std::uint8_t>(50, 1));
    CHECK_THROWS_AS(run_monobit(tiny), SequenceTooShort);
    const auto short_seq = BitSequence::from_bytes(std::vector<std::uint8_t>(1000, 0x5a));
    CHECK_THROWS_AS(run_universal(short_seq), SequenceTooShort);
    CHECK_THROWS_AS(run_overlapping_template(short_seq), SequenceTooShort);
    SuiteParameters big_m;
    big_m.serial_m = 16;
    CHECK_THROWS_AS(run_serial(short_seq, big_m), SequenceTooShort);
}

TEST_CASE("suite records errors instead of throwing") {
    const auto report = run_suite(BitSequence::from_bytes(std::vector<std::uint8_t>(200, 0x37)), all_tests());
    CHECK(report.results.size() == 12);
    bool saw_error = false;
    for (const auto& r : report.results)
        if (!r.error_kind.empty()) {
            saw_error = true;
            CHECK_FALSE(r.passed);
        }
    CHECK(saw_error);
}

TEST_CASE("passed flag follows the threshold") {
    const auto report = run_suite(splitmix_sequence(3), all_tests());
    for (const auto& r : report.results) {
        bool all = !r.p_values.empty();
        for (double p : r.p_values) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            all = all && p >= kAlpha;
        }
        CHECK(r.passed == all);
    }
}

TEST_CASE("report is deterministic and ordered") {
    const auto seq = splitmix_sequence(4);
    const auto a = run_suite(seq, all_tests());
    const auto b = run_suite(seq, all_tests());
    CHECK(a.to_jsonl() == b.to_jsonl());
    CHECK(a.summary_table() == b.summary_table());
    for (std::size_t i = 0; i < 12; ++i) CHECK(a.results[i].test_name == test_name(all_tests()[i]));

    std::size_t lines = 0;
    for (char c : a.to_jsonl()) lines += c == '\n';
    CHECK(lines == 13);
}

TEST_CASE("test names") {
    for (auto id : all_tests()) CHECK(parse_test_name(test_name(id)) == id);
    CHECK_FALSE(parse_test_name("linear_complexity").has_value());
}

TEST_CASE("gf2 rank") {
    CHECK(gf2_rank({1, 2, 4}, 3) == 3);
    CHECK(gf2_rank({3, 3, 0}, 3) == 1);
    CHECK(gf2_rank({1, 2, 3}, 3) == 2);
}

TEST_CASE("bit sequence parsing") {
    const auto s = BitSequence::from_bytes(std::vector<std::uint8_t>{0x80, 0x01}, 12);
    REQUIRE(s.size() == 12);
    CHECK(s[0] == 1);
    CHECK(s[1] == 0);
    CHECK(BitSequence::from_string("10 1\n1").size() == 4);
    CHECK_THROWS(BitSequence::from_string("102"));
}
