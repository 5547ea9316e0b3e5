#include <doctest.h>

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "qaes/bench.hpp"

using namespace qaes;
using namespace qaes::bench;
using std::chrono::nanoseconds;

namespace {

BenchConfig small_config() {
    BenchConfig c;
    c.repetitions = 3;
    c.warmup = 1;
    c.channel.rng_seed = 17;
    return c;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("every record decomposes exactly") {
    const std::vector<std::size_t> sizes{1, 8};
    const std::vector<Algorithm> algs{Algorithm::AES, Algorithm::QAES};
    const auto records = run_benchmark(sizes, algs, small_config());
    REQUIRE(records.size() == 2 * 2 * 3);
    for (const auto& r : records) {
        CHECK(r.t_total == r.t_keygen + r.t_encrypt);
        CHECK(r.repetitions == 3);
        if (r.algorithm == Algorithm::AES) CHECK(r.t_keygen == nanoseconds{0});
        else CHECK(r.t_keygen > nanoseconds{0});
    }
}

TEST_CASE("per-round keying and larger keys benchmark too") {
    auto cfg = small_config();
    cfg.key_size_bits = 256;
    cfg.key_mode = KeyMode::PerRoundKey;
    const std::vector<std::size_t> sizes{2};
    const std::vector<Algorithm> algs{Algorithm::QAES, Algorithm::AES};
    const auto records = run_benchmark(sizes, algs, cfg);
    CHECK(records.size() == 6);
    CHECK(records.front().key_size_bits == 256);
}

TEST_CASE("invalid benchmark settings") {
    auto cfg = small_config();
    const std::vector<std::size_t> sizes{1};
    const std::vector<Algorithm> algs{Algorithm::AES};
    cfg.repetitions = 0;
    CHECK_THROWS(run_benchmark(sizes, algs, cfg));
    const std::vector<std::size_t> zero{0};
    CHECK_THROWS(run_benchmark(zero, algs, small_config()));
}

TEST_CASE("median") {
    CHECK(median(std::vector<double>{3, 1, 2}) == 2);
    CHECK(median(std::vector<double>{4, 1, 2, 3}) == 2.5);
    CHECK(median(std::vector<nanoseconds>{nanoseconds{5}, nanoseconds{9}}) == nanoseconds{7});
    CHECK_THROWS(median(std::vector<double>{}));
}

TEST_CASE("csv output") {
    BenchRecord r;
    r.algorithm = Algorithm::QAES;
    r.key_size_bits = 192;
    r.input_size_kb = 500;
    r.rep = 4;
    r.t_keygen = nanoseconds{1234567};
    r.t_encrypt = nanoseconds{89};
    r.t_total = r.t_keygen + r.t_encrypt;
    std::ostringstream out;
    write_csv(out, {r});
    const auto l = lines(out.str());
    REQUIRE(l.size() == 2);
    CHECK(l[0] == "algorithm,key_size,input_kb,rep,t_keygen_us,t_encrypt_us,t_total_us");
    CHECK(l[1] == "QAES,192,500,4,1234.567,0.089,1234.656");
}

TEST_CASE("summaries and plot data") {
    std::vector<BenchRecord> records;
    for (int i = 0; i < 3; ++i) {
        BenchRecord r;
        r.algorithm = Algorithm::AES;
        r.input_size_kb = 10;
        r.t_encrypt = nanoseconds{1000 * (i + 1)};
        r.t_total = r.t_encrypt;
        records.push_back(r);
    }
    const auto s = summarize(records);
    REQUIRE(s.size() == 1);
    CHECK(s[0].median_total == nanoseconds{2000});
    std::ostringstream out;
    write_plot_data(out, s);
    const auto l = lines(out.str());
    REQUIRE(l.size() == 2);
    CHECK(l[1] == "AES 128 10 0.000 2.000 2.000");
}

TEST_CASE("key generation profile") {
    const std::vector<std::size_t> pulses{500};
    const std::vector<double> noise{0.0, 0.05};
    const bool eve[] = {false, true};
    const auto rows = keygen_profile(pulses, noise, eve, 8, 1);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.sessions == 8);
        if (r.eve_enabled) {
            CHECK(r.aborted == 8);
        } else {
            CHECK(r.aborted == 0);
            CHECK(r.median_surviving_bits > 150);
            CHECK(r.median_surviving_bits < 250);
        }
    }
    std::ostringstream out;
    write_profile_csv(out, rows);
    const auto l = lines(out.str());
    REQUIRE(l.size() == 5);
    CHECK(l[0] == "pulses,noise,eve,sessions,aborted,median_key_bits,median_qber,median_t_qkg_us");
    CHECK(l[2].rfind("500,0.0000,1,8,8,", 0) == 0);
}

TEST_CASE("encryption time grows with input size") {
    auto cfg = small_config();
    cfg.repetitions = 5;
    const std::vector<std::size_t> sizes{50, 500};
    const std::vector<Algorithm> algs{Algorithm::AES, Algorithm::QAES};
    const auto s = summarize(run_benchmark(sizes, algs, cfg));
    REQUIRE(s.size() == 4);
    CHECK(s[0].median_encrypt < s[1].median_encrypt);
    CHECK(s[2].median_encrypt < s[3].median_encrypt);
}

TEST_CASE("noise never reduces the pulses needed for a target") {
    std::vector<double> quiet, noisy;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        quiet.push_back(static_cast<double>(bb84::generate_key(128, bb84::ChannelConfig{0.0, false, seed}).pulses_pumped));
        noisy.push_back(static_cast<double>(bb84::generate_key(128, bb84::ChannelConfig{0.1, false, seed}).pulses_pumped));
    }
    CHECK(median(noisy) >= median(quiet));
}
