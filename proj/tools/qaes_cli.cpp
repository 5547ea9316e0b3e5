// qaes: command-line front end for BB84 key generation, quantum-keyed AES,
// randomness testing and benchmarking.
//
// Exit codes:
//   0  success
//   1  randomness suite rejected the input
//   2  usage error
//   3  I/O error
//   4  QBER above the abort threshold (suspected eavesdropping)
//   5  bad padding (wrong keys or corrupted ciphertext)
//   6  container header mismatch
//   7  key stream exhausted
//   8  pulse budget exhausted
//   9  any other error

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qaes/aes.hpp"
#include "qaes/bb84.hpp"
#include "qaes/bench.hpp"
#include "qaes/errors.hpp"
#include "qaes/hex.hpp"
#include "qaes/key_provider.hpp"
#include "qaes/nist.hpp"
#include "qaes/qaes.hpp"
#include "qaes/transcript.hpp"

namespace {

enum ExitCode : int {
    kOk = 0,
    kRejected = 1,
    kUsage = 2,
    kIo = 3,
    kQberAbort = 4,
    kBadPadding = 5,
    kHeaderMismatch = 6,
    kKeyStreamExhausted = 7,
    kPulseBudget = 8,
    kOther = 9,
};

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qaes::IoError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw qaes::IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw qaes::IoError("write failed: " + path);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw qaes::IoError("cannot write " + path);
    out << text;
}

struct ChannelOptions {
    double noise = 0.0;
    bool eve = false;
    std::optional<std::uint64_t> seed;

    qaes::bb84::ChannelConfig config() const {
        qaes::bb84::ChannelConfig c;
        c.noise_level = noise;
        c.eve_enabled = eve;
        if (seed) {
            c.rng_seed = *seed;
        } else {
            c.rng_seed = (std::uint64_t{std::random_device{}()} << 32) | std::random_device{}();
            std::cerr << "no --seed given; using seed " << c.rng_seed << '\n';
        }
        return c;
    }
};

void add_channel_options(CLI::App* cmd, ChannelOptions& opts) {
    cmd->add_option("--noise", opts.noise, "Per-pulse depolarizing probability")->check(CLI::Range(0.0, 1.0));
    cmd->add_flag("--eve", opts.eve, "Enable the intercept-resend eavesdropper");
    cmd->add_option("--seed", opts.seed, "RNG seed for reproducible runs")->envname("QAES_SEED");
}

// ---- keygen ---------------------------------------------------------------

struct KeygenOptions {
    std::size_t bits = 128;
    std::string out = "key.hex";
    std::string peer_out;
    std::string transcript;
    double sacrifice = 0.2;
    double threshold = 0.11;
    std::size_t min_sample = 96;
    ChannelOptions channel;
};

int cmd_keygen(const KeygenOptions& o) {
    if (o.bits == 0 || o.bits % 8 != 0) throw qaes::InvalidArgument("--bits must be a positive multiple of 8");
    qaes::bb84::KeyGenOptions kg;
    kg.sacrifice_fraction = o.sacrifice;
    kg.abort_threshold = o.threshold;
    kg.min_qber_sample = o.min_sample;

    std::ofstream transcript_file;
    std::unique_ptr<qaes::Transcript> transcript;
    if (!o.transcript.empty()) {
        transcript_file.open(o.transcript, std::ios::trunc);
        if (!transcript_file) throw qaes::IoError("cannot write " + o.transcript);
        transcript = std::make_unique<qaes::Transcript>(transcript_file);
        kg.transcript = transcript.get();
    }

    const auto key = qaes::bb84::generate_key(o.bits, o.channel.config(), kg);
    qaes::write_key_file(o.out, {key.to_bytes()});
    if (!o.peer_out.empty()) qaes::write_key_file(o.peer_out, {key.receiver_bytes()});

    std::printf("key_bits=%zu pulses_pumped=%zu sifted=%zu qber=%.4f qber_sample=%zu residual_errors=%zu "
                "yield=%.4f t_qkg_ms=%.4f\n",
                key.bits.size(), key.pulses_pumped, key.sifted_bits, key.qber_estimate, key.qber_sample_size,
                key.residual_errors(), static_cast<double>(key.bits.size()) / static_cast<double>(key.pulses_pumped),
                static_cast<double>(key.generation_time.count()) / 1e6);
    return kOk;
}

// ---- encrypt / decrypt ----------------------------------------------------

struct CipherOptions {
    std::string in;
    std::string out;
    std::optional<std::size_t> key_size;
    std::optional<std::string> key_mode;
    std::string master;
    std::string keys;
    std::string fixed_key;
    bool live = false;
    bool verbose = false;
    ChannelOptions channel;
};

std::unique_ptr<qaes::KeyProvider> make_provider(const CipherOptions& o, std::size_t key_bytes,
                                                 qaes::LiveBB84Provider::Role role) {
    const int sources = !o.master.empty() + !o.keys.empty() + !o.fixed_key.empty() + o.live;
    if (sources != 1) throw qaes::InvalidArgument("give exactly one of --master, --keys, --fixed-key, --live");
    if (!o.master.empty()) {
        const auto keys = qaes::read_key_file(o.master);
        if (keys.empty()) throw qaes::InvalidArgument("master key file is empty");
        return std::make_unique<qaes::DerivedKeyProvider>(keys.front(), key_bytes);
    }
    if (!o.keys.empty()) return std::make_unique<qaes::KeyListProvider>(qaes::read_key_file(o.keys));
    if (!o.fixed_key.empty()) return std::make_unique<qaes::FixedKeyProvider>(qaes::from_hex(o.fixed_key));
    return std::make_unique<qaes::LiveBB84Provider>(key_bytes, o.channel.config(), role);
}

void print_stats(const qaes::QaesStats& s, const qaes::KeyProvider& provider) {
    std::printf("provider=%s blocks=%llu keys_drawn=%llu stream_bytes=%llu", std::string(to_string(provider.kind())).c_str(),
                static_cast<unsigned long long>(s.blocks), static_cast<unsigned long long>(s.keys_drawn),
                static_cast<unsigned long long>(s.stream_bytes_consumed));
    if (s.stream_chunks_per_block) std::printf(" stream_chunks_per_block=%llu", static_cast<unsigned long long>(s.stream_chunks_per_block));
    std::printf("\n");
}

int cmd_encrypt(const CipherOptions& o) {
    qaes::QaesConfig config;
    config.key_size_bits = o.key_size.value_or(128);
    config.key_mode = qaes::parse_key_mode(o.key_mode.value_or("per-block"));
    config.rounds();
    const auto plaintext = read_file(o.in);
    auto provider = make_provider(o, config.key_bytes(), qaes::LiveBB84Provider::Role::Sender);
    qaes::QaesStats stats;
    const auto ct = qaes::qaes_encrypt(plaintext, config, *provider, &stats);
    write_file(o.out, ct.serialize());
    if (o.verbose) print_stats(stats, *provider);
    return kOk;
}

int cmd_decrypt(const CipherOptions& o) {
    const auto ct = qaes::QaesCiphertext::parse(read_file(o.in));
    qaes::QaesConfig config;
    config.key_size_bits = ct.header.key_size_bits();
    config.key_mode = ct.header.key_mode;
    if (o.key_size && *o.key_size != config.key_size_bits)
        throw qaes::HeaderMismatch("container uses " + std::to_string(config.key_size_bits) + "-bit keys");
    if (o.key_mode && qaes::parse_key_mode(*o.key_mode) != config.key_mode)
        throw qaes::HeaderMismatch("container uses " + std::string(to_string(config.key_mode)) + " keying");
    auto provider = make_provider(o, config.key_bytes(), qaes::LiveBB84Provider::Role::Receiver);
    qaes::QaesStats stats;
    const auto plain = qaes::qaes_decrypt(ct, config, *provider, &stats);
    write_file(o.out, plain);
    if (o.verbose) print_stats(stats, *provider);
    return kOk;
}

// ---- nist -----------------------------------------------------------------

struct NistOptions {
    std::string input;
    std::optional<std::size_t> bits;
    std::vector<std::string> tests;
    std::string report;
    std::string summary;
    std::size_t max_failures = 1;
    qaes::nist::SuiteParameters params;
};

int cmd_nist(const NistOptions& o) {
    const auto data = read_file(o.input);
    const auto seq = qaes::nist::BitSequence::from_bytes(data, o.bits.value_or(data.size() * 8));

    std::vector<qaes::nist::TestId> selected;
    if (o.tests.empty()) {
        selected.assign(qaes::nist::all_tests().begin(), qaes::nist::all_tests().end());
    } else {
        for (const auto& name : o.tests) {
            const auto id = qaes::nist::parse_test_name(name);
            if (!id) throw qaes::InvalidArgument("unknown test: " + name);
            selected.push_back(*id);
        }
    }

    const auto report = qaes::nist::run_suite(seq, selected, o.params);
    if (!o.report.empty()) write_text(o.report, report.to_jsonl());
    if (!o.summary.empty()) write_text(o.summary, report.summary_table());
    std::cout << report.summary_table();
    return report.accepted(o.max_failures) ? kOk : kRejected;
}

// ---- bench / keyprofile ---------------------------------------------------

struct BenchOptions {
    std::vector<std::size_t> sizes{500, 1000, 1500, 2000, 3500};
    std::vector<std::string> algorithms{"aes", "qaes"};
    std::size_t reps = 10;
    std::size_t warmup = 3;
    std::size_t key_size = 128;
    std::string key_mode = "per-block";
    std::string out;
    std::string plot;
    ChannelOptions channel;
};

int cmd_bench(const BenchOptions& o) {
    qaes::bench::BenchConfig config;
    config.key_size_bits = o.key_size;
    config.key_mode = qaes::parse_key_mode(o.key_mode);
    config.repetitions = o.reps;
    config.warmup = o.warmup;
    config.channel = o.channel.config();

    std::vector<qaes::bench::Algorithm> algorithms;
    for (const auto& a : o.algorithms) {
        if (a == "aes") algorithms.push_back(qaes::bench::Algorithm::AES);
        else if (a == "qaes") algorithms.push_back(qaes::bench::Algorithm::QAES);
        else throw qaes::InvalidArgument("unknown algorithm: " + a);
    }

    const auto records = qaes::bench::run_benchmark(o.sizes, algorithms, config);
    std::ostringstream csv;
    qaes::bench::write_csv(csv, records);
    if (o.out.empty()) std::cout << csv.str();
    else write_text(o.out, csv.str());
    if (!o.plot.empty()) {
        std::ostringstream plot;
        qaes::bench::write_plot_data(plot, qaes::bench::summarize(records));
        write_text(o.plot, plot.str());
    }
    return kOk;
}

struct ProfileOptions {
    std::vector<std::size_t> pulses{500, 1000, 2000};
    std::vector<double> noise{0.0, 0.05, 0.1};
    std::string eve = "both";
    std::size_t sessions = 20;
    std::optional<std::uint64_t> seed;
    std::string out;
};

int cmd_keyprofile(const ProfileOptions& o) {
    bool eve_values[2];
    std::size_t eve_count = 0;
    if (o.eve == "off" || o.eve == "both") eve_values[eve_count++] = false;
    if (o.eve == "on" || o.eve == "both") eve_values[eve_count++] = true;
    const std::span<const bool> eve(eve_values, eve_count);
    if (eve.empty()) throw qaes::InvalidArgument("--eve must be on, off or both");
    ChannelOptions seed_source;
    seed_source.seed = o.seed;
    const auto rows = qaes::bench::keygen_profile(o.pulses, o.noise, eve, o.sessions, seed_source.config().rng_seed);
    std::ostringstream csv;
    qaes::bench::write_profile_csv(csv, rows);
    if (o.out.empty()) std::cout << csv.str();
    else write_text(o.out, csv.str());
    return kOk;
}

void add_cipher_options(CLI::App* cmd, CipherOptions& o) {
    cmd->add_option("--in", o.in, "Input file")->required();
    cmd->add_option("--out", o.out, "Output file")->required();
    cmd->add_option("--key-size", o.key_size, "Key size in bits")->check(CLI::IsMember({128, 192, 256}));
    cmd->add_option("--key-mode", o.key_mode, "per-block or per-round")->check(CLI::IsMember({"per-block", "per-round"}));
    cmd->add_option("--master", o.master, "Master key file; per-block keys are derived from it");
    cmd->add_option("--keys", o.keys, "Key file with one hex key per line, used in order");
    cmd->add_option("--fixed-key", o.fixed_key, "One hex key for every block (testing only)");
    cmd->add_flag("--live", o.live, "Run a BB84 session for every key");
    cmd->add_flag("-v,--verbose", o.verbose, "Print key stream accounting");
    add_channel_options(cmd, o.channel);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-keyed AES: BB84 key generation, encryption, randomness tests, benchmarks"};
    app.set_config("--config", "", "Read options from a TOML/INI file; flags override");
    app.require_subcommand(1);

    KeygenOptions keygen;
    auto* kg = app.add_subcommand("keygen", "Generate a key with a simulated BB84 session");
    kg->add_option("--bits", keygen.bits, "Key length in bits (multiple of 8)");
    kg->add_option("--out", keygen.out, "Key file (lowercase hex)");
    kg->add_option("--peer-out", keygen.peer_out, "Also write the receiver's copy of the key");
    kg->add_option("--transcript", keygen.transcript, "Write the protocol transcript (JSON lines)");
    kg->add_option("--sacrifice", keygen.sacrifice, "Fraction of sifted bits disclosed for QBER estimation")
        ->check(CLI::Range(0.0, 1.0));
    kg->add_option("--threshold", keygen.threshold, "QBER abort threshold");
    kg->add_option("--min-sample", keygen.min_sample, "Minimum QBER sample before a key is accepted");
    add_channel_options(kg, keygen.channel);

    CipherOptions enc, dec;
    auto* ec = app.add_subcommand("encrypt", "Encrypt a file into a QAES container");
    add_cipher_options(ec, enc);
    auto* dc = app.add_subcommand("decrypt", "Decrypt a QAES container");
    add_cipher_options(dc, dec);

    NistOptions nist;
    auto* ns = app.add_subcommand("nist", "Run the randomness test suite on a file");
    ns->add_option("--input", nist.input, "File whose bits are tested (MSB first)")->required();
    ns->add_option("--bits", nist.bits, "Test only the first N bits");
    ns->add_option("--tests", nist.tests, "Comma-separated test names (default: all twelve)")->delimiter(',');
    ns->add_option("--report", nist.report, "Write per-test results as JSON lines");
    ns->add_option("--summary", nist.summary, "Write the summary table");
    ns->add_option("--max-failures", nist.max_failures, "Tests allowed to reject before the suite fails");
    ns->add_option("--block-m", nist.params.block_frequency_m, "Block frequency block length");
    ns->add_option("--apen-m", nist.params.approximate_entropy_m, "Approximate entropy block length");
    ns->add_option("--serial-m", nist.params.serial_m, "Serial test block length");
    ns->add_option("--template", nist.params.non_overlapping_template, "Non-overlapping template bits");

    BenchOptions bench;
    auto* bc = app.add_subcommand("bench", "Time AES against QAES");
    bc->add_option("--sizes", bench.sizes, "Input sizes in KB")->delimiter(',');
    bc->add_option("--algorithms", bench.algorithms, "aes,qaes")->delimiter(',');
    bc->add_option("--reps", bench.reps, "Measured repetitions");
    bc->add_option("--warmup", bench.warmup, "Warm-up repetitions");
    bc->add_option("--key-size", bench.key_size, "Key size in bits")->check(CLI::IsMember({128, 192, 256}));
    bc->add_option("--key-mode", bench.key_mode, "per-block or per-round")->check(CLI::IsMember({"per-block", "per-round"}));
    bc->add_option("--out", bench.out, "CSV output (default stdout)");
    bc->add_option("--plot", bench.plot, "Median table for gnuplot");
    add_channel_options(bc, bench.channel);

    ProfileOptions profile;
    auto* kp = app.add_subcommand("keyprofile", "Key yield and generation time across noise and eavesdropping");
    kp->add_option("--pulses", profile.pulses, "Pulse budgets")->delimiter(',');
    kp->add_option("--noise", profile.noise, "Noise levels")->delimiter(',');
    kp->add_option("--eve", profile.eve, "on, off or both");
    kp->add_option("--sessions", profile.sessions, "Seeds per configuration");
    kp->add_option("--seed", profile.seed, "Base seed")->envname("QAES_SEED");
    kp->add_option("--out", profile.out, "CSV output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*kg) return cmd_keygen(keygen);
        if (*ec) return cmd_encrypt(enc);
        if (*dc) return cmd_decrypt(dec);
        if (*ns) return cmd_nist(nist);
        if (*bc) return cmd_bench(bench);
        if (*kp) return cmd_keyprofile(profile);
    } catch (const qaes::QberAbort& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kQberAbort;
    } catch (const qaes::BadPadding& e) {
        std::cerr << "error: bad padding: " << e.what() << '\n';
        return kBadPadding;
    } catch (const qaes::HeaderMismatch& e) {
        std::cerr << "error: header mismatch: " << e.what() << '\n';
        return kHeaderMismatch;
    } catch (const qaes::KeyStreamExhausted& e) {
        std::cerr << "error: key stream exhausted: " << e.what() << '\n';
        return kKeyStreamExhausted;
    } catch (const qaes::ExhaustionLimit& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kPulseBudget;
    } catch (const qaes::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kUsage;
}
