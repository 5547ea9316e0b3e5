#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "qaes/rng.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = QAES_CLI_PATH;

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / ("qaes_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string operator()(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + kCli + " " + args;
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_random(const std::string& path, std::size_t bytes, std::uint64_t seed) {
    qaes::Rng rng(seed);
    std::string data(bytes, '\0');
    for (auto& c : data) c = static_cast<char>(rng.byte());
    std::ofstream(path, std::ios::binary) << data;
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("keygen is reproducible") {
    Workspace ws;
    REQUIRE(run("keygen --bits 128 --noise 0 --seed 7 --out " + ws("a.hex") + " --transcript " + ws("a.jsonl") + " > " + ws("a.txt")) == 0);
    REQUIRE(run("keygen --bits 128 --noise 0 --seed 7 --out " + ws("b.hex") + " --transcript " + ws("b.jsonl") + " > " + ws("b.txt")) == 0);
    CHECK(slurp(ws("a.hex")) == slurp(ws("b.hex")));
    CHECK(slurp(ws("a.hex")).size() == 33);
    CHECK(slurp(ws("a.jsonl")) == slurp(ws("b.jsonl")));
    const auto stats = slurp(ws("a.txt"));
    CHECK(stats.find("pulses_pumped=") != std::string::npos);
    CHECK(stats.find("qber=") != std::string::npos);
    CHECK(stats.find("t_qkg_ms=") != std::string::npos);
    CHECK((fs::status(ws("a.hex")).permissions() & fs::perms::others_read) == fs::perms::none);
}

TEST_CASE("seed from the environment") {
    Workspace ws;
    REQUIRE(run("keygen --out " + ws("a.hex") + " > /dev/null", "QAES_SEED=99") == 0);
    REQUIRE(run("keygen --out " + ws("b.hex") + " > /dev/null", "QAES_SEED=99") == 0);
    REQUIRE(run("keygen --seed 100 --out " + ws("c.hex") + " > /dev/null", "QAES_SEED=99") == 0);
    CHECK(slurp(ws("a.hex")) == slurp(ws("b.hex")));
    CHECK(slurp(ws("a.hex")) != slurp(ws("c.hex")));
}

TEST_CASE("keygen under eavesdropping aborts") {
    Workspace ws;
    CHECK(run("keygen --bits 128 --eve --seed 3 --out " + ws("k.hex") + " 2> " + ws("err.txt")) == 4);
    CHECK(slurp(ws("err.txt")).find("QBER") != std::string::npos);
    CHECK_FALSE(fs::exists(ws("k.hex")));
}

TEST_CASE("keygen in the noisy regime") {
    Workspace ws;
    REQUIRE(run("keygen --bits 256 --noise 0.05 --seed 11 --out " + ws("k.hex") + " > " + ws("s.txt")) == 0);
    const auto stats = slurp(ws("s.txt"));
    const auto pos = stats.find("yield=");
    REQUIRE(pos != std::string::npos);
    const double yield = std::stod(stats.substr(pos + 6));
    CHECK(yield > 0.25);
    CHECK(yield <= 0.4);
}

TEST_CASE("encrypt and decrypt a 3500 KB file") {
    Workspace ws;
    write_random(ws("plain.bin"), 3500 * 1024, 1);
    REQUIRE(run("keygen --seed 5 --out " + ws("m.hex") + " > /dev/null") == 0);
    REQUIRE(run("encrypt --in " + ws("plain.bin") + " --out " + ws("c.qaes") + " --master " + ws("m.hex")) == 0);
    REQUIRE(run("decrypt --in " + ws("c.qaes") + " --out " + ws("back.bin") + " --master " + ws("m.hex")) == 0);
    CHECK(slurp(ws("plain.bin")) == slurp(ws("back.bin")));
    CHECK(fs::file_size(ws("c.qaes")) == 15 + (3500 * 1024 / 16 + 1) * 16);
}

TEST_CASE("decrypt error codes") {
    Workspace ws;
    write_random(ws("plain.bin"), 1000, 2);
    REQUIRE(run("keygen --seed 5 --out " + ws("m.hex") + " > /dev/null") == 0);
    REQUIRE(run("keygen --seed 6 --out " + ws("w.hex") + " > /dev/null") == 0);
    REQUIRE(run("encrypt --in " + ws("plain.bin") + " --out " + ws("c.qaes") + " --master " + ws("m.hex")) == 0);

    CHECK(run("decrypt --in " + ws("c.qaes") + " --out " + ws("x") + " --master " + ws("w.hex") + " 2> /dev/null") == 5);
    CHECK(run("decrypt --in " + ws("c.qaes") + " --out " + ws("x") + " --master " + ws("m.hex") + " --key-size 256 2> /dev/null") == 6);
    CHECK(run("decrypt --in " + ws("plain.bin") + " --out " + ws("x") + " --master " + ws("m.hex") + " 2> /dev/null") == 6);
    CHECK(run("decrypt --in " + ws("c.qaes") + " --out " + ws("x") + " --keys " + ws("m.hex") + " 2> /dev/null") == 7);
    CHECK(run("decrypt --in " + ws("missing") + " --out " + ws("x") + " --master " + ws("m.hex") + " 2> /dev/null") == 3);
}

TEST_CASE("per-round keying reports eleven chunks per block") {
    Workspace ws;
    write_random(ws("plain.bin"), 4000, 3);
    REQUIRE(run("keygen --seed 8 --out " + ws("m.hex") + " > /dev/null") == 0);
    REQUIRE(run("encrypt --key-mode per-round --key-size 128 --verbose --in " + ws("plain.bin") + " --out " + ws("c.qaes") +
                " --master " + ws("m.hex") + " > " + ws("v.txt")) == 0);
    CHECK(slurp(ws("v.txt")).find("stream_chunks_per_block=11") != std::string::npos);
    REQUIRE(run("decrypt --in " + ws("c.qaes") + " --out " + ws("back.bin") + " --master " + ws("m.hex")) == 0);
    CHECK(slurp(ws("plain.bin")) == slurp(ws("back.bin")));
}

TEST_CASE("live keying round trip") {
    Workspace ws;
    write_random(ws("plain.bin"), 200, 4);
    REQUIRE(run("encrypt --live --seed 12 --in " + ws("plain.bin") + " --out " + ws("c.qaes")) == 0);
    REQUIRE(run("decrypt --live --seed 12 --in " + ws("c.qaes") + " --out " + ws("back.bin")) == 0);
    CHECK(slurp(ws("plain.bin")) == slurp(ws("back.bin")));
    CHECK(run("encrypt --live --eve --seed 12 --in " + ws("plain.bin") + " --out " + ws("d.qaes") + " 2> /dev/null") == 4);
}

TEST_CASE("nist verdicts") {
    Workspace ws;
    std::ofstream(ws("zeros.bin"), std::ios::binary) << std::string(125000, '\0');
    REQUIRE(run("keygen --seed 21 --out " + ws("m.hex") + " > /dev/null") == 0);
    REQUIRE(run("encrypt --in " + ws("zeros.bin") + " --out " + ws("c.qaes") + " --master " + ws("m.hex")) == 0);
    CHECK(run("nist --input " + ws("c.qaes") + " --bits 1000000 --report " + ws("r.jsonl") + " > /dev/null") == 0);
    CHECK(count_lines(slurp(ws("r.jsonl"))) == 13);
    CHECK(run("nist --input " + ws("zeros.bin") + " > /dev/null") == 1);
    CHECK(run("nist --input " + ws("zeros.bin") + " --tests nonsense > /dev/null 2>&1") == 9);
}

TEST_CASE("bench output shape") {
    Workspace ws;
    REQUIRE(run("bench --sizes 500,1000,1500,2000,3500 --reps 2 --warmup 0 --seed 1 --out " + ws("b.csv") + " --plot " + ws("p.dat")) == 0);
    const auto csv = slurp(ws("b.csv"));
    CHECK(count_lines(csv) == 1 + 2 * 5 * 2);
    CHECK(csv.rfind("algorithm,key_size,input_kb,rep,t_keygen_us,t_encrypt_us,t_total_us\n", 0) == 0);
    CHECK(count_lines(slurp(ws("p.dat"))) == 1 + 2 * 5);
}

TEST_CASE("keyprofile output") {
    Workspace ws;
    REQUIRE(run("keyprofile --pulses 500 --noise 0,0.05 --sessions 4 --seed 2 --out " + ws("k.csv")) == 0);
    CHECK(count_lines(slurp(ws("k.csv"))) == 1 + 2 * 2);
}

TEST_CASE("config file and usage errors") {
    Workspace ws;
    std::ofstream(ws("cfg.toml")) << "[keygen]\nbits = 64\nseed = 3\nout = \"" << ws("k.hex") << "\"\n";
    REQUIRE(run("--config " + ws("cfg.toml") + " keygen > /dev/null") == 0);
    CHECK(slurp(ws("k.hex")).size() == 17);
    CHECK(run("> /dev/null 2>&1") == 2);
    CHECK(run("keygen --bits > /dev/null 2>&1") == 2);
    CHECK(run("encrypt --in x > /dev/null 2>&1") == 2);
    CHECK(run("keygen --noise 2 > /dev/null 2>&1") == 2);
    CHECK(run("--help > /dev/null") == 0);
}
