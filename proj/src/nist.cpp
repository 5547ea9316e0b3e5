#include "qaes/nist.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include <fftw3.h>
#include <json.hpp>

#include "qaes/errors.hpp"
#include "qaes/special_functions.hpp"

namespace qaes::nist {

using special::igamc;
using special::normal_cdf;

namespace {

void require_length(const BitSequence& seq, std::size_t minimum, const SuiteParameters& params, std::string_view test) {
    if (params.enforce_min_length && seq.size() < minimum)
        throw SequenceTooShort(std::string(test) + " needs at least " + std::to_string(minimum) + " bits, got " +
                               std::to_string(seq.size()));
    if (seq.size() == 0) throw SequenceTooShort(std::string(test) + " got an empty sequence");
}

TestResult make_result(TestId id, std::vector<std::pair<std::string, double>> stats, std::vector<double> p_values) {
    TestResult r;
    r.test_name = std::string(test_name(id));
    r.statistics = std::move(stats);
    for (auto& p : p_values) p = std::clamp(p, 0.0, 1.0);
    r.p_values = std::move(p_values);
    r.passed = std::all_of(r.p_values.begin(), r.p_values.end(), [](double p) { return p >= kAlpha; });
    return r;
}

std::vector<std::uint8_t> parse_template(const std::string& text) {
    std::vector<std::uint8_t> t;
    for (char c : text) {
        if (c != '0' && c != '1') throw InvalidArgument("template must be a string of 0 and 1");
        t.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    if (t.empty()) throw InvalidArgument("template must not be empty");
    return t;
}

double chi_squared(std::span<const double> observed, std::span<const double> probs, double total) {
    double chi2 = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = total * probs[i];
        chi2 += (observed[i] - expected) * (observed[i] - expected) / expected;
    }
    return chi2;
}

// Frequency of every overlapping m-bit pattern, wrapping around the end.
std::vector<std::uint64_t> circular_pattern_counts(std::span<const std::uint8_t> bits, std::size_t m) {
    std::vector<std::uint64_t> counts(std::size_t{1} << m, 0);
    if (m == 0) {
        counts[0] = bits.size();
        return counts;
    }
    const std::size_t n = bits.size();
    const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
    std::uint64_t window = 0;
    for (std::size_t j = 0; j < m - 1; ++j) window = (window << 1) | bits[j % n];
    for (std::size_t i = 0; i < n; ++i) {
        window = ((window << 1) | bits[(i + m - 1) % n]) & mask;
        ++counts[window];
    }
    return counts;
}

double cusum_p_value(std::int64_t n, std::int64_t z) {
    // Integer division truncating toward zero in the summation bounds, as in
    // the reference implementation.
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    double sum1 = 0.0;
    for (std::int64_t k = (-n / z + 1) / 4; k <= (n / z - 1) / 4; ++k) {
        sum1 += normal_cdf(static_cast<double>((4 * k + 1) * z) / sqrt_n);
        sum1 -= normal_cdf(static_cast<double>((4 * k - 1) * z) / sqrt_n);
    }
    double sum2 = 0.0;
    for (std::int64_t k = (-n / z - 3) / 4; k <= (n / z - 1) / 4; ++k) {
        sum2 += normal_cdf(static_cast<double>((4 * k + 3) * z) / sqrt_n);
        sum2 -= normal_cdf(static_cast<double>((4 * k + 1) * z) / sqrt_n);
    }
    return 1.0 - sum1 + sum2;
}

double rank_probability(int r, int rows, int cols) {
    double product = 1.0;
    for (int i = 0; i < r; ++i)
        product *= (1.0 - std::pow(2.0, i - rows)) * (1.0 - std::pow(2.0, i - cols)) / (1.0 - std::pow(2.0, i - r));
    return std::pow(2.0, r * (rows + cols - r) - rows * cols) * product;
}

// Compound-Poisson class probabilities for the overlapping template test.
double overlapping_probability(int u, double eta) {
    if (u == 0) return std::exp(-eta);
    double sum = 0.0;
    for (int l = 1; l <= u; ++l)
        sum += std::exp(-eta - u * std::log(2.0) + l * std::log(eta) - std::lgamma(l + 1.0) + std::lgamma(u) -
                        std::lgamma(l) - std::lgamma(u - l + 1.0));
    return sum;
}

struct FftwPlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

BitSequence::BitSequence(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_)
        if (b > 1) throw InvalidArgument("bit sequence elements must be 0 or 1");
}

BitSequence BitSequence::from_bytes(std::span<const std::uint8_t> bytes, std::size_t max_bits) {
    const std::size_t n = std::min(bytes.size() * 8, max_bits);
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
    return BitSequence(std::move(bits));
}

BitSequence BitSequence::from_string(std::string_view text) {
    std::vector<std::uint8_t> bits;
    for (char c : text) {
        if (c == '0' || c == '1') bits.push_back(static_cast<std::uint8_t>(c - '0'));
        else if (!std::isspace(static_cast<unsigned char>(c))) throw InvalidArgument("bit string may contain only 0 and 1");
    }
    return BitSequence(std::move(bits));
}

BitSequence BitSequence::complement() const {
    std::vector<std::uint8_t> bits(bits_.size());
    std::transform(bits_.begin(), bits_.end(), bits.begin(), [](std::uint8_t b) { return std::uint8_t(1 - b); });
    return BitSequence(std::move(bits));
}

const std::array<TestId, 12>& all_tests() {
    static constexpr std::array<TestId, 12> ids = {
        TestId::Frequency,          TestId::BlockFrequency,         TestId::CumulativeSums,
        TestId::Runs,               TestId::LongestRun,             TestId::Rank,
        TestId::Spectral,           TestId::NonOverlappingTemplate, TestId::OverlappingTemplate,
        TestId::Universal,          TestId::ApproximateEntropy,     TestId::Serial,
    };
    return ids;
}

std::string_view test_name(TestId id) {
    switch (id) {
        case TestId::Frequency: return "frequency";
        case TestId::BlockFrequency: return "block_frequency";
        case TestId::CumulativeSums: return "cumulative_sums";
        case TestId::Runs: return "runs";
        case TestId::LongestRun: return "longest_run";
        case TestId::Rank: return "rank";
        case TestId::Spectral: return "spectral";
        case TestId::NonOverlappingTemplate: return "non_overlapping_template";
        case TestId::OverlappingTemplate: return "overlapping_template";
        case TestId::Universal: return "universal";
        case TestId::ApproximateEntropy: return "approximate_entropy";
        case TestId::Serial: return "serial";
    }
    return "?";
}

std::optional<TestId> parse_test_name(std::string_view name) {
    for (auto id : all_tests())
        if (test_name(id) == name) return id;
    return std::nullopt;
}

TestResult run_monobit(const BitSequence& seq, const SuiteParameters& params) {
    require_length(seq, 100, params, "frequency");
    const auto n = static_cast<double>(seq.size());
    std::int64_t s = 0;
    for (auto b : seq.bits()) s += b ? 1 : -1;
    const double s_obs = std::abs(static_cast<double>(s)) / std::sqrt(n);
    const double p = std::erfc(s_obs / std::sqrt(2.0));
    return make_result(TestId::Frequency, {{"s_n", static_cast<double>(s)}, {"s_obs", s_obs}}, {p});
}

TestResult run_block_frequency(const BitSequence& seq, const SuiteParameters& params) {
    require_length(seq, 100, params, "block_frequency");
    const std::size_t m = params.block_frequency_m;
    if (m == 0 || seq.size() < m) throw SequenceTooShort("block_frequency needs at least one full block");
    const std::size_t blocks = seq.size() / m;
    double sum = 0.0;
    for (std::size_t i = 0; i < blocks; ++i) {
        std::size_t ones = 0;
        for (std::size_t j = 0; j < m; ++j) ones += seq[i * m + j];
        const double pi = static_cast<double>(ones) / static_cast<double>(m) - 0.5;
        sum += pi * pi;
    }
    const double chi2 = 4.0 * static_cast<double>(m) * sum;
    const double p = igamc(static_cast<double>(blocks) / 2.0, chi2 / 2.0);
    return make_result(TestId::BlockFrequency, {{"chi_squared", chi2}, {"blocks", static_cast<double>(blocks)}}, {p});
}

TestResult run_cumulative_sums(const BitSequence& seq, const SuiteParameters& params) {
    require_length(seq, 100, params, "cumulative_sums");
    const auto n = static_cast<std::int64_t>(seq.size());
    std::int64_t s = 0, forward = 0;
    for (auto b : seq.bits()) {
        s += b ? 1 : -1;
        forward = std::max(forward, std::abs(s));
    }
    s = 0;
    std::int64_t reverse = 0;
    for (auto it = seq.bits().rbegin(); it != seq.bits().rend(); ++it) {
        s += *it ? 1 : -1;
        reverse = std::max(reverse, std::abs(s));
    }
    return make_result(TestId::CumulativeSums,
                       {{"z_forward", static_cast<double>(forward)}, {"z_reverse", static_cast<double>(reverse)}},
                       {cusum_p_value(n, forward), cusum_p_value(n, reverse)});
}

TestResult run_runs(const BitSequence& seq, const SuiteParameters& params) {
    require_length(seq, 100, params, "runs");
    const auto n = static_cast<double>(seq.size());
    std::size_t ones = 0;
    for (auto b : seq.bits()) ones += b;
    const double pi = static_cast<double>(ones) / n;
    const double tau = 2.0 / std::sqrt(n);
    if (std::abs(pi - 0.5) >= tau)
        throw PrerequisiteFailed("runs: ones fraction " + std::to_string(pi) + " fails the frequency prerequisite");
    std::size_t v = 1;
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) v += seq[k] != seq[k + 1];
    const double vd = static_cast<double>(v);
    const double p =
        std::erfc(std::abs(vd - 2.0 * n * pi * (1.0 - pi)) / (2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi)));
    return make_result(TestId::Runs, {{"v_obs", vd}, {"pi", pi}}, {p});
}

TestResult run_longest_run(const BitSequence& seq, const SuiteParameters& params) {
    require_length(seq, 128, params, "longest_run");
    const std::size_t n = seq.size();
    std::size_t m;
    int v_min;
    std::vector<double> probs;
    if (n < 6272) {
        m = 8;
        v_min = 1;
        probs = {0.21484375, 0.3671875, 0.23046875, 0.1875};
    } else if (n < 750000) {
        m = 128;
        v_min = 4;
        probs = {0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847};
    } else {
        m = 10000;
        v_min = 10;
        probs = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
    }
    const std::size_t k = probs.size() - 1;
    const std::size_t blocks = n / m;
    std::vector<double> nu(probs.size(), 0.0);
    for (std::size_t i = 0; i < blocks; ++i) {
        int run = 0, longest = 0;
        for (std::size_t j = 0; j < m; ++j) {
            run = seq[i * m + j] ? run + 1 : 0;
            longest = std::max(longest, run);
        }
        const int cls = std::clamp(longest - v_min, 0, static_cast<int>(k));
        nu[static_cast<std::size_t>(cls)] += 1.0;
    }
    const double chi2 = chi_squared(nu, probs, static_cast<double>(blocks));
    const double p = igamc(static_cast<double>(k) / 2.0, chi2 / 2.0);
    return make_result(TestId::LongestRun, {{"chi_squared", chi2}, {"block_length", static_cast<double>(m)}}, {p});
}

int gf2_rank(std::vector<std::uint32_t> rows, int columns) {
    int rank = 0;
    for (int col = 0; col < columns && rank < static_cast<int>(rows.size()); ++col) {
        const std::uint32_t bit = std::uint32_t{1} << col;
        auto pivot = std::find_if(rows.begin() + rank, rows.end(), [bit](std::uint32_t r) { return r & bit; });
        if (pivot == rows.end()) continue;
        std::iter_swap(rows.begin() + rank, pivot);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (static_cast<int>(i) != rank && (rows[i] & bit)) rows[i] ^= rows[static_cast<std::size_t>(rank)];
        ++rank;
    }
    return rank;
}

TestResult run_rank(const BitSequence& seq, const SuiteParameters& params) {
    constexpr int kDim = 32;
    constexpr std::size_t kBitsPerMatrix = kDim * kDim;
    require_length(seq, 38 * kBitsPerMatrix, params, "rank");
    const std::size_t matrices = seq.size() / kBitsPerMatrix;
    if (matrices == 0) throw SequenceTooShort("rank needs at least one 32x32 matrix");

    double full = 0.0, minus_one = 0.0;
    std::vector<std::uint32_t> rows(kDim);
    for (std::size_t k = 0; k < matrices; ++k) {
        for (int i = 0; i < kDim; ++i) {
            std::uint32_t row = 0;
            for (int j = 0; j < kDim; ++j)
                if (seq[k * kBitsPerMatrix + static_cast<std::size_t>(i * kDim + j)]) row |= std::uint32_t{1} << j;
            rows[static_cast<std::size_t>(i)] = row;
        }
        const int r = gf2_rank(rows, kDim);
        if (r == kDim) full += 1.0;
        else if (r == kDim - 1) minus_one += 1.0;
    }
    const double p_full = rank_probability(kDim, kDim, kDim);
    const double p_minus_one = rank_probability(kDim - 1, kDim, kDim);
    const double probs[] = {p_full, p_minus_one, 1.0 - p_full - p_minus_one};
    const double observed[] = {full, minus_one, static_cast<double>(matrices) - full - minus_one};
    const double chi2 = chi_squared(observed, probs, static_cast<double>(matrices));
    return make_result(TestId::Rank, {{"chi_squared", chi2}, {"full_rank", full}, {"rank_minus_one", minus_one}},
                       {std::exp(-chi2 / 2.0)});
}

TestResult run_spectral(const BitSequence& seq, const SuiteParameters& params) {
    require_length(seq, 1000, params, "spectral");
    const std::size_t n = seq.size();
    std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
    std::unique_ptr<fftw_complex, FftwFree> out(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));
    std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan(
        fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    for (std::size_t i = 0; i < n; ++i) in.get()[i] = seq[i] ? 1.0 : -1.0;
    fftw_execute(plan.get());

    const double threshold = std::sqrt(std::log(1.0 / 0.05) * static_cast<double>(n));
    const std::size_t half = n / 2;
    std::size_t below = 0;
    for (std::size_t k = 0; k < half; ++k) {
        const double re = out.get()[k][0], im = out.get()[k][1];
        if (std::sqrt(re * re + im * im) < threshold) ++below;
    }
    const double expected = 0.95 * static_cast<double>(n) / 2.0;
    const double d = (static_cast<double>(below) - expected) / std::sqrt(static_cast<double>(n) / 4.0 * 0.95 * 0.05);
    const double p = std::erfc(std::abs(d) / std::sqrt(2.0));
    return make_result(TestId::Spectral, {{"n_below", static_cast<double>(below)}, {"d", d}}, {p});
}

TestResult run_non_overlapping_template(const BitSequence& seq, const SuiteParameters& params) {
    require_length(seq, 100, params, "non_overlapping_template");
    const auto tmpl = parse_template(params.non_overlapping_template);
    const std::size_t m = tmpl.size();
    const std::size_t blocks = params.non_overlapping_blocks;
    if (blocks == 0) throw InvalidArgument("non_overlapping_template needs at least one block");
    const std::size_t block_len = seq.size() / blocks;
    if (block_len <= m) throw SequenceTooShort("non_overlapping_template blocks are shorter than the template");

    const double md = static_cast<double>(m);
    const double mu = static_cast<double>(block_len - m + 1) / std::pow(2.0, md);
    const double sigma2 =
        static_cast<double>(block_len) * (1.0 / std::pow(2.0, md) - (2.0 * md - 1.0) / std::pow(2.0, 2.0 * md));
    double chi2 = 0.0;
    for (std::size_t j = 0; j < blocks; ++j) {
        const std::size_t base = j * block_len;
        std::size_t w = 0;
        std::size_t i = 0;
        while (i < block_len - m + 1) {
            bool match = true;
            for (std::size_t k = 0; k < m && match; ++k) match = seq[base + i + k] == tmpl[k];
            if (match) {
                ++w;
                i += m;
            } else {
                ++i;
            }
        }
        chi2 += (static_cast<double>(w) - mu) * (static_cast<double>(w) - mu) / sigma2;
    }
    const double p = igamc(static_cast<double>(blocks) / 2.0, chi2 / 2.0);
    return make_result(TestId::NonOverlappingTemplate, {{"chi_squared", chi2}, {"mu", mu}, {"sigma_squared", sigma2}},
                       {p});
}

TestResult run_overlapping_template(const BitSequence& seq, const SuiteParameters& params) {
    const auto tmpl = parse_template(params.overlapping_template);
    const std::size_t m = tmpl.size();
    const std::size_t block_len = params.overlapping_block;
    constexpr int kClasses = 5;
    if (block_len <= m) throw InvalidArgument("overlapping_template block must be longer than the template");

    const double lambda = static_cast<double>(block_len - m + 1) / std::pow(2.0, static_cast<double>(m));
    const double eta = lambda / 2.0;
    std::vector<double> probs(kClasses + 1);
    double sum = 0.0;
    for (int i = 0; i < kClasses; ++i) {
        probs[static_cast<std::size_t>(i)] = overlapping_probability(i, eta);
        sum += probs[static_cast<std::size_t>(i)];
    }
    probs[kClasses] = 1.0 - sum;

    // Enough blocks that every class expects at least five.
    const double min_prob = *std::min_element(probs.begin(), probs.end());
    const auto min_blocks = static_cast<std::size_t>(std::ceil(5.0 / min_prob));
    require_length(seq, min_blocks * block_len, params, "overlapping_template");
    const std::size_t blocks = seq.size() / block_len;
    if (blocks == 0) throw SequenceTooShort("overlapping_template needs at least one block");

    std::vector<double> nu(kClasses + 1, 0.0);
    for (std::size_t i = 0; i < blocks; ++i) {
        const std::size_t base = i * block_len;
        int w = 0;
        for (std::size_t j = 0; j + m <= block_len; ++j) {
            bool match = true;
            for (std::size_t k = 0; k < m && match; ++k) match = seq[base + j + k] == tmpl[k];
            w += match;
        }
        nu[static_cast<std::size_t>(std::min(w, kClasses))] += 1.0;
    }
    const double chi2 = chi_squared(nu, probs, static_cast<double>(blocks));
    const double p = igamc(kClasses / 2.0, chi2 / 2.0);
    return make_result(TestId::OverlappingTemplate, {{"chi_squared", chi2}, {"blocks", static_cast<double>(blocks)}},
                       {p});
}

TestResult run_universal(const BitSequence& seq, const SuiteParameters& params) {
    static constexpr double expected_value[] = {0,         0.7326495, 1.5374383, 2.4016068, 3.3112247, 4.2534266,
                                                5.2177052, 6.1962507, 7.1836656, 8.1764248, 9.1723243, 10.170032,
                                                11.168765, 12.168070, 13.167693, 14.167488, 15.167379};
    static constexpr double variance[] = {0,     0.690, 1.338, 1.901, 2.358, 2.705, 2.954, 3.125, 3.238,
                                          3.311, 3.356, 3.384, 3.401, 3.410, 3.416, 3.419, 3.421};
    static constexpr std::pair<std::size_t, int> thresholds[] = {
        {1059061760, 16}, {496435200, 15}, {231669760, 14}, {107560960, 13}, {49643520, 12}, {22753280, 11},
        {10342400, 10},   {4654080, 9},    {2068480, 8},    {904960, 7},     {387840, 6}};

    require_length(seq, 387840, params, "universal");
    const std::size_t n = seq.size();
    int l = 5;
    for (auto [min_n, value] : thresholds)
        if (n >= min_n) {
            l = value;
            break;
        }
    const std::size_t lu = static_cast<std::size_t>(l);
    const std::size_t q = 10 * (std::size_t{1} << lu);
    if (n / lu <= q) throw SequenceTooShort("universal needs more blocks than its initialization segment");
    const std::size_t k = n / lu - q;

    auto block_value = [&](std::size_t block) {
        std::size_t v = 0;
        for (std::size_t j = 0; j < lu; ++j) v = (v << 1) | seq[block * lu + j];
        return v;
    };
    std::vector<std::size_t> last_seen(std::size_t{1} << lu, 0);
    for (std::size_t i = 1; i <= q; ++i) last_seen[block_value(i - 1)] = i;
    double sum = 0.0;
    for (std::size_t i = q + 1; i <= q + k; ++i) {
        const std::size_t v = block_value(i - 1);
        sum += std::log2(static_cast<double>(i - last_seen[v]));
        last_seen[v] = i;
    }
    const double fn = sum / static_cast<double>(k);
    const double ld = static_cast<double>(l);
    const double c = 0.7 - 0.8 / ld + (4.0 + 32.0 / ld) * std::pow(static_cast<double>(k), -3.0 / ld) / 15.0;
    const double sigma = c * std::sqrt(variance[l] / static_cast<double>(k));
    const double p = std::erfc(std::abs(fn - expected_value[l]) / (std::sqrt(2.0) * sigma));
    return make_result(TestId::Universal, {{"f_n", fn}, {"block_length", ld}}, {p});
}

TestResult run_approximate_entropy(const BitSequence& seq, const SuiteParameters& params) {
    const std::size_t m = params.approximate_entropy_m;
    require_length(seq, 100, params, "approximate_entropy");
    const std::size_t n = seq.size();
    if (params.enforce_min_length && static_cast<double>(m) >= std::floor(std::log2(static_cast<double>(n))) - 5.0)
        throw SequenceTooShort("approximate_entropy block length " + std::to_string(m) + " too large for " +
                               std::to_string(n) + " bits");
    const double nd = static_cast<double>(n);
    auto phi = [&](std::size_t block) {
        double sum = 0.0;
        for (auto c : circular_pattern_counts(seq.bits(), block))
            if (c > 0) sum += static_cast<double>(c) * std::log(static_cast<double>(c) / nd);
        return sum / nd;
    };
    const double apen = phi(m) - phi(m + 1);
    const double chi2 = 2.0 * nd * (std::log(2.0) - apen);
    const double p = igamc(std::pow(2.0, static_cast<double>(m) - 1.0), chi2 / 2.0);
    return make_result(TestId::ApproximateEntropy, {{"apen", apen}, {"chi_squared", chi2}}, {p});
}

TestResult run_serial(const BitSequence& seq, const SuiteParameters& params) {
    const std::size_t m = params.serial_m;
    require_length(seq, 100, params, "serial");
    const std::size_t n = seq.size();
    if (m < 2) throw InvalidArgument("serial block length must be at least 2");
    if (params.enforce_min_length && static_cast<double>(m) >= std::floor(std::log2(static_cast<double>(n))) - 2.0)
        throw SequenceTooShort("serial block length " + std::to_string(m) + " too large for " + std::to_string(n) +
                               " bits");
    const double nd = static_cast<double>(n);
    auto psi2 = [&](std::size_t block) {
        if (block == 0) return 0.0;
        double sum = 0.0;
        for (auto c : circular_pattern_counts(seq.bits(), block)) sum += static_cast<double>(c) * static_cast<double>(c);
        return sum * std::pow(2.0, static_cast<double>(block)) / nd - nd;
    };
    const double p0 = psi2(m), p1 = psi2(m - 1), p2 = psi2(m - 2);
    const double del1 = p0 - p1;
    const double del2 = p0 - 2.0 * p1 + p2;
    const double md = static_cast<double>(m);
    return make_result(TestId::Serial, {{"psi2_m", p0}, {"del1", del1}, {"del2", del2}},
                       {igamc(std::pow(2.0, md - 2.0), del1 / 2.0), igamc(std::pow(2.0, md - 3.0), del2 / 2.0)});
}

TestResult run_test(TestId id, const BitSequence& seq, const SuiteParameters& params) {
    switch (id) {
        case TestId::Frequency: return run_monobit(seq, params);
        case TestId::BlockFrequency: return run_block_frequency(seq, params);
        case TestId::CumulativeSums: return run_cumulative_sums(seq, params);
        case TestId::Runs: return run_runs(seq, params);
        case TestId::LongestRun: return run_longest_run(seq, params);
        case TestId::Rank: return run_rank(seq, params);
        case TestId::Spectral: return run_spectral(seq, params);
        case TestId::NonOverlappingTemplate: return run_non_overlapping_template(seq, params);
        case TestId::OverlappingTemplate: return run_overlapping_template(seq, params);
        case TestId::Universal: return run_universal(seq, params);
        case TestId::ApproximateEntropy: return run_approximate_entropy(seq, params);
        case TestId::Serial: return run_serial(seq, params);
    }
    throw InvalidArgument("unknown test");
}

std::size_t SuiteReport::passed() const {
    return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const TestResult& r) { return r.passed; }));
}

std::string SuiteReport::to_jsonl() const {
    std::ostringstream out;
    for (const auto& r : results) {
        nlohmann::ordered_json j;
        j["test"] = r.test_name;
        nlohmann::ordered_json stats = nlohmann::ordered_json::object();
        for (const auto& [name, value] : r.statistics) stats[name] = value;
        j["statistics"] = stats;
        j["p_values"] = r.p_values;
        j["verdict"] = r.passed ? "pass" : "reject";
        if (!r.error_kind.empty()) {
            j["error"] = r.error_kind;
            j["message"] = r.error_message;
        }
        out << j.dump() << '\n';
    }
    nlohmann::ordered_json summary;
    summary["summary"] = true;
    summary["sequence_length"] = sequence_length;
    summary["tests"] = results.size();
    summary["passed"] = passed();
    summary["alpha"] = kAlpha;
    out << summary.dump() << '\n';
    return out.str();
}

std::string SuiteReport::summary_table() const {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-26s %-12s %-12s %s\n", "test", "p-value", "p-value 2", "verdict");
    out << line;
    for (const auto& r : results) {
        auto fmt = [&](std::size_t i) -> std::string {
            if (i >= r.p_values.size()) return "-";
            char b[32];
            std::snprintf(b, sizeof b, "%.6f", r.p_values[i]);
            return b;
        };
        const std::string verdict = r.passed ? "PASS" : (r.error_kind.empty() ? "REJECT" : "REJECT (" + r.error_kind + ")");
        std::snprintf(line, sizeof line, "%-26s %-12s %-12s %s\n", r.test_name.c_str(), fmt(0).c_str(), fmt(1).c_str(),
                      verdict.c_str());
        out << line;
    }
    std::snprintf(line, sizeof line, "%zu/%zu tests passed at alpha = %.2f, sequence length %zu bits\n", passed(),
                  results.size(), kAlpha, sequence_length);
    out << line;
    return out.str();
}

SuiteReport run_suite(const BitSequence& seq, std::span<const TestId> selected, const SuiteParameters& params) {
    SuiteReport report;
    report.sequence_length = seq.size();
    for (auto id : all_tests()) {
        if (std::find(selected.begin(), selected.end(), id) == selected.end()) continue;
        try {
            report.results.push_back(run_test(id, seq, params));
        } catch (const SequenceTooShort& e) {
            report.results.push_back({std::string(test_name(id)), {}, {}, false, "SequenceTooShort", e.what()});
        } catch (const PrerequisiteFailed& e) {
            report.results.push_back({std::string(test_name(id)), {}, {}, false, "PrerequisiteFailed", e.what()});
        } catch (const Error& e) {
            report.results.push_back({std::string(test_name(id)), {}, {}, false, "Error", e.what()});
        }
    }
    return report;
}

}  // namespace qaes::nist
