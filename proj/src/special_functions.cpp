#include "qaes/special_functions.hpp"

#include <cmath>
#include <limits>

#include "qaes/errors.hpp"

namespace qaes::special {

namespace {

constexpr double kEpsilon = 1e-15;
constexpr int kMaxIterations = 1'000'000;

// log(x^a e^-x / Gamma(a))
double log_prefactor(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

double lower_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double denom = a;
    for (int i = 0; i < kMaxIterations; ++i) {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEpsilon) break;
    }
    return sum * std::exp(log_prefactor(a, x));
}

double upper_continued_fraction(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEpsilon) break;
    }
    return std::exp(log_prefactor(a, x)) * h;
}

void check_domain(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0) || std::isnan(x)) throw InvalidArgument("incomplete gamma needs a > 0 and x >= 0");
}

}  // namespace

double igam(double a, double x) {
    check_domain(a, x);
    if (x == 0.0) return 0.0;
    if (x < 1.0 || x < a) return lower_series(a, x);
    return 1.0 - upper_continued_fraction(a, x);
}

double igamc(double a, double x) {
    check_domain(a, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < 1.0 || x < a) return 1.0 - lower_series(a, x);
    return upper_continued_fraction(a, x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace qaes::special
