#pragma once

// Synthetic signals and independent measurements shared by the test binaries.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

namespace testsupport {

inline constexpr int kRate = 48000;

inline std::vector<double> sine(double hz, double seconds, double amp = 0.5, double phase = 0.0) {
    auto n = static_cast<std::size_t>(std::lround(seconds * kRate));
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = amp * std::sin(2 * std::numbers::pi * hz * static_cast<double>(i) / kRate + phase);
    return x;
}

inline std::vector<double> silence(double seconds) {
    return std::vector<double>(static_cast<std::size_t>(std::lround(seconds * kRate)), 0.0);
}

inline void append(std::vector<double>& a, const std::vector<double>& b) { a.insert(a.end(), b.begin(), b.end()); }

// One damped 700 Hz ring per period on top of a 1.5 ms raised-cosine bump,
// so each period has a single dominant positive peak.
inline std::vector<double> pulse_train(double f0, double seconds, double amp = 0.4) {
    auto n = static_cast<std::size_t>(std::lround(seconds * kRate));
    std::vector<double> x(n, 0.0);
    double period = kRate / f0;
    double bump = 0.0015 * kRate;
    for (double start = 0; start < static_cast<double>(n); start += period) {
        auto s0 = static_cast<std::size_t>(std::lround(start));
        for (std::size_t i = s0; i < n && i < s0 + static_cast<std::size_t>(period); ++i) {
            double t = static_cast<double>(i - s0);
            double v = 0.3 * std::exp(-t / (0.002 * kRate)) * std::sin(2 * std::numbers::pi * 700 * t / kRate);
            if (t < bump) v += 0.5 - 0.5 * std::cos(2 * std::numbers::pi * t / bump);
            x[i] += amp * v;
        }
    }
    return x;
}

// Fundamental by normalized autocorrelation over 50..500 Hz, preferring the
// shortest lag within 90% of the best peak.
inline double estimate_f0(const std::vector<double>& x, std::size_t begin, std::size_t end) {
    std::size_t min_lag = kRate / 500, max_lag = kRate / 40;
    std::vector<double> r(max_lag + 1, 0.0);
    double best = 0;
    for (std::size_t lag = min_lag; lag <= max_lag && begin + lag < end; ++lag) {
        double acc = 0, e1 = 0, e2 = 0;
        for (std::size_t i = begin; i + lag < end; ++i) {
            acc += x[i] * x[i + lag];
            e1 += x[i] * x[i];
            e2 += x[i + lag] * x[i + lag];
        }
        r[lag] = (e1 > 0 && e2 > 0) ? acc / std::sqrt(e1 * e2) : 0.0;
        best = std::max(best, r[lag]);
    }
    for (std::size_t lag = min_lag + 1; lag < max_lag; ++lag)
        if (r[lag] >= 0.9 * best && r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1])
            return static_cast<double>(kRate) / static_cast<double>(lag);
    return 0.0;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline std::vector<double> noise(double seconds, double amp, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-amp, amp);
    std::vector<double> x(static_cast<std::size_t>(std::lround(seconds * kRate)));
    for (auto& v : x) v = u(rng);
    return x;
}

}  // namespace testsupport
