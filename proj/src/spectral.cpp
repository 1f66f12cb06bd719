#include "tts/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "tts/common.hpp"

namespace tts {

FrameGrid FrameGrid::for_rate(int sample_rate) {
    FrameGrid g;
    g.window = static_cast<std::size_t>(sample_rate) / 50;
    g.hop = static_cast<std::size_t>(sample_rate) / 100;
    if (g.window < 2) g.window = 2;
    if (g.hop < 1) g.hop = 1;
    return g;
}

std::size_t FrameGrid::frame_count(std::size_t n) const {
    if (n == 0) return 0;
    if (n <= window) return 1;
    return 1 + (n - window + hop - 1) / hop;
}

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
struct Plan {
    std::size_t n;
    double* in;
    fftw_complex* out;
    fftw_plan plan;

    explicit Plan(std::size_t size) : n(size) {
        in = fftw_alloc_real(n);
        out = fftw_alloc_complex(n / 2 + 1);
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    ~Plan() {
        fftw_destroy_plan(plan);
        fftw_free(in);
        fftw_free(out);
    }
};

std::mutex plan_mutex;

const Plan& plan_for(std::size_t n) {
    static std::map<std::size_t, std::unique_ptr<Plan>> plans;
    std::lock_guard lock(plan_mutex);
    auto& slot = plans[n];
    if (!slot) slot = std::make_unique<Plan>(n);
    return *slot;
}

std::vector<double> hann(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
    return w;
}

}  // namespace

std::vector<Spectrum> stft_magnitudes(const std::vector<double>& x, std::size_t begin, std::size_t end,
                                      const FrameGrid& grid) {
    end = std::min(end, x.size());
    if (begin >= end) return {};
    const Plan& plan = plan_for(grid.window);
    const auto window = hann(grid.window);
    std::size_t frames = grid.frame_count(end - begin);
    std::size_t bins = grid.bins();

    double* in = fftw_alloc_real(grid.window);
    fftw_complex* out = fftw_alloc_complex(bins);
    std::vector<Spectrum> result(frames, Spectrum(bins));
    for (std::size_t f = 0; f < frames; ++f) {
        std::size_t s = begin + grid.frame_start(f);
        for (std::size_t i = 0; i < grid.window; ++i) {
            std::size_t k = s + i;
            in[i] = k < end ? x[k] * window[i] : 0.0;
        }
        fftw_execute_dft_r2c(plan.plan, in, out);
        for (std::size_t b = 0; b < bins; ++b) result[f][b] = std::hypot(out[b][0], out[b][1]);
    }
    fftw_free(in);
    fftw_free(out);
    return result;
}

Spectrum average_spectrum(const std::vector<double>& x, std::size_t begin, std::size_t end,
                          const FrameGrid& grid) {
    auto frames = stft_magnitudes(x, begin, end, grid);
    Spectrum avg(grid.bins(), 0.0);
    if (frames.empty()) return avg;
    for (const auto& f : frames)
        for (std::size_t b = 0; b < avg.size(); ++b) avg[b] += f[b];
    for (auto& v : avg) v /= static_cast<double>(frames.size());
    return avg;
}

std::vector<double> short_term_rms(const std::vector<double>& x, std::size_t begin, std::size_t end,
                                   const FrameGrid& grid) {
    end = std::min(end, x.size());
    if (begin >= end) return {};
    std::size_t frames = grid.frame_count(end - begin);
    std::vector<double> out(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        std::size_t s = begin + grid.frame_start(f);
        double acc = 0;
        for (std::size_t i = 0; i < grid.window; ++i)
            if (s + i < end) acc += x[s + i] * x[s + i];
        out[f] = std::sqrt(acc / static_cast<double>(grid.window));
    }
    return out;
}

double rms(const std::vector<double>& x, std::size_t begin, std::size_t end) {
    end = std::min(end, x.size());
    if (begin >= end) return 0.0;
    double acc = 0;
    for (std::size_t i = begin; i < end; ++i) acc += x[i] * x[i];
    return std::sqrt(acc / static_cast<double>(end - begin));
}

double spectral_distance(const Spectrum& a, const Spectrum& b) {
    if (a.size() != b.size())
        throw SignalError("spectral_distance: length mismatch (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
    double d = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double p1 = a[k] + 0.1;
        double p2 = b[k] + 0.1;
        d += std::max(p1, p2) / std::min(p1, p2) - 1.0;
    }
    return std::log(1.0 / (d + 1.0));
}

std::vector<double> moving_average(const std::vector<double>& v, std::size_t width) {
    if (width <= 1 || v.empty()) return v;
    std::size_t half = width / 2;
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t lo = i >= half ? i - half : 0;
        std::size_t hi = std::min(v.size() - 1, i + (width - 1 - half));
        double acc = 0;
        for (std::size_t k = lo; k <= hi; ++k) acc += v[k];
        out[i] = acc / static_cast<double>(hi - lo + 1);
    }
    return out;
}

}  // namespace tts
