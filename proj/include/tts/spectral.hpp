#pragma once

#include <cstddef>
#include <vector>

namespace tts {

// Frame grid shared by the STFT and the short-term RMS track.
struct FrameGrid {
    std::size_t window = 960;  // 20 ms at 48 kHz
    std::size_t hop = 480;     // 10 ms

    static FrameGrid for_rate(int sample_rate);

    std::size_t bins() const { return window / 2 + 1; }
    // Frames covering n samples; a short tail gets one zero-padded frame.
    std::size_t frame_count(std::size_t n) const;
    std::size_t frame_start(std::size_t i) const { return i * hop; }
    std::size_t frame_center(std::size_t i) const { return i * hop + window / 2; }
};

using Spectrum = std::vector<double>;

// Hann-windowed magnitude spectra of x[begin, end).
std::vector<Spectrum> stft_magnitudes(const std::vector<double>& x, std::size_t begin, std::size_t end,
                                      const FrameGrid& grid);

// Mean magnitude spectrum over every frame of x[begin, end).
Spectrum average_spectrum(const std::vector<double>& x, std::size_t begin, std::size_t end,
                          const FrameGrid& grid);

std::vector<double> short_term_rms(const std::vector<double>& x, std::size_t begin, std::size_t end,
                                   const FrameGrid& grid);

double rms(const std::vector<double>& x, std::size_t begin, std::size_t end);

// ln(1 / (1 + sum_k (max(a_k, b_k) / min(a_k, b_k) - 1))) with 0.1 added to
// every bin. Zero for identical spectra, negative otherwise.
double spectral_distance(const Spectrum& a, const Spectrum& b);

// Centered moving average; windows are truncated at the edges.
std::vector<double> moving_average(const std::vector<double>& v, std::size_t width);

}  // namespace tts
