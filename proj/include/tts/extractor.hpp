#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tts/phoneset.hpp"
#include "tts/spectral.hpp"
#include "tts/wav.hpp"

namespace tts {

inline constexpr double kLsb24 = 1.0 / 8388608.0;

struct SilenceProfile {
    double amplitude_threshold = kLsb24;
    double rms_threshold = kLsb24;
};

// Thresholds from a recording of ambient silence: twice the peak amplitude
// and the plain RMS, each floored at one 24-bit LSB. Throws SignalError on an
// empty or clipped recording.
SilenceProfile calibrate_silence(const Audio& silence);

struct ExtractorParams {
    FrameGrid grid;
    double fade_seconds = 0.01;
    std::size_t smoothing_frames = 5;
    double min_sustain_seconds = 0.5;
};

// First and last sample index (half-open) where |x| exceeds the amplitude
// threshold and the 20 ms RMS around the sample exceeds the RMS threshold.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
};
Span speech_span(const std::vector<double>& x, const SilenceProfile& profile, const FrameGrid& grid);

struct MonophoneRecord {
    Phone phone = Phone::X;
    // Persistent phones: silence-to-phone, steady state, phone-to-silence.
    std::vector<double> onset, sustain, offset;
    // Stops: the trimmed burst only.
    std::vector<double> burst;
    // Source sample indices: trimmed (and fade-padded) span and split points.
    std::size_t begin = 0, split_onset = 0, split_offset = 0, end = 0;
    double global_rms = 0.0;
    std::vector<double> short_rms;
    std::vector<std::string> warnings;
};

MonophoneRecord section_monophone(const Audio& audio, Phone phone, const SilenceProfile& profile,
                                  const ExtractorParams& params = {});

struct DiphoneClip {
    std::vector<double> samples;
    std::size_t begin = 0, end = 0;  // source sample range
    std::size_t boundary = 0;        // where the distance line crosses its mean
    std::vector<double> line;        // smoothed distance line over the speech span
    std::size_t span_begin = 0;
    double lower_mean = 0, mean = 0, upper_mean = 0;
    std::size_t first_frame = 0, last_frame = 0;
    std::vector<std::string> warnings;
};

// Frame indices selected on a distance line: lower-mean crossing pulled back
// to a local minimum, upper-mean crossing pushed forward to a local maximum.
struct Traversal {
    std::size_t lower_cross = 0, upper_cross = 0, mid_cross = 0;
    std::size_t first = 0, last = 0;
    double lower_mean = 0, mean = 0, upper_mean = 0;
};
// Throws SignalError("ambiguous transition; re-record") unless the line
// passes the lower mean for the last time before it first reaches the upper mean.
Traversal locate_transition(const std::vector<double>& line);

DiphoneClip extract_persistent_diphone(const Audio& audio, const Spectrum& first_profile,
                                       const Spectrum& second_profile, const SilenceProfile& profile,
                                       const ExtractorParams& params = {});

DiphoneClip extract_stop_diphone(const Audio& audio, const Spectrum& second_profile,
                                 const SilenceProfile& profile, const ExtractorParams& params = {});

}  // namespace tts
