#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tts/phoneset.hpp"
#include "tts/wav.hpp"

namespace tts {

// Glottal excitation positions in a voiced clip of `length` samples.
struct PulseTrain {
    std::vector<std::size_t> peaks;
    std::size_t length = 0;

    // Asymmetric raised-cosine window around peak i: rises from the previous
    // peak (or the clip start, flat) and falls to the next peak (or the clip
    // end, flat). The windows of a train sum to one everywhere.
    double window(std::size_t i, std::size_t sample) const;
    // Support of window i: [left, right).
    std::size_t left(std::size_t i) const { return i == 0 ? 0 : peaks[i - 1]; }
    std::size_t right(std::size_t i) const { return i + 1 == peaks.size() ? length : peaks[i + 1]; }
};

// Start/end multipliers, interpolated linearly across a clip.
struct ShiftSpec {
    double pitch0 = 1, pitch1 = 1;
    double dur0 = 1, dur1 = 1;
    double vol0 = 1, vol1 = 1;

    static ShiftSpec identity() { return {}; }
    double pitch(double t) const { return pitch0 + (pitch1 - pitch0) * t; }
    double dur(double t) const { return dur0 + (dur1 - dur0) * t; }
    double vol(double t) const { return vol0 + (vol1 - vol0) * t; }
    // The same ramps over the sub-interval [a, b] of the clip.
    ShiftSpec slice(double a, double b) const;
    ShiftSpec reversed() const;
};

// Moving-average smoothing over smoothing_ms, clip below zero, pick local
// maxima, drop peaks under 20% of the tallest, then drop trailing peaks more
// than twice the median gap from their predecessor. Throws SignalError when
// nothing survives.
PulseTrain detect_pulses(const std::vector<double>& x, double smoothing_ms, int sample_rate = kSampleRate);

struct Placement {
    long anchor;            // output sample of the excitation centre
    std::size_t excitation; // index into the pulse train
};
// Excitation placement: the first stays put, later steps are the local gap
// over the pitch ratio, and each point takes the excitation whose
// duration-scaled range contains it. Ends with the first placement at or past
// the scaled position of the last excitation.
std::vector<Placement> psola_schedule(const PulseTrain& pulses, const ShiftSpec& spec);

// Pitch and duration without volume; used by psola() and shift_diphone().
std::vector<double> psola_core(const std::vector<double>& x, const PulseTrain& pulses, const ShiftSpec& spec);
std::vector<double> psola(const std::vector<double>& x, const PulseTrain& pulses, const ShiftSpec& spec);

// Copies of each 10 ms frame (0 = dropped) under the fractional accumulator.
std::vector<int> usds_frame_plan(std::size_t frames, double dur0, double dur1);
std::vector<double> usds_core(const std::vector<double>& x, const ShiftSpec& spec, int sample_rate = kSampleRate);
std::vector<double> usds(const std::vector<double>& x, const ShiftSpec& spec, int sample_rate = kSampleRate);

// Multiplies by the volume line; samples beyond full scale are clipped and
// counted.
std::size_t apply_volume(std::vector<double>& x, double v0, double v1);

enum class ShiftPath { Psola, Usds, VoicedToUnvoiced, UnvoicedToVoiced, Burst };
std::string_view path_name(ShiftPath p);
ShiftPath choose_path(Phone p1, Phone p2);

struct ShiftResult {
    std::vector<double> samples;
    ShiftPath path = ShiftPath::Psola;
    std::size_t split = 0;   // source sample where the voiced part ends
    std::size_t clipped = 0;
    std::vector<std::string> warnings;
};

ShiftResult shift_diphone(const std::vector<double>& clip, Phone p1, Phone p2, const ShiftSpec& spec,
                          double smoothing_ms, int sample_rate = kSampleRate);

struct ConcatResult {
    std::vector<double> samples;
    std::size_t overlap = 0;
    bool shrunk = false;
};

// Aligns the maxima of w1's last 20 ms and w2's first 20 ms and crossfades
// linearly over the overlap. Silence and stop connectives append directly.
ConcatResult smooth_concat(const std::vector<double>& w1, const std::vector<double>& w2, Phone connective,
                           int sample_rate = kSampleRate);

}  // namespace tts
