#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tts {

inline constexpr int kSampleRate = 48000;

// Mono signal, samples in [-1, 1) full scale.
struct Audio {
    int sample_rate = kSampleRate;
    std::vector<double> samples;

    double seconds() const { return sample_rate ? static_cast<double>(samples.size()) / sample_rate : 0.0; }
};

// RIFF/WAVE: integer PCM 8/16/24/32 bit, IEEE float 32/64, extensible headers.
// Multichannel input is averaged to mono. Throws IoError on malformed data.
Audio parse_wav(std::string_view bytes);
Audio read_wav(const std::string& path);

// 24-bit mono PCM. Samples are scaled by 2^23 and clipped to the 24-bit range.
std::string encode_wav(const Audio& audio);
void write_wav(const std::string& path, const Audio& audio);

// Rounds every sample to the 24-bit grid used by encode_wav.
void quantize_24(std::vector<double>& samples);

}  // namespace tts
