#include "tts/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "tts/common.hpp"

namespace tts {

namespace {

constexpr double kScale24 = 8388608.0;

std::uint32_t le32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint16_t le16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void put32(std::string& s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) s += static_cast<char>((v >> (8 * i)) & 0xFF);
}

void put16(std::string& s, std::uint16_t v) {
    s += static_cast<char>(v & 0xFF);
    s += static_cast<char>(v >> 8);
}

std::int32_t to_24(double x) {
    double v = std::nearbyint(x * kScale24);
    v = std::clamp(v, -kScale24, kScale24 - 1);
    return static_cast<std::int32_t>(v);
}

}  // namespace

Audio parse_wav(std::string_view bytes) {
    const auto* b = reinterpret_cast<const unsigned char*>(bytes.data());
    if (bytes.size() < 12 || std::memcmp(b, "RIFF", 4) != 0 || std::memcmp(b + 8, "WAVE", 4) != 0)
        throw IoError("not a RIFF/WAVE file");

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0, block = 0;
    std::uint32_t rate = 0;
    const unsigned char* data = nullptr;
    size_t data_len = 0;

    size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* id = b + pos;
        size_t len = le32(b + pos + 4);
        size_t body = pos + 8;
        size_t avail = std::min(len, bytes.size() - body);
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (avail < 16) throw IoError("truncated fmt chunk");
            format = le16(b + body);
            channels = le16(b + body + 2);
            rate = le32(b + body + 4);
            block = le16(b + body + 12);
            bits = le16(b + body + 14);
            if (format == 0xFFFE) {
                if (avail < 26) throw IoError("truncated extensible fmt chunk");
                format = le16(b + body + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = b + body;
            data_len = avail;
        }
        pos = body + len + (len & 1);
    }
    if (!have_fmt) throw IoError("missing fmt chunk");
    if (!data) throw IoError("missing data chunk");
    if (channels == 0 || rate == 0) throw IoError("bad channel count or sample rate");
    const size_t width = bits / 8;
    bool pcm = format == 1 && (bits == 8 || bits == 16 || bits == 24 || bits == 32);
    bool flt = format == 3 && (bits == 32 || bits == 64);
    if (!pcm && !flt) throw IoError("unsupported sample format " + std::to_string(format) + "/" + std::to_string(bits));
    if (block < width * channels) block = static_cast<std::uint16_t>(width * channels);

    Audio out;
    out.sample_rate = static_cast<int>(rate);
    const size_t frames = data_len / block;
    out.samples.resize(frames);
    for (size_t f = 0; f < frames; ++f) {
        double acc = 0;
        for (size_t c = 0; c < channels; ++c) {
            const unsigned char* p = data + f * block + c * width;
            double v = 0;
            if (flt && bits == 32) {
                float x;
                std::uint32_t u = le32(p);
                std::memcpy(&x, &u, 4);
                v = x;
            } else if (flt) {
                std::uint64_t u = static_cast<std::uint64_t>(le32(p)) | static_cast<std::uint64_t>(le32(p + 4)) << 32;
                double x;
                std::memcpy(&x, &u, 8);
                v = x;
            } else if (bits == 8) {
                v = (static_cast<int>(p[0]) - 128) / 128.0;
            } else if (bits == 16) {
                v = static_cast<std::int16_t>(le16(p)) / 32768.0;
            } else if (bits == 24) {
                std::int32_t s = static_cast<std::int32_t>(p[0] | p[1] << 8 | p[2] << 16);
                if (s & 0x800000) s -= 0x1000000;
                v = s / kScale24;
            } else {
                v = static_cast<std::int32_t>(le32(p)) / 2147483648.0;
            }
            acc += v;
        }
        out.samples[f] = acc / channels;
    }
    return out;
}

Audio read_wav(const std::string& path) { return parse_wav(read_file(path)); }

std::string encode_wav(const Audio& audio) {
    const std::uint32_t data_len = static_cast<std::uint32_t>(audio.samples.size() * 3);
    std::string s;
    s.reserve(44 + data_len);
    const std::uint32_t pad = data_len & 1;
    s += "RIFF";
    put32(s, 36 + data_len + pad);
    s += "WAVEfmt ";
    put32(s, 16);
    put16(s, 1);
    put16(s, 1);
    put32(s, static_cast<std::uint32_t>(audio.sample_rate));
    put32(s, static_cast<std::uint32_t>(audio.sample_rate) * 3);
    put16(s, 3);
    put16(s, 24);
    s += "data";
    put32(s, data_len);
    for (double x : audio.samples) {
        std::int32_t v = to_24(x);
        s += static_cast<char>(v & 0xFF);
        s += static_cast<char>((v >> 8) & 0xFF);
        s += static_cast<char>((v >> 16) & 0xFF);
    }
    if (pad) s += '\0';
    return s;
}

void write_wav(const std::string& path, const Audio& audio) { write_file(path, encode_wav(audio)); }

void quantize_24(std::vector<double>& samples) {
    for (auto& x : samples) x = to_24(x) / kScale24;
}

}  // namespace tts
