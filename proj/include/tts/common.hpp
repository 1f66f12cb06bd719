#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tts {

// Input that cannot be interpreted (bad symbol, malformed record, bad corpus).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File system or audio container failure.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Signal-processing failure that callers may recover from (e.g. re-record).
struct SignalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string to_upper(std::string_view s);
std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

// Splits on runs of ASCII whitespace; no empty fields.
std::vector<std::string> split_ws(std::string_view s);
// Splits on a single delimiter; keeps empty fields.
std::vector<std::string> split(std::string_view s, char delim);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool is_alpha_word(std::string_view s);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 1469598103934665603ull);
std::string hex64(std::uint64_t v);

// Bundled data directory: $TTS_DATA_DIR if set, else the source tree's data/.
std::string default_data_dir();

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace tts
