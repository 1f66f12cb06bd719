#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "tts/phoneset.hpp"
#include "tts/tags.hpp"

namespace tts {

// 2^(steps/12): twelve-tone equal temperament.
double steps_to_ratio(double steps);

enum class CurveKind { Linear, Sinusoidal, Quintic };
std::string_view curve_kind_name(CurveKind k);
std::optional<CurveKind> parse_curve_kind(std::string_view s);

struct Curve {
    CurveKind kind = CurveKind::Linear;
    std::vector<std::pair<double, double>> points;  // sorted by x

    static Curve constant(double y) { return {CurveKind::Linear, {{0.0, y}}}; }
    bool operator==(const Curve&) const = default;
};

// Interpolates through every point; clamps to the end values outside them.
// Quintic is the natural quintic spline (third and fourth derivatives vanish
// at both ends); with fewer than three points it degrades to linear.
double eval_curve(const Curve& c, double x);

// Samples the curve at n evenly spaced x in [lo, hi].
std::vector<std::pair<double, double>> sample_curve(const Curve& c, double lo, double hi, std::size_t n);

// Volume and duration are multipliers; pitch is in twelve-tone steps.
struct Target {
    double volume = 1.0;
    double pitch = 0.0;
    double duration = 1.0;
    bool operator==(const Target&) const = default;
};

enum class ClassMode { Absolute, Relative, Approach };

struct ClassSettings {
    Target target;
    Target jitter{0.0, 0.0, 0.0};
    ClassMode mode = ClassMode::Absolute;
    double approach = 1.0;  // fraction of the way to the target per word
    bool operator==(const ClassSettings&) const = default;
};

struct CurveSet {
    Curve volume = Curve::constant(1.0);
    Curve pitch = Curve::constant(0.0);
    Curve duration = Curve::constant(1.0);
    bool operator==(const CurveSet&) const = default;
};

struct Range {
    double min = 0.0;
    double max = 0.0;
    bool operator==(const Range&) const = default;
};

struct ProsodySettings {
    std::uint64_t seed = 1;
    std::array<Target, 3> stress{};  // indexed by stress digit
    std::map<Tag, ClassSettings> classes;
    std::map<std::string, CurveSet> sentence_curves;  // "period", "question", "exclamation"
    CurveSet frequency_curves;                         // over log10 counts in [1, 7]
    std::map<std::string, double> pauses;              // punctuation -> seconds
    Range volume_clamp{0.05, 4.0};
    Range pitch_clamp{0.25, 4.0};  // frequency ratio
    Range duration_clamp{0.1, 8.0};
    std::map<std::string, std::string> bracket_banks;  // "(" -> bank name
    bool operator==(const ProsodySettings&) const = default;

    // Every contribution neutral; default pauses.
    static ProsodySettings neutral();
    static std::map<std::string, double> default_pauses();

    nlohmann::json to_json() const;
    // Throws DataError on unknown kinds, negative pauses or inverted clamps.
    static ProsodySettings from_json(const nlohmann::json& j);
    // Applies the keys present in `patch` on top of this document.
    ProsodySettings merged(const nlohmann::json& patch) const;
    static ProsodySettings load_file(const std::string& path);
};

// Lower-cased word -> log10 count; counts of 10 or less are dropped and
// repeated words (one row per part of speech) are summed first.
struct FrequencyTable {
    std::map<std::string, double> log_counts;
    std::size_t malformed = 0;

    double lookup(const std::string& word) const;  // 1 when absent
};
FrequencyTable load_frequency_table(std::istream& in);
FrequencyTable load_frequency_table_file(const std::string& path);

// Input to planning: one entry per token after pronunciation.
struct PlanToken {
    std::string text;
    Tag tag = Tag::Unknown;
    std::vector<StressedPhone> phones;
    bool punct = false;
    std::size_t sentence = 0;
};

struct PhoneProsody {
    double volume = 1.0;
    double pitch = 1.0;  // frequency ratio
    double duration = 1.0;
    bool operator==(const PhoneProsody&) const = default;
};

struct TokenProsody {
    Target word;  // composed word-level contribution before stress
    std::vector<PhoneProsody> phones;
    double pause = 0.0;  // seconds of silence, punctuation only
};

struct ProsodyPlan {
    std::vector<TokenProsody> tokens;
};

// Terminator of each sentence ("period", "question" or "exclamation").
std::string curve_set_for(const std::string& terminator);

ProsodyPlan plan(const std::vector<PlanToken>& tokens, const ProsodySettings& settings,
                 const FrequencyTable* frequencies = nullptr);

// Uniform draws in [-1, 1). std::mt19937_64 output is fixed by the standard;
// the conversion to double is done here so it is too.
class Jitter {
public:
    explicit Jitter(std::uint64_t seed) : rng_(seed) {}
    double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-52 - 1.0; }

private:
    std::mt19937_64 rng_;
};

}  // namespace tts
