#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tts/bank.hpp"
#include "tts/g2p.hpp"
#include "tts/lexicon.hpp"
#include "tts/phoneset.hpp"
#include "tts/postagger.hpp"
#include "tts/prosody.hpp"
#include "tts/signal_ops.hpp"
#include "tts/textnorm.hpp"
#include "tts/wav.hpp"

namespace tts {

struct ResourcePaths {
    std::string lexicon;
    std::string homographs;
    std::string pos_lexicon;
    std::string trigrams;
    std::string claws7;
    std::string g2p;          // empty: train from the lexicon at load
    std::string frequencies;  // empty: every word gets the neutral frequency

    static ResourcePaths defaults(const std::string& data_dir);
};

// Read-only after load; shared between requests.
struct Resources {
    PronunciationLexicon lexicon;
    PosLexicon pos_lexicon;
    TrigramModel trigrams;
    GraphoneTable g2p;
    std::optional<FrequencyTable> frequencies;

    static Resources load(const ResourcePaths& paths);
};

enum class PronSource { Homograph, Lexicon, Number, Mixed, G2P, Punct };
std::string_view source_name(PronSource s);

struct AnalyzedToken {
    std::string text;
    TokenKind kind = TokenKind::Word;
    int sentence = 0;
    Tag tag = Tag::Unknown;
    std::vector<std::string> arpabet;   // before diphthong decomposition
    std::vector<StressedPhone> phones;  // synthesis inventory
    PronSource source = PronSource::Punct;
};

// Tokenize, tag per sentence, pronounce.
std::vector<AnalyzedToken> preprocess(const std::string& text, const Resources& res);

// Pronunciation of a single word outside any sentence context.
std::vector<std::string> pronounce_word(const std::string& word, const Resources& res,
                                        std::optional<Tag> tag = std::nullopt, PronSource* source = nullptr);

nlohmann::json analysis_json(const std::vector<AnalyzedToken>& tokens);

// One phone of the utterance with its prosody, or a pause.
struct UtterancePhone {
    Phone phone = Phone::X;
    PhoneProsody prosody;
    double pause = 0.0;  // seconds of silence after this X; 0 for phones
    int bank = 0;        // index into the voice list (0 = main bank)
};

// Silence-delimited phone chain for the whole text. Adjacent identical
// phones are merged and pauses are attached to silences.
std::vector<UtterancePhone> build_utterance(const std::vector<AnalyzedToken>& tokens, const ProsodyPlan& plan,
                                            const std::vector<int>& token_banks);

enum class UnitKind { Diphone, Burst, Silence };
std::string_view unit_kind_name(UnitKind k);

struct Unit {
    UnitKind kind = UnitKind::Diphone;
    Diphone diphone{Phone::X, Phone::X};  // burst: (stop, X)
    ShiftSpec spec;
    double seconds = 0.0;  // silence only
    int bank = 0;
    bool bridge = false;   // part of a missing-diphone substitution
};

struct UnitPlan {
    std::vector<Unit> units;
    std::vector<std::string> substitutions;
};

// Pairs consecutive phones into bank lookups. Persistent -> stop becomes the
// persistent phone's silence exit, stop -> stop plays the first stop's burst,
// and a missing diphone becomes (p1,X) + 30 ms silence + (X,p2).
UnitPlan to_units(const std::vector<UtterancePhone>& utterance, const std::vector<const DiphoneBank*>& banks);

struct SynthReport {
    std::vector<std::string> substitutions;
    std::vector<std::string> warnings;
    std::size_t clips = 0;
    std::size_t clipped_samples = 0;
    std::size_t shifted_samples = 0;  // sum of shifted clip lengths
    std::size_t overlap_samples = 0;  // sum of crossfade overlaps
    std::size_t pause_samples = 0;
    double synthesis_seconds = 0.0;
    double audio_seconds = 0.0;
    double real_time_factor() const { return audio_seconds > 0 ? synthesis_seconds / audio_seconds : 0.0; }
    nlohmann::json to_json() const;
};

struct SynthResult {
    Audio audio;
    std::vector<AnalyzedToken> tokens;
    ProsodyPlan plan;
    UnitPlan units;
    SynthReport report;
};

// Bank used for text inside the brackets of settings.bracket_banks.
struct Voice {
    const DiphoneBank* main = nullptr;
    std::map<std::string, const DiphoneBank*> alternates;  // bank name -> bank
};

struct SynthOptions {
    bool plan_only = false;  // skip rendering
};

SynthResult synthesize(const std::string& text, const Voice& voice, const ProsodySettings& settings,
                       const Resources& res, SynthOptions opt = {});

}  // namespace tts
