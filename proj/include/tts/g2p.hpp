#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tts/lexicon.hpp"

namespace tts {

// Phones here are stress-free Arpabet (diphthongs kept), as in training data.
using PhoneSeq = std::vector<std::string>;

struct Segment {
    std::string letters;
    PhoneSeq phones;
    bool operator==(const Segment&) const = default;
};

struct AlignedWord {
    std::string word;  // lowercase letters
    std::vector<Segment> segments;
};

// Alphabetic headwords of lex, lowercased, one item per pronunciation variant,
// stress digits removed.
std::vector<std::pair<std::string, PhoneSeq>> g2p_corpus(const PronunciationLexicon& lex);

PhoneSeq strip_stress(const std::vector<std::string>& arpabet);

// Pairs maximal vowel-class / consonant-class runs of letters and phones.
// Fails when the run counts or the class of the first run differ.
std::optional<AlignedWord> initial_align(std::string_view word, const PhoneSeq& phones);

// Known pronunciations of letter clusters (up to 4 letters, no boundary
// tokens) tallied over an aligned corpus, rare pronunciations removed.
class ClusterInventory {
public:
    static ClusterInventory build(const std::vector<AlignedWord>& corpus, double keep_ratio = 0.1);

    // Most frequent first.
    const std::vector<std::string>* pronunciations(std::string_view letters) const;

    // Splits from the end, then from the start, recursively, using known
    // cluster pronunciations. Segments of one letter or one phone are final.
    std::vector<Segment> split(const Segment& seg) const;

    size_t size() const { return prons_.size(); }

private:
    void split_into(const std::string& letters, const std::string& code,
                    std::vector<std::pair<std::string, std::string>>& out) const;

    std::unordered_map<std::string, std::vector<std::string>> prons_;  // encoded phones
};

struct AlignmentReport {
    size_t words = 0;
    size_t initially_aligned = 0;
    size_t second_pass_aligned = 0;
    size_t dropped = 0;  // a segment stayed longer than 4 letters
};

// Splits every segment of an already aligned corpus into minimal units.
std::vector<AlignedWord> refine_alignment(const std::vector<AlignedWord>& aligned,
                                          const ClusterInventory& inventory);

// Full alignment: initial runs, refinement, then whole-word splitting of the
// words the initial pass could not align.
std::vector<AlignedWord> align_corpus(const std::vector<std::pair<std::string, PhoneSeq>>& corpus,
                                      AlignmentReport* report = nullptr);

struct Graphone {
    std::string graphemes;  // letters, optionally "(" prefixed or ")" suffixed
    PhoneSeq phonemes;
    double confidence = 0;
};

struct DecodeResult {
    PhoneSeq phones;                  // Arpabet, vowels carry stress 0
    std::vector<std::string> pieces;  // graphone keys along the chosen path
    bool fallback = false;            // per-letter fallback was used
    std::string unknown_letters;      // letters the fallback could not voice
};

struct TrainReport {
    size_t keys = 0;
    size_t pruned = 0;
};

class GraphoneTable {
public:
    // Costs within this distance are treated as equal when choosing paths.
    static constexpr double kTieEpsilon = 1e-9;
    static constexpr int kMaxLetters = 4;

    void insert(const std::string& graphemes, const PhoneSeq& phonemes, double confidence);
    void erase(const std::string& graphemes);
    const Graphone* find(std::string_view graphemes) const;
    size_t size() const { return entries_.size(); }
    std::vector<Graphone> sorted() const;

    DecodeResult decode(std::string_view word) const;

    // Key spanning letters [i, j) of a word of length n; empty for the whole
    // word, which never carries both tokens.
    static std::string edge_key(std::string_view word, size_t i, size_t j);

    // -log(confidence) of the cheapest split of key into two or more smaller
    // keys, boundary tokens kept on the outer pieces; infinity when none exists.
    double best_split_cost(const std::string& key) const;

    // Removes multi-letter keys beaten by a split into smaller keys.
    size_t prune();

    std::string serialize() const;  // graphemes<TAB>phonemes<TAB>confidence
    static GraphoneTable load(std::istream& in);
    static GraphoneTable load_file(const std::string& path);

private:
    struct Entry {
        Graphone g;
        double cost;
    };
    std::unordered_map<std::string, Entry> entries_;
};

GraphoneTable train(const std::vector<AlignedWord>& corpus, bool prune = true,
                    TrainReport* report = nullptr);

// Convenience: align and train from a lexicon.
GraphoneTable train_from_lexicon(const PronunciationLexicon& lex, AlignmentReport* align = nullptr,
                                 TrainReport* report = nullptr);

enum class MatchKind { Exact, OneOff, Missing, Extra, Incorrect };

MatchKind classify(const PhoneSeq& predicted, const PhoneSeq& gold);

struct AccuracyReport {
    size_t exact = 0, one_off = 0, missing = 0, extra = 0, incorrect = 0;
    size_t total() const { return exact + one_off + missing + extra + incorrect; }
    double pct(size_t n) const { return total() ? 100.0 * static_cast<double>(n) / static_cast<double>(total()) : 0.0; }
    std::string format() const;
};

// Scores each alphabetic headword against its closest listed pronunciation.
AccuracyReport evaluate(const GraphoneTable& table, const PronunciationLexicon& lex);

}  // namespace tts
