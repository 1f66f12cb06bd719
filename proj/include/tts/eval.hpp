#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tts/pipeline.hpp"

namespace tts {

enum class CorpusKind { Drt, Mrt, Pb50, Harvard, Haskins };
std::string_view corpus_name(CorpusKind k);
std::optional<CorpusKind> parse_corpus_kind(std::string_view s);

struct DrtPair {
    std::string category;
    std::string a, b;
};

struct Sentence {
    int list = 0;
    int item = 0;
    std::string text;
    std::vector<std::string> keywords;  // lower case
};

struct MosxItem {
    int item = 0;
    std::string name, question, low, high;
};

struct Corpora {
    std::vector<DrtPair> drt;                          // 96, 16 per category
    std::vector<std::array<std::string, 6>> mrt;       // 50 sets of 6
    std::vector<std::vector<std::string>> pb50;        // 20 lists of 50
    std::vector<std::vector<Sentence>> harvard;        // 72 lists of 10
    std::vector<std::vector<Sentence>> haskins;        // 4 series of 50
    std::vector<MosxItem> mosx;                        // 15 questions
};

// Each loader checks its cardinalities and throws DataError on mismatch.
std::vector<DrtPair> load_drt(const std::string& path);
std::vector<std::array<std::string, 6>> load_mrt(const std::string& path);
std::vector<std::vector<std::string>> load_pb50(const std::string& path);
std::vector<std::vector<Sentence>> load_harvard(const std::string& path);
std::vector<std::vector<Sentence>> load_haskins(const std::string& path);
std::vector<MosxItem> load_mosx(const std::string& path);
Corpora load_corpora(const std::string& dir);

// Lower-cased words with surrounding punctuation removed.
std::vector<std::string> words_of(std::string_view text);

struct Score {
    std::size_t correct = 0;
    std::size_t total = 0;
    bool operator==(const Score&) const = default;
};

// Each keyword is matched at most once against the transcript's words.
Score score_transcription(const std::vector<std::string>& keywords, std::string_view transcript);

std::string carrier_sentence(std::string_view word);

struct Prompt {
    std::string id;      // e.g. "harvard-01-03"
    std::string text;    // what is synthesized
    std::string answer;  // target word or the sentence
    std::vector<std::string> keywords;
    std::vector<std::string> choices;  // DRT / MRT alternatives
};

// list is 1-based; 0 means every list of the corpus. DRT and MRT pick one
// word of each pair or set with the seeded generator.
std::vector<Prompt> suite_prompts(const Corpora& c, CorpusKind kind, int list, std::uint64_t seed);

// id, text, answer, keywords, choices.
std::string answer_key(const std::vector<Prompt>& prompts);
// id and an empty transcript column for listeners.
std::string score_sheet_template(const std::vector<Prompt>& prompts);

struct SuiteReport {
    std::size_t files = 0;
    double audio_seconds = 0.0;
    double synthesis_seconds = 0.0;
    std::size_t substitutions = 0;
};

// Writes <id>.wav, answer_key.tsv and score_sheet.tsv into out_dir. Prompts
// are synthesized in parallel; every file is independent of scheduling.
SuiteReport run_suite(const std::vector<Prompt>& prompts, const Voice& voice, const ProsodySettings& settings,
                      const Resources& res, const std::string& out_dir);

struct SheetScore {
    std::vector<std::pair<std::string, Score>> rows;
    Score total;
    std::size_t missing = 0;  // key rows without a transcript
    double percent() const { return total.total ? 100.0 * static_cast<double>(total.correct) / static_cast<double>(total.total) : 0.0; }
};

// Scores transcripts (id<TAB>transcript) against an answer key.
SheetScore score_sheet(const std::string& key_tsv, const std::string& transcripts_tsv);

// The MOS-X questionnaire as plain text with 7-point scales.
std::string mosx_form(const std::vector<MosxItem>& items);

}  // namespace tts
