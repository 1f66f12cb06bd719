#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tts/tags.hpp"

namespace tts {

using Pronunciation = std::vector<std::string>;  // raw Arpabet with stress digits

struct LexiconEntry {
    std::string headword;                  // uppercase
    std::vector<Pronunciation> pronunciations;
    std::vector<std::string> variant_labels;  // "" or the "(n)" suffix as written
    std::map<Tag, size_t> homograph_selector;
};

class PronunciationLexicon {
public:
    // CMUdict plaintext, either "WORD(1)  PH ..." or "word(2) ph ..." style.
    // Lines starting with ";;;" or "#" are comments, as is a trailing " # ...".
    static PronunciationLexicon load_cmudict(std::istream& in);
    static PronunciationLexicon load_cmudict_file(const std::string& path);

    // word<TAB>tag<TAB>variant rows; variant is a 0-based pronunciation index.
    void load_homographs(std::istream& in);

    void add(std::string_view word, Pronunciation pron);

    const LexiconEntry* find(std::string_view word) const;
    // Homograph choice when a selector matches pos; variant 0 otherwise.
    std::optional<Pronunciation> lookup(std::string_view word,
                                        std::optional<Tag> pos = std::nullopt) const;

    size_t size() const { return entries_.size(); }
    const std::map<std::string, LexiconEntry>& entries() const { return entries_; }

    // CMUdict format, one pronunciation per line, variants as WORD(n) with n from 1.
    std::string serialize() const;

private:
    std::map<std::string, LexiconEntry> entries_;
};

struct PosLexiconEntry {
    std::string headword;
    std::string codes;  // MPOS letters, most likely first
};

class PosLexicon {
public:
    // "word×CODES" records; the separator may be UTF-8 or Latin-1 encoded.
    static PosLexicon load_mpos(std::istream& in);
    static PosLexicon load_mpos_file(const std::string& path);

    void add(std::string headword, std::string codes);

    // Merges headwords differing only in case; returns the number of entries removed.
    size_t dedup_case_variants();

    // Case-insensitive; only valid once headwords are case-unique.
    const PosLexiconEntry* find(std::string_view word) const;

    const std::vector<PosLexiconEntry>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }

private:
    void reindex();

    std::vector<PosLexiconEntry> entries_;
    std::unordered_map<std::string, size_t> index_;
};

}  // namespace tts
