#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tts {

// Reduced lexical classes. The enumerator value is the one-letter code used
// in data files and on the wire.
enum class Tag : char {
    Noun = 'N',
    Plural = 'p',
    NounPhrase = 'h',
    Verb = 'V',
    Adjective = 'A',
    Adverb = 'v',
    Conjunction = 'C',
    Preposition = 'P',
    Interjection = '!',
    Pronoun = 'r',
    Article = 'D',
    Unknown = '?',
};

inline constexpr int kModelTagCount = 10;  // tags a trigram can contain

inline char tag_code(Tag t) { return static_cast<char>(t); }
std::optional<Tag> tag_from_code(char c);
std::string tag_string(const std::vector<Tag>& tags);
// Dense index 0..9 over the model tags (N p V A v C P ! r D); -1 otherwise.
int model_index(Tag t);
Tag model_tag(int index);

}  // namespace tts
