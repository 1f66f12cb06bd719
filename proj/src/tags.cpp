#include "tts/tags.hpp"

#include <array>

namespace tts {

namespace {
constexpr std::array<Tag, kModelTagCount> kModelTags = {
    Tag::Noun,        Tag::Plural,      Tag::Verb,         Tag::Adjective, Tag::Adverb,
    Tag::Conjunction, Tag::Preposition, Tag::Interjection, Tag::Pronoun,   Tag::Article};
}

std::optional<Tag> tag_from_code(char c) {
    switch (c) {
        case 'N': case 'p': case 'h': case 'V': case 'A': case 'v':
        case 'C': case 'P': case '!': case 'r': case 'D': case '?':
            return static_cast<Tag>(c);
        default:
            return std::nullopt;
    }
}

std::string tag_string(const std::vector<Tag>& tags) {
    std::string s;
    for (Tag t : tags) s += tag_code(t);
    return s;
}

int model_index(Tag t) {
    for (int i = 0; i < kModelTagCount; ++i)
        if (kModelTags[static_cast<size_t>(i)] == t) return i;
    return -1;
}

Tag model_tag(int index) { return kModelTags.at(static_cast<size_t>(index)); }

}  // namespace tts
