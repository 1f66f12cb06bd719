#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tts {

enum class TokenKind { Word, Number, Punct, Mixed };

struct Token {
    std::string text;
    TokenKind kind = TokenKind::Word;
    int sentence_index = 0;
    int word_index = -1;  // position among the sentence's non-punctuation tokens
};

std::string_view kind_name(TokenKind k);

// Splits on whitespace and peels punctuation off token edges. Each peeled
// mark becomes its own token, except runs of dots, which stay together.
std::vector<Token> tokenize(std::string_view input);

// True for ".", "?", "!" and ellipses (ASCII or U+2026).
bool is_sentence_terminator(std::string_view punct);

// Word list for a numeric token: a single value is read out in British style
// ("one thousand and twenty-four"); anything else digit by digit with "."
// read as "point" and "," as "comma".
std::vector<std::string> number_to_words(std::string_view token);
std::string number_to_text(std::string_view token);

enum class ChunkKind { Alpha, Numeric, Symbol, Punct };

struct Chunk {
    std::string text;
    ChunkKind kind;
};

// Maximal alphabetic / numeric / other runs of a mixed token. Symbols with a
// spoken form (see symbol_word) become Symbol chunks; other marks are Punct.
std::vector<Chunk> split_mixed(std::string_view token);

// Spoken word for &, +, %, @, =; empty otherwise.
std::string_view symbol_word(char c);

// Replaces typographic apostrophes with ASCII ones.
std::string normalize_apostrophes(std::string_view s);

}  // namespace tts
