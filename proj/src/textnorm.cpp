#include "tts/textnorm.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "tts/common.hpp"

namespace tts {

namespace {

// One "character" of input: an ASCII byte or a whole UTF-8 sequence.
struct Glyph {
    std::string_view bytes;
};

std::vector<Glyph> glyphs(std::string_view s) {
    std::vector<Glyph> out;
    size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        size_t len = 1;
        if (c >= 0xF0) len = 4;
        else if (c >= 0xE0) len = 3;
        else if (c >= 0xC0) len = 2;
        len = std::min(len, s.size() - i);
        out.push_back({s.substr(i, len)});
        i += len;
    }
    return out;
}

bool is_unicode_punct(std::string_view g) {
    static const std::array<std::string_view, 9> marks = {
        "\xE2\x80\x98", "\xE2\x80\x99", "\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\xA6",
        "\xE2\x80\x93", "\xE2\x80\x94", "\xC2\xAB",     "\xC2\xBB"};
    for (auto m : marks)
        if (g == m) return true;
    return false;
}

bool is_apostrophe(std::string_view g) { return g == "'" || g == "\xE2\x80\x99"; }

// Letters, digits, speakable symbols and non-punctuation non-ASCII count as
// token body; everything else at a token edge is peeled.
bool is_body(std::string_view g) {
    if (g.size() > 1) return !is_unicode_punct(g);
    char c = g[0];
    if (std::isalnum(static_cast<unsigned char>(c))) return true;
    return !symbol_word(c).empty();
}

TokenKind classify_body(std::string_view text) {
    bool letter = false, digit = false, other = false;
    auto gs = glyphs(text);
    for (size_t i = 0; i < gs.size(); ++i) {
        auto g = gs[i].bytes;
        if (g.size() == 1 && std::isalpha(static_cast<unsigned char>(g[0]))) letter = true;
        else if (g.size() == 1 && std::isdigit(static_cast<unsigned char>(g[0]))) digit = true;
        else if (is_apostrophe(g)) continue;
        else other = true;
    }
    if (letter && !digit && !other) return TokenKind::Word;
    if (digit && !letter) {
        // digits with interior '.' or ',' only
        bool ok = std::isdigit(static_cast<unsigned char>(text.front())) &&
                  std::isdigit(static_cast<unsigned char>(text.back()));
        for (char c : text)
            if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.' && c != ',') ok = false;
        if (ok) return TokenKind::Number;
    }
    return TokenKind::Mixed;
}

}  // namespace

std::string_view kind_name(TokenKind k) {
    switch (k) {
        case TokenKind::Word: return "word";
        case TokenKind::Number: return "number";
        case TokenKind::Punct: return "punct";
        case TokenKind::Mixed: return "mixed";
    }
    return "?";
}

std::string_view symbol_word(char c) {
    switch (c) {
        case '&': return "and";
        case '+': return "plus";
        case '%': return "percent";
        case '@': return "at";
        case '=': return "equals";
        default: return {};
    }
}

bool is_sentence_terminator(std::string_view p) {
    if (p == "?" || p == "!" || p == "\xE2\x80\xA6") return true;
    return !p.empty() && p.find_first_not_of('.') == std::string_view::npos;
}

std::string normalize_apostrophes(std::string_view s) {
    std::string out;
    for (auto g : glyphs(s)) out += g.bytes == "\xE2\x80\x99" ? std::string_view("'") : g.bytes;
    return out;
}

std::vector<Token> tokenize(std::string_view input) {
    std::vector<Token> out;
    auto push_punct = [&](const std::vector<Glyph>& gs, size_t b, size_t e) {
        size_t i = b;
        while (i < e) {
            size_t j = i + 1;
            if (gs[i].bytes == ".")
                while (j < e && gs[j].bytes == ".") ++j;
            std::string text;
            for (size_t k = i; k < j; ++k) text += gs[k].bytes;
            out.push_back({text, TokenKind::Punct});
            i = j;
        }
    };
    for (const auto& chunk : split_ws(input)) {
        auto gs = glyphs(chunk);
        size_t b = 0, e = gs.size();
        while (b < e && !is_body(gs[b].bytes)) ++b;
        if (b == e) {
            // nothing speakable: the whole chunk is punctuation
            push_punct(gs, 0, gs.size());
            continue;
        }
        while (e > b && !is_body(gs[e - 1].bytes)) --e;
        push_punct(gs, 0, b);
        std::string body;
        for (size_t k = b; k < e; ++k) body += gs[k].bytes;
        out.push_back({body, classify_body(body)});
        push_punct(gs, e, gs.size());
    }
    int sentence = 0, word = 0;
    for (auto& t : out) {
        t.sentence_index = sentence;
        if (t.kind == TokenKind::Punct) {
            if (is_sentence_terminator(t.text)) {
                ++sentence;
                word = 0;
            }
        } else {
            t.word_index = word++;
        }
    }
    return out;
}

namespace {

const std::array<std::string_view, 20> kUnits = {
    "zero",    "one",     "two",       "three",    "four",     "five",    "six",
    "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
    "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen"};
const std::array<std::string_view, 10> kTens = {"",      "",      "twenty",  "thirty", "forty",
                                                "fifty", "sixty", "seventy", "eighty", "ninety"};
const std::array<std::string_view, 7> kScales = {"",        "thousand",    "million",    "billion",
                                                 "trillion", "quadrillion", "quintillion"};

std::string below_hundred(int n) {
    if (n < 20) return std::string(kUnits[static_cast<size_t>(n)]);
    std::string s(kTens[static_cast<size_t>(n / 10)]);
    if (n % 10) s += "-" + std::string(kUnits[static_cast<size_t>(n % 10)]);
    return s;
}

void group_words(int n, bool lead_and, std::vector<std::string>& out) {
    int h = n / 100, r = n % 100;
    if (h) {
        out.emplace_back(kUnits[static_cast<size_t>(h)]);
        out.emplace_back("hundred");
    }
    if (r) {
        if (h || lead_and) out.emplace_back("and");
        out.push_back(below_hundred(r));
    }
}

void digits_words(std::string_view s, std::vector<std::string>& out) {
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c))) out.emplace_back(kUnits[static_cast<size_t>(c - '0')]);
        else if (c == '.') out.emplace_back("point");
        else if (c == ',') out.emplace_back("comma");
    }
}

// Integer digits (no separators) to words; false if too large.
bool integer_words(std::string_view digits, std::vector<std::string>& out) {
    size_t first = digits.find_first_not_of('0');
    if (first == std::string_view::npos) {
        out.emplace_back("zero");
        return true;
    }
    digits = digits.substr(first);
    size_t groups = (digits.size() + 2) / 3;
    if (groups > kScales.size()) return false;
    std::vector<int> g(groups);
    size_t head = digits.size() - 3 * (groups - 1);
    for (size_t i = 0; i < groups; ++i) {
        size_t start = i == 0 ? 0 : head + 3 * (i - 1);
        size_t len = i == 0 ? head : 3;
        g[i] = std::stoi(std::string(digits.substr(start, len)));
    }
    for (size_t i = 0; i < groups; ++i) {
        if (g[i] == 0) continue;
        bool last = i + 1 == groups;
        group_words(g[i], last && groups > 1 && g[i] < 100, out);
        if (!last) out.emplace_back(kScales[groups - 1 - i]);
    }
    return true;
}

bool valid_grouping(std::string_view integer) {
    if (integer.find(',') == std::string_view::npos) return true;
    auto parts = split(integer, ',');
    if (parts.front().empty() || parts.front().size() > 3) return false;
    for (size_t i = 1; i < parts.size(); ++i)
        if (parts[i].size() != 3) return false;
    return true;
}

}  // namespace

std::vector<std::string> number_to_words(std::string_view token) {
    std::vector<std::string> out;
    size_t dots = std::count(token.begin(), token.end(), '.');
    std::string_view integer = token.substr(0, token.find('.'));
    std::string_view fraction = dots == 1 ? token.substr(token.find('.') + 1) : std::string_view{};
    bool single_value = dots <= 1 && !integer.empty() && valid_grouping(integer) &&
                        fraction.find(',') == std::string_view::npos &&
                        !(integer.size() > 1 && integer.front() == '0');
    if (single_value) {
        std::string plain;
        for (char c : integer)
            if (c != ',') plain += c;
        if (integer_words(plain, out)) {
            if (dots == 1) {
                out.emplace_back("point");
                digits_words(fraction, out);
            }
            return out;
        }
        out.clear();
    }
    digits_words(token, out);
    return out;
}

std::string number_to_text(std::string_view token) { return join(number_to_words(token), " "); }

std::vector<Chunk> split_mixed(std::string_view token) {
    std::vector<Chunk> out;
    auto gs = glyphs(token);
    size_t i = 0;
    while (i < gs.size()) {
        auto g = gs[i].bytes;
        char c = g.size() == 1 ? g[0] : '\0';
        if (c && std::isalpha(static_cast<unsigned char>(c))) {
            std::string run;
            while (i < gs.size() && gs[i].bytes.size() == 1 &&
                   (std::isalpha(static_cast<unsigned char>(gs[i].bytes[0])) ||
                    (is_apostrophe(gs[i].bytes) && i + 1 < gs.size() && gs[i + 1].bytes.size() == 1 &&
                     std::isalpha(static_cast<unsigned char>(gs[i + 1].bytes[0])))))
                run += gs[i++].bytes;
            out.push_back({run, ChunkKind::Alpha});
        } else if (c && std::isdigit(static_cast<unsigned char>(c))) {
            std::string run;
            while (i < gs.size() && gs[i].bytes.size() == 1) {
                char d = gs[i].bytes[0];
                bool sep = (d == '.' || d == ',') && i + 1 < gs.size() && gs[i + 1].bytes.size() == 1 &&
                           std::isdigit(static_cast<unsigned char>(gs[i + 1].bytes[0]));
                if (!std::isdigit(static_cast<unsigned char>(d)) && !sep) break;
                run += d;
                ++i;
            }
            out.push_back({run, ChunkKind::Numeric});
        } else if (c && !symbol_word(c).empty()) {
            out.push_back({std::string(1, c), ChunkKind::Symbol});
            ++i;
        } else {
            std::string run;
            while (i < gs.size()) {
                auto h = gs[i].bytes;
                char d = h.size() == 1 ? h[0] : '\0';
                if (d && (std::isalnum(static_cast<unsigned char>(d)) || !symbol_word(d).empty())) break;
                run += h;
                ++i;
            }
            out.push_back({run, ChunkKind::Punct});
        }
    }
    return out;
}

}  // namespace tts
