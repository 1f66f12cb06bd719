#include "tts/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "tts/common.hpp"
#include "tts/phoneset.hpp"

namespace tts {

namespace {

void check_symbol(const std::string& sym, size_t line_no) {
    auto [base, digit] = split_stress(sym);
    bool ok = is_arpabet(base) && digit <= 2;
    if (ok && digit >= 0) {
        auto decomposed = decompose_diphthongs({base});
        auto p = parse_phone(split_stress(decomposed.front()).first);
        ok = p && is_vowel(*p);
    }
    if (!ok)
        throw DataError("line " + std::to_string(line_no) + ": bad phone symbol '" + sym + "'");
}

// "READ(1)" -> ("READ", "1"); a trailing "(" without a closing digit run is
// kept as part of the word.
std::pair<std::string, std::string> split_variant(const std::string& token) {
    if (token.size() >= 3 && token.back() == ')') {
        auto open = token.rfind('(');
        if (open != std::string::npos && open > 0 && open + 2 < token.size()) {
            std::string digits = token.substr(open + 1, token.size() - open - 2);
            if (std::all_of(digits.begin(), digits.end(),
                            [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
                return {token.substr(0, open), digits};
        }
    }
    return {token, ""};
}

}  // namespace

PronunciationLexicon PronunciationLexicon::load_cmudict(std::istream& in) {
    PronunciationLexicon lex;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto view = trim(line);
        if (view.empty() || view.starts_with(";;;") || view.starts_with("#")) continue;
        std::string body(view);
        if (auto hash = body.find(" #"); hash != std::string::npos) body.resize(hash);
        auto fields = split_ws(body);
        if (fields.size() < 2)
            throw DataError("line " + std::to_string(line_no) + ": record without phones");
        auto [word, label] = split_variant(fields[0]);
        Pronunciation pron(fields.begin() + 1, fields.end());
        for (const auto& s : pron) check_symbol(s, line_no);

        std::string key = to_upper(word);
        auto& entry = lex.entries_[key];
        if (entry.headword.empty()) entry.headword = key;
        if (std::find(entry.variant_labels.begin(), entry.variant_labels.end(), label) !=
            entry.variant_labels.end())
            throw DataError("line " + std::to_string(line_no) + ": duplicate entry " + fields[0]);
        entry.pronunciations.push_back(std::move(pron));
        entry.variant_labels.push_back(label);
    }
    return lex;
}

PronunciationLexicon PronunciationLexicon::load_cmudict_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon " + path);
    return load_cmudict(in);
}

void PronunciationLexicon::load_homographs(std::istream& in) {
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        auto f = split(view, '\t');
        std::string where = "homographs line " + std::to_string(line_no);
        if (f.size() != 3 || f[1].size() != 1) throw DataError(where + ": expected word, tag, variant");
        auto tag = tag_from_code(f[1][0]);
        if (!tag) throw DataError(where + ": unknown tag '" + f[1] + "'");
        auto it = entries_.find(to_upper(f[0]));
        if (it == entries_.end()) throw DataError(where + ": word not in lexicon: " + f[0]);
        size_t variant = 0;
        try {
            variant = std::stoul(f[2]);
        } catch (const std::exception&) {
            throw DataError(where + ": bad variant index");
        }
        if (variant >= it->second.pronunciations.size())
            throw DataError(where + ": variant out of range for " + f[0]);
        it->second.homograph_selector[*tag] = variant;
    }
}

void PronunciationLexicon::add(std::string_view word, Pronunciation pron) {
    std::string key = to_upper(word);
    auto& entry = entries_[key];
    if (entry.headword.empty()) entry.headword = key;
    entry.variant_labels.push_back(entry.pronunciations.empty()
                                       ? ""
                                       : std::to_string(entry.pronunciations.size()));
    entry.pronunciations.push_back(std::move(pron));
}

const LexiconEntry* PronunciationLexicon::find(std::string_view word) const {
    auto it = entries_.find(to_upper(word));
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<Pronunciation> PronunciationLexicon::lookup(std::string_view word,
                                                          std::optional<Tag> pos) const {
    const auto* e = find(word);
    if (!e) return std::nullopt;
    if (pos) {
        auto sel = e->homograph_selector.find(*pos);
        if (sel != e->homograph_selector.end()) return e->pronunciations[sel->second];
    }
    return e->pronunciations.front();
}

std::string PronunciationLexicon::serialize() const {
    std::string out;
    for (const auto& [key, e] : entries_) {
        for (size_t i = 0; i < e.pronunciations.size(); ++i) {
            out += key;
            if (i) out += "(" + std::to_string(i) + ")";
            out += "  ";
            out += join(e.pronunciations[i], " ");
            out += '\n';
        }
    }
    return out;
}

PosLexicon PosLexicon::load_mpos(std::istream& in) {
    PosLexicon lex;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        size_t pos = line.find("\xC3\x97");
        size_t width = 2;
        if (pos == std::string::npos) {
            pos = line.find('\xD7');
            width = 1;
        }
        if (pos == std::string::npos || pos == 0)
            throw DataError("mpos line " + std::to_string(line_no) + ": missing separator");
        lex.entries_.push_back({line.substr(0, pos), std::string(trim(line.substr(pos + width)))});
    }
    lex.reindex();
    return lex;
}

PosLexicon PosLexicon::load_mpos_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open part-of-speech lexicon " + path);
    return load_mpos(in);
}

void PosLexicon::add(std::string headword, std::string codes) {
    entries_.push_back({std::move(headword), std::move(codes)});
    index_.emplace(to_upper(entries_.back().headword), entries_.size() - 1);
}

size_t PosLexicon::dedup_case_variants() {
    std::map<std::string, std::vector<size_t>> groups;
    for (size_t i = 0; i < entries_.size(); ++i) groups[to_lower(entries_[i].headword)].push_back(i);

    std::vector<bool> keep(entries_.size(), true);
    size_t removed = 0;
    for (auto& [lower, members] : groups) {
        if (members.size() < 2) continue;
        size_t kept = members.front();
        for (size_t m : members)
            if (entries_[m].headword == lower) {
                kept = m;
                break;
            }
        std::string codes = entries_[kept].codes;
        for (size_t m : members) {
            if (m == kept) continue;
            for (char c : entries_[m].codes)
                if (codes.find(c) == std::string::npos) codes += c;
            keep[m] = false;
            ++removed;
        }
        entries_[kept].codes = codes;
    }
    std::vector<PosLexiconEntry> out;
    out.reserve(entries_.size() - removed);
    for (size_t i = 0; i < entries_.size(); ++i)
        if (keep[i]) out.push_back(std::move(entries_[i]));
    entries_ = std::move(out);
    reindex();
    return removed;
}

const PosLexiconEntry* PosLexicon::find(std::string_view word) const {
    auto it = index_.find(to_upper(word));
    return it == index_.end() ? nullptr : &entries_[it->second];
}

void PosLexicon::reindex() {
    index_.clear();
    for (size_t i = 0; i < entries_.size(); ++i) index_.emplace(to_upper(entries_[i].headword), i);
}

}  // namespace tts
