#include "tts/phoneset.hpp"

#include <algorithm>
#include <cctype>

#include "tts/common.hpp"

namespace tts {

namespace {

constexpr std::array<std::string_view, kPhoneCount> kSymbols = {
    "AA", "AE", "AH", "AO", "B",  "CH", "D",  "DH", "EH",   "ER",   "F",    "G",   "HH",
    "IH", "IY", "JH", "K",  "L",  "M",  "N",  "NG", "P",    "R",    "S",    "SH",  "T",
    "TH", "UH", "UW", "V",  "W",  "Y",  "Z",  "ZH", "IPAA", "IPAE", "IPAO", "X"};

struct Replacement {
    std::string_view diphthong, first, second;
};

constexpr std::array<Replacement, 5> kDiphthongs = {{
    {"EY", "IPAE", "IH"},
    {"AY", "IPAA", "IH"},
    {"OW", "IPAO", "UH"},
    {"AW", "IPAA", "UH"},
    {"OY", "AO", "IH"},
}};

int index_of(Phone p) { return static_cast<int>(p); }

}  // namespace

std::string_view symbol(Phone p) { return kSymbols[static_cast<size_t>(index_of(p))]; }

std::optional<Phone> parse_phone(std::string_view sym) {
    for (int i = 0; i < kPhoneCount; ++i)
        if (kSymbols[static_cast<size_t>(i)] == sym) return static_cast<Phone>(i);
    return std::nullopt;
}

const std::array<Phone, kPhoneCount>& all_phones() {
    static const auto table = [] {
        std::array<Phone, kPhoneCount> a{};
        for (int i = 0; i < kPhoneCount; ++i) a[static_cast<size_t>(i)] = static_cast<Phone>(i);
        return a;
    }();
    return table;
}

Category category(Phone p) {
    switch (p) {
        case Phone::P: case Phone::B: case Phone::T: case Phone::D:
        case Phone::K: case Phone::G: case Phone::CH: case Phone::JH:
            return Category::Stop;
        case Phone::F: case Phone::V: case Phone::TH: case Phone::DH: case Phone::S:
        case Phone::Z: case Phone::SH: case Phone::ZH: case Phone::HH:
            return Category::Obstruent;
        case Phone::X:
            return Category::Silence;
        default:
            return Category::Sonorant;
    }
}

std::string_view category_name(Category c) {
    switch (c) {
        case Category::Sonorant: return "sonorant";
        case Category::Obstruent: return "obstruent";
        case Category::Stop: return "stop";
        case Category::Silence: return "silence";
    }
    return "?";
}

bool is_vowel(Phone p) {
    switch (p) {
        case Phone::AA: case Phone::AE: case Phone::AH: case Phone::AO: case Phone::EH:
        case Phone::ER: case Phone::IH: case Phone::IY: case Phone::UH: case Phone::UW:
        case Phone::IPAA: case Phone::IPAE: case Phone::IPAO:
            return true;
        default:
            return false;
    }
}

bool is_persistent(Phone p) {
    auto c = category(p);
    return c == Category::Sonorant || c == Category::Obstruent;
}

bool is_voiced(Phone p) { return category(p) == Category::Sonorant; }

const std::vector<std::string>& arpabet_symbols() {
    static const std::vector<std::string> syms = {
        "AA", "AE", "AH", "AO", "AW", "AY", "B",  "CH", "D", "DH", "EH", "ER", "EY",
        "F",  "G",  "HH", "IH", "IY", "JH", "K",  "L",  "M", "N",  "NG", "OW", "OY",
        "P",  "R",  "S",  "SH", "T",  "TH", "UH", "UW", "V", "W",  "Y",  "Z",  "ZH"};
    return syms;
}

bool is_arpabet(std::string_view sym) {
    const auto& s = arpabet_symbols();
    return std::find(s.begin(), s.end(), sym) != s.end();
}

bool is_diphthong(std::string_view base) {
    return std::any_of(kDiphthongs.begin(), kDiphthongs.end(),
                       [&](const Replacement& r) { return r.diphthong == base; });
}

std::pair<std::string, int> split_stress(std::string_view sym) {
    if (!sym.empty() && std::isdigit(static_cast<unsigned char>(sym.back())))
        return {std::string(sym.substr(0, sym.size() - 1)), sym.back() - '0'};
    return {std::string(sym), -1};
}

std::vector<std::string> decompose_diphthongs(const std::vector<std::string>& seq) {
    std::vector<std::string> out;
    out.reserve(seq.size() + 2);
    for (const auto& raw : seq) {
        auto [base, digit] = split_stress(raw);
        if (digit > 2) throw DataError("unknown phone symbol '" + raw + "'");
        auto it = std::find_if(kDiphthongs.begin(), kDiphthongs.end(),
                               [&](const Replacement& r) { return r.diphthong == base; });
        if (it != kDiphthongs.end()) {
            std::string tail = digit >= 0 ? std::to_string(digit) : "";
            out.push_back(std::string(it->first) + tail);
            out.push_back(std::string(it->second) + (digit >= 0 ? "0" : ""));
            continue;
        }
        auto p = parse_phone(base);
        if (!p) throw DataError("unknown phone symbol '" + raw + "'");
        if (digit >= 0 && !is_vowel(*p))
            throw DataError("stress digit on non-vowel '" + raw + "'");
        out.push_back(raw);
    }
    return out;
}

std::vector<StressedPhone> to_phones(const std::vector<std::string>& arpabet) {
    std::vector<StressedPhone> out;
    for (const auto& s : decompose_diphthongs(arpabet)) {
        auto [base, digit] = split_stress(s);
        Phone p = *parse_phone(base);
        Stress st = Stress::NotApplicable;
        if (is_vowel(p)) st = digit < 0 ? Stress::Unstressed : static_cast<Stress>(digit);
        out.push_back({p, st});
    }
    return out;
}

std::string format_phone(const StressedPhone& p) {
    std::string s(symbol(p.phone));
    if (p.stress != Stress::NotApplicable) s += static_cast<char>('0' + static_cast<int>(p.stress));
    return s;
}

std::vector<Phone> monophones() {
    std::vector<Phone> out;
    for (Phone p : all_phones())
        if (p != Phone::X) out.push_back(p);
    return out;
}

namespace {

bool is_nasal(Phone p) { return p == Phone::M || p == Phone::N || p == Phone::NG; }

bool is_synthetic(Phone p) { return p == Phone::IPAA || p == Phone::IPAE || p == Phone::IPAO; }

bool synthetic_successor_ok(Phone first, Phone second) {
    switch (first) {
        case Phone::IPAE: return second == Phone::IH;
        case Phone::IPAA: return second == Phone::IH || second == Phone::UH;
        case Phone::IPAO: return second == Phone::UH;
        default: return true;
    }
}

}  // namespace

std::set<Diphone> required_transition_diphones() {
    std::set<Diphone> out;
    for (Phone a : monophones()) {
        for (Phone b : monophones()) {
            if (a == b) continue;
            if (category(b) == Category::Stop) continue;
            if (is_nasal(a) && is_nasal(b)) continue;
            if (!synthetic_successor_ok(a, b)) continue;
            out.insert({a, b});
        }
    }
    return out;
}

std::set<Diphone> required_diphone_set() {
    auto out = required_transition_diphones();
    for (Phone p : monophones()) {
        if (!is_persistent(p)) continue;
        out.insert({Phone::X, p});
        if (!is_synthetic(p)) out.insert({p, Phone::X});
    }
    return out;
}

std::string inventory_table() {
    std::string s;
    for (Phone p : all_phones()) {
        s += symbol(p);
        s += '\t';
        s += category_name(category(p));
        s += '\n';
    }
    return s;
}

}  // namespace tts
