#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tts {

// Synthesis inventory: CMUdict Arpabet without the five diphthongs, the three
// synthetic monophthongs standing in for diphthong onsets, and silence X.
enum class Phone : unsigned char {
    AA, AE, AH, AO, B, CH, D, DH, EH, ER, F, G, HH, IH, IY, JH, K, L, M, N, NG,
    P, R, S, SH, T, TH, UH, UW, V, W, Y, Z, ZH, IPAA, IPAE, IPAO, X
};

inline constexpr int kPhoneCount = 38;

enum class Category { Sonorant, Obstruent, Stop, Silence };

enum class Stress : signed char { Unstressed = 0, Primary = 1, Secondary = 2, NotApplicable = -1 };

struct StressedPhone {
    Phone phone;
    Stress stress = Stress::NotApplicable;
    bool operator==(const StressedPhone&) const = default;
};

using Diphone = std::pair<Phone, Phone>;

std::string_view symbol(Phone p);
std::optional<Phone> parse_phone(std::string_view sym);
const std::array<Phone, kPhoneCount>& all_phones();

Category category(Phone p);
std::string_view category_name(Category c);
bool is_vowel(Phone p);
// Sonorant or obstruent: can be sustained and so has a recorded persistence.
bool is_persistent(Phone p);
bool is_voiced(Phone p);

// The 39 CMUdict symbols, diphthongs included.
const std::vector<std::string>& arpabet_symbols();
bool is_arpabet(std::string_view sym);
bool is_diphthong(std::string_view base);

// Splits "EH1" into ("EH", 1); no digit gives -1.
std::pair<std::string, int> split_stress(std::string_view sym);

// Replaces diphthongs by monophthong pairs. Accepts Arpabet and inventory
// symbols (so the operation is idempotent); the stress digit stays on the
// first vowel and the second gets 0. Throws DataError naming an unknown symbol.
std::vector<std::string> decompose_diphthongs(const std::vector<std::string>& seq);

// Decomposes then parses into the inventory.
std::vector<StressedPhone> to_phones(const std::vector<std::string>& arpabet);

std::string format_phone(const StressedPhone& p);

// Monophones to record (every phone except X).
std::vector<Phone> monophones();

// Every diphone a complete bank must contain, including the silence entry
// (X,p) and silence exit (p,X) clips of persistent phones.
std::set<Diphone> required_diphone_set();
// The subset not touching silence.
std::set<Diphone> required_transition_diphones();

// Tab-separated symbol/category listing stored in bank manifests.
std::string inventory_table();

}  // namespace tts
