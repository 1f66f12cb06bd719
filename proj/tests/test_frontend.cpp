#include <doctest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "tts/common.hpp"
#include "tts/lexicon.hpp"
#include "tts/phoneset.hpp"
#include "tts/textnorm.hpp"
#include "tts/wav.hpp"

using namespace tts;

namespace {

using Strs = std::vector<std::string>;

PronunciationLexicon lex_of(const std::string& text) {
    std::istringstream in(text);
    return PronunciationLexicon::load_cmudict(in);
}

std::string le(std::uint32_t v, int bytes) {
    std::string s;
    for (int i = 0; i < bytes; ++i) s += static_cast<char>((v >> (8 * i)) & 0xff);
    return s;
}

// Hand-assembled RIFF header around raw sample bytes.
std::string wav_bytes(int format, int channels, int bits, const std::string& data) {
    int block = channels * bits / 8;
    std::string fmt = le(format, 2) + le(channels, 2) + le(48000, 4) + le(48000 * block, 4) + le(block, 2) + le(bits, 2);
    std::string body = "WAVE" + std::string("fmt ") + le(16, 4) + fmt + "data" + le(data.size(), 4) + data;
    return "RIFF" + le(body.size(), 4) + body;
}

}  // namespace

TEST_CASE("phone categories partition the inventory") {
    CHECK(category(Phone::M) == Category::Sonorant);
    CHECK(category(Phone::S) == Category::Obstruent);
    CHECK(category(Phone::CH) == Category::Stop);
    CHECK(category(Phone::X) == Category::Silence);
    int counts[4] = {};
    for (Phone p : all_phones()) ++counts[static_cast<int>(category(p))];
    CHECK(counts[static_cast<int>(Category::Stop)] == 8);
    CHECK(counts[static_cast<int>(Category::Obstruent)] == 9);
    CHECK(counts[static_cast<int>(Category::Silence)] == 1);
    CHECK(counts[0] + counts[1] + counts[2] + counts[3] == kPhoneCount);
    for (Phone p : all_phones()) CHECK(parse_phone(symbol(p)) == p);
    for (const char* d : {"AW", "AY", "EY", "OW", "OY"}) CHECK_FALSE(parse_phone(d).has_value());
}

TEST_CASE("diphthong decomposition") {
    CHECK(decompose_diphthongs({"EY1", "T"}) == Strs{"IPAE1", "IH0", "T"});
    CHECK(decompose_diphthongs({"K", "IY1"}) == Strs{"K", "IY1"});
    CHECK(decompose_diphthongs({"T", "OY1"}) == Strs{"T", "AO1", "IH0"});
    CHECK(decompose_diphthongs({"AY2"}) == Strs{"IPAA2", "IH0"});
    CHECK(decompose_diphthongs({"OW0", "AW1"}) == Strs{"IPAO0", "UH0", "IPAA1", "UH0"});
    CHECK_THROWS_AS(decompose_diphthongs({"QQ1"}), DataError);

    auto phones = to_phones({"EY1", "T"});
    REQUIRE(phones.size() == 3);
    CHECK(phones[0] == StressedPhone{Phone::IPAE, Stress::Primary});
    CHECK(phones[2] == StressedPhone{Phone::T, Stress::NotApplicable});
}

TEST_CASE("decomposition is idempotent on random sequences") {
    std::mt19937_64 rng(11);
    const auto& syms = arpabet_symbols();
    for (int trial = 0; trial < 500; ++trial) {
        Strs seq;
        int n = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) {
            std::string s = syms[rng() % syms.size()];
            if (is_diphthong(s) || is_vowel(*parse_phone(s == "ER" ? "ER" : s))) s += std::to_string(rng() % 3);
            seq.push_back(s);
        }
        auto once = decompose_diphthongs(seq);
        CHECK(decompose_diphthongs(once) == once);
        for (const auto& s : once) CHECK_FALSE(is_diphthong(split_stress(s).first));
    }
}

TEST_CASE("required diphone set") {
    auto req = required_diphone_set();
    CHECK(monophones().size() == 37);
    CHECK(req.size() == 1013);
    CHECK(req.contains({Phone::L, Phone::N}));
    CHECK_FALSE(req.contains({Phone::M, Phone::NG}));
    CHECK_FALSE(req.contains({Phone::N, Phone::M}));
    CHECK(req.contains({Phone::IPAE, Phone::IH}));
    CHECK_FALSE(req.contains({Phone::IPAE, Phone::UH}));
    CHECK_FALSE(req.contains({Phone::IPAO, Phone::IH}));
    CHECK(req.contains({Phone::X, Phone::S}));
    CHECK(req.contains({Phone::S, Phone::X}));
    for (const auto& [a, b] : req) {
        CHECK(category(b) != Category::Stop);
        CHECK_FALSE((a == Phone::X && b == Phone::X));
    }
}

TEST_CASE("CMUdict loading and homograph lookup") {
    auto lex = lex_of(";;; comment\nKEGS  K EH1 G Z\nREAD  R EH1 D\nREAD(1)  R IY1 D\n");
    REQUIRE(lex.find("kegs"));
    CHECK(lex.find("KEGS")->pronunciations.size() == 1);
    CHECK(lex.find("read")->pronunciations.size() == 2);
    CHECK(lex_of("").size() == 0);
    CHECK_FALSE(lex.lookup("zzzzqx").has_value());

    auto full = PronunciationLexicon::load_cmudict_file(default_data_dir() + "/cmudict.dict");
    std::istringstream hom(read_file(default_data_dir() + "/homographs.tsv"));
    full.load_homographs(hom);
    CHECK(join(*full.lookup("project", Tag::Noun), " ") == "P R AA1 JH EH0 K T");
    CHECK(join(*full.lookup("project", Tag::Verb), " ") == "P R AH0 JH EH1 K T");
    CHECK(*full.lookup("project") == full.find("project")->pronunciations[0]);
}

TEST_CASE("lexicon serialize round trip") {
    auto lex = lex_of("KEGS  K EH1 G Z\nREAD  R EH1 D\nREAD(1)  R IY1 D\nA  AH0\nA(1)  EY1\n");
    auto again = lex_of(lex.serialize());
    CHECK(again.size() == lex.size());
    for (const auto& [w, e] : lex.entries()) CHECK(again.find(w)->pronunciations == e.pronunciations);
}

TEST_CASE("MPOS loading and case merging") {
    std::istringstream in("keg\xc3\x97N\nread\xd7VtNiA\nzip\xc3\x97Nit\nYen\xc3\x97N\nyen\xc3\x97N\nRing\xc3\x97N\nring\xc3\x97NVt\n"
                          "Wobbly\xc3\x97N\nwobbly\xc3\x97" "A\n");
    auto pos = PosLexicon::load_mpos(in);
    CHECK(pos.find("keg")->codes == "N");
    CHECK(pos.find("READ")->codes == "VtNiA");
    CHECK(pos.find("zip")->codes == "Nit");
    CHECK(pos.dedup_case_variants() == 3);
    CHECK(pos.find("yen")->codes == "N");
    CHECK(pos.find("ring")->codes == "NVt");
    auto w = pos.find("wobbly")->codes;
    CHECK((w == "AN" || w == "NA"));
}

TEST_CASE("tokenize") {
    auto texts = [](std::string_view s) {
        Strs out;
        for (const auto& t : tokenize(s)) out.push_back(t.text);
        return out;
    };
    CHECK(texts("Hello, everyone!") == Strs{"Hello", ",", "everyone", "!"});
    CHECK(texts("I'm going") == Strs{"I'm", "going"});
    auto num = tokenize("410,757,864,530");
    REQUIRE(num.size() == 1);
    CHECK(num[0].kind == TokenKind::Number);
    CHECK(texts("Wait... what?") == Strs{"Wait", "...", "what", "?"});
    CHECK(tokenize("R2-D2")[0].kind == TokenKind::Mixed);
    auto two = tokenize("One. Two!");
    CHECK(two.back().sentence_index == 1);
}

TEST_CASE("tokenization conserves characters") {
    std::mt19937_64 rng(5);
    const std::string alphabet = "abcXYZ019 ,.!?'-&()";
    for (int trial = 0; trial < 300; ++trial) {
        std::string s;
        for (int i = 0, n = static_cast<int>(rng() % 30); i < n; ++i) s += alphabet[rng() % alphabet.size()];
        std::size_t kept = 0;
        for (const auto& t : tokenize(s)) kept += t.text.size();
        std::size_t expected = 0;
        for (char c : s) expected += c != ' ';
        CHECK(kept == expected);
    }
}

TEST_CASE("number reading") {
    CHECK(number_to_text("1024") == "one thousand and twenty-four");
    CHECK(number_to_text("127.0.0.1") == "one two seven point zero point zero point one");
    CHECK(number_to_text("0") == "zero");
    CHECK(number_to_text("10") == "ten");
    CHECK(number_to_text("100") == "one hundred");
    CHECK(number_to_text("007") == "zero zero seven");
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        auto text = number_to_text(std::to_string(rng() % 1000000000000ULL));
        CHECK(text.find_first_of("0123456789") == std::string::npos);
    }
}

TEST_CASE("mixed tokens split into runs") {
    auto chunks = split_mixed("quill12brigade");
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0].text == "quill");
    CHECK(chunks[1].kind == ChunkKind::Numeric);
    CHECK(chunks[2].text == "brigade");
    CHECK(symbol_word('&') == "and");
    CHECK(symbol_word('#').empty());
    CHECK(normalize_apostrophes("I\xe2\x80\x99m") == "I'm");
}

TEST_CASE("WAV reading and writing") {
    Audio a;
    for (int i = 0; i < 480; ++i) a.samples.push_back(0.9 * std::sin(i * 0.1));
    auto bytes = encode_wav(a);
    CHECK(bytes.substr(0, 4) == "RIFF");
    CHECK(bytes.size() == 44 + 3 * 480);
    auto back = parse_wav(bytes);
    CHECK(back.sample_rate == 48000);
    REQUIRE(back.samples.size() == 480);
    auto q = a.samples;
    quantize_24(q);
    CHECK(std::memcmp(q.data(), back.samples.data(), q.size() * sizeof(double)) == 0);
    CHECK(encode_wav(parse_wav(bytes)) == bytes);

    // 16-bit stereo is averaged to mono.
    std::string pcm16 = le(16384, 2) + le(0, 2) + le(static_cast<std::uint16_t>(-16384), 2) + le(static_cast<std::uint16_t>(-16384), 2);
    auto st = parse_wav(wav_bytes(1, 2, 16, pcm16));
    REQUIRE(st.samples.size() == 2);
    CHECK(st.samples[0] == doctest::Approx(0.25));
    CHECK(st.samples[1] == doctest::Approx(-0.5));

    float f = -0.125f;
    std::uint32_t fb;
    std::memcpy(&fb, &f, 4);
    CHECK(parse_wav(wav_bytes(3, 1, 32, le(fb, 4))).samples[0] == doctest::Approx(-0.125));

    CHECK_THROWS_AS(parse_wav("RIFX"), IoError);
    CHECK_THROWS_AS(parse_wav(wav_bytes(7, 1, 8, "a")), IoError);
}
