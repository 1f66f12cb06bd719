#include <doctest.h>

#include "tts/common.hpp"
#include "tts/fixture.hpp"
#include "tts/pipeline.hpp"

using namespace tts;

namespace {

const Resources& resources() {
    static const Resources r = Resources::load(ResourcePaths::defaults(default_data_dir()));
    return r;
}

const DiphoneBank& fixture_bank() {
    static const DiphoneBank b = make_fixture_bank(1);
    return b;
}

std::vector<UtterancePhone> chain(std::initializer_list<Phone> phones) {
    std::vector<UtterancePhone> u;
    for (Phone p : phones) u.push_back({p});
    return u;
}

std::vector<std::string> unit_names(const UnitPlan& plan) {
    std::vector<std::string> out;
    for (const auto& u : plan.units) {
        std::string s = std::string(unit_kind_name(u.kind)) + ":" + std::string(symbol(u.diphone.first));
        if (u.kind == UnitKind::Diphone) s += "-" + std::string(symbol(u.diphone.second));
        out.push_back(s);
    }
    return out;
}

std::string phones_of(const AnalyzedToken& t) {
    std::vector<std::string> v;
    for (const auto& p : t.phones) v.push_back(format_phone(p));
    return join(v, " ");
}

}  // namespace

TEST_CASE("homographs follow their tags") {
    auto toks = preprocess("I dove towards the dove.", resources());
    REQUIRE(toks.size() == 6);
    CHECK(toks[1].tag == Tag::Verb);
    CHECK(toks[4].tag == Tag::Noun);
    CHECK(join(toks[1].arpabet, " ") == "D OW1 V");
    CHECK(join(toks[4].arpabet, " ") == "D AH1 V");
    CHECK(toks[1].source == PronSource::Homograph);
    CHECK(phones_of(toks[1]) == "D IPAO1 UH0 V");
}

TEST_CASE("pronunciation fallbacks") {
    auto toks = preprocess("blarp 10 ten R2-D2", resources());
    REQUIRE(toks.size() == 4);
    CHECK(toks[0].source == PronSource::G2P);
    CHECK_FALSE(toks[0].phones.empty());
    CHECK(toks[1].source == PronSource::Number);
    CHECK(toks[1].arpabet == toks[2].arpabet);
    CHECK(toks[3].source == PronSource::Mixed);
    CHECK(toks[3].arpabet.size() > 4);
}

TEST_CASE("the takes its vowel form before vowels") {
    auto toks = preprocess("the apple and the dog", resources());
    CHECK(join(toks[0].arpabet, " ") == "DH IY0");
    CHECK(join(toks[3].arpabet, " ") == "DH AH0");
}

TEST_CASE("preprocess table shape") {
    auto toks = preprocess("Yes, I'm going to buy 10 apples.", resources());
    auto j = analysis_json(toks);
    REQUIRE(j.size() == 9);
    std::vector<std::string> texts;
    for (const auto& row : j) texts.push_back(row["token"]);
    CHECK(texts == std::vector<std::string>{"Yes", ",", "I'm", "going", "to", "buy", "10", "apples", "."});
    CHECK(j[1]["tag"] == "");
    CHECK(j[6]["tag"] == "N");
    CHECK(j[6]["pronunciation"] == "T EH1 N");
    CHECK(j[7]["tag"] == "p");
}

TEST_CASE("diphone chains") {
    std::vector<const DiphoneBank*> banks{&fixture_bank()};
    auto hello = to_units(chain({Phone::X, Phone::HH, Phone::AH, Phone::L, Phone::IPAO, Phone::UH, Phone::X}), banks);
    CHECK(unit_names(hello) == std::vector<std::string>{"diphone:X-HH", "diphone:HH-AH", "diphone:AH-L",
                                                         "diphone:L-IPAO", "diphone:IPAO-UH", "diphone:UH-X"});
    auto stops = to_units(chain({Phone::X, Phone::AA, Phone::T, Phone::P, Phone::AA, Phone::X}), banks);
    CHECK(unit_names(stops) ==
          std::vector<std::string>{"diphone:X-AA", "diphone:AA-X", "burst:T", "diphone:P-AA", "diphone:AA-X"});
    auto single = to_units(chain({Phone::X, Phone::AA, Phone::X}), banks);
    CHECK(unit_names(single) == std::vector<std::string>{"diphone:X-AA", "diphone:AA-X"});
    auto final_stop = to_units(chain({Phone::X, Phone::AE, Phone::T, Phone::X}), banks);
    CHECK(unit_names(final_stop) == std::vector<std::string>{"diphone:X-AE", "diphone:AE-X", "burst:T"});

    DiphoneBank gappy = fixture_bank();
    gappy.diphones.erase({Phone::AA, Phone::L});
    auto bridged = to_units(chain({Phone::X, Phone::AA, Phone::L, Phone::X}), {&gappy});
    CHECK(unit_names(bridged) ==
          std::vector<std::string>{"diphone:X-AA", "diphone:AA-X", "silence:X", "diphone:X-L", "diphone:L-X"});
    REQUIRE(bridged.substitutions.size() == 1);
    CHECK(bridged.substitutions[0].find("AA-L") != std::string::npos);
    CHECK(bridged.units[2].seconds == 0.03);
}

TEST_CASE("utterance merges repeated phones and places pauses") {
    auto& res = resources();
    auto toks = preprocess("this sun, ok", res);
    std::vector<PlanToken> pt;
    for (const auto& t : toks) pt.push_back({t.text, t.tag, t.phones, t.kind == TokenKind::Punct, 0});
    auto plan_ = plan(pt, ProsodySettings::neutral());
    auto u = build_utterance(toks, plan_, {});
    for (std::size_t i = 1; i < u.size(); ++i) CHECK(u[i].phone != u[i - 1].phone);
    double pauses = 0;
    for (const auto& p : u) pauses += p.pause;
    CHECK(pauses == 0.25);
    CHECK(u.front().phone == Phone::X);
    CHECK(u.back().phone == Phone::X);
    CHECK(u.back().pause == 0.0);
}

TEST_CASE("synthesis accounting, determinism and WAV validity") {
    Voice voice{&fixture_bank(), {}};
    auto s = ProsodySettings::load_file(default_data_dir() + "/prosody/default.json");
    const std::string text = "The birch canoe slid on the smooth planks. Glue the sheet, then stop!";
    auto a = synthesize(text, voice, s, resources());
    auto b = synthesize(text, voice, s, resources());
    CHECK(encode_wav(a.audio) == encode_wav(b.audio));
    const auto& r = a.report;
    CHECK(a.audio.samples.size() == r.shifted_samples - r.overlap_samples + r.pause_samples);
    CHECK(r.pause_samples == static_cast<std::size_t>(std::lround((0.6 + 0.25) * kSampleRate)));
    CHECK(r.clips > 20);
    CHECK(r.substitutions.empty());
    auto parsed = parse_wav(encode_wav(a.audio));
    CHECK(parsed.samples.size() == a.audio.samples.size());

    auto empty = synthesize("", voice, s, resources());
    CHECK(empty.audio.samples.empty());
    CHECK(encode_wav(empty.audio).size() == 44);

    CHECK_THROWS_AS(synthesize("hello", Voice{}, s, resources()), DataError);
    auto only_plan = synthesize("hello", Voice{}, s, resources(), {.plan_only = true});
    CHECK(only_plan.tokens.size() == 1);
}

TEST_CASE("bracketed text uses the configured bank") {
    DiphoneBank alt = make_fixture_bank(2);
    alt.name = "alt";
    Voice voice{&fixture_bank(), {{"alt", &alt}}};
    auto s = ProsodySettings::neutral();
    s.bracket_banks["("] = "alt";
    auto r = synthesize("one (two) three", voice, s, resources(), {.plan_only = true});
    int alt_units = 0;
    for (const auto& u : r.units.units) alt_units += u.bank == 1;
    CHECK(alt_units >= 2);
    s.bracket_banks["("] = "missing";
    auto w = synthesize("one (two)", voice, s, resources(), {.plan_only = true});
    CHECK_FALSE(w.report.warnings.empty());
}
