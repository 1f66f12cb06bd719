#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "tts/common.hpp"
#include "tts/prosody.hpp"

using namespace tts;

namespace {

PlanToken word(std::string text, Tag tag, std::vector<StressedPhone> phones, std::size_t sentence = 0) {
    return PlanToken{std::move(text), tag, std::move(phones), false, sentence};
}

PlanToken punct(std::string text, std::size_t sentence = 0) {
    return PlanToken{std::move(text), Tag::Unknown, {}, true, sentence};
}

const std::vector<StressedPhone> kProject{{Phone::P},  {Phone::R},           {Phone::AH, Stress::Unstressed},
                                          {Phone::JH}, {Phone::EH, Stress::Primary}, {Phone::K},
                                          {Phone::T}};

// Random curve with distinct sorted x in [0, 1].
Curve random_curve(std::mt19937_64& rng, CurveKind kind, std::size_t n) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Curve c{kind, {}};
    double x = 0;
    for (std::size_t i = 0; i < n; ++i) {
        c.points.emplace_back(x, u(rng));
        x += 0.05 + std::abs(u(rng)) / 4;
    }
    return c;
}

}  // namespace

TEST_CASE("steps_to_ratio table values and homomorphism") {
    CHECK(steps_to_ratio(12) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(steps_to_ratio(0) == 1.0);
    CHECK(steps_to_ratio(7) == doctest::Approx(1.49831).epsilon(1e-5));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-36.0, 36.0);
    for (int i = 0; i < 1000; ++i) {
        double a = u(rng), b = u(rng);
        double lhs = steps_to_ratio(a + b), rhs = steps_to_ratio(a) * steps_to_ratio(b);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * lhs);
    }
}

TEST_CASE("curve basics") {
    Curve one{CurveKind::Quintic, {{0.5, 1.2}}};
    for (double x : {-3.0, 0.0, 0.5, 0.9, 7.0}) CHECK(eval_curve(one, x) == 1.2);
    Curve line{CurveKind::Linear, {{0, 0}, {1, 2}}};
    CHECK(eval_curve(line, 0.5) == 1.0);
    CHECK(eval_curve(line, -1) == 0.0);
    CHECK(eval_curve(line, 3) == 2.0);
    Curve ease{CurveKind::Sinusoidal, {{0, 0}, {1, 2}}};
    CHECK(eval_curve(ease, 0.5) == doctest::Approx(1.0));
    CHECK(eval_curve(ease, 0.25) == doctest::Approx(1.0 - std::cos(M_PI / 4)));
    Curve two{CurveKind::Quintic, {{0, 0}, {1, 2}}};
    CHECK(eval_curve(two, 0.3) == doctest::Approx(0.6));

    auto s = sample_curve(line, 0, 1, 5);
    REQUIRE(s.size() == 5);
    CHECK(s[2].first == 0.5);
    CHECK(s[4].second == 2.0);
}

TEST_CASE("every curve kind passes through its control points") {
    std::mt19937_64 rng(17);
    for (auto kind : {CurveKind::Linear, CurveKind::Sinusoidal, CurveKind::Quintic})
        for (int t = 0; t < 60; ++t) {
            auto c = random_curve(rng, kind, 1 + rng() % 8);
            for (auto [x, y] : c.points) CHECK(eval_curve(c, x) == doctest::Approx(y).epsilon(1e-9));
        }
}

TEST_CASE("quintic reproduces a quadratic and is smooth at the knots") {
    // A quadratic interpolates the data, is C-infinity and has zero third and
    // fourth derivatives, so it is the natural quintic spline through its samples.
    auto q = [](double x) { return 0.7 - 1.3 * x + 2.1 * x * x; };
    Curve c{CurveKind::Quintic, {}};
    for (double x : {0.0, 0.15, 0.4, 0.55, 0.9, 1.0}) c.points.emplace_back(x, q(x));
    for (int i = 0; i <= 100; ++i) {
        double x = i / 100.0;
        CHECK(eval_curve(c, x) == doctest::Approx(q(x)).epsilon(1e-9));
    }

    std::mt19937_64 rng(23);
    auto r = random_curve(rng, CurveKind::Quintic, 6);
    double h = 1e-4;
    for (std::size_t k = 1; k + 1 < r.points.size(); ++k) {
        double x = r.points[k].first;
        // One-sided first and second differences agree across the knot.
        double dl = (eval_curve(r, x) - eval_curve(r, x - h)) / h;
        double dr = (eval_curve(r, x + h) - eval_curve(r, x)) / h;
        CHECK(std::abs(dl - dr) <= 1e-2 * (1 + std::abs(dl)));
        double d2l = (eval_curve(r, x) - 2 * eval_curve(r, x - h) + eval_curve(r, x - 2 * h)) / (h * h);
        double d2r = (eval_curve(r, x + 2 * h) - 2 * eval_curve(r, x + h) + eval_curve(r, x)) / (h * h);
        CHECK(std::abs(d2l - d2r) <= 5e-2 * (1 + std::abs(d2l)));
    }
}

TEST_CASE("settings JSON round trip and validation") {
    auto s = ProsodySettings::neutral();
    s.seed = 77;
    s.stress[1] = {1.2, 7.0, 1.3};
    s.classes[Tag::Noun] = {{1.1, 1.0, 1.05}, {0.0, 0.5, 0.0}, ClassMode::Approach, 0.4};
    s.sentence_curves["question"].pitch = {CurveKind::Quintic, {{0, 0}, {0.5, -1}, {1, 4}}};
    s.frequency_curves.duration = {CurveKind::Linear, {{1, 1.2}, {7, 0.9}}};
    s.bracket_banks["("] = "whisper";
    auto back = ProsodySettings::from_json(nlohmann::json::parse(s.to_json().dump()));
    CHECK(back == s);

    auto patched = s.merged({{"pauses", {{",", 0.1}}}, {"classes", {{"V", {{"pitch", 2.0}}}}}});
    CHECK(patched.pauses.at(",") == 0.1);
    CHECK(patched.pauses.at(".") == 0.6);
    CHECK(patched.classes.at(Tag::Verb).target.pitch == 2.0);
    CHECK(patched.classes.at(Tag::Noun) == s.classes.at(Tag::Noun));

    auto sorted = ProsodySettings::from_json({{"frequency", {{"volume", {{"points", {{7, 1}, {1, 2}}}}}}}});
    CHECK(sorted.frequency_curves.volume.points.front().first == 1);

    CHECK_THROWS_AS(ProsodySettings::from_json({{"pauses", {{",", -1}}}}), DataError);
    CHECK_THROWS_AS(ProsodySettings::from_json({{"clamps", {{"pitch", {2, 1}}}}}), DataError);
    CHECK_THROWS_AS(ProsodySettings::from_json({{"curves", {{"period", {{"pitch", {{"kind", "cubic"}}}}}}}}),
                    DataError);
    CHECK_THROWS_AS(ProsodySettings::from_json({{"classes", {{"Q", {}}}}}), DataError);
    CHECK_THROWS_AS(ProsodySettings::from_json({{"seed", "x"}}), DataError);
}

TEST_CASE("shipped default settings load") {
    auto s = ProsodySettings::load_file(default_data_dir() + "/prosody/default.json");
    CHECK(s.stress[1].pitch > s.stress[2].pitch);
    CHECK(s.stress[2].pitch > s.stress[0].pitch);
}

TEST_CASE("frequency table") {
    std::istringstream in(
        "1000 the\n"
        "10 rare\n"
        "10000000 of\n"
        "6 Cat\n"
        "6 cat\n"
        "nonsense\n"
        "x y\n"
        "400 The\n");
    auto t = load_frequency_table(in);
    CHECK(t.lookup("the") == doctest::Approx(std::log10(1400.0)));
    CHECK(t.lookup("OF") == doctest::Approx(7.0));
    CHECK(t.lookup("rare") == 1.0);
    CHECK(t.lookup("cat") == doctest::Approx(std::log10(12.0)));
    CHECK(t.lookup("absent") == 1.0);
    CHECK(t.malformed == 2);

    std::istringstream plain("1000 word\n");
    CHECK(load_frequency_table(plain).lookup("word") == doctest::Approx(3.0));
}

TEST_CASE("neutral plan is the identity plan") {
    auto s = ProsodySettings::neutral();
    std::vector<PlanToken> toks{word("we", Tag::Pronoun, {{Phone::W}, {Phone::IY, Stress::Primary}}),
                                word("project", Tag::Verb, kProject), punct(","),
                                word("it", Tag::Pronoun, {{Phone::IH, Stress::Primary}, {Phone::T}}), punct("."),
                                word("why", Tag::Adverb, {{Phone::W}, {Phone::AA, Stress::Primary}}, 1),
                                punct("?", 1)};
    std::istringstream freq("5000 project\n");
    auto table = load_frequency_table(freq);
    auto p = plan(toks, s, &table);
    REQUIRE(p.tokens.size() == toks.size());
    for (std::size_t i = 0; i < toks.size(); ++i) {
        CHECK(p.tokens[i].phones.size() == toks[i].phones.size());
        for (const auto& ph : p.tokens[i].phones) CHECK(ph == PhoneProsody{});
    }
    CHECK(p.tokens[2].pause == 0.25);
    CHECK(p.tokens[4].pause == 0.6);
    CHECK(p.tokens[6].pause == 0.6);
    CHECK(p.tokens[0].pause == 0.0);
}

TEST_CASE("primary stress pitch of 1.5 on project") {
    auto s = ProsodySettings::neutral();
    s.stress[1].pitch = 12.0 * std::log2(1.5);
    auto p = plan({word("project", Tag::Verb, kProject)}, s);
    const auto& ph = p.tokens[0].phones;
    REQUIRE(ph.size() == kProject.size());
    for (std::size_t i = 0; i < ph.size(); ++i) {
        CHECK(ph[i].pitch == doctest::Approx(i == 4 ? 1.5 : 1.0).epsilon(1e-12));
        CHECK(ph[i].volume == 1.0);
        CHECK(ph[i].duration == 1.0);
    }
}

TEST_CASE("sentence curve positions and clamps") {
    auto s = ProsodySettings::neutral();
    s.sentence_curves["period"].volume = {CurveKind::Linear, {{0, 1}, {1, 0}}};
    s.sentence_curves["question"].pitch = {CurveKind::Linear, {{0, 0}, {1, 12}}};
    std::vector<PlanToken> toks{word("a", Tag::Article, {{Phone::AH, Stress::Unstressed}}),
                                word("b", Tag::Noun, {{Phone::B}}), word("c", Tag::Noun, {{Phone::S}}), punct("."),
                                word("d", Tag::Noun, {{Phone::D}}, 1), word("e", Tag::Noun, {{Phone::IY}}, 1),
                                punct("?", 1)};
    auto p = plan(toks, s);
    CHECK(p.tokens[0].phones[0].volume == 1.0);
    CHECK(p.tokens[1].phones[0].volume == 0.5);
    CHECK(p.tokens[2].phones[0].volume == s.volume_clamp.min);
    CHECK(p.tokens[4].phones[0].pitch == 1.0);
    CHECK(p.tokens[5].phones[0].pitch == doctest::Approx(2.0));
    CHECK(p.tokens[4].phones[0].volume == 1.0);

    auto single = plan({word("a", Tag::Noun, {{Phone::AA}})}, s);
    CHECK(single.tokens[0].phones[0].volume == 1.0);
}

TEST_CASE("class modes compose with the previous word") {
    auto s = ProsodySettings::neutral();
    s.classes[Tag::Noun] = {{1.0, 2.0, 1.0}, {0, 0, 0}, ClassMode::Relative, 1.0};
    s.classes[Tag::Verb] = {{1.0, 8.0, 1.0}, {0, 0, 0}, ClassMode::Approach, 0.25};
    std::vector<PlanToken> toks{word("n", Tag::Noun, {{Phone::N}}), word("n", Tag::Noun, {{Phone::N}}),
                                word("v", Tag::Verb, {{Phone::V}})};
    auto p = plan(toks, s);
    CHECK(p.tokens[0].word.pitch == 2.0);
    CHECK(p.tokens[1].word.pitch == 4.0);
    CHECK(p.tokens[2].word.pitch == 5.0);  // 4 + (8 - 4) * 0.25
}

TEST_CASE("jitter is reproducible and bounded") {
    auto s = ProsodySettings::neutral();
    s.seed = 1234;
    s.classes[Tag::Noun] = {{1.0, 0.0, 1.0}, {0.2, 1.0, 0.1}, ClassMode::Absolute, 1.0};
    std::vector<PlanToken> toks;
    for (int i = 0; i < 50; ++i) toks.push_back(word("w", Tag::Noun, {{Phone::AA, Stress::Primary}}));
    auto a = plan(toks, s), b = plan(toks, s);
    bool varied = false;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const auto& x = a.tokens[i].phones[0];
        const auto& y = b.tokens[i].phones[0];
        CHECK(std::memcmp(&x, &y, sizeof x) == 0);
        CHECK(a.tokens[i].word.pitch >= -1.0);
        CHECK(a.tokens[i].word.pitch < 1.0);
        CHECK(std::abs(a.tokens[i].word.volume - 1.0) <= 0.2);
        varied = varied || x.pitch != 1.0;
    }
    CHECK(varied);
    s.seed = 1235;
    CHECK(plan(toks, s).tokens[0].word.pitch != a.tokens[0].word.pitch);

    Jitter j(5);
    for (int i = 0; i < 10000; ++i) {
        double v = j.next();
        CHECK((v >= -1.0 && v < 1.0));
    }
}

TEST_CASE("every emitted multiplier lies inside the clamps") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int t = 0; t < 30; ++t) {
        auto s = ProsodySettings::neutral();
        s.stress[1] = {std::abs(u(rng)), u(rng), std::abs(u(rng))};
        s.sentence_curves["period"] = {Curve{CurveKind::Quintic, {{0, u(rng)}, {0.3, u(rng)}, {1, u(rng)}}},
                                       Curve{CurveKind::Sinusoidal, {{0, u(rng)}, {1, u(rng)}}},
                                       Curve{CurveKind::Linear, {{0, u(rng)}, {1, u(rng)}}}};
        std::vector<PlanToken> toks;
        for (int i = 0; i < 6; ++i) toks.push_back(word("x", Tag::Adjective, {{Phone::AE, Stress::Primary}}));
        for (const auto& tok : plan(toks, s).tokens)
            for (const auto& ph : tok.phones) {
                CHECK(ph.volume >= s.volume_clamp.min);
                CHECK(ph.volume <= s.volume_clamp.max);
                CHECK(ph.pitch >= s.pitch_clamp.min);
                CHECK(ph.pitch <= s.pitch_clamp.max);
                CHECK(ph.duration >= s.duration_clamp.min);
                CHECK(ph.duration <= s.duration_clamp.max);
            }
    }
}
