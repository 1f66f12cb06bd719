#include <doctest.h>

#include <random>
#include <sstream>

#include "tts/common.hpp"
#include "tts/postagger.hpp"

using namespace tts;

namespace {

struct Fixture {
    PosLexicon lex;
    TrigramModel model;
};

const Fixture& fixture() {
    static const Fixture f = [] {
        Fixture f;
        f.lex = PosLexicon::load_mpos_file(default_data_dir() + "/pos/mpos_sample.txt");
        f.lex.dedup_case_variants();
        std::istringstream in(read_file(default_data_dir() + "/pos/trigrams.tsv"));
        f.model = TrigramModel::build(in, TagReducer::claws7(default_data_dir()));
        return f;
    }();
    return f;
}

std::vector<std::string> words(const std::string& s) { return split_ws(s); }

}  // namespace

TEST_CASE("tag reduction") {
    auto claws = TagReducer::claws7(default_data_dir());
    CHECK(claws.reduce("VVD") == Tag::Verb);
    CHECK(claws.reduce("at1") == Tag::Article);
    CHECK(claws.reduce("FW") == Tag::Unknown);
    auto brown = TagReducer::brown(default_data_dir());
    CHECK(brown.reduce("JJR") == Tag::Adjective);
    CHECK(brown.reduce("PPO") == Tag::Pronoun);
    auto before = brown.unknown_count();
    CHECK(brown.reduce("QQQ") == Tag::Unknown);
    CHECK(brown.unknown_count() == before + 1);
    CHECK(normalize_brown_tag("nn-tl") == "NN");
    CHECK(normalize_brown_tag("fw-nn") == "NN");
}

TEST_CASE("model building from row formats") {
    std::istringstream in("48\ta\tB.A.\tdegree\tat1\tnn1\tnn1\nNNN\t289770\nNNV\t142513\nbad row\n");
    ModelBuildReport report;
    auto m = TrigramModel::build(in, TagReducer::claws7(default_data_dir()), &report);
    CHECK(m.trigram(Tag::Article, Tag::Noun, Tag::Noun) == 48);
    CHECK(m.trigram(Tag::Noun, Tag::Noun, Tag::Noun) == 289770);
    CHECK(report.malformed == 1);
    CHECK(m.bigram(Tag::Noun, Tag::Noun) == 289770 + 142513);

    std::istringstream empty("");
    auto zero = TrigramModel::build(empty, TagReducer::claws7(default_data_dir()));
    CHECK(zero.min_positive() == 0);
    PosTagger tagger(zero, &fixture().lex);
    CHECK(tagger.tag(words("the bell rings")).front() == Tag::Article);

    std::istringstream again(fixture().model.serialize());
    auto loaded = TrigramModel::load(again);
    CHECK(loaded.serialize() == fixture().model.serialize());
}

TEST_CASE("candidate classes") {
    const auto* lex = &fixture().lex;
    CHECK(tag_string(candidate_tags(lex, "rings")) == "NpVAv!");
    CHECK(tag_string(candidate_tags(lex, "THE")) == "Dv");
    CHECK(tag_string(candidate_tags(lex, "10")) == "N");
}

TEST_CASE("restricted transition probability") {
    const auto& f = fixture();
    PosTagger tagger(f.model, &f.lex);
    CHECK(tagger.transition(Tag::Noun, Tag::Noun, Tag::Noun, {Tag::Noun, Tag::Verb}) ==
          doctest::Approx(289770.0 / 432283.0).epsilon(1e-12));
    CHECK(tagger.tag(words("the")) == std::vector<Tag>{Tag::Article});
}

TEST_CASE("homograph sentences") {
    const auto& f = fixture();
    PosTagger tagger(f.model, &f.lex);
    auto dove = tagger.tag(words("I dove towards the dove to catch it"));
    CHECK(dove[1] == Tag::Verb);
    CHECK(dove[4] == Tag::Noun);
    auto project = tagger.tag(words("I want to project my project onto the wall"));
    CHECK(project[5] == Tag::Noun);
    CHECK(tag_string(tagger.tag(words("time flies like an arrow"))) == "NVPDN");
    CHECK(tagger.tag(words("to project the ball"))[1] == Tag::Verb);
}

TEST_CASE("every output tag is a candidate and scaling keeps the argmax") {
    const auto& f = fixture();
    PosTagger tagger(f.model, &f.lex);
    TrigramModel scaled = f.model;
    scaled.scale(7.5);
    PosTagger tagger2(scaled, &f.lex);
    std::vector<std::string> vocab;
    for (const auto& e : f.lex.entries()) vocab.push_back(e.headword);
    vocab.push_back("blorft");
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::string> s;
        for (int i = 0, n = 1 + static_cast<int>(rng() % 7); i < n; ++i) s.push_back(vocab[rng() % vocab.size()]);
        auto tags = tagger.tag(s, {.use_overrides = false});
        for (std::size_t i = 0; i < s.size(); ++i) {
            auto c = candidate_tags(&f.lex, s[i]);
            CHECK(std::find(c.begin(), c.end(), tags[i]) != c.end());
        }
        CHECK(tagger2.tag(s, {.use_overrides = false}) == tags);
        CHECK(tagger.tag(s, {.use_overrides = false}) == tags);
    }
}

TEST_CASE("Brown sample accuracy is pinned") {
    const auto& f = fixture();
    PosTagger tagger(f.model, &f.lex);
    std::istringstream in(read_file(default_data_dir() + "/pos/brown_sample.txt"));
    auto corpus = load_brown(in, TagReducer::brown(default_data_dir()));
    CHECK(corpus.size() == 18);
    auto r = evaluate_brown(tagger, corpus);
    CHECK(r.scored == 138);
    CHECK(r.correct_base == 102);
}
