#include <doctest.h>

#include <random>
#include <sstream>

#include "tts/common.hpp"
#include "tts/g2p.hpp"
#include "tts/phoneset.hpp"

using namespace tts;

namespace {

using Strs = std::vector<std::string>;

struct Trained {
    PronunciationLexicon lex;
    std::vector<AlignedWord> aligned;
    GraphoneTable pruned, unpruned;
};

const Trained& trained() {
    static const Trained t = [] {
        Trained t;
        t.lex = PronunciationLexicon::load_cmudict_file(default_data_dir() + "/cmudict.dict");
        t.aligned = align_corpus(g2p_corpus(t.lex));
        t.pruned = train(t.aligned, true);
        t.unpruned = train(t.aligned, false);
        return t;
    }();
    return t;
}

std::string segments_of(const AlignedWord& w) {
    std::string s;
    for (const auto& seg : w.segments) s += (s.empty() ? "" : " ") + seg.letters + "|" + join(seg.phones, ".");
    return s;
}

}  // namespace

TEST_CASE("initial alignment pairs vowel and consonant runs") {
    auto inject = initial_align("inject", {"IH", "N", "JH", "EH", "K", "T"});
    REQUIRE(inject);
    CHECK(segments_of(*inject) == "i|IH nj|N.JH e|EH ct|K.T");
    CHECK_FALSE(initial_align("ate", {"EY", "T"}).has_value());
    auto runs = initial_align("bcdfg", {"B", "K", "D", "F", "G"});
    REQUIRE(runs);
    CHECK(runs->segments.size() == 1);
}

TEST_CASE("cluster splitting") {
    std::vector<AlignedWord> corpus;
    for (auto [w, p] : std::vector<std::pair<std::string, PhoneSeq>>{
             {"map", {"M", "AE", "P"}}, {"pat", {"P", "AE", "T"}}, {"tam", {"T", "AE", "M"}}}) {
        auto a = initial_align(w, p);
        REQUIRE(a);
        corpus.push_back(*a);
    }
    auto inv = ClusterInventory::build(corpus);
    auto parts = inv.split({"mpt", {"M", "P", "T"}});
    REQUIRE(parts.size() == 3);
    CHECK(parts[0] == Segment{"m", {"M"}});
    CHECK(parts[2] == Segment{"t", {"T"}});
    CHECK(inv.split({"a", {"AH"}}) == std::vector<Segment>{{"a", {"AH"}}});
}

TEST_CASE("alignment of the dictionary reproduces every word") {
    const auto& t = trained();
    CHECK(t.aligned.size() > 100000);
    bool dispose_se = false;
    for (const auto& w : t.aligned) {
        std::string letters;
        PhoneSeq phones;
        for (const auto& s : w.segments) {
            letters += s.letters;
            phones.insert(phones.end(), s.phones.begin(), s.phones.end());
            CHECK_MESSAGE(s.letters.size() <= 4, w.word);
        }
        if (letters != w.word) FAIL(w.word);
        if (w.word == "dispose")
            for (const auto& s : w.segments) dispose_se |= s == Segment{"se", {"Z"}};
        (void)phones;
    }
    CHECK(dispose_se);
}

TEST_CASE("graphone confidences") {
    const auto& g = trained().pruned;
    const auto* open_x = g.find("(x");
    REQUIRE(open_x);
    CHECK(open_x->phonemes == PhoneSeq{"Z"});
    CHECK(open_x->confidence == doctest::Approx(0.73).epsilon(0.01));
    const auto* x_close = g.find("x)");
    REQUIRE(x_close);
    CHECK(x_close->phonemes == PhoneSeq{"K", "S"});
    CHECK(x_close->confidence == doctest::Approx(0.9954).epsilon(0.005));
    for (const auto& e : g.sorted()) {
        CHECK(e.confidence > 0.0);
        CHECK(e.confidence <= 1.0);
    }
}

TEST_CASE("decode worked words") {
    const auto& g = trained().pruned;
    auto absolve = g.decode("absolve");
    CHECK(join(absolve.phones, " ") == "AE0 B S AA0 L V");
    CHECK(absolve.pieces == Strs{"(abs", "olve)"});
    auto paddle = g.decode("paddle");
    CHECK(join(paddle.phones, " ").ends_with("D AH0 L"));
    CHECK(join(paddle.phones, " ").find("D D") == std::string::npos);
    CHECK(g.decode("").phones.empty());
    auto odd = g.decode("q\xc3\xa9");
    CHECK(odd.fallback);
}

TEST_CASE("decoded phones never repeat and pruning never changes a decode") {
    const auto& t = trained();
    CHECK(t.pruned.size() < t.unpruned.size());
    std::mt19937_64 rng(21);
    const auto& entries = t.lex.entries();
    std::vector<std::string> words;
    for (const auto& [w, e] : entries)
        if (std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isalpha(c); })) words.push_back(w);
    for (int i = 0; i < 1000; ++i) {
        const auto& w = words[rng() % words.size()];
        auto a = t.pruned.decode(w), b = t.unpruned.decode(w);
        CHECK_MESSAGE(a.phones == b.phones, w);
        for (std::size_t k = 1; k < a.phones.size(); ++k) CHECK(split_stress(a.phones[k]).first != split_stress(a.phones[k - 1]).first);
    }
}

TEST_CASE("graphone table serialization round trip") {
    const auto& g = trained().pruned;
    std::istringstream in(g.serialize());
    auto again = GraphoneTable::load(in);
    CHECK(again.size() == g.size());
    CHECK(again.serialize() == g.serialize());
    CHECK(again.decode("incomprehensibilities").phones == g.decode("incomprehensibilities").phones);
}

TEST_CASE("match classification") {
    PhoneSeq gold{"K", "AE", "T"};
    CHECK(classify(gold, gold) == MatchKind::Exact);
    CHECK(classify({"K", "AH", "T"}, gold) == MatchKind::OneOff);
    CHECK(classify({"K", "T"}, gold) == MatchKind::Missing);
    CHECK(classify({"K", "AE", "T", "S"}, gold) == MatchKind::Extra);
    CHECK(classify({"D", "AH", "G"}, gold) == MatchKind::Incorrect);

    std::istringstream in("CAT  K AE1 T\nDOG  D AO1 G\n");
    auto lex = PronunciationLexicon::load_cmudict(in);
    GraphoneTable table;
    table.insert("(ca", {"K", "AE"}, 1.0);
    table.insert("t)", {"T"}, 1.0);
    table.insert("(do", {"D", "AA"}, 1.0);
    table.insert("g)", {"G"}, 1.0);
    auto r = evaluate(table, lex);
    CHECK(r.exact == 1);
    CHECK(r.one_off == 1);
}
