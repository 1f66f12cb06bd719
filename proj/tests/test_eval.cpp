#include <doctest.h>

#include <filesystem>

#include "tts/common.hpp"
#include "tts/eval.hpp"

using namespace tts;

namespace {

const Corpora& corpora() {
    static const Corpora c = load_corpora(default_data_dir() + "/corpora");
    return c;
}

}  // namespace

TEST_CASE("corpus cardinalities") {
    const auto& c = corpora();
    CHECK(c.drt.size() == 96);
    CHECK(c.mrt.size() == 50);
    CHECK(c.pb50.size() == 20);
    CHECK(c.harvard.size() == 72);
    CHECK(c.harvard[71].size() == 10);
    CHECK(c.haskins.size() == 4);
    CHECK(c.haskins[3].size() == 50);
    CHECK(c.mosx.size() == 15);
}

TEST_CASE("corpus loaders reject wrong counts") {
    auto path = (std::filesystem::temp_directory_path() / "tts_short_drt.tsv").string();
    write_file(path, "Voicing\tveal\tfeel\n");
    CHECK_THROWS_AS(load_drt(path), DataError);
    write_file(path, "1\t1\tOnly one sentence.\tonly one sentence\n");
    CHECK_THROWS_AS(load_harvard(path), DataError);
    write_file(path, "1\tx\n");
    CHECK_THROWS_AS(load_mrt(path), DataError);
    std::filesystem::remove(path);
}

TEST_CASE("keyword scoring") {
    std::vector<std::string> kw{"two", "blue", "fish", "swam", "tank"};
    CHECK(score_transcription(kw, "Two blue fish swam in the tank.") == Score{5, 5});
    CHECK(score_transcription(kw, "") == Score{0, 5});
    CHECK(score_transcription(kw, "two blue dish swam in the tank") == Score{4, 5});
    CHECK(score_transcription(kw, "  TWO   Blue FISH swam in the TANK  ") == Score{5, 5});
    CHECK(score_transcription({"the", "the"}, "the") == Score{1, 2});

    const auto& s = corpora().harvard[2][5];
    CHECK(s.text == "Two blue fish swam in the tank.");
    CHECK(s.keywords == kw);
}

TEST_CASE("suite prompts") {
    const auto& c = corpora();
    auto harvard = suite_prompts(c, CorpusKind::Harvard, 1, 1);
    CHECK(harvard.size() == 10);
    CHECK(harvard[0].id == "harvard-01-01");
    auto drt = suite_prompts(c, CorpusKind::Drt, 0, 7);
    CHECK(drt.size() == 96);
    for (const auto& p : drt) CHECK((p.text == p.choices[0] || p.text == p.choices[1]));
    CHECK(drt.size() == suite_prompts(c, CorpusKind::Drt, 0, 7).size());
    CHECK(drt[5].text == suite_prompts(c, CorpusKind::Drt, 0, 7)[5].text);
    auto pb = suite_prompts(c, CorpusKind::Pb50, 2, 1);
    CHECK(pb.size() == 50);
    CHECK(pb[0].text == carrier_sentence(c.pb50[1][0]));
    CHECK(pb[0].text.starts_with("Please write down the word "));
    CHECK(suite_prompts(c, CorpusKind::Mrt, 0, 1).size() == 50);
    CHECK(suite_prompts(c, CorpusKind::Haskins, 0, 1).size() == 200);
    CHECK_THROWS_AS(suite_prompts(c, CorpusKind::Harvard, 73, 1), DataError);

    auto key = answer_key(harvard);
    std::string hyp = "harvard-01-01\tthe birch canoe slid on the smooth planks\nharvard-01-02\tglue the sheet\n";
    auto score = score_sheet(key, hyp);
    CHECK(score.rows.size() == 10);
    CHECK(score.rows[0].second == Score{5, 5});
    CHECK(score.rows[1].second.correct == 2);
    CHECK(score.missing == 8);
}

TEST_CASE("MOS-X form lists every question") {
    auto form = mosx_form(corpora().mosx);
    for (const auto& q : corpora().mosx) CHECK(form.find(q.question) != std::string::npos);
    CHECK(form.find("15. ") != std::string::npos);
}
