#include "tts/eval.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "tts/common.hpp"

namespace tts {

std::string_view corpus_name(CorpusKind k) {
    switch (k) {
        case CorpusKind::Drt: return "drt";
        case CorpusKind::Mrt: return "mrt";
        case CorpusKind::Pb50: return "pb50";
        case CorpusKind::Harvard: return "harvard";
        case CorpusKind::Haskins: return "haskins";
    }
    return "drt";
}

std::optional<CorpusKind> parse_corpus_kind(std::string_view s) {
    for (auto k : {CorpusKind::Drt, CorpusKind::Mrt, CorpusKind::Pb50, CorpusKind::Harvard, CorpusKind::Haskins})
        if (corpus_name(k) == s) return k;
    if (s == "pb-50") return CorpusKind::Pb50;
    return std::nullopt;
}

namespace {

// Non-comment rows split on tabs, each with exactly `fields` columns.
std::vector<std::vector<std::string>> rows_of(const std::string& path, std::size_t fields) {
    std::istringstream in(read_file(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        auto f = split(line, '\t');
        if (f.size() != fields)
            throw DataError(path + ":" + std::to_string(no) + ": expected " + std::to_string(fields) + " fields");
        rows.push_back(std::move(f));
    }
    return rows;
}

int to_int(const std::string& s, const std::string& path) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw DataError(path + ": bad number '" + s + "'");
}

void expect(bool ok, const std::string& what) {
    if (!ok) throw DataError("corpus integrity: " + what);
}

std::vector<std::vector<Sentence>> load_sentences(const std::string& path, std::size_t groups, std::size_t per,
                                                  bool has_keywords) {
    auto rows = rows_of(path, has_keywords ? 4 : 3);
    std::vector<std::vector<Sentence>> out(groups);
    for (const auto& r : rows) {
        Sentence s;
        s.list = to_int(r[0], path);
        s.item = to_int(r[1], path);
        s.text = r[2];
        s.keywords = has_keywords ? words_of(r[3]) : words_of(r[2]);
        expect(s.list >= 1 && static_cast<std::size_t>(s.list) <= groups, path + ": list " + r[0] + " out of range");
        out[static_cast<std::size_t>(s.list - 1)].push_back(std::move(s));
    }
    for (std::size_t g = 0; g < groups; ++g)
        expect(out[g].size() == per, path + ": list " + std::to_string(g + 1) + " has " +
                                         std::to_string(out[g].size()) + " items, expected " + std::to_string(per));
    return out;
}

}  // namespace

std::vector<DrtPair> load_drt(const std::string& path) {
    std::vector<DrtPair> out;
    std::map<std::string, int> per;
    for (const auto& r : rows_of(path, 3)) {
        out.push_back({r[0], r[1], r[2]});
        ++per[r[0]];
    }
    expect(out.size() == 96, path + ": expected 96 pairs, found " + std::to_string(out.size()));
    expect(per.size() == 6, path + ": expected 6 categories");
    for (const auto& [cat, n] : per) expect(n == 16, path + ": category " + cat + " has " + std::to_string(n) + " pairs");
    return out;
}

std::vector<std::array<std::string, 6>> load_mrt(const std::string& path) {
    std::vector<std::array<std::string, 6>> out;
    for (const auto& r : rows_of(path, 7)) out.push_back({r[1], r[2], r[3], r[4], r[5], r[6]});
    expect(out.size() == 50, path + ": expected 50 sets, found " + std::to_string(out.size()));
    return out;
}

std::vector<std::vector<std::string>> load_pb50(const std::string& path) {
    std::vector<std::vector<std::string>> out(20);
    for (const auto& r : rows_of(path, 3)) {
        int list = to_int(r[0], path);
        expect(list >= 1 && list <= 20, path + ": list " + r[0] + " out of range");
        out[static_cast<std::size_t>(list - 1)].push_back(r[2]);
    }
    for (std::size_t l = 0; l < out.size(); ++l)
        expect(out[l].size() == 50, path + ": list " + std::to_string(l + 1) + " has " +
                                        std::to_string(out[l].size()) + " words");
    return out;
}

std::vector<std::vector<Sentence>> load_harvard(const std::string& path) { return load_sentences(path, 72, 10, true); }

std::vector<std::vector<Sentence>> load_haskins(const std::string& path) { return load_sentences(path, 4, 50, false); }

std::vector<MosxItem> load_mosx(const std::string& path) {
    std::vector<MosxItem> out;
    for (const auto& r : rows_of(path, 5)) out.push_back({to_int(r[0], path), r[1], r[2], r[3], r[4]});
    expect(out.size() == 15, path + ": expected 15 questions");
    return out;
}

Corpora load_corpora(const std::string& dir) {
    Corpora c;
    c.drt = load_drt(dir + "/drt.tsv");
    c.mrt = load_mrt(dir + "/mrt.tsv");
    c.pb50 = load_pb50(dir + "/pb50.tsv");
    c.harvard = load_harvard(dir + "/harvard.tsv");
    c.haskins = load_haskins(dir + "/haskins.tsv");
    c.mosx = load_mosx(dir + "/mosx.tsv");
    return c;
}

std::vector<std::string> words_of(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& raw : split_ws(text)) {
        std::size_t b = 0, e = raw.size();
        auto keep = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
        while (b < e && !keep(raw[b])) ++b;
        while (e > b && !keep(raw[e - 1])) --e;
        if (b < e) out.push_back(to_lower(std::string_view(raw).substr(b, e - b)));
    }
    return out;
}

Score score_transcription(const std::vector<std::string>& keywords, std::string_view transcript) {
    std::map<std::string, int> heard;
    for (const auto& w : words_of(transcript)) ++heard[w];
    Score s;
    for (const auto& k : keywords) {
        ++s.total;
        auto it = heard.find(to_lower(trim(k)));
        if (it != heard.end() && it->second > 0) {
            --it->second;
            ++s.correct;
        }
    }
    return s;
}

std::string carrier_sentence(std::string_view word) {
    return "Please write down the word " + std::string(word) + " now.";
}

namespace {

std::string two_digits(int v) {
    std::string s = std::to_string(v);
    return s.size() < 2 ? "0" + s : s;
}

std::vector<int> lists_for(int list, std::size_t count, CorpusKind kind) {
    if (list == 0) {
        std::vector<int> all(count);
        for (std::size_t i = 0; i < count; ++i) all[i] = static_cast<int>(i) + 1;
        return all;
    }
    if (list < 0 || static_cast<std::size_t>(list) > count)
        throw DataError(std::string(corpus_name(kind)) + " has lists 1.." + std::to_string(count));
    return {list};
}

}  // namespace

std::vector<Prompt> suite_prompts(const Corpora& c, CorpusKind kind, int list, std::uint64_t seed) {
    std::vector<Prompt> out;
    std::mt19937_64 rng(seed);
    switch (kind) {
        case CorpusKind::Drt:
            for (std::size_t i = 0; i < c.drt.size(); ++i) {
                const auto& p = c.drt[i];
                const std::string& w = (rng() & 1) ? p.b : p.a;
                out.push_back({"drt-" + two_digits(static_cast<int>(i + 1)), w, w, {to_lower(w)}, {p.a, p.b}});
            }
            break;
        case CorpusKind::Mrt:
            for (std::size_t i = 0; i < c.mrt.size(); ++i) {
                const auto& set = c.mrt[i];
                const std::string& w = set[rng() % 6];
                out.push_back({"mrt-" + two_digits(static_cast<int>(i + 1)), carrier_sentence(w), w, {to_lower(w)},
                               {set.begin(), set.end()}});
            }
            break;
        case CorpusKind::Pb50:
            for (int l : lists_for(list, c.pb50.size(), kind))
                for (std::size_t i = 0; i < c.pb50[static_cast<std::size_t>(l - 1)].size(); ++i) {
                    const auto& w = c.pb50[static_cast<std::size_t>(l - 1)][i];
                    out.push_back({"pb50-" + two_digits(l) + "-" + two_digits(static_cast<int>(i + 1)),
                                   carrier_sentence(w), w, {to_lower(w)}, {}});
                }
            break;
        case CorpusKind::Harvard:
        case CorpusKind::Haskins: {
            const auto& groups = kind == CorpusKind::Harvard ? c.harvard : c.haskins;
            for (int l : lists_for(list, groups.size(), kind))
                for (const auto& s : groups[static_cast<std::size_t>(l - 1)])
                    out.push_back({std::string(corpus_name(kind)) + "-" + two_digits(s.list) + "-" + two_digits(s.item),
                                   s.text, s.text, s.keywords, {}});
            break;
        }
    }
    return out;
}

std::string answer_key(const std::vector<Prompt>& prompts) {
    std::string out = "#id\ttext\tanswer\tkeywords\tchoices\n";
    for (const auto& p : prompts)
        out += p.id + "\t" + p.text + "\t" + p.answer + "\t" + join(p.keywords, " ") + "\t" + join(p.choices, " ") + "\n";
    return out;
}

std::string score_sheet_template(const std::vector<Prompt>& prompts) {
    std::string out = "#id\ttranscript\n";
    for (const auto& p : prompts) out += p.id + "\t\n";
    return out;
}

SuiteReport run_suite(const std::vector<Prompt>& prompts, const Voice& voice, const ProsodySettings& settings,
                      const Resources& res, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    SuiteReport report;
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    auto worker = [&] {
        for (std::size_t i = next++; i < prompts.size(); i = next++) {
            try {
                auto r = synthesize(prompts[i].text, voice, settings, res);
                write_wav(out_dir + "/" + prompts[i].id + ".wav", r.audio);
                std::lock_guard lock(mu);
                ++report.files;
                report.audio_seconds += r.report.audio_seconds;
                report.synthesis_seconds += r.report.synthesis_seconds;
                report.substitutions += r.report.substitutions.size();
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8u));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    write_file(out_dir + "/answer_key.tsv", answer_key(prompts));
    write_file(out_dir + "/score_sheet.tsv", score_sheet_template(prompts));
    return report;
}

SheetScore score_sheet(const std::string& key_tsv, const std::string& transcripts_tsv) {
    std::map<std::string, std::string> heard;
    {
        std::istringstream in(transcripts_tsv);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (trim(line).empty() || line.front() == '#') continue;
            auto tab = line.find('\t');
            std::string id(trim(line.substr(0, tab)));
            heard[id] = tab == std::string::npos ? "" : line.substr(tab + 1);
        }
    }
    SheetScore out;
    std::istringstream in(key_tsv);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        auto f = split(line, '\t');
        if (f.size() < 3) throw DataError("answer key row needs id, text and answer: " + line);
        auto keywords = f.size() > 3 && !trim(f[3]).empty() ? split_ws(f[3]) : words_of(f[2]);
        auto it = heard.find(std::string(trim(f[0])));
        if (it == heard.end()) ++out.missing;
        Score s = score_transcription(keywords, it == heard.end() ? "" : it->second);
        out.total.correct += s.correct;
        out.total.total += s.total;
        out.rows.emplace_back(f[0], s);
    }
    return out;
}

std::string mosx_form(const std::vector<MosxItem>& items) {
    std::string out = "MOS-X listening questionnaire\n"
                      "Circle one number per question (1 = left anchor, 7 = right anchor).\n\n";
    for (const auto& q : items) {
        out += std::to_string(q.item) + ". " + q.name + ": " + q.question + "\n";
        out += "   " + q.low + "  1  2  3  4  5  6  7  " + q.high + "\n\n";
    }
    return out;
}

}  // namespace tts
