#include "tts/g2p.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "tts/common.hpp"
#include "tts/phoneset.hpp"

namespace tts {

namespace {

// Phone sequences are packed one char per phone for hashing and prefix tests.
char encode_phone(const std::string& base) {
    const auto& syms = arpabet_symbols();
    auto it = std::find(syms.begin(), syms.end(), base);
    if (it == syms.end()) throw DataError("unknown phone '" + base + "'");
    return static_cast<char>('!' + (it - syms.begin()));
}

const std::string& decode_phone(char c) { return arpabet_symbols().at(static_cast<size_t>(c - '!')); }

std::string encode(const PhoneSeq& phones) {
    std::string s;
    s.reserve(phones.size());
    for (const auto& p : phones) s += encode_phone(p);
    return s;
}

PhoneSeq decode(std::string_view code) {
    PhoneSeq out;
    out.reserve(code.size());
    for (char c : code) out.push_back(decode_phone(c));
    return out;
}

bool vowel_letter(char c) {
    switch (c) {
        case 'a': case 'e': case 'i': case 'o': case 'u': case 'w': case 'y': case 'r':
            return true;
        default:
            return false;
    }
}

bool vowel_phone(const std::string& p) {
    static const std::vector<std::string> v = {"AA", "AE", "AH", "AO", "EH", "ER", "IH", "IY", "UH",
                                               "UW", "AW", "AY", "EY", "OW", "OY", "W",  "Y",  "R"};
    return std::find(v.begin(), v.end(), p) != v.end();
}

struct Pron {
    std::string code;
    size_t count;
};

// Most frequent first, ties by code for determinism.
std::vector<Pron> ranked(const std::unordered_map<std::string, size_t>& counts) {
    std::vector<Pron> v;
    v.reserve(counts.size());
    for (const auto& [code, n] : counts) v.push_back({code, n});
    std::sort(v.begin(), v.end(), [](const Pron& a, const Pron& b) {
        return a.count != b.count ? a.count > b.count : a.code < b.code;
    });
    return v;
}

using Tally = std::unordered_map<std::string, std::unordered_map<std::string, size_t>>;

size_t letters_in(const std::string& key) {
    return std::count_if(key.begin(), key.end(), [](char c) { return c != '(' && c != ')'; });
}

}  // namespace

PhoneSeq strip_stress(const std::vector<std::string>& arpabet) {
    PhoneSeq out;
    out.reserve(arpabet.size());
    for (const auto& s : arpabet) out.push_back(split_stress(s).first);
    return out;
}

std::vector<std::pair<std::string, PhoneSeq>> g2p_corpus(const PronunciationLexicon& lex) {
    std::vector<std::pair<std::string, PhoneSeq>> out;
    for (const auto& [key, e] : lex.entries()) {
        if (!is_alpha_word(key)) continue;
        std::string word = to_lower(key);
        for (const auto& p : e.pronunciations) out.emplace_back(word, strip_stress(p));
    }
    return out;
}

std::optional<AlignedWord> initial_align(std::string_view word, const PhoneSeq& phones) {
    if (word.empty() || phones.empty()) return std::nullopt;
    std::vector<std::string> letter_runs;
    std::vector<bool> letter_class;
    for (char c : word) {
        char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        bool v = vowel_letter(l);
        if (letter_runs.empty() || letter_class.back() != v) {
            letter_runs.emplace_back();
            letter_class.push_back(v);
        }
        letter_runs.back() += l;
    }
    std::vector<PhoneSeq> phone_runs;
    std::vector<bool> phone_class;
    for (const auto& p : phones) {
        bool v = vowel_phone(p);
        if (phone_runs.empty() || phone_class.back() != v) {
            phone_runs.emplace_back();
            phone_class.push_back(v);
        }
        phone_runs.back().push_back(p);
    }
    if (letter_runs.size() != phone_runs.size() || letter_class.front() != phone_class.front())
        return std::nullopt;
    AlignedWord out;
    out.word = to_lower(word);
    for (size_t i = 0; i < letter_runs.size(); ++i)
        out.segments.push_back({letter_runs[i], phone_runs[i]});
    return out;
}

ClusterInventory ClusterInventory::build(const std::vector<AlignedWord>& corpus, double keep_ratio) {
    Tally tally;
    for (const auto& w : corpus) {
        std::vector<std::string> codes;
        codes.reserve(w.segments.size());
        for (const auto& s : w.segments) codes.push_back(encode(s.phones));
        for (size_t i = 0; i < w.segments.size(); ++i) {
            std::string letters, code;
            for (size_t j = i; j < w.segments.size(); ++j) {
                letters += w.segments[j].letters;
                if (letters.size() > static_cast<size_t>(GraphoneTable::kMaxLetters)) break;
                code += codes[j];
                ++tally[letters][code];
            }
        }
    }
    ClusterInventory inv;
    for (const auto& [letters, counts] : tally) {
        auto r = ranked(counts);
        std::vector<std::string> kept;
        double top = static_cast<double>(r.front().count);
        for (const auto& p : r)
            if (static_cast<double>(p.count) >= keep_ratio * top) kept.push_back(p.code);
        inv.prons_.emplace(letters, std::move(kept));
    }
    return inv;
}

const std::vector<std::string>* ClusterInventory::pronunciations(std::string_view letters) const {
    auto it = prons_.find(std::string(letters));
    return it == prons_.end() ? nullptr : &it->second;
}

void ClusterInventory::split_into(const std::string& letters, const std::string& code,
                                  std::vector<std::pair<std::string, std::string>>& out) const {
    const size_t n = letters.size(), m = code.size();
    if (n <= 1 || m <= 1) {
        out.emplace_back(letters, code);
        return;
    }
    const size_t longest = std::min<size_t>(n - 1, GraphoneTable::kMaxLetters);
    for (size_t s = longest; s >= 1; --s) {
        std::string tail = letters.substr(n - s);
        const auto* known = pronunciations(tail);
        if (!known) continue;
        for (const auto& q : *known) {
            if (q.size() < m && code.compare(m - q.size(), q.size(), q) == 0) {
                split_into(letters.substr(0, n - s), code.substr(0, m - q.size()), out);
                split_into(tail, q, out);
                return;
            }
        }
    }
    for (size_t s = longest; s >= 1; --s) {
        std::string head = letters.substr(0, s);
        const auto* known = pronunciations(head);
        if (!known) continue;
        for (const auto& q : *known) {
            if (q.size() < m && code.compare(0, q.size(), q) == 0) {
                split_into(head, q, out);
                split_into(letters.substr(s), code.substr(q.size()), out);
                return;
            }
        }
    }
    out.emplace_back(letters, code);
}

std::vector<Segment> ClusterInventory::split(const Segment& seg) const {
    std::vector<std::pair<std::string, std::string>> parts;
    split_into(seg.letters, encode(seg.phones), parts);
    std::vector<Segment> out;
    out.reserve(parts.size());
    for (auto& [l, c] : parts) out.push_back({l, decode(c)});
    return out;
}

std::vector<AlignedWord> refine_alignment(const std::vector<AlignedWord>& aligned,
                                          const ClusterInventory& inventory) {
    std::vector<AlignedWord> out;
    out.reserve(aligned.size());
    for (const auto& w : aligned) {
        AlignedWord r{w.word, {}};
        for (const auto& s : w.segments) {
            auto parts = inventory.split(s);
            r.segments.insert(r.segments.end(), parts.begin(), parts.end());
        }
        out.push_back(std::move(r));
    }
    return out;
}

namespace {

bool fits(const AlignedWord& w) {
    return std::all_of(w.segments.begin(), w.segments.end(), [](const Segment& s) {
        return s.letters.size() <= static_cast<size_t>(GraphoneTable::kMaxLetters);
    });
}

}  // namespace

std::vector<AlignedWord> align_corpus(const std::vector<std::pair<std::string, PhoneSeq>>& corpus,
                                      AlignmentReport* report) {
    AlignmentReport rep;
    rep.words = corpus.size();
    std::vector<AlignedWord> first;
    std::vector<size_t> failed;
    for (size_t i = 0; i < corpus.size(); ++i) {
        auto a = initial_align(corpus[i].first, corpus[i].second);
        if (a) {
            first.push_back(std::move(*a));
        } else {
            failed.push_back(i);
        }
    }
    rep.initially_aligned = first.size();

    auto refined = refine_alignment(first, ClusterInventory::build(first));
    std::vector<AlignedWord> out;
    out.reserve(corpus.size());
    for (auto& w : refined) {
        if (fits(w)) {
            out.push_back(std::move(w));
        } else {
            ++rep.dropped;
        }
    }

    auto second = ClusterInventory::build(out);
    for (size_t i : failed) {
        const auto& [word, phones] = corpus[i];
        AlignedWord w{word, second.split({word, phones})};
        if (fits(w)) {
            out.push_back(std::move(w));
            ++rep.second_pass_aligned;
        } else {
            ++rep.dropped;
        }
    }
    if (report) *report = rep;
    return out;
}

void GraphoneTable::insert(const std::string& graphemes, const PhoneSeq& phonemes, double confidence) {
    if (!(confidence > 0.0) || confidence > 1.0)
        throw DataError("confidence out of range for '" + graphemes + "'");
    entries_[graphemes] = Entry{Graphone{graphemes, phonemes, confidence}, -std::log(confidence)};
}

void GraphoneTable::erase(const std::string& graphemes) { entries_.erase(graphemes); }

const Graphone* GraphoneTable::find(std::string_view graphemes) const {
    auto it = entries_.find(std::string(graphemes));
    return it == entries_.end() ? nullptr : &it->second.g;
}

std::vector<Graphone> GraphoneTable::sorted() const {
    std::vector<Graphone> v;
    v.reserve(entries_.size());
    for (const auto& [k, e] : entries_) v.push_back(e.g);
    std::sort(v.begin(), v.end(),
              [](const Graphone& a, const Graphone& b) { return a.graphemes < b.graphemes; });
    return v;
}

std::string GraphoneTable::edge_key(std::string_view word, size_t i, size_t j) {
    const size_t n = word.size();
    if (i == 0 && j == n) return {};
    std::string key;
    if (i == 0) key += '(';
    key.append(word.substr(i, j - i));
    if (j == n) key += ')';
    return key;
}

namespace {

// Right-to-left shortest path over split positions. Equal costs (within eps)
// prefer fewer pieces, then the earliest next split position.
struct PathNode {
    double cost = std::numeric_limits<double>::infinity();
    int pieces = 0;
    int next = -1;
};

template <typename Weight>
std::vector<PathNode> shortest_paths(size_t n, Weight weight, bool allow_whole) {
    std::vector<PathNode> node(n + 1);
    node[n].cost = 0;
    for (size_t i = n; i-- > 0;) {
        for (size_t j = i + 1; j <= n && j - i <= static_cast<size_t>(GraphoneTable::kMaxLetters); ++j) {
            if (!allow_whole && i == 0 && j == n) continue;
            if (!std::isfinite(node[j].cost)) continue;
            double w = weight(i, j);
            if (!std::isfinite(w)) continue;
            double c = w + node[j].cost;
            int pieces = node[j].pieces + 1;
            auto& cur = node[i];
            bool better = false;
            if (c < cur.cost - GraphoneTable::kTieEpsilon) {
                better = true;
            } else if (std::fabs(c - cur.cost) <= GraphoneTable::kTieEpsilon) {
                better = pieces < cur.pieces;  // equal pieces keep the earlier j
            }
            if (better) cur = {c, pieces, static_cast<int>(j)};
        }
    }
    return node;
}

}  // namespace

DecodeResult GraphoneTable::decode(std::string_view raw) const {
    std::string word = to_lower(raw);
    DecodeResult res;
    const size_t n = word.size();
    if (n == 0) return res;

    auto weight = [&](size_t i, size_t j) {
        auto it = entries_.find(edge_key(word, i, j));
        return it == entries_.end() ? std::numeric_limits<double>::infinity() : it->second.cost;
    };
    auto node = shortest_paths(n, weight, false);

    PhoneSeq phones;
    if (std::isfinite(node[0].cost)) {
        for (size_t i = 0; i < n; i = static_cast<size_t>(node[i].next)) {
            const auto& e = entries_.at(edge_key(word, i, static_cast<size_t>(node[i].next)));
            res.pieces.push_back(e.g.graphemes);
            phones.insert(phones.end(), e.g.phonemes.begin(), e.g.phonemes.end());
        }
    } else {
        res.fallback = true;
        for (char c : word) {
            const auto* g = find(std::string(1, c));
            if (!g) {
                res.unknown_letters += c;
                continue;
            }
            res.pieces.push_back(g->graphemes);
            phones.insert(phones.end(), g->phonemes.begin(), g->phonemes.end());
        }
    }
    for (auto& p : phones) {
        if (!res.phones.empty() && split_stress(res.phones.back()).first == p) continue;
        bool vowel = is_diphthong(p) || is_vowel(*parse_phone(p));
        res.phones.push_back(vowel ? p + "0" : p);
    }
    return res;
}

double GraphoneTable::best_split_cost(const std::string& key) const {
    bool open = !key.empty() && key.front() == '(';
    bool close = !key.empty() && key.back() == ')';
    std::string letters = key.substr(open ? 1 : 0, key.size() - (open ? 1 : 0) - (close ? 1 : 0));
    const size_t n = letters.size();
    if (n < 2) return std::numeric_limits<double>::infinity();
    auto weight = [&](size_t i, size_t j) {
        std::string k;
        if (open && i == 0) k += '(';
        k.append(letters, i, j - i);
        if (close && j == n) k += ')';
        auto it = entries_.find(k);
        return it == entries_.end() ? std::numeric_limits<double>::infinity() : it->second.cost;
    };
    return shortest_paths(n, weight, false)[0].cost;
}

size_t GraphoneTable::prune() {
    std::vector<std::string> doomed;
    for (const auto& [key, e] : entries_) {
        if (letters_in(key) < 2) continue;
        if (best_split_cost(key) < e.cost - kTieEpsilon) doomed.push_back(key);
    }
    for (const auto& k : doomed) entries_.erase(k);
    return doomed.size();
}

std::string GraphoneTable::serialize() const {
    std::ostringstream out;
    out << std::setprecision(17);
    for (const auto& g : sorted()) out << g.graphemes << '\t' << join(g.phonemes, " ") << '\t' << g.confidence << '\n';
    return out.str();
}

GraphoneTable GraphoneTable::load(std::istream& in) {
    GraphoneTable t;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        auto f = split(line, '\t');
        if (f.size() != 3) throw DataError("graphone table line " + std::to_string(line_no) + ": expected 3 fields");
        double conf = 0;
        try {
            conf = std::stod(f[2]);
        } catch (const std::exception&) {
            throw DataError("graphone table line " + std::to_string(line_no) + ": bad confidence");
        }
        auto phones = split_ws(f[1]);
        for (const auto& p : phones) encode_phone(p);
        t.insert(f[0], phones, conf);
    }
    return t;
}

GraphoneTable GraphoneTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open graphone table " + path);
    return load(in);
}

GraphoneTable train(const std::vector<AlignedWord>& corpus, bool prune, TrainReport* report) {
    if (corpus.empty()) throw DataError("cannot train on an empty corpus");
    Tally tally;
    for (const auto& w : corpus) {
        const size_t k = w.segments.size();
        std::vector<std::string> codes;
        codes.reserve(k);
        for (const auto& s : w.segments) codes.push_back(encode(s.phones));
        for (size_t i = 0; i < k; ++i) {
            std::string letters, code;
            for (size_t j = i; j < k; ++j) {
                letters += w.segments[j].letters;
                if (letters.size() > static_cast<size_t>(GraphoneTable::kMaxLetters)) break;
                code += codes[j];
                ++tally[letters][code];
                bool first = i == 0, last = j + 1 == k;
                if (first && last) continue;
                if (first) ++tally["(" + letters][code];
                if (last) ++tally[letters + ")"][code];
            }
        }
    }
    GraphoneTable table;
    for (const auto& [key, counts] : tally) {
        size_t total = 0;
        for (const auto& [c, n] : counts) total += n;
        auto best = ranked(counts).front();
        table.insert(key, decode(best.code), static_cast<double>(best.count) / static_cast<double>(total));
    }
    TrainReport rep;
    rep.keys = table.size();
    if (prune) rep.pruned = table.prune();
    if (report) *report = rep;
    return table;
}

GraphoneTable train_from_lexicon(const PronunciationLexicon& lex, AlignmentReport* align,
                                 TrainReport* report) {
    return train(align_corpus(g2p_corpus(lex), align), true, report);
}

MatchKind classify(const PhoneSeq& pred, const PhoneSeq& gold) {
    if (pred == gold) return MatchKind::Exact;
    auto one_deletion = [](const PhoneSeq& longer, const PhoneSeq& shorter) {
        size_t i = 0;
        while (i < shorter.size() && longer[i] == shorter[i]) ++i;
        return std::equal(shorter.begin() + static_cast<std::ptrdiff_t>(i), shorter.end(),
                          longer.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    };
    if (pred.size() == gold.size()) {
        size_t diff = 0;
        for (size_t i = 0; i < pred.size(); ++i) diff += pred[i] != gold[i];
        return diff == 1 ? MatchKind::OneOff : MatchKind::Incorrect;
    }
    if (pred.size() + 1 == gold.size() && one_deletion(gold, pred)) return MatchKind::Missing;
    if (gold.size() + 1 == pred.size() && one_deletion(pred, gold)) return MatchKind::Extra;
    return MatchKind::Incorrect;
}

AccuracyReport evaluate(const GraphoneTable& table, const PronunciationLexicon& lex) {
    AccuracyReport r;
    for (const auto& [key, e] : lex.entries()) {
        if (!is_alpha_word(key)) continue;
        auto pred = strip_stress(table.decode(key).phones);
        auto best = MatchKind::Incorrect;
        for (const auto& p : e.pronunciations) best = std::min(best, classify(pred, strip_stress(p)));
        switch (best) {
            case MatchKind::Exact: ++r.exact; break;
            case MatchKind::OneOff: ++r.one_off; break;
            case MatchKind::Missing: ++r.missing; break;
            case MatchKind::Extra: ++r.extra; break;
            case MatchKind::Incorrect: ++r.incorrect; break;
        }
    }
    return r;
}

std::string AccuracyReport::format() const {
    std::ostringstream o;
    o << std::fixed << std::setprecision(2);
    o << "category\tcount\tpercent\n";
    o << "exact\t" << exact << '\t' << pct(exact) << "%\n";
    o << "one_off\t" << one_off << '\t' << pct(one_off) << "%\n";
    o << "missing_phone\t" << missing << '\t' << pct(missing) << "%\n";
    o << "extra_phone\t" << extra << '\t' << pct(extra) << "%\n";
    o << "incorrect\t" << incorrect << '\t' << pct(incorrect) << "%\n";
    o << "minor_total\t" << (one_off + missing + extra) << '\t' << pct(one_off + missing + extra) << "%\n";
    o << "total\t" << total() << "\t100.00%\n";
    return o.str();
}

}  // namespace tts
