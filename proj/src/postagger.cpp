#include "tts/postagger.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "tts/common.hpp"

namespace tts {

namespace {

size_t tri_index(int a, int b, int c) {
    return static_cast<size_t>((a * kModelTagCount + b) * kModelTagCount + c);
}

size_t bi_index(int a, int b) { return static_cast<size_t>(a * kModelTagCount + b); }

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

std::optional<double> parse_count(const std::string& s) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size() || v < 0 || !std::isfinite(v)) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// Restricted MLE with the zero-count rule: if any candidate count is zero,
// every candidate receives a pseudo-count of half the smallest positive model
// count; an all-zero model yields the uniform distribution.
double restricted_probability(double numerator, double denominator, bool any_zero, size_t k, double floor) {
    if (denominator <= 0 || floor <= 0) return 1.0 / static_cast<double>(k);
    if (!any_zero) return numerator / denominator;
    double alpha = 0.5 * floor;
    return (numerator + alpha) / (denominator + alpha * static_cast<double>(k));
}

}  // namespace

TagReducer TagReducer::load(std::istream& in) {
    TagReducer r;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto f = split(line, '\t');
        if (f.size() < 2 || f[1].size() != 1 || !tag_from_code(f[1][0]))
            throw DataError("tag table line " + std::to_string(line_no) + ": expected tag and reduced code");
        r.map_[to_upper(f[0])] = *tag_from_code(f[1][0]);
    }
    return r;
}

TagReducer TagReducer::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tag table " + path);
    return load(in);
}

TagReducer TagReducer::claws7(const std::string& data_dir) { return load_file(data_dir + "/tagsets/claws7.tsv"); }

TagReducer TagReducer::brown(const std::string& data_dir) { return load_file(data_dir + "/tagsets/brown.tsv"); }

Tag TagReducer::reduce(std::string_view tag) const {
    auto it = map_.find(to_upper(tag));
    if (it == map_.end()) {
        ++unknown_;
        return Tag::Unknown;
    }
    return it->second;
}

std::string normalize_brown_tag(std::string_view raw) {
    std::string t = to_upper(raw);
    if (auto plus = t.find('+'); plus != std::string::npos && plus > 0) t.resize(plus);
    if (t.starts_with("FW-")) t.erase(0, 3);
    bool stripped = true;
    while (stripped && t.size() > 3) {
        stripped = false;
        for (std::string_view suffix : {"-HL", "-TL", "-NC"})
            if (t.ends_with(suffix)) {
                t.erase(t.size() - suffix.size());
                stripped = true;
            }
    }
    if (t.size() > 1 && t.back() == '*') t.pop_back();
    return t;
}

TrigramModel TrigramModel::build(std::istream& in, const TagReducer& reducer, ModelBuildReport* report) {
    TrigramModel m;
    ModelBuildReport rep;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        ++rep.rows;
        auto f = split(line, '\t');
        std::vector<Tag> tags;
        std::vector<std::string> words;
        std::optional<double> freq;
        if (f.size() == 2 && (f[0].size() == 2 || f[0].size() == 3)) {
            freq = parse_count(f[1]);
            for (char c : f[0]) tags.push_back(tag_from_code(c).value_or(Tag::Unknown));
            if (!std::all_of(f[0].begin(), f[0].end(), [](char c) { return tag_from_code(c).has_value(); }))
                freq.reset();
        } else if (f.size() == 7 || f.size() == 5) {
            size_t n = f.size() == 7 ? 3 : 2;
            freq = parse_count(f[0]);
            for (size_t i = 0; i < n; ++i) words.push_back(to_upper(trim(f[1 + i])));
            for (size_t i = 0; i < n; ++i) tags.push_back(reducer.reduce(trim(f[1 + n + i])));
        }
        if (!freq) {
            ++rep.malformed;
            continue;
        }
        bool usable = std::all_of(tags.begin(), tags.end(), [](Tag t) { return model_index(t) >= 0; });
        if (!usable) {
            ++rep.skipped_unknown;
            continue;
        }
        if (tags.size() == 3) {
            m.add_trigram(tags[0], tags[1], tags[2], *freq);
            if (!words.empty()) m.add_override({words[0], words[1], words[2]}, {tags[0], tags[1], tags[2]}, *freq);
        } else {
            m.add_bigram(tags[0], tags[1], *freq);
        }
    }
    rep.overrides = m.overrides_.size();
    if (report) *report = rep;
    return m;
}

void TrigramModel::add_trigram(Tag a, Tag b, Tag c, double count) {
    int ia = model_index(a), ib = model_index(b), ic = model_index(c);
    if (ia < 0 || ib < 0 || ic < 0) throw DataError("trigram with a non-model tag");
    tri_[tri_index(ia, ib, ic)] += count;
}

void TrigramModel::add_bigram(Tag a, Tag b, double count) {
    int ia = model_index(a), ib = model_index(b);
    if (ia < 0 || ib < 0) throw DataError("bigram with a non-model tag");
    bi_[bi_index(ia, ib)] += count;
    has_bigrams_ = true;
}

void TrigramModel::add_override(const WordTrigram& words, const TagTrigram& tags, double freq) {
    auto it = overrides_.find(words);
    if (it == overrides_.end() || freq > it->second.second) overrides_[words] = {tags, freq};
}

double TrigramModel::trigram(Tag a, Tag b, Tag c) const {
    int ia = model_index(a), ib = model_index(b), ic = model_index(c);
    if (ia < 0 || ib < 0 || ic < 0) return 0;
    return tri_[tri_index(ia, ib, ic)];
}

double TrigramModel::bigram(Tag a, Tag b) const {
    int ia = model_index(a), ib = model_index(b);
    if (ia < 0 || ib < 0) return 0;
    if (has_bigrams_) return bi_[bi_index(ia, ib)];
    double s = 0;
    for (int c = 0; c < kModelTagCount; ++c) s += tri_[tri_index(ia, ib, c)];
    return s;
}

double TrigramModel::min_positive() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : tri_)
        if (v > 0) m = std::min(m, v);
    if (has_bigrams_)
        for (double v : bi_)
            if (v > 0) m = std::min(m, v);
    return std::isfinite(m) ? m : 0.0;
}

const std::optional<TagTrigram> TrigramModel::override_for(const WordTrigram& words) const {
    auto it = overrides_.find(words);
    if (it == overrides_.end()) return std::nullopt;
    return it->second.first;
}

void TrigramModel::scale(double factor) {
    for (auto& v : tri_) v *= factor;
    for (auto& v : bi_) v *= factor;
}

std::string TrigramModel::serialize() const {
    std::ostringstream o;
    o << std::setprecision(17);
    o << "# tag trigram model\n";
    if (!has_bigrams_) o << "# no bigram rows: bigrams are trigram counts summed over the third tag\n";
    o << "[trigrams]\n";
    for (int a = 0; a < kModelTagCount; ++a)
        for (int b = 0; b < kModelTagCount; ++b)
            for (int c = 0; c < kModelTagCount; ++c) {
                double v = tri_[tri_index(a, b, c)];
                if (v > 0)
                    o << tag_code(model_tag(a)) << '\t' << tag_code(model_tag(b)) << '\t' << tag_code(model_tag(c))
                      << '\t' << v << '\n';
            }
    if (has_bigrams_) {
        o << "[bigrams]\n";
        for (int a = 0; a < kModelTagCount; ++a)
            for (int b = 0; b < kModelTagCount; ++b) {
                double v = bi_[bi_index(a, b)];
                if (v > 0) o << tag_code(model_tag(a)) << '\t' << tag_code(model_tag(b)) << '\t' << v << '\n';
            }
    }
    o << "[overrides]\n";
    for (const auto& [w, tv] : overrides_)
        o << w[0] << '\t' << w[1] << '\t' << w[2] << '\t' << tag_code(tv.first[0]) << '\t' << tag_code(tv.first[1])
          << '\t' << tag_code(tv.first[2]) << '\t' << tv.second << '\n';
    return o.str();
}

TrigramModel TrigramModel::load(std::istream& in) {
    TrigramModel m;
    std::string line, section;
    size_t line_no = 0;
    auto tag_at = [&](const std::string& s) {
        if (s.size() != 1 || !tag_from_code(s[0]) || model_index(*tag_from_code(s[0])) < 0)
            throw DataError("model line " + std::to_string(line_no) + ": bad tag '" + s + "'");
        return *tag_from_code(s[0]);
    };
    auto count_at = [&](const std::string& s) {
        auto v = parse_count(s);
        if (!v) throw DataError("model line " + std::to_string(line_no) + ": bad count");
        return *v;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            section = line;
            continue;
        }
        auto f = split(line, '\t');
        if (section == "[trigrams]" && f.size() == 4) {
            m.add_trigram(tag_at(f[0]), tag_at(f[1]), tag_at(f[2]), count_at(f[3]));
        } else if (section == "[bigrams]" && f.size() == 3) {
            m.add_bigram(tag_at(f[0]), tag_at(f[1]), count_at(f[2]));
        } else if (section == "[overrides]" && f.size() == 7) {
            m.add_override({f[0], f[1], f[2]}, {tag_at(f[3]), tag_at(f[4]), tag_at(f[5])}, count_at(f[6]));
        } else {
            throw DataError("model line " + std::to_string(line_no) + ": unexpected record");
        }
    }
    return m;
}

TrigramModel TrigramModel::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tag model " + path);
    return load(in);
}

const std::vector<Tag>& open_class_tags() {
    static const std::vector<Tag> open = {Tag::Noun, Tag::Plural, Tag::Verb, Tag::Adjective, Tag::Adverb,
                                          Tag::Interjection};
    return open;
}

std::vector<Tag> candidate_tags(const PosLexicon* lex, std::string_view word) {
    if (all_digits(word)) return {Tag::Noun};
    const PosLexiconEntry* e = lex ? lex->find(word) : nullptr;
    if (!e) return open_class_tags();
    std::vector<Tag> out;
    for (char c : e->codes) {
        std::optional<Tag> t;
        switch (c) {
            case 't': case 'i': t = Tag::Verb; break;
            case 'o': t = Tag::Noun; break;
            case 'I': t = Tag::Article; break;
            case 'h': break;
            default: t = tag_from_code(c); break;
        }
        if (!t || model_index(*t) < 0) continue;
        if (std::find(out.begin(), out.end(), *t) == out.end()) out.push_back(*t);
    }
    return out.empty() ? open_class_tags() : out;
}

double PosTagger::transition(Tag a, Tag b, Tag c, const std::vector<Tag>& next) const {
    double den = 0;
    bool any_zero = false;
    for (Tag t : next) {
        double v = model_.trigram(a, b, t);
        den += v;
        any_zero |= v <= 0;
    }
    return restricted_probability(model_.trigram(a, b, c), den, any_zero, next.size(), model_.min_positive());
}

double PosTagger::start(Tag a, Tag b, const std::vector<Tag>& first, const std::vector<Tag>& second) const {
    double den = 0;
    bool any_zero = false;
    for (Tag x : first)
        for (Tag y : second) {
            double v = model_.bigram(x, y);
            den += v;
            any_zero |= v <= 0;
        }
    return restricted_probability(model_.bigram(a, b), den, any_zero, first.size() * second.size(),
                                  model_.min_positive());
}

std::vector<std::vector<Tag>> PosTagger::pinned_candidates(const std::vector<std::string>& words,
                                                           TaggerOptions opt) const {
    std::vector<std::vector<Tag>> cand;
    cand.reserve(words.size());
    for (const auto& w : words) cand.push_back(candidate_tags(lex_, w));
    if (!opt.use_overrides || words.size() < 3) return cand;
    std::vector<std::optional<Tag>> pin(words.size());
    for (size_t k = 0; k + 2 < words.size(); ++k) {
        auto o = model_.override_for({to_upper(words[k]), to_upper(words[k + 1]), to_upper(words[k + 2])});
        if (!o) continue;
        bool conflict = false;
        for (size_t d = 0; d < 3; ++d)
            if (pin[k + d] && *pin[k + d] != (*o)[d]) conflict = true;
        if (conflict) continue;
        for (size_t d = 0; d < 3; ++d) pin[k + d] = (*o)[d];
    }
    for (size_t k = 0; k < words.size(); ++k)
        if (pin[k]) cand[k] = {*pin[k]};
    return cand;
}

std::vector<Tag> PosTagger::best_sequence(const std::vector<std::vector<Tag>>& cand) const {
    const size_t n = cand.size();
    if (n == 0) return {};
    if (n == 1) return {cand[0].front()};

    // best[k][i][j]: best log-probability of tagging words k+1.. given
    // tags cand[k-1][i], cand[k][j]; choice[k][i][j] is the argmax for word k+1.
    std::vector<std::vector<std::vector<double>>> best(n);
    std::vector<std::vector<std::vector<size_t>>> choice(n);
    for (size_t k = n; k-- > 1;) {
        best[k].assign(cand[k - 1].size(), std::vector<double>(cand[k].size(), 0.0));
        choice[k].assign(cand[k - 1].size(), std::vector<size_t>(cand[k].size(), 0));
        if (k == n - 1) continue;
        for (size_t i = 0; i < cand[k - 1].size(); ++i)
            for (size_t j = 0; j < cand[k].size(); ++j) {
                double top = -std::numeric_limits<double>::infinity();
                size_t arg = 0;
                for (size_t l = 0; l < cand[k + 1].size(); ++l) {
                    double s = std::log(transition(cand[k - 1][i], cand[k][j], cand[k + 1][l], cand[k + 1])) +
                               best[k + 1][j][l];
                    if (s > top + kTieEpsilon) {
                        top = s;
                        arg = l;
                    }
                }
                best[k][i][j] = top;
                choice[k][i][j] = arg;
            }
    }
    double top = -std::numeric_limits<double>::infinity();
    size_t bi = 0, bj = 0;
    for (size_t i = 0; i < cand[0].size(); ++i)
        for (size_t j = 0; j < cand[1].size(); ++j) {
            double s = std::log(start(cand[0][i], cand[1][j], cand[0], cand[1])) + best[1][i][j];
            if (s > top + kTieEpsilon) {
                top = s;
                bi = i;
                bj = j;
            }
        }
    std::vector<Tag> out{cand[0][bi], cand[1][bj]};
    size_t i = bi, j = bj;
    for (size_t k = 1; k + 1 < n; ++k) {
        size_t l = choice[k][i][j];
        out.push_back(cand[k + 1][l]);
        i = j;
        j = l;
    }
    return out;
}

std::vector<Tag> PosTagger::tag(const std::vector<std::string>& words, TaggerOptions opt) const {
    return best_sequence(pinned_candidates(words, opt));
}

std::vector<BrownSentence> load_brown(std::istream& in, const TagReducer& reducer) {
    static const std::vector<std::string> punct = {".", ",", "(", ")", "--", ":", ";", "'", "''", "``", "?", "!"};
    std::vector<BrownSentence> out;
    std::string line;
    while (std::getline(in, line)) {
        BrownSentence s;
        for (const auto& item : split_ws(line)) {
            auto slash = item.rfind('/');
            if (slash == std::string::npos || slash == 0 || slash + 1 == item.size()) continue;
            std::string raw = item.substr(slash + 1);
            std::string norm = normalize_brown_tag(raw);
            if (std::find(punct.begin(), punct.end(), norm) != punct.end()) continue;
            s.words.push_back(item.substr(0, slash));
            s.gold.push_back(reducer.reduce(norm));
        }
        if (!s.words.empty()) out.push_back(std::move(s));
    }
    return out;
}

BrownReport evaluate_brown(const PosTagger& tagger, const std::vector<BrownSentence>& corpus) {
    BrownReport r;
    for (const auto& s : corpus) {
        auto base = tagger.tag(s.words, {.use_overrides = false});
        auto over = tagger.tag(s.words, {.use_overrides = true});
        for (size_t i = 0; i < s.words.size(); ++i) {
            if (s.gold[i] == Tag::Unknown) continue;
            ++r.scored;
            r.correct_base += base[i] == s.gold[i];
            r.correct_overrides += over[i] == s.gold[i];
        }
    }
    return r;
}

}  // namespace tts
