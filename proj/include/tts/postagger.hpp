#pragma once

#include <array>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tts/lexicon.hpp"
#include "tts/tags.hpp"

namespace tts {

// Maps a fine-grained corpus tagset (CLAWS7, Brown) onto the reduced tags.
class TagReducer {
public:
    // tag<TAB>reduced[<TAB>description] rows; '#' lines are comments.
    static TagReducer load(std::istream& in);
    static TagReducer load_file(const std::string& path);
    static TagReducer claws7(const std::string& data_dir);
    static TagReducer brown(const std::string& data_dir);

    // Case-insensitive; unknown tags give Tag::Unknown and bump unknown_count().
    Tag reduce(std::string_view tag) const;
    size_t unknown_count() const { return unknown_; }
    size_t size() const { return map_.size(); }

private:
    std::map<std::string, Tag> map_;
    mutable size_t unknown_ = 0;
};

// Brown tags carry decorations: -HL/-TL/-NC suffixes, FW- prefixes, '*'
// negation marks and '+' contractions. Returns the bare first component.
std::string normalize_brown_tag(std::string_view tag);

using WordTrigram = std::array<std::string, 3>;
using TagTrigram = std::array<Tag, 3>;

struct ModelBuildReport {
    size_t rows = 0;
    size_t malformed = 0;
    size_t skipped_unknown = 0;  // rows whose reduced tags include '?' or 'h'
    size_t overrides = 0;
};

class TrigramModel {
public:
    // Rows, tab separated:
    //   freq w1 w2 w3 t1 t2 t3   word trigram with corpus tags
    //   freq w1 w2 t1 t2         word bigram with corpus tags
    //   TTT count / TT count     already reduced tag n-gram totals
    static TrigramModel build(std::istream& in, const TagReducer& reducer,
                              ModelBuildReport* report = nullptr);

    void add_trigram(Tag a, Tag b, Tag c, double count);
    void add_bigram(Tag a, Tag b, double count);
    void add_override(const WordTrigram& words, const TagTrigram& tags, double freq);

    double trigram(Tag a, Tag b, Tag c) const;
    // Bigram source counts when any were supplied, else trigrams summed over the third tag.
    double bigram(Tag a, Tag b) const;
    bool has_bigram_source() const { return has_bigrams_; }
    // Smallest nonzero count in the model, 0 for an empty model.
    double min_positive() const;

    const std::map<WordTrigram, std::pair<TagTrigram, double>>& overrides() const { return overrides_; }
    const std::optional<TagTrigram> override_for(const WordTrigram& words) const;

    void scale(double factor);

    // Sections [trigrams], [bigrams], [overrides], tab separated.
    std::string serialize() const;
    static TrigramModel load(std::istream& in);
    static TrigramModel load_file(const std::string& path);

private:
    std::array<double, kModelTagCount * kModelTagCount * kModelTagCount> tri_{};
    std::array<double, kModelTagCount * kModelTagCount> bi_{};
    bool has_bigrams_ = false;
    std::map<WordTrigram, std::pair<TagTrigram, double>> overrides_;
};

// Candidate classes of a word: MPOS codes folded onto the reduced tags
// (t,i -> V; o -> N; I -> D; h dropped), open classes for unknown words,
// noun for all-digit tokens.
std::vector<Tag> candidate_tags(const PosLexicon* lex, std::string_view word);
const std::vector<Tag>& open_class_tags();

struct TaggerOptions {
    bool use_overrides = true;
};

class PosTagger {
public:
    PosTagger(const TrigramModel& model, const PosLexicon* lex) : model_(model), lex_(lex) {}

    std::vector<Tag> tag(const std::vector<std::string>& words, TaggerOptions opt = {}) const;

    // Viterbi over explicit candidate lists (pins already applied).
    std::vector<Tag> best_sequence(const std::vector<std::vector<Tag>>& candidates) const;

    // P(c | a,b) restricted to the candidates, including the zero-count rule.
    double transition(Tag a, Tag b, Tag c, const std::vector<Tag>& next) const;
    // P(a,b) restricted to the pair of candidate lists.
    double start(Tag a, Tag b, const std::vector<Tag>& first, const std::vector<Tag>& second) const;

    std::vector<std::vector<Tag>> pinned_candidates(const std::vector<std::string>& words,
                                                    TaggerOptions opt) const;

    static constexpr double kTieEpsilon = 1e-9;

private:
    const TrigramModel& model_;
    const PosLexicon* lex_;
};

struct BrownSentence {
    std::vector<std::string> words;
    std::vector<Tag> gold;  // Tag::Unknown where the corpus tag has no mapping
};

// One sentence per line, whitespace separated word/tag items; punctuation
// items are dropped.
std::vector<BrownSentence> load_brown(std::istream& in, const TagReducer& reducer);

struct BrownReport {
    size_t scored = 0;
    size_t correct_base = 0;
    size_t correct_overrides = 0;
    double base() const { return scored ? static_cast<double>(correct_base) / static_cast<double>(scored) : 0; }
    double with_overrides() const {
        return scored ? static_cast<double>(correct_overrides) / static_cast<double>(scored) : 0;
    }
};

BrownReport evaluate_brown(const PosTagger& tagger, const std::vector<BrownSentence>& corpus);

}  // namespace tts
