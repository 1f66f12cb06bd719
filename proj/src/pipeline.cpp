#include "tts/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "tts/common.hpp"

namespace tts {

using nlohmann::json;

ResourcePaths ResourcePaths::defaults(const std::string& data_dir) {
    ResourcePaths p;
    p.lexicon = data_dir + "/cmudict.dict";
    p.homographs = data_dir + "/homographs.tsv";
    p.pos_lexicon = data_dir + "/pos/mpos_sample.txt";
    p.trigrams = data_dir + "/pos/trigrams.tsv";
    p.claws7 = data_dir + "/tagsets/claws7.tsv";
    p.frequencies = data_dir + "/freq/bnc_sample.txt";
    return p;
}

Resources Resources::load(const ResourcePaths& paths) {
    Resources r;
    r.lexicon = PronunciationLexicon::load_cmudict_file(paths.lexicon);
    if (!paths.homographs.empty()) {
        std::ifstream in(paths.homographs);
        if (!in) throw IoError("cannot open homograph table " + paths.homographs);
        r.lexicon.load_homographs(in);
    }
    r.pos_lexicon = PosLexicon::load_mpos_file(paths.pos_lexicon);
    r.pos_lexicon.dedup_case_variants();
    auto reducer = TagReducer::load_file(paths.claws7);
    std::ifstream tri(paths.trigrams);
    if (!tri) throw IoError("cannot open trigram counts " + paths.trigrams);
    r.trigrams = TrigramModel::build(tri, reducer);
    r.g2p = paths.g2p.empty() ? train_from_lexicon(r.lexicon) : GraphoneTable::load_file(paths.g2p);
    if (!paths.frequencies.empty()) r.frequencies = load_frequency_table_file(paths.frequencies);
    return r;
}

std::string_view source_name(PronSource s) {
    switch (s) {
        case PronSource::Homograph: return "homograph";
        case PronSource::Lexicon: return "lexicon";
        case PronSource::Number: return "number";
        case PronSource::Mixed: return "mixed";
        case PronSource::G2P: return "g2p";
        case PronSource::Punct: return "punct";
    }
    return "punct";
}

std::vector<std::string> pronounce_word(const std::string& word, const Resources& res, std::optional<Tag> tag,
                                        PronSource* source) {
    PronSource src = PronSource::Lexicon;
    std::vector<std::string> out;
    if (const LexiconEntry* e = res.lexicon.find(word)) {
        if (tag && e->homograph_selector.contains(*tag)) src = PronSource::Homograph;
        out = *res.lexicon.lookup(word, tag);
    } else if (word.find('-') != std::string::npos) {
        for (const auto& part : split(word, '-')) {
            if (part.empty()) continue;
            PronSource ps;
            auto p = pronounce_word(part, res, std::nullopt, &ps);
            if (ps == PronSource::G2P) src = PronSource::G2P;
            out.insert(out.end(), p.begin(), p.end());
        }
    } else {
        std::string letters;
        for (char c : word)
            if (std::isalpha(static_cast<unsigned char>(c))) letters += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        src = PronSource::G2P;
        if (!letters.empty()) out = res.g2p.decode(letters).phones;
    }
    if (source) *source = src;
    return out;
}

namespace {

std::vector<std::string> pronounce_number(std::string_view text, const Resources& res) {
    std::vector<std::string> out;
    for (const auto& w : number_to_words(text)) {
        auto p = pronounce_word(w, res);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

std::vector<std::string> pronounce_mixed(std::string_view text, const Resources& res) {
    std::vector<std::string> out;
    for (const auto& c : split_mixed(text)) {
        std::vector<std::string> p;
        switch (c.kind) {
            case ChunkKind::Alpha: p = pronounce_word(c.text, res); break;
            case ChunkKind::Numeric: p = pronounce_number(c.text, res); break;
            case ChunkKind::Symbol: p = pronounce_word(std::string(symbol_word(c.text[0])), res); break;
            case ChunkKind::Punct: break;
        }
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

// "the" before a vowel takes its IY0 variant, otherwise its AH0 variant.
void apply_the_rule(std::vector<AnalyzedToken>& toks, const Resources& res) {
    const LexiconEntry* e = res.lexicon.find("the");
    if (!e) return;
    auto variant = [&](std::string_view last) -> const Pronunciation* {
        for (const auto& p : e->pronunciations)
            if (!p.empty() && p.back() == last) return &p;
        return nullptr;
    };
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (toks[i].source != PronSource::Lexicon || to_lower(toks[i].text) != "the") continue;
        bool vowel = false;
        for (std::size_t j = i + 1; j < toks.size() && toks[j].sentence == toks[i].sentence; ++j) {
            if (toks[j].kind == TokenKind::Punct) break;
            if (toks[j].phones.empty()) continue;
            vowel = is_vowel(toks[j].phones.front().phone);
            break;
        }
        if (const Pronunciation* p = variant(vowel ? "IY0" : "AH0")) {
            toks[i].arpabet = *p;
            toks[i].phones = to_phones(*p);
        }
    }
}

}  // namespace

std::vector<AnalyzedToken> preprocess(const std::string& text, const Resources& res) {
    std::vector<AnalyzedToken> out;
    for (auto& t : tokenize(normalize_apostrophes(text))) {
        AnalyzedToken a;
        a.text = std::move(t.text);
        a.kind = t.kind;
        a.sentence = t.sentence_index;
        out.push_back(std::move(a));
    }

    PosTagger tagger(res.trigrams, &res.pos_lexicon);
    std::size_t i = 0;
    while (i < out.size()) {
        std::size_t end = i;
        while (end < out.size() && out[end].sentence == out[i].sentence) ++end;
        std::vector<std::size_t> idx;
        std::vector<std::string> words;
        for (std::size_t k = i; k < end; ++k)
            if (out[k].kind != TokenKind::Punct) {
                idx.push_back(k);
                words.push_back(out[k].text);
            }
        auto tags = tagger.tag(words);
        for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]].tag = tags[k];
        i = end;
    }

    for (auto& t : out) {
        switch (t.kind) {
            case TokenKind::Punct: t.source = PronSource::Punct; break;
            case TokenKind::Word: t.arpabet = pronounce_word(t.text, res, t.tag, &t.source); break;
            case TokenKind::Number:
                t.source = PronSource::Number;
                t.arpabet = pronounce_number(t.text, res);
                break;
            case TokenKind::Mixed:
                t.source = PronSource::Mixed;
                t.arpabet = pronounce_mixed(t.text, res);
                break;
        }
        t.phones = to_phones(t.arpabet);
    }
    apply_the_rule(out, res);
    return out;
}

json analysis_json(const std::vector<AnalyzedToken>& tokens) {
    json rows = json::array();
    for (const auto& t : tokens) {
        std::vector<std::string> phones;
        for (const auto& p : t.phones) phones.push_back(format_phone(p));
        rows.push_back({{"token", t.text},
                        {"kind", std::string(kind_name(t.kind))},
                        {"sentence", t.sentence},
                        {"tag", t.kind == TokenKind::Punct ? std::string() : std::string(1, tag_code(t.tag))},
                        {"pronunciation", t.kind == TokenKind::Punct ? t.text : join(t.arpabet, " ")},
                        {"phones", join(phones, " ")},
                        {"source", std::string(source_name(t.source))}});
    }
    return rows;
}

std::vector<UtterancePhone> build_utterance(const std::vector<AnalyzedToken>& tokens, const ProsodyPlan& plan,
                                            const std::vector<int>& token_banks) {
    const UtterancePhone silence{Phone::X, {}, 0.0, 0};
    std::vector<UtterancePhone> u{silence};
    bool spoken = false;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& t = tokens[i];
        if (t.kind == TokenKind::Punct) {
            double pause = plan.tokens[i].pause;
            if (pause <= 0 || !spoken) continue;
            if (u.back().phone != Phone::X) u.push_back(silence);
            u.back().pause += pause;
            continue;
        }
        int bank = i < token_banks.size() ? token_banks[i] : 0;
        for (std::size_t k = 0; k < t.phones.size(); ++k) {
            Phone p = t.phones[k].phone;
            if (p == u.back().phone) continue;
            u.push_back({p, plan.tokens[i].phones[k], 0.0, bank});
            spoken = true;
        }
    }
    if (u.back().phone != Phone::X) u.push_back(silence);
    u.back().pause = 0.0;  // trailing pauses are not rendered
    if (!spoken) u.resize(1);
    return u;
}

std::string_view unit_kind_name(UnitKind k) {
    switch (k) {
        case UnitKind::Diphone: return "diphone";
        case UnitKind::Burst: return "burst";
        case UnitKind::Silence: return "silence";
    }
    return "diphone";
}

namespace {

std::string diphone_name(Diphone d) { return std::string(symbol(d.first)) + "-" + std::string(symbol(d.second)); }

ShiftSpec spec_between(const PhoneProsody& a, const PhoneProsody& b) {
    return {a.pitch, b.pitch, a.duration, b.duration, a.volume, b.volume};
}

}  // namespace

UnitPlan to_units(const std::vector<UtterancePhone>& u, const std::vector<const DiphoneBank*>& banks) {
    UnitPlan out;
    auto bank_at = [&](int i) { return banks.at(static_cast<std::size_t>(i)); };
    auto clip = [&](Diphone d, const ShiftSpec& s, int bank, bool bridge = false) {
        out.units.push_back({UnitKind::Diphone, d, s, 0.0, bank, bridge});
    };
    auto burst = [&](Phone p, const ShiftSpec& s, int bank, bool bridge = false) {
        if (!bank_at(bank)->mono(p)) {
            out.substitutions.push_back("missing burst " + std::string(symbol(p)) + ": skipped");
            return;
        }
        out.units.push_back({UnitKind::Burst, {p, Phone::X}, s, 0.0, bank, bridge});
    };
    auto silence = [&](double seconds, int bank, bool bridge) {
        out.units.push_back({UnitKind::Silence, {Phone::X, Phone::X}, {}, seconds, bank, bridge});
    };
    // Looks up d, bridging through silence when absent.
    auto transition = [&](Diphone d, const PhoneProsody& pa, const PhoneProsody& pb, int bank) {
        const DiphoneBank* b = bank_at(bank);
        if (b->find(d)) {
            clip(d, spec_between(pa, pb), bank);
            return;
        }
        auto [p1, p2] = d;
        if (p1 == Phone::X || p2 == Phone::X) {
            out.substitutions.push_back("missing " + diphone_name(d) + ": skipped");
            return;
        }
        std::string how = "missing " + diphone_name(d) + ": ";
        if (category(p1) == Category::Stop) {
            burst(p1, spec_between(pa, pa), bank, true);
            how += std::string(symbol(p1)) + " burst";
        } else if (b->find({p1, Phone::X})) {
            clip({p1, Phone::X}, spec_between(pa, pa), bank, true);
            how += diphone_name({p1, Phone::X});
        } else {
            how += "(no exit)";
        }
        silence(0.03, bank, true);
        how += " + 30 ms + ";
        if (b->find({Phone::X, p2})) {
            clip({Phone::X, p2}, spec_between(pb, pb), bank, true);
            how += diphone_name({Phone::X, p2});
        } else {
            how += "(no entry)";
        }
        out.substitutions.push_back(how);
    };

    for (std::size_t k = 0; k + 1 < u.size(); ++k) {
        const auto& a = u[k];
        const auto& b = u[k + 1];
        if (a.phone == Phone::X && a.pause > 0 && k > 0) silence(a.pause, a.bank, false);
        Category ca = category(a.phone), cb = category(b.phone);
        const PhoneProsody& pa = a.phone == Phone::X ? b.prosody : a.prosody;
        const PhoneProsody& pb = b.phone == Phone::X ? a.prosody : b.prosody;
        int bank = a.phone == Phone::X ? b.bank : a.bank;
        if (ca == Category::Silence && cb == Category::Silence) continue;
        if (cb == Category::Stop) {
            if (ca == Category::Stop) burst(a.phone, spec_between(pa, pa), a.bank);
            else if (ca != Category::Silence) transition({a.phone, Phone::X}, pa, pa, a.bank);
            continue;
        }
        if (ca == Category::Stop && cb == Category::Silence) {
            burst(a.phone, spec_between(pa, pa), a.bank);
            continue;
        }
        transition({a.phone, b.phone}, pa, pb, bank);
    }
    return out;
}

json SynthReport::to_json() const {
    return {{"substitutions", substitutions},
            {"warnings", warnings},
            {"clips", clips},
            {"clipped_samples", clipped_samples},
            {"shifted_samples", shifted_samples},
            {"overlap_samples", overlap_samples},
            {"pause_samples", pause_samples},
            {"synthesis_seconds", synthesis_seconds},
            {"audio_seconds", audio_seconds},
            {"real_time_factor", real_time_factor()}};
}

namespace {

bool is_open_bracket(const std::string& s) { return s == "(" || s == "[" || s == "{" || s == "<"; }

std::string closing_for(const std::string& open) {
    if (open == "(") return ")";
    if (open == "[") return "]";
    if (open == "{") return "}";
    return ">";
}

// Appends clip to out with maximum-aligned crossfading. Only the last 40 ms of
// out can take part in the overlap, so the join is computed on that tail.
std::size_t append_smoothed(std::vector<double>& out, const std::vector<double>& clip, Phone connective,
                            int sample_rate) {
    std::size_t tail_len = std::min(out.size(), 2 * static_cast<std::size_t>(sample_rate / 50));
    std::vector<double> tail(out.end() - static_cast<std::ptrdiff_t>(tail_len), out.end());
    auto r = smooth_concat(tail, clip, connective, sample_rate);
    out.resize(out.size() - tail_len);
    out.insert(out.end(), r.samples.begin(), r.samples.end());
    return r.overlap;
}

}  // namespace

SynthResult synthesize(const std::string& text, const Voice& voice, const ProsodySettings& settings,
                       const Resources& res, SynthOptions opt) {
    auto t0 = std::chrono::steady_clock::now();
    SynthResult r;
    if (!voice.main && !opt.plan_only) throw DataError("no diphone bank loaded");

    r.tokens = preprocess(text, res);
    std::vector<PlanToken> plan_tokens;
    for (const auto& t : r.tokens)
        plan_tokens.push_back({t.text, t.tag, t.phones, t.kind == TokenKind::Punct, static_cast<std::size_t>(t.sentence)});
    r.plan = plan(plan_tokens, settings, res.frequencies ? &*res.frequencies : nullptr);

    std::vector<const DiphoneBank*> banks{voice.main};
    std::map<std::string, int> bank_index;
    for (const auto& [name, b] : voice.alternates) {
        bank_index[name] = static_cast<int>(banks.size());
        banks.push_back(b);
    }
    std::vector<int> token_banks(r.tokens.size(), 0);
    std::vector<std::string> open;
    for (std::size_t i = 0; i < r.tokens.size(); ++i) {
        const auto& t = r.tokens[i];
        if (t.kind == TokenKind::Punct) {
            if (is_open_bracket(t.text)) open.push_back(t.text);
            else if (!open.empty() && t.text == closing_for(open.back())) open.pop_back();
            continue;
        }
        if (open.empty()) continue;
        auto sb = settings.bracket_banks.find(open.back());
        if (sb == settings.bracket_banks.end()) continue;
        auto bi = bank_index.find(sb->second);
        if (bi != bank_index.end()) token_banks[i] = bi->second;
        else r.report.warnings.push_back("bracket bank '" + sb->second + "' not loaded; using the main bank");
    }

    auto utterance = build_utterance(r.tokens, r.plan, token_banks);
    if (!voice.main) return r;
    r.units = to_units(utterance, banks);
    r.report.substitutions = r.units.substitutions;
    if (opt.plan_only) return r;

    int rate = voice.main->sample_rate;
    std::vector<double>& out = r.audio.samples;
    r.audio.sample_rate = rate;
    Phone last = Phone::X;  // second phone of the previous clip
    for (const auto& unit : r.units.units) {
        if (unit.kind == UnitKind::Silence) {
            auto n = static_cast<std::size_t>(std::lround(unit.seconds * rate));
            out.insert(out.end(), n, 0.0);
            r.report.pause_samples += n;
            last = Phone::X;
            continue;
        }
        const DiphoneBank& bank = *banks[static_cast<std::size_t>(unit.bank)];
        const std::vector<double>* src =
            unit.kind == UnitKind::Burst ? bank.mono(unit.diphone.first) : bank.find(unit.diphone);
        auto shifted = shift_diphone(*src, unit.diphone.first, unit.diphone.second, unit.spec,
                                     bank.pulse_smoothing_ms, rate);
        for (auto& w : shifted.warnings) r.report.warnings.push_back(diphone_name(unit.diphone) + ": " + w);
        r.report.clipped_samples += shifted.clipped;
        r.report.shifted_samples += shifted.samples.size();
        ++r.report.clips;
        Phone connective = last == unit.diphone.first ? last : Phone::X;
        r.report.overlap_samples += append_smoothed(out, shifted.samples, connective, rate);
        last = unit.diphone.second;
    }
    r.report.audio_seconds = r.audio.seconds();
    r.report.synthesis_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace tts
