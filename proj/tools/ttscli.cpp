#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "tts/bank.hpp"
#include "tts/common.hpp"
#include "tts/eval.hpp"
#include "tts/extractor.hpp"
#include "tts/fixture.hpp"
#include "tts/g2p.hpp"
#include "tts/pipeline.hpp"
#include "tts/postagger.hpp"
#include "tts/service.hpp"
#include "tts/signal_ops.hpp"
#include "tts/spectral.hpp"
#include "tts/wav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tts;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kIo = 3 };

// Resolved after parsing: flags > TTS_* environment > --config file > defaults.
struct Config {
    std::string config;
    std::string data_dir;
    std::string lexicon, homographs, pos_lexicon, trigrams, claws7, g2p_table, frequencies;
    std::string bank, settings;
    std::uint64_t seed = 1;
    bool seed_given = false;
    int port = 8080;
    std::string log_level = "warn";

    std::string data(const std::string& rel) const { return data_dir + "/" + rel; }
};

struct Setting {
    std::string key;
    CLI::Option* opt;
    std::function<void(const json&)> assign;
};

Config cfg;
std::vector<Setting> settings_table;

int log_rank(const std::string& level) {
    if (level == "error") return 0;
    if (level == "info") return 2;
    return 1;
}

void log(const std::string& level, const std::string& msg) {
    if (log_rank(level) <= log_rank(cfg.log_level)) std::cerr << level << ": " << msg << "\n";
}

void require_file(const std::string& path, const std::string& what) {
    if (path.empty()) throw DataError(what + " not given");
    if (!fs::exists(path)) throw DataError(what + " not found: " + path);
}

void add_string(CLI::App& app, const std::string& key, std::string& target, const std::string& help) {
    auto flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    auto env = "TTS_" + key;
    std::transform(env.begin(), env.end(), env.begin(), [](unsigned char c) { return std::toupper(c); });
    auto* opt = app.add_option(flag, target, help)->envname(env);
    settings_table.push_back({key, opt, [&target](const json& v) { target = v.get<std::string>(); }});
}

void resolve_config() {
    json file = json::object();
    if (!cfg.config.empty()) {
        require_file(cfg.config, "config file");
        try {
            file = json::parse(read_file(cfg.config));
        } catch (const json::exception& e) {
            throw DataError("config file " + cfg.config + ": " + e.what());
        }
        if (!file.is_object()) throw DataError("config file must hold a JSON object");
    }
    for (auto& s : settings_table) {
        if (s.opt->count() > 0 || !file.contains(s.key)) continue;
        try {
            s.assign(file.at(s.key));
        } catch (const json::exception& e) {
            throw DataError("config key " + s.key + ": " + e.what());
        }
    }
    if (cfg.data_dir.empty()) cfg.data_dir = default_data_dir();
    auto fill = [](std::string& p, const std::string& rel) {
        if (p.empty()) p = cfg.data(rel);
    };
    fill(cfg.lexicon, "cmudict.dict");
    fill(cfg.homographs, "homographs.tsv");
    fill(cfg.pos_lexicon, "pos/mpos_sample.txt");
    fill(cfg.trigrams, "pos/trigrams.tsv");
    fill(cfg.claws7, "tagsets/claws7.tsv");
    fill(cfg.frequencies, "freq/bnc_sample.txt");
    fill(cfg.settings, "prosody/default.json");
}

Resources load_resources() {
    ResourcePaths p;
    p.lexicon = cfg.lexicon;
    p.homographs = cfg.homographs;
    p.pos_lexicon = cfg.pos_lexicon;
    p.trigrams = cfg.trigrams;
    p.claws7 = cfg.claws7;
    p.g2p = cfg.g2p_table;
    p.frequencies = cfg.frequencies;
    require_file(p.lexicon, "lexicon");
    require_file(p.homographs, "homograph table");
    require_file(p.pos_lexicon, "POS lexicon");
    require_file(p.trigrams, "trigram counts");
    require_file(p.claws7, "CLAWS7 tag map");
    if (!p.g2p.empty()) require_file(p.g2p, "G2P table");
    require_file(p.frequencies, "frequency list");
    if (p.g2p.empty()) log("info", "training G2P from " + p.lexicon);
    return Resources::load(p);
}

ProsodySettings load_settings() {
    require_file(cfg.settings, "settings file");
    auto s = ProsodySettings::load_file(cfg.settings);
    if (cfg.seed_given) s.seed = cfg.seed;
    return s;
}

DiphoneBank load_bank(const std::string& dir) {
    if (dir.empty()) throw DataError("no bank given (--bank or TTS_BANK)");
    return DiphoneBank::load(dir);
}

std::pair<std::string, std::string> split_assignment(const std::string& s) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) throw DataError("expected name=dir, got " + s);
    return {s.substr(0, eq), s.substr(eq + 1)};
}

std::map<std::string, DiphoneBank> load_alternates(const std::vector<std::string>& specs) {
    std::map<std::string, DiphoneBank> out;
    for (const auto& spec : specs) {
        auto [name, dir] = split_assignment(spec);
        auto bank = DiphoneBank::load(dir);
        bank.name = name;
        out.emplace(name, std::move(bank));
    }
    return out;
}

Phone phone_arg(const std::string& s) {
    auto p = parse_phone(s);
    if (!p) throw DataError("unknown phone " + s);
    return *p;
}

std::pair<double, double> pair_arg(const std::string& s, const std::string& what) {
    auto parts = split(s, ',');
    try {
        if (parts.size() == 1) return {std::stod(parts[0]), std::stod(parts[0])};
        if (parts.size() == 2) return {std::stod(parts[0]), std::stod(parts[1])};
    } catch (const std::exception&) {
    }
    throw DataError(what + " expects a or a,b; got " + s);
}

SilenceProfile profile_from(const std::string& silence_wav) {
    if (silence_wav.empty()) return {};
    require_file(silence_wav, "silence recording");
    return calibrate_silence(read_wav(silence_wav));
}

DiphoneBank open_or_create(const std::string& dir) {
    if (fs::exists(fs::path(dir) / "manifest.txt")) return DiphoneBank::load(dir);
    DiphoneBank bank;
    bank.name = fs::path(dir).filename().string();
    return bank;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) log("warn", w);
}

std::string ms(std::size_t samples, int rate) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(1) << 1000.0 * static_cast<double>(samples) / rate << " ms";
    return o.str();
}

int cmd_train_g2p(const std::string& dict, const std::string& out) {
    require_file(dict, "dictionary");
    auto lex = PronunciationLexicon::load_cmudict_file(dict);
    AlignmentReport align;
    TrainReport train;
    auto table = train_from_lexicon(lex, &align, &train);
    write_file(out, table.serialize());
    std::cout << "words " << align.words << "\naligned " << align.initially_aligned << " + "
              << align.second_pass_aligned << "\ndropped " << align.dropped << "\ngraphones " << train.keys
              << "\npruned " << train.pruned << "\n";
    return kOk;
}

GraphoneTable table_or_train(PronunciationLexicon* lex_out = nullptr) {
    if (!cfg.g2p_table.empty() || lex_out) require_file(cfg.lexicon, "lexicon");
    if (!cfg.g2p_table.empty()) {
        require_file(cfg.g2p_table, "G2P table");
        if (lex_out) *lex_out = PronunciationLexicon::load_cmudict_file(cfg.lexicon);
        return GraphoneTable::load_file(cfg.g2p_table);
    }
    require_file(cfg.lexicon, "lexicon");
    log("info", "training G2P from " + cfg.lexicon);
    auto lex = PronunciationLexicon::load_cmudict_file(cfg.lexicon);
    auto table = train_from_lexicon(lex);
    if (lex_out) *lex_out = std::move(lex);
    return table;
}

int cmd_g2p(const std::vector<std::string>& words) {
    auto table = table_or_train();
    for (const auto& w : words) {
        auto r = table.decode(to_lower(w));
        std::cout << w << "\t" << join(r.phones, " ") << "\t" << join(r.pieces, " ");
        if (r.fallback) std::cout << "\t(fallback" << (r.unknown_letters.empty() ? "" : ": " + r.unknown_letters) << ")";
        std::cout << "\n";
    }
    return kOk;
}

int cmd_eval_g2p() {
    PronunciationLexicon lex;
    auto table = table_or_train(&lex);
    std::cout << evaluate(table, lex).format();
    return kOk;
}

struct TaggerParts {
    PosLexicon lex;
    TrigramModel model;
};

TaggerParts load_tagger() {
    require_file(cfg.pos_lexicon, "POS lexicon");
    require_file(cfg.trigrams, "trigram counts");
    require_file(cfg.claws7, "CLAWS7 tag map");
    TaggerParts t;
    t.lex = PosLexicon::load_mpos_file(cfg.pos_lexicon);
    t.lex.dedup_case_variants();
    std::ifstream in(cfg.trigrams);
    t.model = TrigramModel::build(in, TagReducer::load_file(cfg.claws7));
    return t;
}

int cmd_tag(const std::string& sentence, bool no_overrides) {
    auto parts = load_tagger();
    PosTagger tagger(parts.model, &parts.lex);
    std::vector<std::string> words;
    for (const auto& t : tokenize(sentence))
        if (t.kind != TokenKind::Punct) words.push_back(t.text);
    auto tags = tagger.tag(words, {.use_overrides = !no_overrides});
    for (std::size_t i = 0; i < words.size(); ++i) std::cout << words[i] << "\t" << tag_code(tags[i]) << "\n";
    return kOk;
}

int cmd_eval_pos(std::string brown) {
    if (brown.empty()) brown = cfg.data("pos/brown_sample.txt");
    require_file(brown, "Brown corpus");
    auto parts = load_tagger();
    PosTagger tagger(parts.model, &parts.lex);
    std::ifstream in(brown);
    auto corpus = load_brown(in, TagReducer::brown(cfg.data_dir));
    auto r = evaluate_brown(tagger, corpus);
    std::cout << std::fixed << std::setprecision(2) << "sentences " << corpus.size() << "\nscored words " << r.scored
              << "\nbase " << 100 * r.base() << "%\nwith overrides " << 100 * r.with_overrides() << "%\n";
    return kOk;
}

int cmd_calibrate(const std::string& wav) {
    require_file(wav, "silence recording");
    auto p = calibrate_silence(read_wav(wav));
    std::cout << std::setprecision(9) << "amplitude_threshold " << p.amplitude_threshold << "\nrms_threshold "
              << p.rms_threshold << "\n";
    return kOk;
}

int cmd_extract_mono(const std::string& wav, const std::string& phone, const std::string& silence,
                     const std::string& bank_dir) {
    require_file(wav, "recording");
    Phone p = phone_arg(phone);
    auto audio = read_wav(wav);
    auto rec = section_monophone(audio, p, profile_from(silence));
    print_warnings(rec.warnings);
    int rate = audio.sample_rate;
    std::cout << phone << "\tspan " << ms(rec.begin, rate) << " - " << ms(rec.end, rate);
    if (is_persistent(p))
        std::cout << "\tonset " << ms(rec.onset.size(), rate) << "\tsustain " << ms(rec.sustain.size(), rate)
                  << "\toffset " << ms(rec.offset.size(), rate);
    else
        std::cout << "\tburst " << ms(rec.burst.size(), rate);
    std::cout << "\n";
    if (bank_dir.empty()) return kOk;

    auto bank = open_or_create(bank_dir);
    auto fresh = assemble_bank({rec}, {});
    for (auto& [d, clip] : fresh.diphones) bank.add(d, clip, fresh.provenance[DiphoneBank::clip_file(d)] + " (" + wav + ")");
    for (auto& [m, clip] : fresh.monophones) bank.add_mono(m, clip, fresh.provenance[DiphoneBank::mono_file(m)] + " (" + wav + ")");
    bank.save(bank_dir);
    return kOk;
}

int cmd_extract_di(const std::string& wav, const std::string& a, const std::string& b, const std::string& silence,
                   const std::string& bank_dir) {
    require_file(wav, "recording");
    Phone p1 = phone_arg(a), p2 = phone_arg(b);
    if (!is_persistent(p2)) throw DataError("second phone must be persistent");
    auto bank = load_bank(bank_dir);
    auto audio = read_wav(wav);
    auto profile = profile_from(silence);
    auto reference = [&](Phone p) {
        const auto* sustain = bank.mono(p);
        if (!sustain || sustain->empty())
            throw DataError("bank has no sustain for " + std::string(symbol(p)) + "; run extract-mono first");
        return average_spectrum(*sustain, 0, sustain->size(), bank.grid);
    };
    DiphoneClip clip = is_persistent(p1) ? extract_persistent_diphone(audio, reference(p1), reference(p2), profile)
                                         : extract_stop_diphone(audio, reference(p2), profile);
    print_warnings(clip.warnings);
    int rate = audio.sample_rate;
    std::cout << a << "-" << b << "\tclip " << ms(clip.begin, rate) << " - " << ms(clip.end, rate) << "\tboundary "
              << ms(clip.boundary, rate) << "\n";
    bank.add({p1, p2}, clip.samples, "extracted from " + wav);
    bank.save(bank_dir);
    return kOk;
}

int cmd_bank_check(const std::string& dir) {
    auto bank = load_bank(dir);
    auto report = bank.check();
    std::cout << bank.name << ": " << bank.diphones.size() << " diphones, " << bank.monophones.size()
              << " monophones\n"
              << report.format();
    return report.complete() ? kOk : kData;
}

int cmd_say(const std::string& text, const std::string& out, const std::vector<std::string>& alts,
            const std::string& plan_out) {
    auto main = load_bank(cfg.bank);
    auto alternates = load_alternates(alts);
    auto settings = load_settings();
    auto res = load_resources();
    Voice voice{&main, {}};
    for (const auto& [n, b] : alternates) voice.alternates[n] = &b;
    auto r = synthesize(text, voice, settings, res);
    print_warnings(r.report.warnings);
    write_wav(out, r.audio);
    if (!plan_out.empty()) write_file(plan_out, plan_json(r).dump(2));
    std::ostringstream o;
    o << std::fixed << std::setprecision(3) << r.report.audio_seconds << " s audio, rtf "
      << r.report.real_time_factor() << ", " << r.report.substitutions.size() << " substitutions, "
      << r.report.clips << " clips";
    log("info", o.str());
    return kOk;
}

int cmd_preprocess(const std::string& text, bool as_json) {
    auto res = load_resources();
    auto toks = preprocess(text, res);
    if (as_json) {
        std::cout << analysis_json(toks).dump(2) << "\n";
        return kOk;
    }
    for (const auto& t : toks) {
        std::string tag = t.kind == TokenKind::Punct ? "" : std::string(1, tag_code(t.tag));
        std::cout << t.text << "\t" << tag << "\t" << join(t.arpabet, " ") << "\t" << source_name(t.source) << "\n";
    }
    return kOk;
}

std::atomic<bool> interrupted{false};

int cmd_serve(const std::string& host, const std::vector<std::string>& alts) {
    std::map<std::string, DiphoneBank> banks = load_alternates(alts);
    std::string default_name;
    if (!cfg.bank.empty()) {
        auto main = load_bank(cfg.bank);
        default_name = main.name;
        banks.insert_or_assign(default_name, std::move(main));
    } else if (!banks.empty()) {
        default_name = banks.begin()->first;
    } else {
        log("warn", "no bank loaded; /synthesize answers 503 except for plan_only");
    }
    auto settings = load_settings();
    auto res = load_resources();
    Service service(res, std::move(banks), default_name, std::move(settings));

    std::signal(SIGINT, [](int) { interrupted = true; });
    std::signal(SIGTERM, [](int) { interrupted = true; });
    std::thread watcher([&] {
        while (!interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        service.stop();
    });
    log("info", "listening on " + host + ":" + std::to_string(cfg.port));
    try {
        service.serve(host, cfg.port);
    } catch (...) {
        interrupted = true;
        watcher.join();
        throw;
    }
    interrupted = true;
    watcher.join();
    return kOk;
}

int cmd_gen_test(const std::string& kind_name, int list, const std::string& out, bool prompts_only) {
    auto kind = parse_corpus_kind(kind_name);
    if (!kind) throw DataError("unknown corpus kind " + kind_name);
    std::string dir = cfg.data("corpora");
    require_file(dir, "corpus directory");
    auto corpora = load_corpora(dir);
    auto prompts = suite_prompts(corpora, *kind, list, cfg.seed);
    fs::create_directories(out);
    if (prompts_only) {
        write_file(out + "/answer_key.tsv", answer_key(prompts));
        write_file(out + "/score_sheet.tsv", score_sheet_template(prompts));
        std::cout << prompts.size() << " prompts\n";
        return kOk;
    }
    auto main = load_bank(cfg.bank);
    auto settings = load_settings();
    auto res = load_resources();
    auto report = run_suite(prompts, Voice{&main, {}}, settings, res, out);
    std::cout << std::fixed << std::setprecision(2) << report.files << " files, " << report.audio_seconds
              << " s audio, " << report.synthesis_seconds << " s synthesis, " << report.substitutions
              << " substitutions\n";
    return kOk;
}

int cmd_score(const std::string& ref, const std::string& hyp) {
    require_file(ref, "answer key");
    require_file(hyp, "transcripts");
    auto s = score_sheet(read_file(ref), read_file(hyp));
    for (const auto& [id, sc] : s.rows) std::cout << id << "\t" << sc.correct << "/" << sc.total << "\n";
    std::cout << std::fixed << std::setprecision(2) << "total\t" << s.total.correct << "/" << s.total.total << "\t"
              << s.percent() << "%\n";
    if (s.missing) std::cout << "missing\t" << s.missing << "\n";
    return kOk;
}

int cmd_shift_demo(const std::string& wav, const std::string& phones, const std::string& pitch,
                   const std::string& dur, const std::string& vol, double smoothing, const std::string& prefix) {
    require_file(wav, "clip");
    auto names = split(phones, ',');
    if (names.size() != 2) throw DataError("--phones expects P1,P2");
    Phone p1 = phone_arg(names[0]), p2 = phone_arg(names[1]);
    auto audio = read_wav(wav);
    auto [pa, pb] = pair_arg(pitch, "--pitch");
    auto [da, db] = pair_arg(dur, "--dur");
    auto [va, vb] = pair_arg(vol, "--vol");
    ShiftSpec spec{pa, pb, da, db, va, vb};
    auto r = shift_diphone(audio.samples, p1, p2, spec, smoothing, audio.sample_rate);
    print_warnings(r.warnings);

    write_wav(prefix + "_before.wav", audio);
    write_wav(prefix + "_after.wav", Audio{audio.sample_rate, r.samples});
    std::ostringstream rep;
    rep << "diphone\t" << names[0] << " " << names[1] << "\npath\t" << path_name(r.path) << "\nsplit\t" << r.split
        << "\nlength_before\t" << audio.samples.size() << "\nlength_after\t" << r.samples.size() << "\nclipped\t"
        << r.clipped << "\n";
    auto peaks = [&](const std::string& label, const std::vector<double>& x) {
        rep << label;
        try {
            for (auto p : detect_pulses(x, smoothing, audio.sample_rate).peaks) rep << "\t" << p;
        } catch (const SignalError&) {
            rep << "\tnone";
        }
        rep << "\n";
    };
    peaks("peaks_before", audio.samples);
    peaks("peaks_after", r.samples);
    write_file(prefix + "_report.txt", rep.str());
    std::cout << rep.str();
    return kOk;
}

int cmd_make_fixture_bank(const std::string& out) {
    auto bank = make_fixture_bank(cfg.seed);
    bank.name = fs::path(out).filename().string();
    bank.save(out);
    std::cout << bank.diphones.size() << " diphones, " << bank.monophones.size() << " monophones -> " << out << "\n";
    return kOk;
}

int cmd_mosx_form() {
    std::string path = cfg.data("corpora/mosx.tsv");
    require_file(path, "MOS-X questionnaire");
    std::cout << mosx_form(load_mosx(path));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diphone text-to-speech toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", cfg.config, "JSON file of config keys")->envname("TTS_CONFIG");
    add_string(app, "data_dir", cfg.data_dir, "Resource directory");
    add_string(app, "lexicon", cfg.lexicon, "CMUdict file");
    add_string(app, "homographs", cfg.homographs, "Homograph table");
    add_string(app, "pos_lexicon", cfg.pos_lexicon, "MPOS lexicon");
    add_string(app, "trigrams", cfg.trigrams, "Tag trigram counts");
    add_string(app, "claws7", cfg.claws7, "CLAWS7 to reduced tag map");
    add_string(app, "g2p_table", cfg.g2p_table, "Trained graphone table (default: train at load)");
    add_string(app, "frequencies", cfg.frequencies, "Word frequency list");
    add_string(app, "bank", cfg.bank, "Diphone bank directory");
    add_string(app, "settings", cfg.settings, "Prosody settings JSON");
    add_string(app, "log_level", cfg.log_level, "error, warn or info");
    auto* seed = app.add_option("--seed", cfg.seed, "Random seed")->envname("TTS_SEED");
    settings_table.push_back({"seed", seed, [](const json& v) { cfg.seed = v.get<std::uint64_t>(); }});
    auto* port = app.add_option("--port", cfg.port, "HTTP port")->envname("TTS_PORT");
    settings_table.push_back({"port", port, [](const json& v) { cfg.port = v.get<int>(); }});

    std::function<int()> run;
    std::string s1, s2, s3, out, silence, text, extra;
    std::vector<std::string> words, alts;
    bool flag = false;
    int list = 0;
    double smoothing = 2.0;

    auto* c = app.add_subcommand("train-g2p", "Train a graphone table from a CMUdict file");
    c->add_option("dict", s1, "CMUdict file")->required();
    c->add_option("-o,--out", out, "Output table")->required();
    c->callback([&] { run = [&] { return cmd_train_g2p(s1, out); }; });

    c = app.add_subcommand("g2p", "Pronounce words with the graphone table");
    c->add_option("words", words, "Words")->required();
    c->add_option("--table", cfg.g2p_table, "Trained table");
    c->callback([&] { run = [&] { return cmd_g2p(words); }; });

    c = app.add_subcommand("eval-g2p", "Score the graphone table against the lexicon");
    c->add_option("--table", cfg.g2p_table, "Trained table");
    c->callback([&] { run = [&] { return cmd_eval_g2p(); }; });

    c = app.add_subcommand("tag", "Tag a sentence");
    c->add_option("sentence", text, "Sentence")->required();
    c->add_flag("--no-overrides", flag, "Ignore word trigram overrides");
    c->callback([&] { run = [&] { return cmd_tag(text, flag); }; });

    c = app.add_subcommand("eval-pos", "Tagger accuracy on a Brown-format sample");
    c->add_option("--brown", s1, "Tagged sentences");
    c->callback([&] { run = [&] { return cmd_eval_pos(s1); }; });

    c = app.add_subcommand("calibrate", "Silence thresholds from an ambient recording");
    c->add_option("wav", s1, "Silence recording")->required();
    c->callback([&] { run = [&] { return cmd_calibrate(s1); }; });

    c = app.add_subcommand("extract-mono", "Section a monophone recording");
    c->add_option("wav", s1, "Recording")->required();
    c->add_option("phone", s2, "Phone")->required();
    c->add_option("--silence", silence, "Ambient recording for thresholds");
    c->callback([&] { run = [&] { return cmd_extract_mono(s1, s2, silence, cfg.bank); }; });

    c = app.add_subcommand("extract-di", "Extract a diphone into the bank");
    c->add_option("wav", s1, "Recording")->required();
    c->add_option("first", s2, "First phone")->required();
    c->add_option("second", s3, "Second phone")->required();
    c->add_option("--silence", silence, "Ambient recording for thresholds");
    c->callback([&] { run = [&] { return cmd_extract_di(s1, s2, s3, silence, cfg.bank); }; });

    c = app.add_subcommand("bank-check", "List missing clips; exit 2 when incomplete");
    c->add_option("dir", s1, "Bank directory")->required();
    c->callback([&] { run = [&] { return cmd_bank_check(s1); }; });

    c = app.add_subcommand("say", "Synthesize text to a WAV file");
    c->add_option("text", text, "Text")->required();
    c->add_option("-o,--out", out, "Output WAV")->required();
    c->add_option("--alt", alts, "Bracket bank name=dir");
    c->add_option("--plan", extra, "Write the prosody plan as JSON");
    c->callback([&] { run = [&] { return cmd_say(text, out, alts, extra); }; });

    c = app.add_subcommand("preprocess", "Token, tag and pronunciation table");
    c->add_option("text", text, "Text")->required();
    c->add_flag("--json", flag, "JSON rows");
    c->callback([&] { run = [&] { return cmd_preprocess(text, flag); }; });

    c = app.add_subcommand("serve", "HTTP service");
    std::string host = "127.0.0.1";
    c->add_option("--host", host, "Bind address")->capture_default_str();
    c->add_option("--alt", alts, "Extra bank name=dir");
    c->callback([&] { run = [&] { return cmd_serve(host, alts); }; });

    c = app.add_subcommand("gen-test", "Intelligibility test prompts and audio");
    c->add_option("--kind", s1, "drt, mrt, pb50, harvard or haskins")->required();
    c->add_option("--list", list, "1-based list, 0 for all");
    c->add_option("-o,--out", out, "Output directory")->required();
    c->add_flag("--prompts-only", flag, "Write the key and sheet without audio");
    c->callback([&] { run = [&] { return cmd_gen_test(s1, list, out, flag); }; });

    c = app.add_subcommand("score", "Score listener transcripts against an answer key");
    c->add_option("--ref", s1, "Answer key")->required();
    c->add_option("--hyp", s2, "Transcripts")->required();
    c->callback([&] { run = [&] { return cmd_score(s1, s2); }; });

    c = app.add_subcommand("shift-demo", "Shift one diphone and report pulses");
    c->add_option("wav", s1, "Diphone clip")->required();
    c->add_option("--phones", s2, "P1,P2")->required();
    std::string pitch = "1", dur = "1", vol = "1";
    c->add_option("--pitch", pitch, "Pitch ratio a or a,b");
    c->add_option("--dur", dur, "Duration ratio a or a,b");
    c->add_option("--vol", vol, "Volume a or a,b");
    c->add_option("--smoothing-ms", smoothing, "Pulse smoothing");
    c->add_option("-o,--out", out, "Output prefix")->required();
    c->callback([&] { run = [&] { return cmd_shift_demo(s1, s2, pitch, dur, vol, smoothing, out); }; });

    c = app.add_subcommand("make-fixture-bank", "Write the synthetic test voice");
    c->add_option("-o,--out", out, "Bank directory")->required();
    c->callback([&] { run = [&] { return cmd_make_fixture_bank(out); }; });

    c = app.add_subcommand("mosx-form", "Print the MOS-X questionnaire");
    c->callback([&] { run = [&] { return cmd_mosx_form(); }; });

    c = app.add_subcommand("inventory", "Print the phone inventory");
    c->callback([&] { run = [&] { std::cout << inventory_table(); return int(kOk); }; });

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    try {
        resolve_config();
        cfg.seed_given = seed->count() > 0 || (!cfg.config.empty() && json::parse(read_file(cfg.config)).contains("seed"));
        return run();
    } catch (const DataError& e) {
        log("error", e.what());
        return kData;
    } catch (const json::exception& e) {
        log("error", e.what());
        return kData;
    } catch (const IoError& e) {
        log("error", e.what());
        return kIo;
    } catch (const SignalError& e) {
        log("error", e.what());
        return kIo;
    } catch (const std::exception& e) {
        log("error", e.what());
        return kIo;
    }
}
