#include "tts/prosody.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tts/common.hpp"

namespace tts {

using nlohmann::json;

double steps_to_ratio(double steps) { return std::exp2(steps / 12.0); }

std::string_view curve_kind_name(CurveKind k) {
    switch (k) {
        case CurveKind::Linear: return "linear";
        case CurveKind::Sinusoidal: return "sinusoidal";
        case CurveKind::Quintic: return "quintic";
    }
    return "linear";
}

std::optional<CurveKind> parse_curve_kind(std::string_view s) {
    if (s == "linear") return CurveKind::Linear;
    if (s == "sinusoidal") return CurveKind::Sinusoidal;
    if (s == "quintic") return CurveKind::Quintic;
    return std::nullopt;
}

namespace {

// Points sorted by x with repeated x values collapsed to the first.
std::vector<std::pair<double, double>> knots_of(const Curve& c) {
    auto pts = c.points;
    std::stable_sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first < b.first; });
    pts.erase(std::unique(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first == b.first; }), pts.end());
    return pts;
}

// d-th derivative of u^k.
double dpow(int k, int d, double u) {
    if (d > k) return 0.0;
    double f = 1;
    for (int i = 0; i < d; ++i) f *= k - i;
    return f * std::pow(u, k - d);
}

// Coefficients (6 per segment, in local coordinate u = x - x_i) of the
// natural quintic spline through pts.
Eigen::VectorXd quintic_coefficients(const std::vector<std::pair<double, double>>& pts) {
    int segs = static_cast<int>(pts.size()) - 1;
    int n = 6 * segs;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    int row = 0;
    auto h = [&](int i) { return pts[i + 1].first - pts[i].first; };
    for (int i = 0; i < segs; ++i) {
        a(row, 6 * i) = 1.0;
        b(row++) = pts[i].second;
        for (int k = 0; k < 6; ++k) a(row, 6 * i + k) = dpow(k, 0, h(i));
        b(row++) = pts[i + 1].second;
    }
    for (int j = 1; j < segs; ++j)
        for (int d = 1; d <= 4; ++d) {
            for (int k = 0; k < 6; ++k) {
                a(row, 6 * (j - 1) + k) = dpow(k, d, h(j - 1));
                a(row, 6 * j + k) -= dpow(k, d, 0.0);
            }
            ++row;
        }
    for (int d = 3; d <= 4; ++d) {
        for (int k = 0; k < 6; ++k) a(row, k) = dpow(k, d, 0.0);
        ++row;
        for (int k = 0; k < 6; ++k) a(row, 6 * (segs - 1) + k) = dpow(k, d, h(segs - 1));
        ++row;
    }
    return a.fullPivLu().solve(b);
}

}  // namespace

double eval_curve(const Curve& c, double x) {
    auto pts = knots_of(c);
    if (pts.empty()) return 0.0;
    if (pts.size() == 1 || x <= pts.front().first) return pts.front().second;
    if (x >= pts.back().first) return pts.back().second;
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(pts.begin(), pts.end(), x, [](double v, auto& p) { return v < p.first; }) - pts.begin() - 1);
    auto [x0, y0] = pts[i];
    auto [x1, y1] = pts[i + 1];
    double t = (x - x0) / (x1 - x0);
    CurveKind kind = c.kind;
    if (kind == CurveKind::Quintic && pts.size() < 3) kind = CurveKind::Linear;
    switch (kind) {
        case CurveKind::Linear: return y0 + (y1 - y0) * t;
        case CurveKind::Sinusoidal: return y0 + (y1 - y0) * 0.5 * (1.0 - std::cos(std::numbers::pi * t));
        case CurveKind::Quintic: {
            auto coef = quintic_coefficients(pts);
            double u = x - x0, acc = 0;
            for (int k = 5; k >= 0; --k) acc = acc * u + coef(static_cast<Eigen::Index>(6 * i) + k);
            return acc;
        }
    }
    return y0;
}

std::vector<std::pair<double, double>> sample_curve(const Curve& c, double lo, double hi, std::size_t n) {
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = n > 1 ? lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1) : lo;
        out.emplace_back(x, eval_curve(c, x));
    }
    return out;
}

std::map<std::string, double> ProsodySettings::default_pauses() {
    return {{",", 0.25}, {";", 0.35}, {":", 0.35}, {".", 0.6}, {"?", 0.6}, {"!", 0.6}, {"...", 0.8}, {"…", 0.8}};
}

ProsodySettings ProsodySettings::neutral() {
    ProsodySettings s;
    s.pauses = default_pauses();
    for (const char* name : {"period", "question", "exclamation"}) s.sentence_curves[name] = CurveSet{};
    return s;
}

namespace {

json target_json(const Target& t) { return {{"volume", t.volume}, {"pitch", t.pitch}, {"duration", t.duration}}; }

Target target_from(const json& j, Target base) {
    if (!j.is_object()) throw DataError("prosody target must be an object");
    base.volume = j.value("volume", base.volume);
    base.pitch = j.value("pitch", base.pitch);
    base.duration = j.value("duration", base.duration);
    return base;
}

json curve_json(const Curve& c) {
    json pts = json::array();
    for (auto [x, y] : c.points) pts.push_back({x, y});
    return {{"kind", std::string(curve_kind_name(c.kind))}, {"points", pts}};
}

Curve curve_from(const json& j, Curve base) {
    if (!j.is_object()) throw DataError("curve must be an object");
    if (j.contains("kind")) {
        auto k = parse_curve_kind(j.at("kind").get<std::string>());
        if (!k) throw DataError("unknown curve kind: " + j.at("kind").get<std::string>());
        base.kind = *k;
    }
    if (j.contains("points")) {
        base.points.clear();
        for (const auto& p : j.at("points")) {
            if (!p.is_array() || p.size() != 2) throw DataError("curve points are [x, y] pairs");
            base.points.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        if (base.points.empty()) throw DataError("curve needs at least one point");
        std::stable_sort(base.points.begin(), base.points.end(),
                         [](auto& a, auto& b) { return a.first < b.first; });
    }
    return base;
}

json curveset_json(const CurveSet& c) {
    return {{"volume", curve_json(c.volume)}, {"pitch", curve_json(c.pitch)}, {"duration", curve_json(c.duration)}};
}

CurveSet curveset_from(const json& j, CurveSet base) {
    if (!j.is_object()) throw DataError("curve set must be an object");
    if (j.contains("volume")) base.volume = curve_from(j.at("volume"), base.volume);
    if (j.contains("pitch")) base.pitch = curve_from(j.at("pitch"), base.pitch);
    if (j.contains("duration")) base.duration = curve_from(j.at("duration"), base.duration);
    return base;
}

std::string_view mode_name(ClassMode m) {
    switch (m) {
        case ClassMode::Absolute: return "absolute";
        case ClassMode::Relative: return "relative";
        case ClassMode::Approach: return "approach";
    }
    return "absolute";
}

Range range_from(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) throw DataError(std::string("clamp ") + what + " must be [min, max]");
    Range r{j[0].get<double>(), j[1].get<double>()};
    if (!(r.min > 0) || r.min > r.max) throw DataError(std::string("clamp ") + what + " must satisfy 0 < min <= max");
    return r;
}

void apply_patch(ProsodySettings& s, const json& j) {
    if (!j.is_object()) throw DataError("settings document must be a JSON object");
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("stress")) {
        for (const auto& [k, v] : j.at("stress").items()) {
            if (k != "0" && k != "1" && k != "2") throw DataError("stress keys are 0, 1 and 2");
            auto& t = s.stress[static_cast<std::size_t>(k[0] - '0')];
            t = target_from(v, t);
        }
    }
    if (j.contains("classes")) {
        for (const auto& [k, v] : j.at("classes").items()) {
            auto tag = k.size() == 1 ? tag_from_code(k[0]) : std::nullopt;
            if (!tag) throw DataError("unknown lexical class: " + k);
            if (v.is_null()) {
                s.classes.erase(*tag);
                continue;
            }
            auto& c = s.classes[*tag];
            c.target = target_from(v, c.target);
            if (v.contains("jitter")) c.jitter = target_from(v.at("jitter"), c.jitter);
            if (v.contains("mode")) {
                auto m = v.at("mode").get<std::string>();
                if (m == "absolute") c.mode = ClassMode::Absolute;
                else if (m == "relative") c.mode = ClassMode::Relative;
                else if (m == "approach") c.mode = ClassMode::Approach;
                else throw DataError("unknown class mode: " + m);
            }
            if (v.contains("approach")) c.approach = v.at("approach").get<double>();
        }
    }
    if (j.contains("curves")) {
        for (const auto& [k, v] : j.at("curves").items()) {
            if (k != "period" && k != "question" && k != "exclamation")
                throw DataError("curve sets are period, question and exclamation");
            s.sentence_curves[k] = curveset_from(v, s.sentence_curves[k]);
        }
    }
    if (j.contains("frequency")) s.frequency_curves = curveset_from(j.at("frequency"), s.frequency_curves);
    if (j.contains("pauses")) {
        for (const auto& [k, v] : j.at("pauses").items()) {
            double d = v.get<double>();
            if (!(d >= 0)) throw DataError("pause for '" + k + "' must be >= 0");
            s.pauses[k] = d;
        }
    }
    if (j.contains("clamps")) {
        const auto& c = j.at("clamps");
        if (c.contains("volume")) s.volume_clamp = range_from(c.at("volume"), "volume");
        if (c.contains("pitch")) s.pitch_clamp = range_from(c.at("pitch"), "pitch");
        if (c.contains("duration")) s.duration_clamp = range_from(c.at("duration"), "duration");
    }
    if (j.contains("brackets")) {
        for (const auto& [k, v] : j.at("brackets").items()) {
            if (v.is_null()) s.bracket_banks.erase(k);
            else s.bracket_banks[k] = v.get<std::string>();
        }
    }
}

}  // namespace

json ProsodySettings::to_json() const {
    json j;
    j["seed"] = seed;
    for (std::size_t i = 0; i < 3; ++i) j["stress"][std::to_string(i)] = target_json(stress[i]);
    j["classes"] = json::object();
    for (const auto& [tag, c] : classes) {
        json cj = target_json(c.target);
        cj["jitter"] = target_json(c.jitter);
        cj["mode"] = std::string(mode_name(c.mode));
        cj["approach"] = c.approach;
        j["classes"][std::string(1, tag_code(tag))] = cj;
    }
    j["curves"] = json::object();
    for (const auto& [name, cs] : sentence_curves) j["curves"][name] = curveset_json(cs);
    j["frequency"] = curveset_json(frequency_curves);
    j["pauses"] = pauses;
    j["clamps"] = {{"volume", {volume_clamp.min, volume_clamp.max}},
                   {"pitch", {pitch_clamp.min, pitch_clamp.max}},
                   {"duration", {duration_clamp.min, duration_clamp.max}}};
    j["brackets"] = bracket_banks;
    return j;
}

ProsodySettings ProsodySettings::from_json(const json& j) {
    ProsodySettings s = neutral();
    try {
        apply_patch(s, j);
    } catch (const json::exception& e) {
        throw DataError(std::string("settings: ") + e.what());
    }
    return s;
}

ProsodySettings ProsodySettings::merged(const json& patch) const {
    ProsodySettings s = *this;
    try {
        apply_patch(s, patch);
    } catch (const json::exception& e) {
        throw DataError(std::string("settings: ") + e.what());
    }
    return s;
}

ProsodySettings ProsodySettings::load_file(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    return from_json(j);
}

double FrequencyTable::lookup(const std::string& word) const {
    auto it = log_counts.find(to_lower(word));
    return it == log_counts.end() ? 1.0 : it->second;
}

FrequencyTable load_frequency_table(std::istream& in) {
    FrequencyTable t;
    std::map<std::string, double> counts;
    std::string line;
    while (std::getline(in, line)) {
        auto s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        auto f = split_ws(s);
        double count = 0;
        std::size_t used = 0;
        try {
            count = std::stod(f.at(0), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (f.size() < 2 || used != f[0].size() || !(count >= 0)) {
            ++t.malformed;
            continue;
        }
        counts[to_lower(f[1])] += count;
    }
    for (const auto& [w, c] : counts)
        if (c > 10) t.log_counts[w] = std::log10(c);
    return t;
}

FrequencyTable load_frequency_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open frequency list: " + path);
    return load_frequency_table(in);
}

std::string curve_set_for(const std::string& terminator) {
    if (terminator.find('?') != std::string::npos) return "question";
    if (terminator.find('!') != std::string::npos) return "exclamation";
    return "period";
}

namespace {

bool is_terminator_text(const std::string& s) {
    return s.find_first_of(".?!") != std::string::npos || s == "…";
}

double pause_for(const ProsodySettings& s, const std::string& punct) {
    auto it = s.pauses.find(punct);
    if (it != s.pauses.end()) return it->second;
    if (punct.size() > 1 && punct.find_first_not_of('.') == std::string::npos) {
        it = s.pauses.find("...");
        if (it != s.pauses.end()) return it->second;
    }
    return 0.0;
}

}  // namespace

ProsodyPlan plan(const std::vector<PlanToken>& tokens, const ProsodySettings& settings,
                 const FrequencyTable* frequencies) {
    ProsodyPlan out;
    out.tokens.resize(tokens.size());
    Jitter jitter(settings.seed);
    const CurveSet neutral_set;

    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t sentence = tokens[i].sentence;
        std::size_t end = i;
        while (end < tokens.size() && tokens[end].sentence == sentence) ++end;

        std::vector<std::size_t> words;
        std::string terminator;
        for (std::size_t k = i; k < end; ++k) {
            if (!tokens[k].punct) words.push_back(k);
            else if (is_terminator_text(tokens[k].text)) terminator = tokens[k].text;
        }
        auto set_it = settings.sentence_curves.find(curve_set_for(terminator));
        const CurveSet& curves = set_it == settings.sentence_curves.end() ? neutral_set : set_it->second;

        Target prev;
        for (std::size_t w = 0; w < words.size(); ++w) {
            const PlanToken& tok = tokens[words[w]];
            double x = words.size() > 1 ? static_cast<double>(w) / static_cast<double>(words.size() - 1) : 0.0;
            Target word{eval_curve(curves.volume, x), eval_curve(curves.pitch, x), eval_curve(curves.duration, x)};

            Target cls;
            double jv = jitter.next(), jp = jitter.next(), jd = jitter.next();
            auto c_it = settings.classes.find(tok.tag);
            if (c_it != settings.classes.end()) {
                const ClassSettings& c = c_it->second;
                switch (c.mode) {
                    case ClassMode::Absolute: cls = c.target; break;
                    case ClassMode::Relative:
                        cls = {prev.volume + c.target.volume, prev.pitch + c.target.pitch,
                               prev.duration + c.target.duration};
                        break;
                    case ClassMode::Approach:
                        cls = {prev.volume + (c.target.volume - prev.volume) * c.approach,
                               prev.pitch + (c.target.pitch - prev.pitch) * c.approach,
                               prev.duration + (c.target.duration - prev.duration) * c.approach};
                        break;
                }
                cls.volume += c.jitter.volume * jv;
                cls.pitch += c.jitter.pitch * jp;
                cls.duration += c.jitter.duration * jd;
            }
            prev = cls;

            double fx = std::clamp(frequencies ? frequencies->lookup(tok.text) : 1.0, 1.0, 7.0);
            const CurveSet& fc = settings.frequency_curves;
            word.volume *= cls.volume * eval_curve(fc.volume, fx);
            word.pitch += cls.pitch + eval_curve(fc.pitch, fx);
            word.duration *= cls.duration * eval_curve(fc.duration, fx);

            TokenProsody& tp = out.tokens[words[w]];
            tp.word = word;
            for (const auto& ph : tok.phones) {
                Target t = word;
                if (ph.stress != Stress::NotApplicable) {
                    const Target& st = settings.stress[static_cast<std::size_t>(ph.stress)];
                    t.volume *= st.volume;
                    t.pitch += st.pitch;
                    t.duration *= st.duration;
                }
                PhoneProsody pp;
                pp.volume = std::clamp(t.volume, settings.volume_clamp.min, settings.volume_clamp.max);
                pp.pitch = std::clamp(steps_to_ratio(t.pitch), settings.pitch_clamp.min, settings.pitch_clamp.max);
                pp.duration = std::clamp(t.duration, settings.duration_clamp.min, settings.duration_clamp.max);
                tp.phones.push_back(pp);
            }
        }
        for (std::size_t k = i; k < end; ++k)
            if (tokens[k].punct) out.tokens[k].pause = pause_for(settings, tokens[k].text);
        i = end;
    }
    return out;
}

}  // namespace tts
