#include "tts/bank.hpp"

#include <filesystem>
#include <sstream>

#include "tts/common.hpp"
#include "tts/wav.hpp"

namespace fs = std::filesystem;

namespace tts {

std::string CompletenessReport::format() const {
    std::ostringstream os;
    os << "missing diphones: " << missing_diphones.size() << "\n";
    for (auto [a, b] : missing_diphones) os << "  " << symbol(a) << " " << symbol(b) << "\n";
    os << "missing monophones: " << missing_monophones.size() << "\n";
    for (auto p : missing_monophones) os << "  " << symbol(p) << "\n";
    return os.str();
}

const std::vector<double>* DiphoneBank::find(Diphone d) const {
    auto it = diphones.find(d);
    return it == diphones.end() ? nullptr : &it->second;
}

const std::vector<double>* DiphoneBank::mono(Phone p) const {
    auto it = monophones.find(p);
    return it == monophones.end() ? nullptr : &it->second;
}

void DiphoneBank::add(Diphone d, std::vector<double> clip, std::string origin) {
    provenance[clip_file(d)] = origin.empty() ? "added" : std::move(origin);
    diphones[d] = std::move(clip);
}

void DiphoneBank::add_mono(Phone p, std::vector<double> clip, std::string origin) {
    provenance[mono_file(p)] = origin.empty() ? "added" : std::move(origin);
    monophones[p] = std::move(clip);
}

CompletenessReport DiphoneBank::check() const {
    CompletenessReport r;
    for (auto d : required_diphone_set())
        if (!diphones.count(d)) r.missing_diphones.push_back(d);
    for (auto p : tts::monophones())
        if (!monophones.count(p)) r.missing_monophones.push_back(p);
    return r;
}

std::string DiphoneBank::clip_file(Diphone d) {
    return std::string(symbol(d.first)) + "-" + std::string(symbol(d.second)) + ".wav";
}

std::string DiphoneBank::mono_file(Phone p) { return std::string(symbol(p)) + ".wav"; }

std::string DiphoneBank::manifest() const {
    std::ostringstream os;
    os << "name: " << name << "\n"
       << "sample_rate: " << sample_rate << "\n"
       << "bit_depth: 24\n"
       << "channels: 1\n"
       << "pulse_smoothing_ms: " << pulse_smoothing_ms << "\n"
       << "stft_window: " << grid.window << "\n"
       << "stft_hop: " << grid.hop << "\n"
       << "rms_window: " << grid.window << "\n"
       << "inventory_hash: " << hex64(fnv1a(inventory_table())) << "\n"
       << "[clips]\n";
    for (const auto& [file, origin] : provenance) os << file << "\t" << origin << "\n";
    return os.str();
}

void DiphoneBank::save(const std::string& dir) const {
    fs::create_directories(dir);
    for (const auto& [d, clip] : diphones) write_wav((fs::path(dir) / clip_file(d)).string(), {sample_rate, clip});
    for (const auto& [p, clip] : monophones) write_wav((fs::path(dir) / mono_file(p)).string(), {sample_rate, clip});
    write_file((fs::path(dir) / "manifest.txt").string(), manifest());
}

DiphoneBank DiphoneBank::load(const std::string& dir) {
    fs::path root(dir);
    fs::path mpath = root / "manifest.txt";
    if (!fs::is_directory(root)) throw DataError("bank directory not found: " + dir);
    if (!fs::exists(mpath)) throw DataError("bank has no manifest.txt: " + dir);

    DiphoneBank bank;
    bank.name = root.filename().string();
    std::istringstream in(read_file(mpath.string()));
    std::string line;
    bool clips = false;
    int lineno = 0;
    std::vector<std::string> files;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t == "[clips]") {
            clips = true;
            continue;
        }
        if (clips) {
            auto fields = split(t, '\t');
            files.push_back(fields[0]);
            bank.provenance[fields[0]] = fields.size() > 1 ? fields[1] : "";
            continue;
        }
        auto colon = t.find(':');
        if (colon == std::string_view::npos)
            throw DataError("manifest line " + std::to_string(lineno) + ": expected key: value");
        std::string key(trim(t.substr(0, colon)));
        std::string value(trim(t.substr(colon + 1)));
        try {
            if (key == "name") bank.name = value;
            else if (key == "sample_rate") bank.sample_rate = std::stoi(value);
            else if (key == "pulse_smoothing_ms") bank.pulse_smoothing_ms = std::stod(value);
            else if (key == "stft_window") bank.grid.window = std::stoul(value);
            else if (key == "stft_hop") bank.grid.hop = std::stoul(value);
        } catch (const std::exception&) {
            throw DataError("manifest line " + std::to_string(lineno) + ": bad value for " + key);
        }
    }
    if (bank.sample_rate != kSampleRate)
        throw DataError("bank sample rate " + std::to_string(bank.sample_rate) + " is not 48000");

    for (const auto& file : files) {
        fs::path p = root / file;
        if (p.extension() != ".wav") throw DataError("manifest lists a non-WAV clip: " + file);
        std::string stem = p.stem().string();
        Audio a = read_wav(p.string());
        if (a.sample_rate != bank.sample_rate) throw DataError(file + ": sample rate mismatch");
        auto dash = stem.find('-');
        if (dash == std::string::npos) {
            auto ph = parse_phone(stem);
            if (!ph) throw DataError("unknown phone in clip name: " + file);
            bank.monophones[*ph] = std::move(a.samples);
        } else {
            auto a1 = parse_phone(stem.substr(0, dash));
            auto a2 = parse_phone(stem.substr(dash + 1));
            if (!a1 || !a2) throw DataError("unknown phone in clip name: " + file);
            bank.diphones[{*a1, *a2}] = std::move(a.samples);
        }
    }
    return bank;
}

DiphoneBank assemble_bank(const std::vector<MonophoneRecord>& records,
                          const std::map<Diphone, std::vector<double>>& clips) {
    DiphoneBank bank;
    const auto required = required_diphone_set();
    for (const auto& r : records) {
        std::string sym(symbol(r.phone));
        if (!is_persistent(r.phone)) {
            bank.add_mono(r.phone, r.burst, "burst of " + sym);
            continue;
        }
        bank.add({Phone::X, r.phone}, r.onset, "onset of " + sym);
        // Synthetic monophthongs are always followed by their glide, never silence.
        if (required.count({r.phone, Phone::X}))
            bank.add({r.phone, Phone::X}, r.offset, "offset of " + sym);
        bank.add_mono(r.phone, r.sustain, "sustain of " + sym);
    }
    for (const auto& [d, clip] : clips) bank.add(d, clip, "extracted");
    return bank;
}

}  // namespace tts
