#pragma once

#include <map>
#include <string>
#include <vector>

#include "tts/extractor.hpp"
#include "tts/phoneset.hpp"

namespace tts {

struct CompletenessReport {
    std::vector<Diphone> missing_diphones;
    std::vector<Phone> missing_monophones;
    bool complete() const { return missing_diphones.empty() && missing_monophones.empty(); }
    std::string format() const;
};

// Mono 48 kHz clips keyed by phone pair, plus one monophone clip per phone
// (the burst of a stop, the sustain of a persistent phone).
//
// On disk: a directory holding <P1>-<P2>.wav, <P>.wav and manifest.txt. The
// manifest is "key: value" lines followed by a [clips] table of
// "<file>\t<provenance>" rows.
class DiphoneBank {
public:
    std::string name = "bank";
    int sample_rate = kSampleRate;
    double pulse_smoothing_ms = 2.0;
    FrameGrid grid;
    std::map<Diphone, std::vector<double>> diphones;
    std::map<Phone, std::vector<double>> monophones;
    std::map<std::string, std::string> provenance;  // file name -> origin

    const std::vector<double>* find(Diphone d) const;
    const std::vector<double>* mono(Phone p) const;

    void add(Diphone d, std::vector<double> clip, std::string origin = {});
    void add_mono(Phone p, std::vector<double> clip, std::string origin = {});

    CompletenessReport check() const;

    std::string manifest() const;
    void save(const std::string& dir) const;
    static DiphoneBank load(const std::string& dir);

    static std::string clip_file(Diphone d);
    static std::string mono_file(Phone p);
};

// Silence-adjacent clips come from monophone onsets and offsets; stop bursts
// and sustains become monophone clips.
DiphoneBank assemble_bank(const std::vector<MonophoneRecord>& records,
                          const std::map<Diphone, std::vector<double>>& clips);

}  // namespace tts
