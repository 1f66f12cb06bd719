#pragma once

#include <cstdint>
#include <vector>

#include "tts/bank.hpp"
#include "tts/phoneset.hpp"

namespace tts {

// Synthetic voice used by tests, the acceptance suite and demos. Sonorants
// are 120 Hz glottal bumps ringing at three formants, obstruents are
// resonated noise and stops are a short occlusion followed by a noise burst.
// Output depends only on the seed.
struct FixtureVoice {
    double f0 = 120.0;
    std::uint64_t seed = 1;
    int sample_rate = kSampleRate;

    // Sustained phone with a 20 ms fade at both ends.
    std::vector<double> sustain(Phone p, double seconds) const;
    // Transition clip: 70 ms of each phone around a 30 ms crossover. Silence
    // on either side gives onset/offset clips; a stop first gives its
    // occlusion and burst before the second phone.
    std::vector<double> diphone(Phone a, Phone b) const;
    std::vector<double> burst(Phone stop) const;
};

// Every required diphone, every stop burst and a sustain per persistent phone.
DiphoneBank make_fixture_bank(std::uint64_t seed = 1);

}  // namespace tts
