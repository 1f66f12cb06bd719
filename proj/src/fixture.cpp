#include "tts/fixture.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "tts/common.hpp"

namespace tts {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Timbre {
    std::array<double, 3> formants{};
    double voiced = 0.0;  // glottal amplitude
    double noise_hz = 0.0;
    double noise = 0.0;   // noise RMS
};

Timbre timbre(Phone p) {
    switch (p) {
        case Phone::AA: return {{730, 1090, 2440}, 0.35};
        case Phone::AE: return {{660, 1720, 2410}, 0.35};
        case Phone::AH: return {{520, 1190, 2390}, 0.33};
        case Phone::AO: return {{570, 840, 2410}, 0.35};
        case Phone::EH: return {{530, 1840, 2480}, 0.34};
        case Phone::ER: return {{490, 1350, 1690}, 0.32};
        case Phone::IH: return {{390, 1990, 2550}, 0.32};
        case Phone::IY: return {{270, 2290, 3010}, 0.30};
        case Phone::UH: return {{440, 1020, 2240}, 0.32};
        case Phone::UW: return {{300, 870, 2240}, 0.30};
        case Phone::IPAA: return {{750, 1220, 2500}, 0.35};
        case Phone::IPAE: return {{480, 2020, 2600}, 0.33};
        case Phone::IPAO: return {{500, 900, 2400}, 0.34};
        case Phone::L: return {{360, 1000, 2400}, 0.24};
        case Phone::R: return {{420, 1300, 1600}, 0.24};
        case Phone::W: return {{300, 700, 2200}, 0.22};
        case Phone::Y: return {{280, 2200, 2900}, 0.22};
        case Phone::M: return {{280, 1000, 2200}, 0.18};
        case Phone::N: return {{280, 1700, 2500}, 0.18};
        case Phone::NG: return {{280, 2300, 2750}, 0.18};
        case Phone::F: return {{}, 0, 6000, 0.04};
        case Phone::TH: return {{}, 0, 5000, 0.03};
        case Phone::S: return {{}, 0, 5500, 0.12};
        case Phone::SH: return {{}, 0, 3000, 0.12};
        case Phone::HH: return {{}, 0, 1500, 0.04};
        case Phone::V: return {{}, 0, 5000, 0.05};
        case Phone::DH: return {{}, 0, 4500, 0.04};
        case Phone::Z: return {{}, 0, 5000, 0.09};
        case Phone::ZH: return {{}, 0, 2800, 0.09};
        case Phone::P: return {{}, 0, 900, 0.25};
        case Phone::B: return {{}, 0, 700, 0.22};
        case Phone::T: return {{}, 0, 4000, 0.25};
        case Phone::D: return {{}, 0, 3200, 0.22};
        case Phone::K: return {{}, 0, 2000, 0.25};
        case Phone::G: return {{}, 0, 1700, 0.22};
        case Phone::CH: return {{}, 0, 3000, 0.2};
        case Phone::JH: return {{}, 0, 2800, 0.18};
        case Phone::X: return {};
    }
    return {};
}

// Uniform noise through a two-pole resonator, scaled to unit RMS.
std::vector<double> resonated_noise(std::size_t n, double centre_hz, int rate, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double r = 0.97, theta = kTwoPi * centre_hz / rate;
    double a1 = 2 * r * std::cos(theta), a2 = -r * r;
    std::vector<double> y(n);
    double y1 = 0, y2 = 0, acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
        double v = x + a1 * y1 + a2 * y2;
        y2 = y1;
        y1 = v;
        y[i] = v;
        acc += v * v;
    }
    double scale = acc > 0 ? std::sqrt(static_cast<double>(n) / acc) : 0.0;
    for (auto& v : y) v *= scale;
    return y;
}

std::uint64_t clip_seed(std::uint64_t seed, Phone a, Phone b, std::string_view role) {
    return fnv1a(std::string(symbol(a)) + "|" + std::string(symbol(b)) + "|" + std::string(role), seed);
}

// Renders a timbre path: weight(t) in [0, 1] moves from ta to tb.
template <class Weight>
std::vector<double> render(const Timbre& ta, const Timbre& tb, std::size_t n, Weight weight, double f0, int rate,
                           std::uint64_t seed) {
    std::vector<double> out(n, 0.0);
    double period = rate / f0;
    std::size_t bump = static_cast<std::size_t>(0.0015 * rate);
    for (double t0 = 0; t0 < static_cast<double>(n); t0 += period) {
        double w = weight(static_cast<std::size_t>(t0));
        double amp = ta.voiced * (1 - w) + tb.voiced * w;
        if (amp <= 0) continue;
        std::array<double, 3> f{};
        for (int k = 0; k < 3; ++k) {
            double fa = ta.voiced > 0 ? ta.formants[k] : tb.formants[k];
            double fb = tb.voiced > 0 ? tb.formants[k] : ta.formants[k];
            f[k] = fa * (1 - w) + fb * w;
        }
        auto start = static_cast<std::size_t>(t0);
        std::size_t len = static_cast<std::size_t>(1.5 * period);
        for (std::size_t i = 0; i < len && start + i < n; ++i) {
            double t = static_cast<double>(i) / rate;
            double v = 0;
            if (i < bump) v += 0.8 * amp * 0.5 * (1 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(bump)));
            for (int k = 0; k < 3; ++k)
                v += amp * 0.3 / (k + 1) * std::exp(-std::numbers::pi * (80.0 + 20 * k) * t) * std::sin(kTwoPi * f[k] * t);
            out[start + i] += v;
        }
    }
    if (ta.noise > 0 || tb.noise > 0) {
        auto na = ta.noise > 0 ? resonated_noise(n, ta.noise_hz, rate, seed) : std::vector<double>(n, 0.0);
        auto nb = tb.noise > 0 ? resonated_noise(n, tb.noise_hz, rate, seed ^ 0x9e3779b97f4a7c15ull)
                               : std::vector<double>(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double w = weight(i);
            out[i] += na[i] * ta.noise * (1 - w) + nb[i] * tb.noise * w;
        }
    }
    return out;
}

void fade(std::vector<double>& x, std::size_t in, std::size_t out) {
    in = std::min(in, x.size());
    out = std::min(out, x.size());
    for (std::size_t i = 0; i < in; ++i) x[i] *= static_cast<double>(i) / static_cast<double>(in);
    for (std::size_t i = 0; i < out; ++i) x[x.size() - 1 - i] *= static_cast<double>(i) / static_cast<double>(out);
}

}  // namespace

std::vector<double> FixtureVoice::sustain(Phone p, double seconds) const {
    auto n = static_cast<std::size_t>(seconds * sample_rate);
    Timbre t = timbre(p);
    auto x = render(t, t, n, [](std::size_t) { return 0.0; }, f0, sample_rate, clip_seed(seed, p, p, "sustain"));
    auto f = static_cast<std::size_t>(0.02 * sample_rate);
    fade(x, f, f);
    return x;
}

std::vector<double> FixtureVoice::burst(Phone stop) const {
    auto gap = static_cast<std::size_t>(0.005 * sample_rate);
    double len = stop == Phone::CH || stop == Phone::JH ? 0.04 : 0.012;
    auto n = static_cast<std::size_t>(len * sample_rate);
    Timbre t = timbre(stop);
    auto noise = resonated_noise(n, t.noise_hz, sample_rate, clip_seed(seed, stop, Phone::X, "burst"));
    std::vector<double> x(gap, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double env = std::exp(-4.0 * static_cast<double>(i) / static_cast<double>(n));
        x.push_back(noise[i] * t.noise * env);
    }
    fade(x, 0, static_cast<std::size_t>(0.003 * sample_rate));
    x.insert(x.end(), gap, 0.0);
    x.front() = 0.0;
    return x;
}

std::vector<double> FixtureVoice::diphone(Phone a, Phone b) const {
    auto sec = [&](double s) { return static_cast<std::size_t>(s * sample_rate); };
    if (a == Phone::X) {
        auto x = sustain(b, 0.1);
        fade(x, sec(0.02), 0);
        return x;
    }
    if (b == Phone::X) {
        auto x = sustain(a, 0.1);
        fade(x, 0, sec(0.02));
        return x;
    }
    if (category(a) == Category::Stop) {
        std::vector<double> x(sec(0.025), 0.0);
        auto br = burst(a);
        x.insert(x.end(), br.begin() + static_cast<std::ptrdiff_t>(sec(0.005)), br.end() - static_cast<std::ptrdiff_t>(sec(0.005)));
        auto tail = sustain(b, 0.1);
        fade(tail, sec(0.005), 0);
        x.insert(x.end(), tail.begin(), tail.end());
        return x;
    }
    std::size_t hold = sec(0.07), cross = sec(0.03), n = 2 * hold + cross;
    auto weight = [=](std::size_t i) {
        if (i < hold) return 0.0;
        if (i >= hold + cross) return 1.0;
        return static_cast<double>(i - hold) / static_cast<double>(cross);
    };
    return render(timbre(a), timbre(b), n, weight, f0, sample_rate, clip_seed(seed, a, b, "diphone"));
}

DiphoneBank make_fixture_bank(std::uint64_t seed) {
    FixtureVoice v;
    v.seed = seed;
    DiphoneBank bank;
    bank.name = "fixture-" + std::to_string(seed);
    for (const auto& d : required_diphone_set()) bank.add(d, v.diphone(d.first, d.second), "synthetic");
    for (Phone p : monophones()) {
        if (category(p) == Category::Stop) bank.add_mono(p, v.burst(p), "synthetic");
        else bank.add_mono(p, v.sustain(p, 0.3), "synthetic");
    }
    return bank;
}

}  // namespace tts
