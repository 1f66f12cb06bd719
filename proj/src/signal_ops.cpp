#include "tts/signal_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tts/common.hpp"

namespace tts {

namespace {

constexpr double kRangeEps = 1e-6;
constexpr double kCountEps = 1e-9;

double fall(std::size_t from, std::size_t to, std::size_t s) {
    double g = static_cast<double>(to - from);
    return 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(s - from) / g));
}

std::vector<double> slice(const std::vector<double>& x, std::size_t a, std::size_t b) {
    return {x.begin() + static_cast<std::ptrdiff_t>(a), x.begin() + static_cast<std::ptrdiff_t>(b)};
}

}  // namespace

double PulseTrain::window(std::size_t i, std::size_t s) const {
    std::size_t p = peaks[i];
    if (s < left(i) || s >= right(i)) return 0.0;
    if (s < p) return i == 0 ? 1.0 : 1.0 - fall(peaks[i - 1], p, s);
    if (i + 1 == peaks.size()) return 1.0;
    return fall(p, peaks[i + 1], s);
}

ShiftSpec ShiftSpec::slice(double a, double b) const {
    ShiftSpec s;
    s.pitch0 = pitch(a), s.pitch1 = pitch(b);
    s.dur0 = dur(a), s.dur1 = dur(b);
    s.vol0 = vol(a), s.vol1 = vol(b);
    return s;
}

ShiftSpec ShiftSpec::reversed() const {
    ShiftSpec s;
    s.pitch0 = pitch1, s.pitch1 = pitch0;
    s.dur0 = dur1, s.dur1 = dur0;
    s.vol0 = vol1, s.vol1 = vol0;
    return s;
}

PulseTrain detect_pulses(const std::vector<double>& x, double smoothing_ms, int sample_rate) {
    std::size_t n = x.size();
    auto width = static_cast<std::size_t>(std::max(1L, std::lround(smoothing_ms * sample_rate / 1000.0)));
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
    std::size_t half = width / 2;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i >= half ? i - half : 0;
        std::size_t hi = std::min(n, i + (width - half));
        y[i] = std::max(0.0, (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo));
    }

    std::vector<std::size_t> peaks;
    double tallest = 0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (y[i] > 0 && y[i] > y[i - 1] && y[i] >= y[i + 1]) {
            peaks.push_back(i);
            tallest = std::max(tallest, y[i]);
        }
    std::erase_if(peaks, [&](std::size_t i) { return y[i] < 0.2 * tallest; });

    if (peaks.size() >= 3) {
        std::vector<std::size_t> gaps;
        for (std::size_t i = 1; i < peaks.size(); ++i) gaps.push_back(peaks[i] - peaks[i - 1]);
        std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2), gaps.end());
        double median = static_cast<double>(gaps[gaps.size() / 2]);
        while (peaks.size() >= 2 &&
               static_cast<double>(peaks.back() - peaks[peaks.size() - 2]) > 2.0 * median)
            peaks.pop_back();
    }
    if (peaks.empty()) throw SignalError("no glottal pulses found (unvoiced or too smooth)");
    return {std::move(peaks), n};
}

std::vector<Placement> psola_schedule(const PulseTrain& pulses, const ShiftSpec& spec) {
    const auto& p = pulses.peaks;
    std::size_t k_count = p.size();
    if (k_count < 2) throw SignalError("PSOLA needs at least two pulses");
    double n = static_cast<double>(std::max<std::size_t>(pulses.length, 1));
    auto center = [&](std::size_t k) { return 0.5 * static_cast<double>(p[k] + p[k + 1]) / n; };
    auto gap = [&](std::size_t k) { return static_cast<double>(p[k + 1] - p[k]); };

    // bounds[k] closes the output range owned by excitation k; the last
    // excitation also owns everything past bounds.back().
    std::vector<double> bounds(k_count);
    bounds[0] = static_cast<double>(p[0]);
    for (std::size_t k = 1; k < k_count; ++k) bounds[k] = bounds[k - 1] + gap(k - 1) * spec.dur(center(k - 1));

    std::vector<Placement> placed{{static_cast<long>(p[0]), 0}};
    double pos = static_cast<double>(p[0]);
    std::size_t k = 0;
    for (;;) {
        std::size_t g = std::min(k, k_count - 2);
        pos += gap(g) / spec.pitch(center(g));
        std::size_t r = k;
        while (r + 1 < k_count && pos > bounds[r] + kRangeEps) ++r;
        placed.push_back({std::lround(pos), r});
        if (pos >= bounds.back() - kRangeEps) break;
        k = r;
    }
    return placed;
}

std::vector<double> psola_core(const std::vector<double>& x, const PulseTrain& pulses, const ShiftSpec& spec) {
    const auto& p = pulses.peaks;
    auto placed = psola_schedule(pulses, spec);
    long out_len = 0;
    for (auto [anchor, e] : placed)
        out_len = std::max(out_len, anchor + static_cast<long>(pulses.right(e)) - static_cast<long>(p[e]));
    std::vector<double> out(static_cast<std::size_t>(std::max(out_len, 0L)), 0.0);
    for (auto [anchor, e] : placed) {
        long shift = anchor - static_cast<long>(p[e]);
        for (std::size_t s = pulses.left(e); s < pulses.right(e); ++s) {
            long o = static_cast<long>(s) + shift;
            if (o < 0 || o >= out_len) continue;
            out[static_cast<std::size_t>(o)] += x[s] * pulses.window(e, s);
        }
    }
    return out;
}

std::vector<double> psola(const std::vector<double>& x, const PulseTrain& pulses, const ShiftSpec& spec) {
    auto out = psola_core(x, pulses, spec);
    apply_volume(out, spec.vol0, spec.vol1);
    return out;
}

std::vector<int> usds_frame_plan(std::size_t frames, double dur0, double dur1) {
    std::vector<int> copies(frames, 1);
    double count = 0;
    for (std::size_t f = 0; f < frames; ++f) {
        double t = (static_cast<double>(f) + 0.5) / static_cast<double>(frames);
        count += dur0 + (dur1 - dur0) * t - 1.0;
        while (count >= 1.0 - kCountEps) {
            ++copies[f];
            count -= 1.0;
        }
        if (count <= -1.0 + kCountEps) {
            copies[f] = 0;
            count += 1.0;
        }
    }
    return copies;
}

std::vector<double> usds_core(const std::vector<double>& x, const ShiftSpec& spec, int sample_rate) {
    std::size_t frame = static_cast<std::size_t>(sample_rate) / 100;
    std::size_t fade = static_cast<std::size_t>(sample_rate) / 1000;
    std::size_t frames = (x.size() + frame - 1) / frame;
    auto plan = usds_frame_plan(frames, spec.dur0, spec.dur1);

    std::vector<double> out;
    std::size_t next_expected = 0;
    for (std::size_t f = 0; f < frames; ++f) {
        std::size_t a = f * frame, b = std::min(x.size(), a + frame);
        for (int c = 0; c < plan[f]; ++c) {
            std::size_t at = out.size();
            // Blend the tail already emitted into the lead-in of this frame.
            if (a != next_expected && a >= fade && at >= fade) {
                for (std::size_t i = 0; i < fade; ++i) {
                    double w = static_cast<double>(i + 1) / static_cast<double>(fade + 1);
                    double& o = out[at - fade + i];
                    o = o * (1.0 - w) + x[a - fade + i] * w;
                }
            }
            out.insert(out.end(), x.begin() + static_cast<std::ptrdiff_t>(a), x.begin() + static_cast<std::ptrdiff_t>(b));
            next_expected = b;
        }
    }
    return out;
}

std::vector<double> usds(const std::vector<double>& x, const ShiftSpec& spec, int sample_rate) {
    auto out = usds_core(x, spec, sample_rate);
    apply_volume(out, spec.vol0, spec.vol1);
    return out;
}

std::size_t apply_volume(std::vector<double>& x, double v0, double v1) {
    std::size_t clipped = 0;
    std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
        double v = x[i] * (v0 + (v1 - v0) * t);
        if (v > 1.0 || v < -1.0) {
            v = std::clamp(v, -1.0, 1.0);
            ++clipped;
        }
        x[i] = v;
    }
    return clipped;
}

std::string_view path_name(ShiftPath p) {
    switch (p) {
        case ShiftPath::Psola: return "psola";
        case ShiftPath::Usds: return "usds";
        case ShiftPath::VoicedToUnvoiced: return "voiced-unvoiced";
        case ShiftPath::UnvoicedToVoiced: return "unvoiced-voiced";
        case ShiftPath::Burst: return "burst";
    }
    return "?";
}

ShiftPath choose_path(Phone p1, Phone p2) {
    auto c1 = category(p1), c2 = category(p2);
    if (c1 == Category::Stop && (c2 == Category::Stop || c2 == Category::Silence)) return ShiftPath::Burst;
    // A stop onset or silence takes the voicing of the other end.
    if (c1 == Category::Stop || c1 == Category::Silence) c1 = c2;
    if (c2 == Category::Silence || c2 == Category::Stop) c2 = c1;
    bool v1 = c1 == Category::Sonorant, v2 = c2 == Category::Sonorant;
    if (v1 && v2) return ShiftPath::Psola;
    if (!v1 && !v2) return ShiftPath::Usds;
    return v1 ? ShiftPath::VoicedToUnvoiced : ShiftPath::UnvoicedToVoiced;
}

namespace {

ShiftResult voiced_to_unvoiced(const std::vector<double>& x, const ShiftSpec& spec, double smoothing_ms,
                               int sample_rate) {
    ShiftResult r;
    r.path = ShiftPath::VoicedToUnvoiced;
    PulseTrain pulses;
    try {
        pulses = detect_pulses(x, smoothing_ms, sample_rate);
    } catch (const SignalError&) {
    }
    if (pulses.peaks.size() < 2) {
        r.warnings.push_back("no voiced section found; duration shifted with USDS only");
        r.samples = usds_core(x, spec, sample_rate);
        r.split = 0;
        r.clipped = apply_volume(r.samples, spec.vol0, spec.vol1);
        return r;
    }
    const auto& p = pulses.peaks;
    std::size_t last = p.back(), prev = p[p.size() - 2];
    r.split = std::min(x.size(), last + (last - prev));
    double frac = x.empty() ? 0.0 : static_cast<double>(r.split) / static_cast<double>(x.size());
    PulseTrain head_pulses{p, r.split};
    auto head = psola_core(slice(x, 0, r.split), head_pulses, spec.slice(0.0, frac));
    auto tail = usds_core(slice(x, r.split, x.size()), spec.slice(frac, 1.0), sample_rate);
    head.insert(head.end(), tail.begin(), tail.end());
    r.samples = std::move(head);
    r.clipped = apply_volume(r.samples, spec.vol0, spec.vol1);
    return r;
}

}  // namespace

ShiftResult shift_diphone(const std::vector<double>& clip, Phone p1, Phone p2, const ShiftSpec& spec,
                          double smoothing_ms, int sample_rate) {
    ShiftPath path = choose_path(p1, p2);
    ShiftResult r;
    r.path = path;
    switch (path) {
        case ShiftPath::Burst:
            r.samples = clip;
            r.clipped = apply_volume(r.samples, spec.vol0, spec.vol1);
            return r;
        case ShiftPath::Usds:
            r.samples = usds_core(clip, spec, sample_rate);
            r.clipped = apply_volume(r.samples, spec.vol0, spec.vol1);
            return r;
        case ShiftPath::Psola: {
            PulseTrain pulses;
            try {
                pulses = detect_pulses(clip, smoothing_ms, sample_rate);
            } catch (const SignalError&) {
            }
            if (pulses.peaks.size() < 2) {
                r.warnings.push_back("pulse detection failed on a voiced clip; using USDS");
                r.samples = usds_core(clip, spec, sample_rate);
            } else {
                r.samples = psola_core(clip, pulses, spec);
                r.split = clip.size();
            }
            r.clipped = apply_volume(r.samples, spec.vol0, spec.vol1);
            return r;
        }
        case ShiftPath::VoicedToUnvoiced:
            return voiced_to_unvoiced(clip, spec, smoothing_ms, sample_rate);
        case ShiftPath::UnvoicedToVoiced: {
            std::vector<double> rev(clip.rbegin(), clip.rend());
            ShiftResult v = voiced_to_unvoiced(rev, spec.reversed(), smoothing_ms, sample_rate);
            v.path = ShiftPath::UnvoicedToVoiced;
            std::reverse(v.samples.begin(), v.samples.end());
            v.split = clip.size() - v.split;
            return v;
        }
    }
    return r;
}

ConcatResult smooth_concat(const std::vector<double>& w1, const std::vector<double>& w2, Phone connective,
                           int sample_rate) {
    ConcatResult r;
    auto c = category(connective);
    if (c == Category::Silence || c == Category::Stop || w1.empty() || w2.empty()) {
        r.samples = w1;
        r.samples.insert(r.samples.end(), w2.begin(), w2.end());
        return r;
    }
    std::size_t win = static_cast<std::size_t>(sample_rate) / 50;
    std::size_t n1 = w1.size(), n2 = w2.size();
    std::size_t s1 = n1 - std::min(win, n1);
    std::size_t i1 = static_cast<std::size_t>(std::max_element(w1.begin() + static_cast<std::ptrdiff_t>(s1), w1.end()) - w1.begin());
    std::size_t e2 = std::min(win, n2);
    std::size_t i2 = static_cast<std::size_t>(std::max_element(w2.begin(), w2.begin() + static_cast<std::ptrdiff_t>(e2)) - w2.begin());

    // w2[i2] lands on w1[i1]; the overlap is w1's tail after the join point.
    std::size_t ov = (n1 - i1) + i2;
    if (i2 > i1 || ov > n1 || ov > n2) {
        ov = std::min({ov, n1, n2});
        r.shrunk = true;
    }
    std::size_t o = n1 - ov;
    r.overlap = ov;
    r.samples.assign(w1.begin(), w1.begin() + static_cast<std::ptrdiff_t>(o));
    r.samples.reserve(n1 + n2 - ov);
    for (std::size_t i = 0; i < ov; ++i) {
        double w = ov > 1 ? static_cast<double>(i) / static_cast<double>(ov - 1) : 0.5;
        r.samples.push_back(w1[o + i] * (1.0 - w) + w2[i] * w);
    }
    r.samples.insert(r.samples.end(), w2.begin() + static_cast<std::ptrdiff_t>(ov), w2.end());
    return r;
}

}  // namespace tts
