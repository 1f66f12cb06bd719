#include "tts/extractor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tts/common.hpp"

namespace tts {

SilenceProfile calibrate_silence(const Audio& silence) {
    const auto& x = silence.samples;
    if (x.empty()) throw SignalError("calibration recording is empty");
    double peak = 0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    if (peak >= 1.0 - kLsb24) throw SignalError("calibration recording is clipped");
    SilenceProfile p;
    p.amplitude_threshold = std::max(2.0 * peak, kLsb24);
    p.rms_threshold = std::max(rms(x, 0, x.size()), kLsb24);
    return p;
}

Span speech_span(const std::vector<double>& x, const SilenceProfile& profile, const FrameGrid& grid) {
    std::size_t n = x.size();
    std::vector<double> energy(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) energy[i + 1] = energy[i] + x[i] * x[i];
    std::size_t half = grid.window / 2;
    auto loud = [&](std::size_t i) {
        if (std::abs(x[i]) <= profile.amplitude_threshold) return false;
        std::size_t lo = i >= half ? i - half : 0;
        std::size_t hi = std::min(n, i + half);
        double r = std::sqrt((energy[hi] - energy[lo]) / static_cast<double>(hi - lo));
        return r > profile.rms_threshold;
    };
    Span s;
    std::size_t i = 0;
    while (i < n && !loud(i)) ++i;
    if (i == n) return s;
    std::size_t j = n;
    while (j > i && !loud(j - 1)) --j;
    s.begin = i;
    s.end = j;
    return s;
}

namespace {

std::vector<double> distance_to(const std::vector<Spectrum>& frames, const Spectrum& profile) {
    std::vector<double> d(frames.size());
    for (std::size_t f = 0; f < frames.size(); ++f) d[f] = spectral_distance(frames[f], profile);
    return d;
}

[[noreturn]] void ambiguous() { throw SignalError("ambiguous transition; re-record"); }

}  // namespace

MonophoneRecord section_monophone(const Audio& audio, Phone phone, const SilenceProfile& profile,
                                  const ExtractorParams& params) {
    const auto& x = audio.samples;
    const FrameGrid& grid = params.grid;
    Span span = speech_span(x, profile, grid);
    if (span.size() == 0) throw SignalError("no speech detected");

    MonophoneRecord rec;
    rec.phone = phone;
    auto fade = static_cast<std::size_t>(std::lround(params.fade_seconds * audio.sample_rate));
    rec.begin = span.begin >= fade ? span.begin - fade : 0;
    rec.end = std::min(x.size(), span.end + fade);

    std::vector<double> trimmed(x.begin() + static_cast<std::ptrdiff_t>(rec.begin),
                                x.begin() + static_cast<std::ptrdiff_t>(rec.end));
    std::size_t len = trimmed.size();
    std::size_t f = std::min(fade, len / 2);
    for (std::size_t i = 0; i < f; ++i) {
        double g = static_cast<double>(i) / static_cast<double>(f);
        trimmed[i] *= g;
        trimmed[len - 1 - i] *= g;
    }

    if (!is_persistent(phone)) {
        rec.burst = std::move(trimmed);
        rec.split_onset = rec.begin;
        rec.split_offset = rec.end;
        return rec;
    }

    rec.global_rms = rms(trimmed, 0, len);
    rec.short_rms = short_term_rms(trimmed, 0, len, grid);
    const auto& r = rec.short_rms;
    std::size_t up = 0;
    while (up < r.size() && !(r[up] > rec.global_rms)) ++up;
    std::size_t down = r.size();
    while (down > up && !(r[down - 1] > rec.global_rms)) --down;
    std::size_t so = len, sf = len;
    if (up < r.size()) {
        so = std::min(len, grid.frame_center(up));
        sf = std::min(len, grid.frame_center(down - 1));
        sf = std::max(sf, so);
    }
    rec.split_onset = rec.begin + so;
    rec.split_offset = rec.begin + sf;
    rec.onset.assign(trimmed.begin(), trimmed.begin() + static_cast<std::ptrdiff_t>(so));
    rec.sustain.assign(trimmed.begin() + static_cast<std::ptrdiff_t>(so),
                       trimmed.begin() + static_cast<std::ptrdiff_t>(sf));
    rec.offset.assign(trimmed.begin() + static_cast<std::ptrdiff_t>(sf), trimmed.end());
    double sustain_s = static_cast<double>(rec.sustain.size()) / audio.sample_rate;
    if (sustain_s < params.min_sustain_seconds)
        rec.warnings.push_back("sustain of " + std::string(symbol(phone)) + " is only " +
                               std::to_string(sustain_s) + " s");
    return rec;
}

Traversal locate_transition(const std::vector<double>& line) {
    std::size_t n = line.size();
    if (n < 2) ambiguous();
    Traversal t;
    t.mean = std::accumulate(line.begin(), line.end(), 0.0) / static_cast<double>(n);
    double lo_sum = 0, hi_sum = 0;
    std::size_t lo_n = 0, hi_n = 0;
    for (double v : line) {
        if (v < t.mean) lo_sum += v, ++lo_n;
        if (v > t.mean) hi_sum += v, ++hi_n;
    }
    if (lo_n == 0 || hi_n == 0) ambiguous();
    t.lower_mean = lo_sum / static_cast<double>(lo_n);
    t.upper_mean = hi_sum / static_cast<double>(hi_n);

    std::size_t a = n;
    for (std::size_t i = n; i-- > 0;)
        if (line[i] <= t.lower_mean) {
            a = i;
            break;
        }
    std::size_t b = n;
    for (std::size_t i = 0; i < n; ++i)
        if (line[i] >= t.upper_mean) {
            b = i;
            break;
        }
    if (a == n || b == n || a >= b) ambiguous();
    t.lower_cross = a;
    t.upper_cross = b;
    t.mid_cross = a + 1;
    while (t.mid_cross < b && line[t.mid_cross] < t.mean) ++t.mid_cross;

    std::size_t i = a;
    while (i > 0 && line[i - 1] < line[i]) --i;
    std::size_t j = b;
    while (j + 1 < n && line[j + 1] > line[j]) ++j;
    t.first = i;
    t.last = j;
    return t;
}

DiphoneClip extract_persistent_diphone(const Audio& audio, const Spectrum& first_profile,
                                       const Spectrum& second_profile, const SilenceProfile& profile,
                                       const ExtractorParams& params) {
    const auto& x = audio.samples;
    const FrameGrid& grid = params.grid;
    Span span = speech_span(x, profile, grid);
    if (span.size() == 0) throw SignalError("no speech detected");

    auto frames = stft_magnitudes(x, span.begin, span.end, grid);
    auto d1 = distance_to(frames, first_profile);
    auto d2 = distance_to(frames, second_profile);
    std::vector<double> line(frames.size());
    for (std::size_t f = 0; f < line.size(); ++f) line[f] = d2[f] - d1[f];
    line = moving_average(line, params.smoothing_frames);

    Traversal t = locate_transition(line);
    DiphoneClip clip;
    clip.span_begin = span.begin;
    clip.line = std::move(line);
    clip.lower_mean = t.lower_mean;
    clip.mean = t.mean;
    clip.upper_mean = t.upper_mean;
    clip.first_frame = t.first;
    clip.last_frame = t.last;
    clip.begin = std::min(span.end, span.begin + grid.frame_center(t.first));
    clip.end = std::min(span.end, span.begin + grid.frame_center(t.last) + 1);
    clip.boundary = std::min(span.end, span.begin + grid.frame_center(t.mid_cross));
    clip.samples.assign(x.begin() + static_cast<std::ptrdiff_t>(clip.begin),
                        x.begin() + static_cast<std::ptrdiff_t>(clip.end));
    return clip;
}

DiphoneClip extract_stop_diphone(const Audio& audio, const Spectrum& second_profile,
                                 const SilenceProfile& profile, const ExtractorParams& params) {
    const auto& x = audio.samples;
    const FrameGrid& grid = params.grid;
    Span span = speech_span(x, profile, grid);
    if (span.size() == 0) throw SignalError("no speech detected");

    auto frames = stft_magnitudes(x, span.begin, span.end, grid);
    auto line = moving_average(distance_to(frames, second_profile), params.smoothing_frames);
    auto [lo, hi] = std::minmax_element(line.begin(), line.end());
    double lo_v = *lo, range = *hi - *lo;
    if (!(range > 0)) ambiguous();
    for (auto& v : line) v = (v - lo_v) / range;

    DiphoneClip clip;
    clip.span_begin = span.begin;
    clip.mean = std::accumulate(line.begin(), line.end(), 0.0) / static_cast<double>(line.size());
    double hi_sum = 0;
    std::size_t hi_n = 0;
    for (double v : line)
        if (v > clip.mean) hi_sum += v, ++hi_n;
    clip.upper_mean = hi_n ? hi_sum / static_cast<double>(hi_n) : clip.mean;

    std::size_t c = 0;
    while (c < line.size() && line[c] < clip.upper_mean) ++c;
    if (c == line.size()) ambiguous();
    std::size_t j = c;
    while (j + 1 < line.size() && line[j + 1] > line[j]) ++j;
    clip.boundary = span.begin + grid.frame_center(c);
    clip.last_frame = j;
    clip.end = std::min(span.end, span.begin + grid.frame_center(j) + 1);

    // Latest quiet RMS frame ending before the crossing marks the occlusion.
    auto full_rms = short_term_rms(x, 0, x.size(), grid);
    std::size_t start = span.begin;
    bool found = false;
    for (std::size_t k = full_rms.size(); k-- > 0;) {
        std::size_t frame_end = grid.frame_start(k) + grid.window;
        if (frame_end > clip.boundary) continue;
        if (full_rms[k] < profile.rms_threshold) {
            start = frame_end - 1;
            found = true;
            break;
        }
    }
    if (!found)
        clip.warnings.push_back("no occlusion silence before the release; clip starts at the speech onset");
    clip.begin = std::min(start, clip.end);
    clip.first_frame = clip.begin >= span.begin ? (clip.begin - span.begin) / grid.hop : 0;
    clip.line = std::move(line);
    clip.samples.assign(x.begin() + static_cast<std::ptrdiff_t>(clip.begin),
                        x.begin() + static_cast<std::ptrdiff_t>(clip.end));
    return clip;
}

}  // namespace tts
