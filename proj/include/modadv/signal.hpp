#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "modadv/errors.hpp"
#include "modadv/numerics.hpp"
#include "modadv/rng.hpp"
#include "modadv/util.hpp"

namespace modadv {

// Canonical scheme order; the integer codes are part of the IQD wire format.
enum class Scheme : std::uint8_t {
    BPSK = 0, QPSK, PSK8, QAM16, QAM64, PAM4, CPFSK, GFSK
};

constexpr int kNumSchemes = 8;
constexpr int kFrameLen = 128;       // complex samples per frame
constexpr int kFeatureDim = 256;     // 128 in-phase then 128 quadrature
constexpr int kSamplesPerSymbol = 8;
constexpr int kNumSnrLevels = 20;    // -20 dB .. +18 dB in 2 dB steps
constexpr int kSnrMin = -20;
constexpr int kSnrMax = 18;

inline const char* scheme_name(Scheme s) {
    static const char* names[kNumSchemes] = {"BPSK", "QPSK", "8PSK", "QAM16",
                                             "QAM64", "PAM4", "CPFSK", "GFSK"};
    return names[static_cast<int>(s)];
}

inline std::optional<Scheme> scheme_from_name(const std::string& name) {
    for (int i = 0; i < kNumSchemes; ++i)
        if (name == scheme_name(static_cast<Scheme>(i))) return static_cast<Scheme>(i);
    return std::nullopt;
}

inline bool snr_on_grid(int snr_db) {
    return snr_db >= kSnrMin && snr_db <= kSnrMax && (snr_db - kSnrMin) % 2 == 0;
}

inline int snr_index(int snr_db) { return (snr_db - kSnrMin) / 2; }
inline int snr_from_index(int idx) { return kSnrMin + 2 * idx; }

// One labeled example. Features are kept in the file's 32-bit precision;
// everything downstream promotes to double.
struct IQFrame {
    std::vector<float> iq; // kFeatureDim values
    Scheme label = Scheme::BPSK;
    std::int8_t snr_db = 0;

    Vec features() const {
        Vec out(iq.size());
        for (std::size_t i = 0; i < iq.size(); ++i) out[i] = iq[i];
        return out;
    }

    bool operator==(const IQFrame& o) const = default;
};

// Per-feature min/max map onto [0, 1]. Fitted on the training split only.
struct MinMaxScaler {
    Vec min;
    Vec max;

    std::size_t dim() const { return min.size(); }

    Vec apply(const Vec& x) const {
        if (x.size() != dim()) throw InvalidInput("scaler apply: dimension mismatch");
        Vec out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            double v = (x[i] - min[i]) / (max[i] - min[i]);
            out[i] = std::clamp(v, 0.0, 1.0);
        }
        return out;
    }

    // Exact affine inverse; intentionally unclamped.
    Vec invert(const Vec& x) const {
        if (x.size() != dim()) throw InvalidInput("scaler invert: dimension mismatch");
        Vec out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = min[i] + x[i] * (max[i] - min[i]);
        return out;
    }

    bool operator==(const MinMaxScaler& o) const = default;
};

struct Dataset {
    std::vector<IQFrame> frames;
    std::vector<std::uint8_t> split; // 0 = train, 1 = test
    std::optional<MinMaxScaler> scaler;
    std::uint64_t seed = 0;

    std::vector<std::size_t> train_indices() const { return indices_where(0); }
    std::vector<std::size_t> test_indices() const { return indices_where(1); }

private:
    std::vector<std::size_t> indices_where(std::uint8_t flag) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < frames.size(); ++i)
            if (split[i] == flag) out.push_back(i);
        return out;
    }
};

namespace detail {

struct Cx {
    double re = 0.0, im = 0.0;
};

inline std::uint32_t gray_to_binary(std::uint32_t g) {
    for (std::uint32_t mask = g >> 1; mask; mask >>= 1) g ^= mask;
    return g;
}

// Root-raised-cosine taps, roll-off beta, `span` symbols each side is span/2,
// unit tap energy. Time in symbol units.
inline std::vector<double> rrc_taps(double beta, int sps, int span) {
    int half = span * sps / 2;
    std::vector<double> h(2 * half + 1);
    const double pi = std::numbers::pi;
    for (int k = -half; k <= half; ++k) {
        double t = static_cast<double>(k) / sps;
        double v;
        if (k == 0) {
            v = 1.0 - beta + 4.0 * beta / pi;
        } else if (std::abs(std::abs(t) - 1.0 / (4.0 * beta)) < 1e-9) {
            v = (beta / std::numbers::sqrt2) *
                ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * beta)) +
                 (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * beta)));
        } else {
            v = (std::sin(pi * t * (1.0 - beta)) +
                 4.0 * beta * t * std::cos(pi * t * (1.0 + beta))) /
                (pi * t * (1.0 - 16.0 * beta * beta * t * t));
        }
        h[k + half] = v;
    }
    double energy = 0.0;
    for (double x : h) energy += x * x;
    double s = 1.0 / std::sqrt(energy);
    for (double& x : h) x *= s;
    return h;
}

// Gaussian smoothing taps for GFSK, normalized to unit sum so the cumulative
// phase per symbol stays pi * h_index.
inline std::vector<double> gaussian_taps(double bt, int sps, int span_symbols) {
    int half = span_symbols * sps / 2;
    std::vector<double> g(2 * half + 1);
    const double pi = std::numbers::pi;
    double sigma = std::sqrt(std::log(2.0)) / (2.0 * pi * bt); // in symbol units
    for (int k = -half; k <= half; ++k) {
        double t = static_cast<double>(k) / sps;
        g[k + half] = std::exp(-t * t / (2.0 * sigma * sigma));
    }
    double sum = 0.0;
    for (double x : g) sum += x;
    for (double& x : g) x /= sum;
    return g;
}

// Unit-average-energy constellation for a linear scheme.
inline std::vector<Cx> constellation(Scheme s) {
    const double pi = std::numbers::pi;
    std::vector<Cx> pts;
    auto psk = [&](int m, double offset) {
        pts.resize(m);
        for (int sym = 0; sym < m; ++sym) {
            // data word `sym` lands on the Gray-adjacent angular position
            std::uint32_t pos = gray_to_binary(static_cast<std::uint32_t>(sym));
            double ang = 2.0 * pi * pos / m + offset;
            pts[sym] = {std::cos(ang), std::sin(ang)};
        }
    };
    auto pam_level = [](std::uint32_t word, int m) {
        std::uint32_t pos = gray_to_binary(word);
        return -(m - 1.0) + 2.0 * static_cast<double>(pos);
    };
    switch (s) {
        case Scheme::BPSK: psk(2, 0.0); break;
        case Scheme::QPSK: psk(4, pi / 4.0); break;
        case Scheme::PSK8: psk(8, 0.0); break;
        case Scheme::QAM16: {
            pts.resize(16);
            for (int sym = 0; sym < 16; ++sym) {
                double i = pam_level((sym >> 2) & 3, 4), q = pam_level(sym & 3, 4);
                pts[sym] = {i / std::sqrt(10.0), q / std::sqrt(10.0)};
            }
            break;
        }
        case Scheme::QAM64: {
            pts.resize(64);
            for (int sym = 0; sym < 64; ++sym) {
                double i = pam_level((sym >> 3) & 7, 8), q = pam_level(sym & 7, 8);
                pts[sym] = {i / std::sqrt(42.0), q / std::sqrt(42.0)};
            }
            break;
        }
        case Scheme::PAM4: {
            pts.resize(4);
            for (int sym = 0; sym < 4; ++sym)
                pts[sym] = {pam_level(sym, 4) / std::sqrt(5.0), 0.0};
            break;
        }
        default: throw InvalidInput("constellation: not a linear scheme");
    }
    return pts;
}

} // namespace detail

// Signal and noise parts of one frame, pre-summation. The split exists so
// realized SNR can be measured from the exact components.
struct FrameComponents {
    Vec signal; // kFeatureDim, unit average power
    Vec noise;  // kFeatureDim
};

// Synthesis recipe, fixed for the whole artifact: Gray-mapped constellations
// with RRC(0.35) pulse shaping at 8 samples/symbol for the linear schemes,
// CPFSK at index 0.5, GFSK at BT=0.35 index 0.5, symbol boundaries aligned to
// sample 0, uniform random initial phase, exact unit signal power per frame,
// complex AWGN matching the nominal SNR in expectation.
inline FrameComponents synthesize_components(Scheme scheme, int snr_db, Rng& rng) {
    if (!snr_on_grid(snr_db))
        throw InvalidInput("snr " + std::to_string(snr_db) + " dB is off the -20..18 grid");

    const double pi = std::numbers::pi;
    const int sps = kSamplesPerSymbol;
    std::vector<detail::Cx> sig(kFrameLen);

    bool linear = scheme != Scheme::CPFSK && scheme != Scheme::GFSK;
    if (linear) {
        static const int span = 8; // RRC span in symbols
        const auto taps = detail::rrc_taps(0.35, sps, span);
        const auto pts = detail::constellation(scheme);
        const int half = span * sps / 2;
        const int nsym = kFrameLen / sps + span; // extra symbols cover filter support
        std::vector<detail::Cx> syms(nsym);
        for (auto& c : syms) c = pts[rng.next_below(static_cast<std::uint32_t>(pts.size()))];
        // impulse-train convolution; output window [half, half+128) has full support
        for (int n = 0; n < kFrameLen; ++n) {
            int out = n + half;
            detail::Cx acc;
            for (int k = 0; k < nsym; ++k) {
                int tap = out - k * sps;
                if (tap < 0 || tap >= static_cast<int>(taps.size())) continue;
                acc.re += taps[tap] * syms[k].re;
                acc.im += taps[tap] * syms[k].im;
            }
            sig[n] = acc;
        }
    } else {
        const double index = 0.5;
        const int guard = 2; // symbols of warm-up before the window
        const int nsym = kFrameLen / sps + 2 * guard;
        std::vector<double> bits(nsym);
        for (auto& b : bits) b = rng.next_below(2) ? 1.0 : -1.0;
        std::vector<double> freq(nsym * sps);
        if (scheme == Scheme::CPFSK) {
            for (int n = 0; n < nsym * sps; ++n) freq[n] = bits[n / sps];
        } else {
            const auto g = detail::gaussian_taps(0.35, sps, 2 * guard);
            const int ghalf = static_cast<int>(g.size()) / 2;
            for (int n = 0; n < nsym * sps; ++n) {
                double acc = 0.0;
                for (int k = -ghalf; k <= ghalf; ++k) {
                    int m = n + k;
                    if (m < 0) m = 0;
                    if (m >= nsym * sps) m = nsym * sps - 1;
                    acc += g[k + ghalf] * bits[m / sps];
                }
                freq[n] = acc;
            }
        }
        double phase = 0.0;
        const int skip = guard * sps;
        for (int n = 0; n < skip + kFrameLen; ++n) {
            phase += pi * index * freq[n] / sps;
            if (n >= skip) sig[n - skip] = {std::cos(phase), std::sin(phase)};
        }
    }

    // random carrier phase, then exact unit average power
    double phi = rng.uniform(0.0, 2.0 * pi);
    double c = std::cos(phi), s = std::sin(phi);
    double power = 0.0;
    for (auto& v : sig) {
        double re = v.re * c - v.im * s;
        double im = v.re * s + v.im * c;
        v = {re, im};
        power += re * re + im * im;
    }
    power /= kFrameLen;
    if (power < 1e-30) throw InvalidInput("synthesized frame has zero power");
    double norm = 1.0 / std::sqrt(power);

    FrameComponents out;
    out.signal.resize(kFeatureDim);
    out.noise.resize(kFeatureDim);
    for (int n = 0; n < kFrameLen; ++n) {
        out.signal[n] = sig[n].re * norm;
        out.signal[kFrameLen + n] = sig[n].im * norm;
    }
    double noise_sigma = std::sqrt(std::pow(10.0, -snr_db / 10.0) / 2.0); // per real dim
    for (int n = 0; n < kFrameLen; ++n) {
        out.noise[n] = noise_sigma * rng.gaussian();
        out.noise[kFrameLen + n] = noise_sigma * rng.gaussian();
    }
    return out;
}

inline IQFrame synthesize_frame(Scheme scheme, int snr_db, Rng& rng) {
    FrameComponents parts = synthesize_components(scheme, snr_db, rng);
    IQFrame f;
    f.label = scheme;
    f.snr_db = static_cast<std::int8_t>(snr_db);
    f.iq.resize(kFeatureDim);
    for (int i = 0; i < kFeatureDim; ++i)
        f.iq[i] = static_cast<float>(parts.signal[i] + parts.noise[i]);
    return f;
}

// 8 schemes x 20 SNRs x frames_per_cell frames, scheme-major order, with a
// seeded stratified 80/20 split. Every frame draws from its own derived
// stream, so the build parallelizes without changing bytes.
inline Dataset build_dataset(std::size_t frames_per_cell, std::uint64_t seed) {
    if (frames_per_cell < 1) throw InvalidInput("frames_per_cell must be >= 1");
    Dataset ds;
    ds.seed = seed;
    std::size_t total = static_cast<std::size_t>(kNumSchemes) * kNumSnrLevels * frames_per_cell;
    ds.frames.reserve(total);
    ds.split.assign(total, 0);

    std::size_t idx = 0;
    for (int s = 0; s < kNumSchemes; ++s) {
        for (int si = 0; si < kNumSnrLevels; ++si) {
            for (std::size_t i = 0; i < frames_per_cell; ++i, ++idx) {
                Rng frame_rng(derive_seed(seed, idx));
                ds.frames.push_back(
                    synthesize_frame(static_cast<Scheme>(s), snr_from_index(si), frame_rng));
            }
        }
    }

    constexpr std::uint64_t kSplitTag = 0x73706c69742d3830ULL; // "split-80"
    Rng split_rng(splitmix64(seed ^ kSplitTag));
    std::size_t cell_start = 0;
    for (int cell = 0; cell < kNumSchemes * kNumSnrLevels; ++cell) {
        std::vector<std::size_t> order(frames_per_cell);
        for (std::size_t i = 0; i < frames_per_cell; ++i) order[i] = cell_start + i;
        split_rng.shuffle(order);
        auto train_count = static_cast<std::size_t>(std::llround(0.8 * frames_per_cell));
        for (std::size_t i = 0; i < frames_per_cell; ++i)
            ds.split[order[i]] = i < train_count ? 0 : 1;
        cell_start += frames_per_cell;
    }
    return ds;
}

struct DegenerateFeatureError : Error {
    explicit DegenerateFeatureError(const std::string& msg)
        : Error("degenerate feature: " + msg) {}
};

// Per-feature min/max over the training split only.
inline MinMaxScaler fit_scaler(const Dataset& ds) {
    auto train = ds.train_indices();
    if (train.empty()) throw InvalidInput("fit_scaler: empty training split");
    std::size_t dim = ds.frames[train[0]].iq.size();
    MinMaxScaler sc;
    sc.min.assign(dim, std::numeric_limits<double>::infinity());
    sc.max.assign(dim, -std::numeric_limits<double>::infinity());
    for (std::size_t idx : train) {
        const auto& f = ds.frames[idx];
        for (std::size_t i = 0; i < dim; ++i) {
            double v = f.iq[i];
            sc.min[i] = std::min(sc.min[i], v);
            sc.max[i] = std::max(sc.max[i], v);
        }
    }
    for (std::size_t i = 0; i < dim; ++i)
        if (!(sc.max[i] > sc.min[i]))
            throw DegenerateFeatureError("feature " + std::to_string(i) +
                                         " is constant on the training split");
    return sc;
}

// ---- IQD v1 container ----------------------------------------------------
// Little-endian layout: "IQD1" u16 version=1, u16 feature_dim=256,
// u64 frame_count, u64 seed; per frame: u8 label, i8 snr_db, u8 split,
// u8 pad=0, 256 x f32.

constexpr std::size_t kIqdHeaderSize = 24;
constexpr std::size_t kIqdFrameSize = 4 + kFeatureDim * 4;

namespace detail {

inline void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
    b.push_back(static_cast<std::uint8_t>(v));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u64(std::vector<std::uint8_t>& b, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_f32(std::vector<std::uint8_t>& b, float v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
}

inline std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

inline float get_f32(const std::uint8_t* p) {
    std::uint32_t u = std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
                      (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
    float f;
    std::memcpy(&f, &u, 4);
    return f;
}

} // namespace detail

inline std::vector<std::uint8_t> encode_iqd(const Dataset& ds) {
    std::vector<std::uint8_t> b;
    b.reserve(kIqdHeaderSize + ds.frames.size() * kIqdFrameSize);
    for (char m : {'I', 'Q', 'D', '1'}) b.push_back(static_cast<std::uint8_t>(m));
    detail::put_u16(b, 1);
    detail::put_u16(b, kFeatureDim);
    detail::put_u64(b, ds.frames.size());
    detail::put_u64(b, ds.seed);
    for (std::size_t i = 0; i < ds.frames.size(); ++i) {
        const auto& f = ds.frames[i];
        if (f.iq.size() != kFeatureDim) throw InvalidInput("frame has wrong feature count");
        b.push_back(static_cast<std::uint8_t>(f.label));
        b.push_back(static_cast<std::uint8_t>(f.snr_db));
        b.push_back(ds.split[i]);
        b.push_back(0);
        for (float v : f.iq) detail::put_f32(b, v);
    }
    return b;
}

inline void write_iqd(const Dataset& ds, const std::string& path) {
    auto bytes = encode_iqd(ds);
    write_file_bytes(path, bytes.data(), bytes.size());
}

inline Dataset decode_iqd(const std::vector<std::uint8_t>& b) {
    auto fail = [](std::size_t offset, const std::string& what) -> void {
        throw FormatError(what + " at byte offset " + std::to_string(offset));
    };
    if (b.size() < kIqdHeaderSize)
        fail(b.size(), "truncated header, expected " + std::to_string(kIqdHeaderSize) +
                           " bytes, got " + std::to_string(b.size()));
    if (std::memcmp(b.data(), "IQD1", 4) != 0) fail(0, "bad magic, expected \"IQD1\"");
    std::uint16_t version = detail::get_u16(b.data() + 4);
    if (version != 1) fail(4, "unknown version " + std::to_string(version));
    std::uint16_t dim = detail::get_u16(b.data() + 6);
    if (dim != kFeatureDim) fail(6, "unsupported feature_dim " + std::to_string(dim));
    std::uint64_t count = detail::get_u64(b.data() + 8);
    std::uint64_t seed = detail::get_u64(b.data() + 16);

    std::size_t expected = kIqdHeaderSize + static_cast<std::size_t>(count) * kIqdFrameSize;
    if (b.size() != expected)
        fail(b.size(), "file length mismatch, expected " + std::to_string(expected) +
                           " bytes for " + std::to_string(count) + " frames, got " +
                           std::to_string(b.size()));

    Dataset ds;
    ds.seed = seed;
    ds.frames.resize(count);
    ds.split.resize(count);
    std::size_t off = kIqdHeaderSize;
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint8_t label = b[off];
        if (label >= kNumSchemes) fail(off, "label code " + std::to_string(label) + " > 7");
        auto snr = static_cast<std::int8_t>(b[off + 1]);
        if (!snr_on_grid(snr)) fail(off + 1, "snr " + std::to_string(snr) + " off grid");
        std::uint8_t split = b[off + 2];
        if (split > 1) fail(off + 2, "split flag " + std::to_string(split) + " not 0/1");
        if (b[off + 3] != 0) fail(off + 3, "nonzero pad byte");
        IQFrame& f = ds.frames[i];
        f.label = static_cast<Scheme>(label);
        f.snr_db = snr;
        f.iq.resize(kFeatureDim);
        for (int j = 0; j < kFeatureDim; ++j) f.iq[j] = detail::get_f32(&b[off + 4 + 4 * j]);
        ds.split[i] = split;
        off += kIqdFrameSize;
    }
    return ds;
}

inline Dataset read_iqd(const std::string& path) {
    return decode_iqd(read_file_bytes(path));
}

} // namespace modadv
