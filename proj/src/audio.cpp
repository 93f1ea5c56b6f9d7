#include "choreo/audio.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "choreo/error.hpp"

namespace choreo {

namespace {

struct Reader {
    std::ifstream in;
    std::string path;

    explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
        if (!in) throw IoError("cannot open WAV file: " + p);
    }

    void read(void* dst, std::size_t n) {
        in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
        if (in.gcount() != static_cast<std::streamsize>(n)) {
            throw ParseError("WAV " + path + ": truncated file");
        }
    }

    std::uint32_t u32() {
        std::uint8_t b[4];
        read(b, 4);
        return b[0] | (b[1] << 8) | (b[2] << 16) | (std::uint32_t(b[3]) << 24);
    }

    std::uint16_t u16() {
        std::uint8_t b[2];
        read(b, 2);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    }

    void skip(std::uint32_t n) { in.seekg(n, std::ios::cur); }
};

} // namespace

std::vector<double> resample_linear(const std::vector<double>& in, int src_rate, int dst_rate) {
    if (src_rate == dst_rate) return in;
    const std::size_t n_in = in.size();
    const std::size_t n_out =
        static_cast<std::size_t>(static_cast<double>(n_in) * dst_rate / src_rate);
    std::vector<double> out(n_out);
    const double step = static_cast<double>(src_rate) / dst_rate;
    for (std::size_t i = 0; i < n_out; ++i) {
        const double pos = i * step;
        const std::size_t i0 = std::min(static_cast<std::size_t>(pos), n_in - 1);
        const std::size_t i1 = std::min(i0 + 1, n_in - 1);
        const double frac = pos - static_cast<double>(i0);
        out[i] = in[i0] * (1.0 - frac) + in[i1] * frac;
    }
    return out;
}

AudioBuffer decode_wav(const std::string& path) {
    Reader r(path);

    char tag[4];
    r.read(tag, 4);
    if (std::memcmp(tag, "RIFF", 4) != 0) throw FormatError("WAV " + path + ": not a RIFF file");
    r.u32(); // riff size
    r.read(tag, 4);
    if (std::memcmp(tag, "WAVE", 4) != 0) throw FormatError("WAV " + path + ": not a WAVE file");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    bool have_fmt = false;
    std::vector<std::uint8_t> data;
    bool have_data = false;

    while (!have_data || !have_fmt) {
        if (!r.in.good() || r.in.peek() == EOF) break;
        r.read(tag, 4);
        std::uint32_t size = r.u32();
        if (std::memcmp(tag, "fmt ", 4) == 0) {
            format = r.u16();
            channels = r.u16();
            sample_rate = r.u32();
            r.u32(); // byte rate
            r.u16(); // block align
            bits = r.u16();
            if (size > 16) r.skip(size - 16);
            have_fmt = true;
        } else if (std::memcmp(tag, "data", 4) == 0) {
            data.resize(size);
            if (size) r.read(data.data(), size);
            have_data = true;
        } else {
            r.skip(size + (size & 1));
        }
    }
    if (!have_fmt || !have_data) throw ParseError("WAV " + path + ": missing fmt or data chunk");
    if (channels != 1 && channels != 2) {
        throw FormatError("WAV " + path + ": unsupported channel count " + std::to_string(channels));
    }

    std::vector<double> mono;
    if (format == 1 && bits == 16) {
        const std::size_t n = data.size() / 2 / channels;
        mono.resize(n);
        const std::int16_t* s = reinterpret_cast<const std::int16_t*>(data.data());
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int c = 0; c < channels; ++c) acc += s[i * channels + c] / 32768.0;
            mono[i] = acc / channels;
        }
    } else if (format == 3 && bits == 32) {
        const std::size_t n = data.size() / 4 / channels;
        mono.resize(n);
        const float* s = reinterpret_cast<const float*>(data.data());
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int c = 0; c < channels; ++c) acc += s[i * channels + c];
            mono[i] = acc / channels;
        }
    } else {
        throw FormatError("WAV " + path + ": unsupported encoding (format=" + std::to_string(format) +
                          ", bits=" + std::to_string(bits) + "); need 16-bit PCM or 32-bit float");
    }
    if (mono.empty()) throw ValidationError("WAV " + path + ": no audio samples");
    if (sample_rate == 0) throw ParseError("WAV " + path + ": zero sample rate in fmt chunk");

    AudioBuffer out;
    out.sample_rate = kAudioRate;
    out.samples = resample_linear(mono, static_cast<int>(sample_rate), kAudioRate);
    if (out.samples.empty()) throw ValidationError("WAV " + path + ": audio too short to resample");
    return out;
}

} // namespace choreo
