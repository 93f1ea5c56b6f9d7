#include "choreo/repertoire.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "choreo/audio.hpp"
#include "choreo/error.hpp"
#include "choreo/threading.hpp"

namespace fs = std::filesystem;

namespace choreo {

std::size_t Repertoire::find(const std::string& id) const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].clip.id == id) return i;
    }
    return npos;
}

Repertoire ingest_repertoire(const std::string& directory, const SkeletonDescriptor& descriptor) {
    descriptor.validate();
    if (!fs::is_directory(directory)) {
        throw IoError("repertoire directory not found: " + directory);
    }
    Repertoire rep;
    rep.descriptor = descriptor;

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    for (const fs::path& file : files) {
        MotionClip clip = load_motion_json(file.string());
        if (clip.frame_rate != kMotionFps) {
            throw ValidationError("clip '" + clip.id + "' (" + file.string() + "): frame rate " +
                                  std::to_string(clip.frame_rate) + ", expected " +
                                  std::to_string(kMotionFps));
        }
        if (clip.length() != kRepertoireFrames) {
            throw ValidationError("clip '" + clip.id + "' (" + file.string() + "): " +
                                  std::to_string(clip.length()) + " frames, expected 160");
        }
        validate_clip(clip, descriptor);

        RepertoireEntry entry;
        entry.clip = std::move(clip);
        fs::path wav = file;
        wav.replace_extension(".wav");
        if (fs::is_regular_file(wav)) {
            entry.music_path = wav.string();
        }
        rep.entries.push_back(std::move(entry));
    }

    // Lexicographic by id keeps ingestion order-deterministic even when file
    // names and clip ids disagree.
    std::sort(rep.entries.begin(), rep.entries.end(),
              [](const RepertoireEntry& a, const RepertoireEntry& b) {
                  return a.clip.id < b.clip.id;
              });
    for (std::size_t i = 1; i < rep.entries.size(); ++i) {
        if (rep.entries[i].clip.id == rep.entries[i - 1].clip.id) {
            throw ValidationError("duplicate clip id '" + rep.entries[i].clip.id + "'");
        }
    }
    return rep;
}

void build_caches(Repertoire& repertoire, const BuildOptions& opts) {
    const int mid_start = (kRepertoireFrames - kSegmentFrames) / 2;

    parallel_for(repertoire.entries.size(), [&](std::size_t i) {
        RepertoireEntry& entry = repertoire.entries[i];
        entry.clip.beats.reset();
        beat_count(entry.clip, opts.motion_beats);
        entry.tempo_density = motion_tempo_density(entry.clip);

        MotionClip middle = slice(entry.clip, mid_start, kSegmentFrames);
        middle.beats.reset();
        entry.mid_beat_count = beat_count(middle, opts.motion_beats);
        entry.raw_labels = motion_labels(middle, repertoire.descriptor);
    });

    std::vector<RawLabels> motion_samples;
    motion_samples.reserve(repertoire.entries.size());
    for (const RepertoireEntry& e : repertoire.entries) motion_samples.push_back(e.raw_labels);

    // Music bounds come from 4-second windows of every paired WAV.
    std::vector<RawLabels> music_samples;
    for (const RepertoireEntry& e : repertoire.entries) {
        if (!e.music_path) continue;
        AudioBuffer audio = decode_wav(*e.music_path);
        if (audio.duration_seconds() < 4.0) continue;
        MusicFeatures features = analyze_music(audio, opts.onset);
        const int windows = static_cast<int>(features.duration_seconds) - 3;
        for (int t = 0; t < windows; ++t) {
            music_samples.push_back(music_labels(features, t * kMusicFps));
        }
    }

    repertoire.label_table = LabelTable::fit(motion_samples, music_samples, opts.normalization);
    refresh_styles(repertoire);
}

void refresh_styles(Repertoire& repertoire) {
    for (RepertoireEntry& entry : repertoire.entries) {
        entry.style = repertoire.label_table.normalize_motion(entry.raw_labels);
        entry.caches_ready = true;
    }
}

void apply_external_styles(Repertoire& repertoire,
                           const std::map<std::string, StyleVector>& embeddings) {
    for (RepertoireEntry& entry : repertoire.entries) {
        auto it = embeddings.find(entry.clip.id);
        if (it == embeddings.end()) {
            throw ValidationError("external embeddings: no vector for clip '" + entry.clip.id + "'");
        }
        entry.style = it->second;
        entry.caches_ready = true;
    }
}

// ---------------------------------------------------------------------------
// Binary cache. Little-endian, magic "CGRF", u16 version, then one
// length-prefixed record per section: descriptor JSON, label table, entries.

namespace {

class ByteWriter {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u16(std::uint16_t v) {
        u8(v & 0xff);
        u8(v >> 8);
    }
    void u32(std::uint32_t v) {
        u16(v & 0xffff);
        u16(v >> 16);
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        for (int i = 0; i < 8; ++i) u8((bits >> (8 * i)) & 0xff);
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes_.insert(bytes_.end(), s.begin(), s.end());
    }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    ByteReader(const std::uint8_t* data, std::size_t size, std::string origin)
        : data_(data), size_(size), origin_(std::move(origin)) {}

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }
    std::uint16_t u16() {
        const std::uint16_t lo = u8();
        return static_cast<std::uint16_t>(lo | (u8() << 8));
    }
    std::uint32_t u32() {
        const std::uint32_t lo = u16();
        return lo | (static_cast<std::uint32_t>(u16()) << 16);
    }
    double f64() {
        need(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == size_; }

private:
    void need(std::size_t n) {
        if (pos_ + n > size_) {
            throw ParseError("cache " + origin_ + ": truncated record");
        }
    }
    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
    std::string origin_;
};

enum RecordType : std::uint8_t { kRecDescriptor = 1, kRecLabelTable = 2, kRecEntry = 3 };

void write_record(std::ofstream& out, RecordType type, const ByteWriter& payload) {
    ByteWriter header;
    header.u32(static_cast<std::uint32_t>(payload.bytes().size() + 1));
    header.u8(type);
    out.write(reinterpret_cast<const char*>(header.bytes().data()),
              static_cast<std::streamsize>(header.bytes().size()));
    out.write(reinterpret_cast<const char*>(payload.bytes().data()),
              static_cast<std::streamsize>(payload.bytes().size()));
}

} // namespace

void save_cache(const Repertoire& repertoire, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write cache file: " + path);

    out.write("CGRF", 4);
    ByteWriter version;
    version.u16(kCacheVersion);
    out.write(reinterpret_cast<const char*>(version.bytes().data()), 2);

    {
        ByteWriter w;
        w.str(descriptor_to_json(repertoire.descriptor));
        write_record(out, kRecDescriptor, w);
    }
    {
        ByteWriter w;
        for (const auto& b : repertoire.label_table.motion_bounds()) {
            w.f64(b.lo);
            w.f64(b.hi);
        }
        for (const auto& b : repertoire.label_table.music_bounds()) {
            w.f64(b.lo);
            w.f64(b.hi);
        }
        write_record(out, kRecLabelTable, w);
    }
    for (const RepertoireEntry& entry : repertoire.entries) {
        ByteWriter w;
        w.str(entry.clip.id);
        w.str(entry.music_path ? *entry.music_path : std::string());
        w.u32(static_cast<std::uint32_t>(entry.clip.length()));
        w.u32(static_cast<std::uint32_t>(repertoire.descriptor.joint_count));
        for (const Pose& pose : entry.clip.frames) {
            for (const Vec3& v : pose) {
                w.f64(v.x);
                w.f64(v.y);
                w.f64(v.z);
            }
        }
        const std::vector<int>& beats = entry.clip.beats ? *entry.clip.beats : std::vector<int>{};
        w.u32(static_cast<std::uint32_t>(beats.size()));
        for (int b : beats) w.u32(static_cast<std::uint32_t>(b));
        for (double v : entry.raw_labels) w.f64(v);
        w.u32(static_cast<std::uint32_t>(entry.mid_beat_count));
        w.u32(static_cast<std::uint32_t>(entry.tempo_density.values.size()));
        for (double v : entry.tempo_density.values) w.f64(v);
        write_record(out, kRecEntry, w);
    }
    if (!out) throw IoError("failed writing cache file: " + path);
}

Repertoire load_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open cache file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (bytes.size() < 6 || std::memcmp(bytes.data(), "CGRF", 4) != 0) {
        throw ParseError("cache " + path + ": bad magic (not a CGRF cache)");
    }
    const std::uint16_t version = bytes[4] | (bytes[5] << 8);
    if (version != kCacheVersion) {
        throw ParseError("cache " + path + ": stale cache version " + std::to_string(version) +
                         ", expected " + std::to_string(kCacheVersion) + "; rebuild the dataset");
    }

    Repertoire rep;
    bool have_descriptor = false, have_table = false;
    std::size_t pos = 6;
    while (pos < bytes.size()) {
        if (pos + 4 > bytes.size()) throw ParseError("cache " + path + ": truncated record header");
        std::uint32_t size = bytes[pos] | (bytes[pos + 1] << 8) | (bytes[pos + 2] << 16) |
                             (static_cast<std::uint32_t>(bytes[pos + 3]) << 24);
        pos += 4;
        if (size < 1 || pos + size > bytes.size()) {
            throw ParseError("cache " + path + ": truncated record body");
        }
        const std::uint8_t type = bytes[pos];
        ByteReader r(bytes.data() + pos + 1, size - 1, path);
        pos += size;

        if (type == kRecDescriptor) {
            rep.descriptor = descriptor_from_json(r.str(), path);
            have_descriptor = true;
        } else if (type == kRecLabelTable) {
            std::array<LabelTable::Bounds, 4> motion{}, music{};
            for (auto& b : motion) {
                b.lo = r.f64();
                b.hi = r.f64();
            }
            for (auto& b : music) {
                b.lo = r.f64();
                b.hi = r.f64();
            }
            rep.label_table = LabelTable::from_bounds(motion, music);
            have_table = true;
        } else if (type == kRecEntry) {
            RepertoireEntry entry;
            entry.clip.id = r.str();
            const std::string music = r.str();
            if (!music.empty()) entry.music_path = music;
            const std::uint32_t frames = r.u32();
            const std::uint32_t joints = r.u32();
            entry.clip.frame_rate = kMotionFps;
            entry.clip.frames.assign(frames, Pose(joints));
            for (std::uint32_t f = 0; f < frames; ++f) {
                for (std::uint32_t j = 0; j < joints; ++j) {
                    entry.clip.frames[f][j] = Vec3{r.f64(), r.f64(), r.f64()};
                }
            }
            const std::uint32_t n_beats = r.u32();
            std::vector<int> beats(n_beats);
            for (auto& b : beats) b = static_cast<int>(r.u32());
            entry.clip.beats = std::move(beats);
            for (double& v : entry.raw_labels) v = r.f64();
            entry.mid_beat_count = static_cast<int>(r.u32());
            const std::uint32_t td = r.u32();
            entry.tempo_density.values.resize(td);
            for (double& v : entry.tempo_density.values) v = r.f64();
            if (!r.done()) throw ParseError("cache " + path + ": trailing bytes in entry record");
            rep.entries.push_back(std::move(entry));
        } else {
            throw ParseError("cache " + path + ": unknown record type " + std::to_string(type));
        }
    }
    if (!have_descriptor || !have_table) {
        throw ParseError("cache " + path + ": missing descriptor or label table record");
    }
    refresh_styles(rep);
    return rep;
}

} // namespace choreo
