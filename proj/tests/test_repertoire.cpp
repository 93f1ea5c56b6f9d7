#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "choreo/error.hpp"
#include "choreo/repertoire.hpp"
#include "support/synth.hpp"

using namespace choreo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::vector<std::uint8_t> read_bytes(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("ingest_repertoire") {
    const SkeletonDescriptor d = SkeletonDescriptor::default21();

    SUBCASE("empty directory gives an empty repertoire") {
        TempDir dir("choreo-ingest-empty");
        const Repertoire rep = ingest_repertoire(dir.path.string(), d);
        CHECK(rep.size() == 0);
    }
    SUBCASE("three clips come back in id order") {
        TempDir dir("choreo-ingest-3");
        for (const char* id : {"zeta", "alpha", "mid"}) {
            testsupport::DanceParams p;
            p.seed = std::hash<std::string>{}(id);
            save_motion_json(testsupport::make_dance_clip(id, p),
                             (dir.path / (std::string(id) + ".json")).string());
        }
        const Repertoire rep = ingest_repertoire(dir.path.string(), d);
        REQUIRE(rep.size() == 3);
        CHECK(rep.entries[0].clip.id == "alpha");
        CHECK(rep.entries[1].clip.id == "mid");
        CHECK(rep.entries[2].clip.id == "zeta");
        for (const auto& e : rep.entries) CHECK_FALSE(e.caches_ready);
    }
    SUBCASE("wrong frame count names the clip and the expectation") {
        TempDir dir("choreo-ingest-bad");
        testsupport::DanceParams p;
        p.frames = 150;
        save_motion_json(testsupport::make_dance_clip("shorty", p),
                         (dir.path / "shorty.json").string());
        CHECK_THROWS_WITH_AS(ingest_repertoire(dir.path.string(), d),
                             doctest::Contains("expected 160"), ValidationError);
        CHECK_THROWS_WITH_AS(ingest_repertoire(dir.path.string(), d),
                             doctest::Contains("shorty"), ValidationError);
    }
    SUBCASE("ingestion is deterministic") {
        TempDir dir("choreo-ingest-det");
        testsupport::CorpusParams cp;
        cp.clip_count = 6;
        testsupport::write_corpus(dir.path.string(), cp);
        const std::string clips = (dir.path / "clips").string();
        Repertoire a = ingest_repertoire(clips, d);
        Repertoire b = ingest_repertoire(clips, d);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a.entries[i].clip.id == b.entries[i].clip.id);
            CHECK(a.entries[i].clip.frames == b.entries[i].clip.frames);
        }
    }
}

TEST_CASE("cache round trip and determinism") {
    TempDir dir("choreo-cache");
    testsupport::CorpusParams cp;
    cp.clip_count = 5;
    cp.with_click_wavs = true;
    testsupport::write_corpus(dir.path.string(), cp);

    Repertoire rep = ingest_repertoire((dir.path / "clips").string(),
                                       SkeletonDescriptor::default21());
    build_caches(rep);
    REQUIRE(rep.size() == 5);
    for (const auto& e : rep.entries) {
        CHECK(e.caches_ready);
        CHECK(e.clip.beats.has_value());
        CHECK(e.tempo_density.length() == 160);
        CHECK(e.music_path.has_value());
    }

    const std::string cache1 = (dir.path / "rep1.cgrf").string();
    const std::string cache2 = (dir.path / "rep2.cgrf").string();
    save_cache(rep, cache1);

    SUBCASE("round trip: field-for-field equality") {
        const Repertoire back = load_cache(cache1);
        REQUIRE(back.size() == rep.size());
        CHECK(back.descriptor.joint_count == rep.descriptor.joint_count);
        CHECK(back.descriptor.upper_body_indices == rep.descriptor.upper_body_indices);
        for (std::size_t i = 0; i < rep.size(); ++i) {
            const auto& a = rep.entries[i];
            const auto& b = back.entries[i];
            CHECK(a.clip.id == b.clip.id);
            CHECK(a.clip.frames == b.clip.frames);
            CHECK(*a.clip.beats == *b.clip.beats);
            CHECK(a.raw_labels == b.raw_labels);
            CHECK(a.mid_beat_count == b.mid_beat_count);
            CHECK(a.tempo_density.values == b.tempo_density.values);
            CHECK(a.music_path == b.music_path);
            CHECK(a.style.values == b.style.values);
        }
        for (int axis = 0; axis < 4; ++axis) {
            CHECK(back.label_table.motion_bounds()[axis].lo ==
                  rep.label_table.motion_bounds()[axis].lo);
            CHECK(back.label_table.music_bounds()[axis].hi ==
                  rep.label_table.music_bounds()[axis].hi);
        }
    }
    SUBCASE("rebuild writes byte-identical caches") {
        Repertoire again = ingest_repertoire((dir.path / "clips").string(),
                                             SkeletonDescriptor::default21());
        build_caches(again);
        save_cache(again, cache2);
        CHECK(read_bytes(cache1) == read_bytes(cache2));
    }
    SUBCASE("stale version is rejected") {
        std::vector<std::uint8_t> bytes = read_bytes(cache1);
        bytes[4] = 0x77; // clobber version
        std::ofstream out(cache2, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        out.close();
        CHECK_THROWS_WITH_AS(load_cache(cache2), doctest::Contains("stale"), ParseError);
    }
    SUBCASE("bad magic is rejected") {
        std::ofstream out(cache2, std::ios::binary);
        out << "WHAT is this";
        out.close();
        CHECK_THROWS_AS(load_cache(cache2), ParseError);
    }
}

TEST_CASE("external styles replace cached vectors") {
    TempDir dir("choreo-ext-style");
    testsupport::CorpusParams cp;
    cp.clip_count = 3;
    testsupport::write_corpus(dir.path.string(), cp);
    Repertoire rep = ingest_repertoire((dir.path / "clips").string(),
                                       SkeletonDescriptor::default21());
    build_caches(rep);

    std::map<std::string, StyleVector> ext;
    for (const auto& e : rep.entries) {
        StyleVector v;
        v.backend = StyleBackend::External;
        v.values.assign(32, 0.25);
        ext[e.clip.id] = v;
    }
    apply_external_styles(rep, ext);
    for (const auto& e : rep.entries) CHECK(e.style.dimension() == 32);

    ext.erase("clip001");
    CHECK_THROWS_AS(apply_external_styles(rep, ext), ValidationError);
}
