// choreo: repertoire-based dance choreography engine CLI.
//
// Commands: dataset build, choreograph, eval, warp, beats. All outputs are
// deterministic for fixed inputs, config and seed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "choreo/audio.hpp"
#include "choreo/config.hpp"
#include "choreo/error.hpp"
#include "choreo/metrics.hpp"
#include "choreo/motion_analysis.hpp"
#include "choreo/pipeline.hpp"
#include "choreo/repertoire.hpp"
#include "choreo/tempo.hpp"

namespace {

struct ConfigCli {
    std::string config_file;
    std::vector<std::string> sets;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* k_opt = nullptr;
    CLI::Option* mode_opt = nullptr;
    CLI::Option* retempo_opt = nullptr;
    long long seed = 0;
    int k = 512;
    std::string mode = "dynamic";
    std::string retempo = "on";

    void attach(CLI::App* app) {
        app->add_option("--config", config_file, "key=value config file");
        app->add_option("--set", sets, "config override key=value (repeatable)");
        seed_opt = app->add_option("--seed", seed, "master random seed");
        k_opt = app->add_option("--k", k, "candidate segments per second (style.k)");
        mode_opt = app->add_option("--mode", mode, "graph mode: dynamic|motiongraph");
        retempo_opt = app->add_option("--retempo", retempo, "re-tempo warping: on|off");
    }

    choreo::RunConfig resolve() const {
        choreo::RunConfig cfg;
        if (!config_file.empty()) cfg = choreo::load_config_file(config_file, cfg);
        for (const std::string& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw choreo::ValidationError("--set expects key=value, got '" + kv + "'");
            }
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (seed_opt->count()) cfg.set("seed", std::to_string(seed));
        if (k_opt->count()) cfg.set("k", std::to_string(k));
        if (mode_opt->count()) cfg.set("mode", mode);
        if (retempo_opt->count()) cfg.set("retempo", retempo);
        cfg.validate();
        return cfg;
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw choreo::IoError("cannot write: " + path);
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out = open_out(path);
    out << text;
    if (!out) throw choreo::IoError("failed writing: " + path);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_dataset_build(const std::string& dir, const std::string& descriptor_path,
                      const std::string& out_path, const ConfigCli& cc) {
    const choreo::RunConfig cfg = cc.resolve();
    const choreo::SkeletonDescriptor descriptor = choreo::load_descriptor(descriptor_path);
    choreo::Repertoire rep = choreo::ingest_repertoire(dir, descriptor);
    choreo::build_caches(rep, cfg.build_options());
    for (const choreo::RepertoireEntry& e : rep.entries) {
        std::printf("%s beats=%zu mid_beats=%d\n", e.clip.id.c_str(),
                    e.clip.beats ? e.clip.beats->size() : 0, e.mid_beat_count);
    }
    choreo::save_cache(rep, out_path);
    std::printf("cache written: %s (%zu clips)\n", out_path.c_str(), rep.size());
    return 0;
}

int cmd_choreograph(const std::string& music_path, const std::string& cache_path,
                    const std::string& out_path, const std::string& trace_path,
                    const std::string& motion_emb, const std::string& music_emb,
                    const ConfigCli& cc) {
    const choreo::RunConfig cfg = cc.resolve();
    choreo::Repertoire rep = choreo::load_cache(cache_path);
    choreo::PipelineInputs inputs;
    if (cfg.style_backend == choreo::StyleBackend::External) {
        if (motion_emb.empty() || music_emb.empty()) {
            throw choreo::ValidationError(
                "style.backend=external needs --motion-embeddings and --music-embeddings");
        }
        choreo::apply_external_styles(rep, choreo::load_external_embeddings(motion_emb));
        inputs.music_embeddings = choreo::load_external_embeddings(music_emb);
    }
    const choreo::AudioBuffer audio = choreo::decode_wav(music_path);
    const choreo::MusicFeatures music = choreo::analyze_music(audio, cfg.onset);

    const choreo::ChoreoResult result = choreo::choreograph(music, rep, cfg, inputs);
    choreo::save_motion_json(result.motion, out_path);
    if (!trace_path.empty()) {
        write_text(trace_path, choreo::trace_to_json(result.trace, cfg));
    }
    std::printf("choreographed %d frames (%zu s) -> %s\n", result.motion.length(),
                result.trace.size(), out_path.c_str());
    return 0;
}

int cmd_eval(const std::string& motion_path, const std::string& music_path,
             const std::string& cache_path, const std::string& out_path,
             const std::string& windows_csv, const ConfigCli& cc) {
    const choreo::RunConfig cfg = cc.resolve();
    const choreo::Repertoire rep = choreo::load_cache(cache_path);
    choreo::MotionClip generated = choreo::load_motion_json(motion_path);
    const choreo::AudioBuffer audio = choreo::decode_wav(music_path);
    const choreo::MusicFeatures music = choreo::analyze_music(audio, cfg.onset);

    const double fpd_value = choreo::fpd(generated, rep);
    const double fmd_value = choreo::fmd(generated, rep);

    std::vector<double> motion_beats_s;
    for (int b : *choreo::with_beats(generated, cfg.motion_beats).beats) {
        motion_beats_s.push_back(static_cast<double>(b) / choreo::kMotionFps);
    }
    std::vector<double> music_beats_s;
    for (int b : music.beats) {
        music_beats_s.push_back(static_cast<double>(b) / choreo::kMusicFps);
    }
    const choreo::BasReport bas = choreo::beat_alignment(motion_beats_s, music_beats_s);

    const choreo::LabelDistanceReport ld =
        choreo::label_distance(generated, music, rep.descriptor, rep.label_table);

    nlohmann::json report;
    report["fpd"] = fpd_value;
    report["fmd"] = fmd_value;
    report["bas"] = {
        {"motion2audio", bas.motion2audio ? nlohmann::json(*bas.motion2audio) : nlohmann::json()},
        {"audio2motion", bas.audio2motion ? nlohmann::json(*bas.audio2motion) : nlohmann::json()},
        {"motion_beat_count", bas.motion_beat_count},
        {"music_beat_count", bas.music_beat_count},
    };
    report["label_distance"] = ld.distances;
    write_text(out_path, report.dump(2) + "\n");

    if (!windows_csv.empty()) {
        std::ofstream csv = open_out(windows_csv);
        csv << "window_start_s,m_openness,m_intensity,m_rhythm,m_asymmetry,"
               "a_intervallic,a_rhythmic_density,a_onset_gap,a_spectral,"
               "d_openness,d_intensity,d_rhythm,d_asymmetry\n";
        for (std::size_t w = 0; w < ld.window_start_seconds.size(); ++w) {
            csv << ld.window_start_seconds[w];
            for (double v : ld.motion_windows[w].values) csv << ',' << fmt(v);
            for (double v : ld.music_windows[w].values) csv << ',' << fmt(v);
            for (int i = 0; i < 4; ++i) {
                csv << ',' << fmt(std::abs(ld.motion_windows[w].values[i] - ld.music_windows[w].values[i]));
            }
            csv << '\n';
        }
    }
    std::printf("eval report written: %s\n", out_path.c_str());
    return 0;
}

int cmd_warp(const std::string& music_path, int window_start_s, const std::string& target_density,
             const std::string& cache_path, const std::string& clip_id,
             const std::string& clip_path, const std::string& out_path, const ConfigCli& cc) {
    const choreo::RunConfig cfg = cc.resolve();

    choreo::MotionClip source;
    choreo::TempoDensity source_td;
    if (!clip_path.empty()) {
        source = choreo::with_beats(choreo::load_motion_json(clip_path), cfg.motion_beats);
        source_td = choreo::motion_tempo_density(source);
    } else if (!cache_path.empty() && !clip_id.empty()) {
        const choreo::Repertoire rep = choreo::load_cache(cache_path);
        const std::size_t idx = rep.find(clip_id);
        if (idx == choreo::Repertoire::npos) {
            throw choreo::ValidationError("warp: no clip '" + clip_id + "' in cache");
        }
        source = rep.entries[idx].clip;
        source_td = rep.entries[idx].tempo_density;
    } else {
        throw choreo::ValidationError("warp: need --clip FILE or --cache FILE with --clip-id ID");
    }

    choreo::TempoDensity target;
    if (!target_density.empty()) {
        target = choreo::load_tempo_density(target_density);
    } else if (!music_path.empty()) {
        const choreo::AudioBuffer audio = choreo::decode_wav(music_path);
        const choreo::MusicFeatures music = choreo::analyze_music(audio, cfg.onset);
        target = choreo::music_tempo_density(music, window_start_s * choreo::kMusicFps);
    } else {
        throw choreo::ValidationError("warp: need --music FILE or --target-density FILE");
    }

    const choreo::WarpPath path = choreo::subsequence_dtw(target, source_td, cfg.tempo_cost);
    const choreo::MotionClip warped = choreo::apply_warp(source, path, cfg.motion_beats);

    // Alignment CSV: one row per target frame with the interpolated source
    // position; the source density goes to a sibling file (different length).
    std::ofstream csv = open_out(out_path);
    csv << "i,j_hat,target_density\n";
    std::size_t seg = 1;
    const int target_len = target.length();
    for (int i = 0; i < target_len; ++i) {
        while (seg < path.knots.size() && path.knots[seg].first < i) ++seg;
        double pos;
        if (path.knots[seg - 1].first == i) {
            pos = path.knots[seg - 1].second;
        } else if (seg < path.knots.size() && path.knots[seg].first == i) {
            pos = path.knots[seg].second;
        } else {
            const auto [i0, j0] = path.knots[seg - 1];
            const auto [i1, j1] = path.knots[seg];
            pos = j0 + static_cast<double>(i - i0) / (i1 - i0) * (j1 - j0);
        }
        csv << i << ',' << fmt(pos) << ',' << fmt(target.values[i]) << '\n';
    }

    std::ofstream src_csv = open_out(out_path + ".source.csv");
    src_csv << "j,source_density\n";
    for (int j = 0; j < source_td.length(); ++j) {
        src_csv << j << ',' << fmt(source_td.values[j]) << '\n';
    }

    std::printf("alignment cost %s over source span [%d, %d] -> %s (+ .source.csv); warped %d frames\n",
                fmt(path.cost).c_str(), path.knots.front().second, path.knots.back().second,
                out_path.c_str(), warped.length());
    return 0;
}

int cmd_beats(const std::string& clip_path, const std::string& music_path,
              const std::string& out_path, const ConfigCli& cc) {
    const choreo::RunConfig cfg = cc.resolve();
    if (!clip_path.empty()) {
        choreo::MotionClip clip = choreo::load_motion_json(clip_path);
        const choreo::SpeedSeries speed = choreo::average_joint_speed(clip);
        const std::vector<int> beats = choreo::motion_beats(speed, cfg.motion_beats);
        std::ofstream csv = open_out(out_path);
        csv << "frame,speed,is_beat\n";
        std::size_t bi = 0;
        for (std::size_t f = 0; f < speed.values.size(); ++f) {
            const bool is_beat = bi < beats.size() && beats[bi] == static_cast<int>(f);
            if (is_beat) ++bi;
            csv << f << ',' << fmt(speed.values[f]) << ',' << (is_beat ? 1 : 0) << '\n';
        }
        std::printf("%zu motion beats -> %s\n", beats.size(), out_path.c_str());
        return 0;
    }
    if (!music_path.empty()) {
        const choreo::AudioBuffer audio = choreo::decode_wav(music_path);
        const choreo::MusicFeatures music = choreo::analyze_music(audio, cfg.onset);
        std::ofstream csv = open_out(out_path);
        csv << "frame,onset_env\n";
        for (std::size_t f = 0; f < music.onset_env.size(); ++f) {
            csv << f << ',' << fmt(music.onset_env[f]) << '\n';
        }
        std::ofstream beat_csv = open_out(out_path + ".beats.csv");
        beat_csv << "beat_frame\n";
        for (int b : music.beats) beat_csv << b << '\n';
        std::printf("%zu music beats -> %s (+ .beats.csv)\n", music.beats.size(), out_path.c_str());
        return 0;
    }
    throw choreo::ValidationError("beats: need --clip FILE or --music FILE");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"repertoire-based dance choreography engine"};
    app.require_subcommand(1);

    // dataset build
    CLI::App* dataset = app.add_subcommand("dataset", "repertoire dataset maintenance");
    dataset->require_subcommand(1);
    CLI::App* build = dataset->add_subcommand("build", "ingest a clip directory and write the cache");
    std::string build_dir, build_descriptor, build_out;
    build->add_option("--dir", build_dir, "directory of motion JSON files")->required();
    build->add_option("--descriptor", build_descriptor, "skeleton descriptor JSON")->required();
    build->add_option("--out", build_out, "output cache file")->required();
    ConfigCli build_cfg;
    build_cfg.attach(build);

    // choreograph
    CLI::App* chor = app.add_subcommand("choreograph", "generate dance for a music file");
    std::string chor_music, chor_cache, chor_out, chor_trace, chor_memb, chor_aemb;
    chor->add_option("--music", chor_music, "input WAV")->required();
    chor->add_option("--cache", chor_cache, "repertoire cache")->required();
    chor->add_option("--out", chor_out, "output motion JSON")->required();
    chor->add_option("--trace", chor_trace, "per-second trace JSON");
    chor->add_option("--motion-embeddings", chor_memb, "external motion style vectors (JSON)");
    chor->add_option("--music-embeddings", chor_aemb, "external music style vectors (JSON)");
    ConfigCli chor_cfg;
    chor_cfg.attach(chor);

    // eval
    CLI::App* eval = app.add_subcommand("eval", "score generated motion against music and repertoire");
    std::string eval_motion, eval_music, eval_cache, eval_out, eval_csv;
    eval->add_option("--motion", eval_motion, "generated motion JSON")->required();
    eval->add_option("--music", eval_music, "paired WAV")->required();
    eval->add_option("--cache", eval_cache, "repertoire cache")->required();
    eval->add_option("--out", eval_out, "report JSON")->required();
    eval->add_option("--windows-csv", eval_csv, "per-window label pair CSV");
    ConfigCli eval_cfg;
    eval_cfg.attach(eval);

    // warp
    CLI::App* warp = app.add_subcommand("warp", "export a DTW alignment for plotting");
    std::string warp_music, warp_density, warp_cache, warp_clip_id, warp_clip, warp_out;
    int warp_window = 0;
    warp->add_option("--music", warp_music, "input WAV (target side)");
    warp->add_option("--window-start", warp_window, "music window start, whole seconds");
    warp->add_option("--target-density", warp_density, "precomputed target density (JSON array)");
    warp->add_option("--cache", warp_cache, "repertoire cache (source side)");
    warp->add_option("--clip-id", warp_clip_id, "clip id inside the cache");
    warp->add_option("--clip", warp_clip, "standalone source clip JSON");
    warp->add_option("--out", warp_out, "alignment CSV")->required();
    ConfigCli warp_cfg;
    warp_cfg.attach(warp);

    // beats
    CLI::App* beats = app.add_subcommand("beats", "export beat/rhythm debug CSVs");
    std::string beats_clip, beats_music, beats_out;
    beats->add_option("--clip", beats_clip, "motion clip JSON");
    beats->add_option("--music", beats_music, "music WAV");
    beats->add_option("--out", beats_out, "output CSV")->required();
    ConfigCli beats_cfg;
    beats_cfg.attach(beats);

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) {
            return cmd_dataset_build(build_dir, build_descriptor, build_out, build_cfg);
        }
        if (chor->parsed()) {
            return cmd_choreograph(chor_music, chor_cache, chor_out, chor_trace, chor_memb,
                                   chor_aemb, chor_cfg);
        }
        if (eval->parsed()) {
            return cmd_eval(eval_motion, eval_music, eval_cache, eval_out, eval_csv, eval_cfg);
        }
        if (warp->parsed()) {
            return cmd_warp(warp_music, warp_window, warp_density, warp_cache, warp_clip_id,
                            warp_clip, warp_out, warp_cfg);
        }
        if (beats->parsed()) {
            return cmd_beats(beats_clip, beats_music, beats_out, beats_cfg);
        }
    } catch (const choreo::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const choreo::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
    return 3;
}
