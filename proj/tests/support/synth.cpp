#include "synth.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "choreo/motion.hpp"
#include "wav_write.hpp"

namespace fs = std::filesystem;

namespace testsupport {

std::vector<std::string> write_corpus(const std::string& dir, const CorpusParams& params) {
    // Layout: <dir>/clips/*.json (+ paired *.wav), <dir>/descriptor.json. The
    // descriptor lives outside the clip directory so ingestion only ever sees
    // motion files.
    fs::create_directories(fs::path(dir) / "clips");
    choreo::Rng rng(choreo::sub_seed(params.seed, "synth-corpus"));

    const choreo::SkeletonDescriptor descriptor = choreo::SkeletonDescriptor::default21();
    std::ofstream desc(fs::path(dir) / "descriptor.json");
    desc << choreo::descriptor_to_json(descriptor) << '\n';

    std::vector<std::string> ids;
    for (int c = 0; c < params.clip_count; ++c) {
        DanceParams p;
        p.period = params.periods[c % params.periods.size()];
        p.phase = rng.uniform_int(0, p.period - 1);
        p.root_step = 0.03 + 0.02 * rng.uniform01();
        p.limb_scale = 0.10 + 0.10 * rng.uniform01();
        p.seed = choreo::sub_seed(params.seed, "clip-" + std::to_string(c));

        char name[32];
        std::snprintf(name, sizeof name, "clip%03d", c);
        const choreo::MotionClip clip = make_dance_clip(name, p);
        choreo::save_motion_json(clip,
                                 (fs::path(dir) / "clips" / (std::string(name) + ".json")).string());
        ids.push_back(name);

        if (params.with_click_wavs) {
            const double bpm = 1200.0 / p.period; // one click per motion beat
            write_wav16((fs::path(dir) / "clips" / (std::string(name) + ".wav")).string(),
                        clicks(bpm, 8.0, 24000), 24000, 1);
        }
    }
    return ids;
}

} // namespace testsupport
