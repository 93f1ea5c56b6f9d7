#include "choreo/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "choreo/error.hpp"

namespace choreo {

namespace {

std::string trim(const std::string& s) {
    const auto from = s.find_first_not_of(" \t\r\n");
    if (from == std::string::npos) return "";
    const auto to = s.find_last_not_of(" \t\r\n");
    return s.substr(from, to - from + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key + "' needs a number, got '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key + "' needs an integer, got '" + value + "'");
    }
}

bool parse_onoff(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ValidationError("config: key '" + key + "' needs on/off, got '" + value + "'");
}

} // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "seed") {
        seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "retempo") {
        retempo = parse_onoff(key, value);
    } else if (key == "k" || key == "style.k") {
        k = static_cast<int>(parse_int(key, value));
    } else if (key == "mode" || key == "graph.mode") {
        if (value == "dynamic") mode = GraphMode::Dynamic;
        else if (value == "motiongraph") mode = GraphMode::MotionGraph;
        else throw ValidationError("config: graph.mode must be dynamic|motiongraph, got '" + value + "'");
    } else if (key == "graph.lambda_s") {
        weights.lambda_s = parse_double(key, value);
    } else if (key == "graph.lambda_c") {
        weights.lambda_c = parse_double(key, value);
    } else if (key == "graph.lambda_t") {
        weights.lambda_t = parse_double(key, value);
    } else if (key == "graph.blend_frames") {
        blend_frames = static_cast<int>(parse_int(key, value));
    } else if (key == "graph.eq6_variant") {
        if (value == "midpoint") eq6_variant = CompletenessVariant::Midpoint;
        else if (value == "raw") eq6_variant = CompletenessVariant::Raw;
        else throw ValidationError("config: graph.eq6_variant must be midpoint|raw, got '" + value + "'");
    } else if (key == "graph.align_yaw") {
        align_yaw = parse_onoff(key, value);
    } else if (key == "style.lambda_cs") {
        style_lambda_cs = parse_double(key, value);
    } else if (key == "style.lambda_b") {
        style_lambda_b = parse_double(key, value);
    } else if (key == "style.backend") {
        if (value == "labels") style_backend = StyleBackend::Labels;
        else if (value == "external") style_backend = StyleBackend::External;
        else throw ValidationError("config: style.backend must be labels|external, got '" + value + "'");
    } else if (key == "style.normalization") {
        if (value == "percentile") style_normalization = NormalizationMode::Percentile;
        else if (value == "minmax") style_normalization = NormalizationMode::MinMax;
        else throw ValidationError("config: style.normalization must be percentile|minmax, got '" +
                                   value + "'");
    } else if (key == "onset.prominence") {
        onset.prominence = parse_double(key, value);
    } else if (key == "onset.min_separation_frames") {
        onset.min_separation_frames = static_cast<int>(parse_int(key, value));
    } else if (key == "motion.prominence") {
        motion_beats.prominence = parse_double(key, value);
    } else if (key == "motion.min_separation_frames") {
        motion_beats.min_separation_frames = static_cast<int>(parse_int(key, value));
    } else if (key == "tempo.cost") {
        if (value == "abs") tempo_cost = CellCost::AbsDiff;
        else if (value == "squared") tempo_cost = CellCost::Squared;
        else throw ValidationError("config: tempo.cost must be abs|squared, got '" + value + "'");
    } else {
        throw ValidationError("config: unknown key '" + key + "'");
    }
}

void RunConfig::validate() const {
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError(std::string("config: ") + name + " must be finite and >= 0");
        }
    };
    nonneg(weights.lambda_s, "graph.lambda_s");
    nonneg(weights.lambda_c, "graph.lambda_c");
    nonneg(weights.lambda_t, "graph.lambda_t");
    nonneg(style_lambda_cs, "style.lambda_cs");
    nonneg(style_lambda_b, "style.lambda_b");
    if (k < 1) throw ValidationError("config: k must be >= 1");
    if (blend_frames < 0 || blend_frames > 2 * kNodeFrames) {
        throw ValidationError("config: graph.blend_frames must be in [0, 40]");
    }
    if (!(onset.prominence > 0.0) || onset.prominence > 1.0) {
        throw ValidationError("config: onset.prominence must be in (0, 1]");
    }
    if (onset.min_separation_frames < 1) {
        throw ValidationError("config: onset.min_separation_frames must be >= 1");
    }
    if (!(motion_beats.prominence > 0.0) || motion_beats.prominence > 1.0) {
        throw ValidationError("config: motion.prominence must be in (0, 1]");
    }
    if (motion_beats.min_separation_frames < 1) {
        throw ValidationError("config: motion.min_separation_frames must be >= 1");
    }
}

BuildOptions RunConfig::build_options() const {
    BuildOptions opts;
    opts.motion_beats = motion_beats;
    opts.onset = onset;
    opts.normalization = style_normalization;
    return opts;
}

RetempoOptions RunConfig::retempo_options() const {
    RetempoOptions opts;
    opts.enabled = retempo;
    opts.cell_cost = tempo_cost;
    opts.beat_opts = motion_beats;
    return opts;
}

BlendOptions RunConfig::blend_options(int root_index) const {
    BlendOptions opts;
    opts.blend_frames = blend_frames;
    opts.align_yaw = align_yaw;
    opts.root_index = root_index;
    return opts;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config " + path + ":" + std::to_string(line_no) +
                                  ": expected key=value");
        }
        base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

RunConfig apply_overrides(RunConfig base, const std::map<std::string, std::string>& overrides) {
    for (const auto& [key, value] : overrides) {
        base.set(key, value);
    }
    return base;
}

} // namespace choreo
