#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "choreo/config.hpp"
#include "choreo/error.hpp"

using namespace choreo;
namespace fs = std::filesystem;

TEST_CASE("config defaults") {
    RunConfig cfg;
    CHECK(cfg.k == 512);
    CHECK(cfg.retempo);
    CHECK(cfg.mode == GraphMode::Dynamic);
    CHECK(cfg.weights.lambda_s == 1.0);
    CHECK(cfg.weights.lambda_c == 1.0);
    CHECK(cfg.weights.lambda_t == 2.0);
    CHECK(cfg.style_lambda_cs == 1.0);
    CHECK(cfg.style_lambda_b == 0.2);
    CHECK(cfg.blend_frames == 8);
    CHECK(cfg.onset.prominence == 0.1);
    CHECK(cfg.onset.min_separation_frames == 15);
    CHECK(cfg.motion_beats.prominence == 0.05);
    CHECK(cfg.motion_beats.min_separation_frames == 5);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config set") {
    RunConfig cfg;
    cfg.set("graph.lambda_t", "3.5");
    CHECK(cfg.weights.lambda_t == 3.5);
    cfg.set("mode", "motiongraph");
    CHECK(cfg.mode == GraphMode::MotionGraph);
    cfg.set("retempo", "off");
    CHECK_FALSE(cfg.retempo);
    cfg.set("style.k", "64");
    CHECK(cfg.k == 64);
    cfg.set("graph.eq6_variant", "raw");
    CHECK(cfg.eq6_variant == CompletenessVariant::Raw);
    cfg.set("tempo.cost", "squared");
    CHECK(cfg.tempo_cost == CellCost::Squared);

    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_WITH_AS(cfg.set("style.lamda_cs", "1.0"), doctest::Contains("unknown key"),
                             ValidationError);
    }
    SUBCASE("bad values are rejected") {
        CHECK_THROWS_AS(cfg.set("graph.lambda_s", "fast"), ValidationError);
        CHECK_THROWS_AS(cfg.set("mode", "hyper"), ValidationError);
        CHECK_THROWS_AS(cfg.set("retempo", "maybe"), ValidationError);
    }
}

TEST_CASE("config validation catches bad combinations") {
    RunConfig cfg;
    cfg.k = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.k = 8;
    cfg.weights.lambda_c = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.weights.lambda_c = 0.0;
    cfg.onset.prominence = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("config file parsing with precedence") {
    const fs::path path = fs::temp_directory_path() / "choreo-test.cfg";
    {
        std::ofstream out(path);
        out << "# engine settings\n";
        out << "graph.lambda_s = 0.5\n";
        out << "style.k=16   # inline comment\n";
        out << "\n";
        out << "retempo = off\n";
    }
    RunConfig cfg = load_config_file(path.string());
    CHECK(cfg.weights.lambda_s == 0.5);
    CHECK(cfg.k == 16);
    CHECK_FALSE(cfg.retempo);

    // CLI-style overrides beat the file.
    cfg = apply_overrides(cfg, {{"style.k", "32"}});
    CHECK(cfg.k == 32);
    CHECK(cfg.weights.lambda_s == 0.5);

    SUBCASE("missing file is an io error") {
        CHECK_THROWS_AS(load_config_file("/nonexistent/nope.cfg"), IoError);
    }
    SUBCASE("bad line is rejected") {
        std::ofstream out(path);
        out << "this line has no equals sign\n";
        out.close();
        CHECK_THROWS_AS(load_config_file(path.string()), ValidationError);
    }
    fs::remove(path);
}
