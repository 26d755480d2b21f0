#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "pawss/sequence_io.hpp"

using namespace pawss;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() /
               ("pawss_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("parse_gt_line accepts OTB separators and converts to 0-based") {
    BoundingBox b = parse_gt_line("10,20,30,40", 1);
    CHECK(b.x == doctest::Approx(9.0));
    CHECK(b.y == doctest::Approx(19.0));
    CHECK(b.w == doctest::Approx(30.0));
    CHECK(b.h == doctest::Approx(40.0));

    BoundingBox t = parse_gt_line("5\t6\t7\t8", 2);
    CHECK(t.x == doctest::Approx(4.0));
    CHECK(t.h == doctest::Approx(8.0));

    BoundingBox s = parse_gt_line("1.5 2.5 10 12", 3);
    CHECK(s.x == doctest::Approx(0.5));

    CHECK_THROWS_WITH_AS(parse_gt_line("only,two", 7), doctest::Contains("line 7"),
                         std::runtime_error);
}

TEST_CASE("image save/load round trip within quantization error") {
    TempDir tmp("img");
    Image img(17, 13, 3);
    std::mt19937 rng(4);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    for (float& v : img.data) v = u(rng);
    fs::path p = tmp.path / "t.png";
    save_image(img, p);
    Image back = load_image(p);
    REQUIRE(back.width == 17);
    REQUIRE(back.height == 13);
    for (size_t i = 0; i < img.data.size(); ++i)
        CHECK(std::abs(back.data[i] - img.data[i]) <= 0.5f / 255.0f + 1e-6f);
    CHECK_THROWS_AS(load_image(tmp.path / "missing.png"), std::runtime_error);
}

TEST_CASE("write_sequence / load_sequence round trip") {
    TempDir tmp("seq");
    SynthParams params;
    params.frames = 6;
    SynthSequence seq = synth_sequence(SynthKind::Translate, params, 3);
    write_sequence(tmp.path, seq);

    SequenceSpec spec;
    spec.frames_dir = tmp.path;
    spec.gt_path = tmp.path / "groundtruth_rect.txt";
    LoadedSequence loaded = load_sequence(spec);
    REQUIRE(loaded.frames.size() == 6u);
    REQUIRE(loaded.gt.size() == 6u);
    for (size_t i = 0; i < seq.gt.size(); ++i) {
        REQUIRE(loaded.gt[i].has_value());
        CHECK(loaded.gt[i]->x == doctest::Approx(seq.gt[i].x).epsilon(1e-9));
        CHECK(loaded.gt[i]->w == doctest::Approx(seq.gt[i].w).epsilon(1e-9));
    }

    SUBCASE("frame_range selects an inclusive slice") {
        spec.frame_range = {{2, 4}};
        LoadedSequence part = load_sequence(spec);
        REQUIRE(part.frames.size() == 3u);
        CHECK(part.gt[0]->x == doctest::Approx(seq.gt[2].x).epsilon(1e-9));
    }
    SUBCASE("count mismatch is a hard error") {
        std::ofstream gt(tmp.path / "groundtruth_rect.txt", std::ios::app);
        gt << "1,1,5,5\n";
        gt.close();
        CHECK_THROWS_WITH_AS(load_sequence(spec), doctest::Contains("mismatch"),
                             std::runtime_error);
    }
    SUBCASE("malformed annotation names the line") {
        std::ofstream gt(tmp.path / "groundtruth_rect.txt");
        gt << "1,1,5,5\nbroken\n";
        gt.close();
        CHECK_THROWS_WITH_AS(load_sequence(spec), doctest::Contains("line 2"),
                             std::runtime_error);
    }
}

TEST_CASE("synthetic ground truth follows the requested motion") {
    SynthParams params;
    params.frames = 30;

    SUBCASE("translate") {
        SynthSequence s = synth_sequence(SynthKind::Translate, params, 1);
        CHECK(s.gt[10].x == doctest::Approx(params.init_box.x + 10.0));
        CHECK(s.gt[10].w == doctest::Approx(params.init_box.w));
    }
    SUBCASE("grow reaches the total factor on the last frame") {
        SynthSequence s = synth_sequence(SynthKind::Grow, params, 1);
        CHECK(s.gt.front().w == doctest::Approx(params.init_box.w));
        CHECK(s.gt.back().w == doctest::Approx(params.init_box.w * 1.5));
        CHECK(s.gt.back().cx() == doctest::Approx(params.init_box.cx()));
    }
    SUBCASE("jump switches size abruptly") {
        params.jump_frame = 15;
        SynthSequence s = synth_sequence(SynthKind::Jump, params, 1);
        CHECK(s.gt[14].w == doctest::Approx(params.init_box.w));
        CHECK(s.gt[15].w == doctest::Approx(params.init_box.w * 1.6));
    }
    SUBCASE("occlude flags the occluded interval") {
        params.occlude_start = 10;
        params.occlude_frames = 5;
        SynthSequence s = synth_sequence(SynthKind::Occlude, params, 1);
        for (int t = 0; t < 30; ++t)
            CHECK(s.occluded[t] == (t >= 10 && t < 15));
    }
    SUBCASE("target leaving the frame fails generation") {
        params.dx_per_frame = 10.0;
        CHECK_THROWS_WITH_AS(synth_sequence(SynthKind::Translate, params, 1),
                             doctest::Contains("leaves the frame"),
                             std::runtime_error);
    }
    CHECK(parse_synth_kind("grow") == SynthKind::Grow);
    CHECK_THROWS_AS(parse_synth_kind("spin"), std::invalid_argument);
}

TEST_CASE("run config text round trip and errors") {
    RunConfig rc;
    rc.tracker.delta = 0.2;
    rc.tracker.n_r = 7;
    rc.tracker.mode = TrackerMode::PAWSSa;
    rc.tracker.seed = 99;
    rc.overlay = true;
    rc.output_dir = "out/x";
    RunConfig back = parse_run_config_text(emit_run_config(rc));
    CHECK(back.tracker.delta == doctest::Approx(0.2));
    CHECK(back.tracker.n_r == 7);
    CHECK(back.tracker.mode == TrackerMode::PAWSSa);
    CHECK(back.tracker.seed == 99);
    CHECK(back.overlay);
    CHECK(back.output_dir == fs::path("out/x"));

    RunConfig c = parse_run_config_text("# comment\n eta = 0.5 # trailing\n\n");
    CHECK(c.tracker.eta == doctest::Approx(0.5));
    CHECK_THROWS_WITH_AS(parse_run_config_text("bogus_key = 1\n"),
                         doctest::Contains("unknown key"), std::runtime_error);
    CHECK_THROWS_AS(parse_run_config_text("no equals sign\n"), std::runtime_error);
}

TEST_CASE("results CSV round trip keeps the header and values") {
    TempDir tmp("csv");
    std::vector<FrameResult> rows{
        {0, {12, 40, 40, 40}, 1.0, 0.0},
        {1, {13.25, 40.5, 41, 39.75}, 1.003, -0.25},
    };
    fs::path p = tmp.path / "r.csv";
    write_results_csv(p, rows);

    std::ifstream in(p);
    std::string header;
    std::getline(in, header);
    CHECK(header == "frame,x,y,w,h,scale,score");

    auto back = read_results_csv(p);
    REQUIRE(back.size() == 2u);
    CHECK(back[1].frame == 1);
    CHECK(back[1].box.x == doctest::Approx(13.25));
    CHECK(back[1].scale == doctest::Approx(1.003));
    CHECK(back[1].score == doctest::Approx(-0.25));
}

TEST_CASE("metrics JSON carries the headline numbers and curves") {
    TempDir tmp("json");
    BoundingBox b{0, 0, 10, 10};
    Trajectory t(5, b);
    MetricReport report = compute_metrics(t, t);
    fs::path p = tmp.path / "m.json";
    write_metrics_json(p, report);

    std::ifstream in(p);
    nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j["pr_at_20"].get<double>() == doctest::Approx(1.0));
    CHECK(j["sr_auc"].get<double>() == doctest::Approx(20.0 / 21.0));
    CHECK(j["mean_iou"].get<double>() == doctest::Approx(1.0));
    CHECK(j["frames"].get<int>() == 5);
    CHECK(j["precision_curve"].size() == 51u);
    CHECK(j["success_curve"].size() == 21u);
}

TEST_CASE("render_overlay draws the box and the weight tile") {
    Image img(80, 60, 3, 0.0f);
    std::vector<double> w(49, 0.0);
    w[0] = 1.0;
    // Box kept clear of the 7x7 weight tile in the top-left corner.
    Image out = render_overlay(img, {45, 20, 20, 15}, w, 7);
    REQUIRE(out.width == 80);
    CHECK(out.at(45, 20, 0) == 1.0f);  // corner of the outline
    CHECK(out.at(55, 20, 0) == 1.0f);  // top edge
    CHECK(out.at(45, 27, 0) == 1.0f);  // left edge
    CHECK(out.at(3, 3, 0) == 1.0f);    // hot first patch cell
    CHECK(out.at(3, 9, 2) == 1.0f);    // cold second-row cell stays blue
}

TEST_CASE("run_track writes results, metrics, and overlays") {
    TempDir tmp("run");
    SynthParams params;
    params.frames = 5;
    SynthSequence seq = synth_sequence(SynthKind::Translate, params, 11);
    fs::path seq_dir = tmp.path / "seq";
    write_sequence(seq_dir, seq);

    RunConfig rc;
    rc.output_dir = tmp.path / "out";
    rc.overlay = true;
    SequenceSpec spec;
    spec.frames_dir = seq_dir;
    spec.gt_path = seq_dir / "groundtruth_rect.txt";
    spec.name = "seq";

    REQUIRE(run_track(rc, spec) == 0);
    CHECK(fs::exists(rc.output_dir / "seq_results.csv"));
    CHECK(fs::exists(rc.output_dir / "seq_metrics.json"));
    CHECK(fs::exists(rc.output_dir / "seq_overlay" / "0004.png"));
    auto rows = read_results_csv(rc.output_dir / "seq_results.csv");
    CHECK(rows.size() == 5u);
    CHECK(rows[0].box.x == doctest::Approx(seq.gt[0].x).epsilon(1e-3));

    SUBCASE("missing sequence returns a nonzero status") {
        SequenceSpec bad;
        bad.frames_dir = tmp.path / "nope";
        CHECK(run_track(rc, bad) == 1);
    }
}

TEST_CASE("run_bench aggregates sequences and attributes") {
    TempDir tmp("bench");
    SynthParams params;
    params.frames = 4;
    for (int i = 0; i < 2; ++i) {
        fs::path dir = tmp.path / ("seq" + std::to_string(i));
        write_sequence(dir, synth_sequence(SynthKind::Translate, params, 20 + i));
        std::ofstream attrs(dir / "attributes.txt");
        attrs << (i == 0 ? "SV,OCC" : "SV");
    }
    RunConfig rc;
    rc.output_dir = tmp.path / "out";
    BenchResult r = run_bench(rc, tmp.path);
    REQUIRE(r.sequences.size() == 2u);
    CHECK(r.mean_iou > 0.0);

    std::ifstream in(rc.output_dir / "bench.json");
    nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j["sequences"].size() == 2u);
    CHECK(j["attributes"]["SV"]["sequences"].get<int>() == 2);
    CHECK(j["attributes"]["OCC"]["sequences"].get<int>() == 1);
    CHECK(j["mean_iou"].get<double>() == doctest::Approx(r.mean_iou));

    CHECK_THROWS_AS(run_bench(rc, tmp.path / "missing"), std::runtime_error);
}
