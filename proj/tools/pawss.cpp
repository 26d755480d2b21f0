// Command-line harness: track a sequence, score results, generate synthetic
// sequences, or run a benchmark directory.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "CLI11.hpp"

#include "pawss/evaluation.hpp"
#include "pawss/sequence_io.hpp"
#include "pawss/tracker.hpp"

namespace fs = std::filesystem;
using namespace pawss;

namespace {

struct CommonOpts {
    std::string config_file;
    std::string mode;
    std::string output = "pawss_out";
    uint64_t seed = 0;
    bool seed_set = false;
    bool overlay = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_file, "key = value config file");
    cmd->add_option("--mode", opts.mode, "tracker mode: pawssa | pawssb");
    cmd->add_option("--out", opts.output, "output directory");
    cmd->add_option("--seed", opts.seed, "RNG seed")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_flag("--overlay", opts.overlay, "write per-frame overlay PNGs");
}

// Config file first, CLI flags override.
RunConfig resolve_config(const CommonOpts& opts) {
    RunConfig rc;
    if (!opts.config_file.empty()) rc = parse_run_config_file(opts.config_file);
    if (!opts.mode.empty()) rc.tracker.mode = parse_mode(opts.mode);
    if (opts.seed_set) rc.tracker.seed = opts.seed;
    if (opts.overlay) rc.overlay = true;
    if (!opts.output.empty()) rc.output_dir = opts.output;
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PAWSS tracker"};
    app.require_subcommand(1);

    // track
    auto* track = app.add_subcommand("track", "run the tracker on one sequence");
    CommonOpts track_opts;
    std::string frames_dir, gt_path, seq_name;
    int range_first = -1, range_last = -1;
    track->add_option("--frames", frames_dir, "frame directory")->required();
    track->add_option("--gt", gt_path, "ground-truth file (groundtruth_rect.txt)");
    track->add_option("--name", seq_name, "sequence name");
    track->add_option("--first", range_first, "first frame index (0-based)");
    track->add_option("--last", range_last, "last frame index (inclusive)");
    add_common(track, track_opts);

    // eval
    auto* eval = app.add_subcommand("eval", "score an existing results CSV");
    std::string eval_results, eval_gt, eval_out = "metrics.json";
    eval->add_option("--results", eval_results, "results CSV")->required();
    eval->add_option("--gt", eval_gt, "ground-truth file")->required();
    eval->add_option("--out", eval_out, "metrics JSON path");

    // synth
    auto* synth = app.add_subcommand("synth", "emit a synthetic sequence");
    std::string synth_kind = "translate", synth_out = "synth_seq";
    SynthParams sp;
    uint64_t synth_seed = 0;
    synth->add_option("--kind", synth_kind, "translate | grow | jump | occlude");
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--frames", sp.frames, "frame count");
    synth->add_option("--width", sp.width, "frame width");
    synth->add_option("--height", sp.height, "frame height");
    synth->add_option("--dx", sp.dx_per_frame, "x translation per frame");
    synth->add_option("--dy", sp.dy_per_frame, "y translation per frame");
    synth->add_option("--growth", sp.growth, "total growth factor");
    synth->add_option("--jump-factor", sp.jump_factor, "abrupt scale factor");
    synth->add_option("--jump-frame", sp.jump_frame, "frame of the abrupt change");
    synth->add_option("--occlude-start", sp.occlude_start, "first occluded frame");
    synth->add_option("--occlude-frames", sp.occlude_frames, "occlusion length");
    synth->add_option("--seed", synth_seed, "texture seed");

    // bench
    auto* bench = app.add_subcommand("bench", "run a directory of sequences");
    CommonOpts bench_opts;
    std::string bench_root;
    bench->add_option("--root", bench_root, "directory of sequence directories")
        ->required();
    add_common(bench, bench_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*track) {
            SequenceSpec spec;
            spec.frames_dir = frames_dir;
            if (!gt_path.empty()) spec.gt_path = gt_path;
            spec.name = seq_name;
            if (range_first >= 0 && range_last >= range_first)
                spec.frame_range = {range_first, range_last};
            return run_track(resolve_config(track_opts), spec);
        }
        if (*eval) {
            auto results = read_results_csv(eval_results);
            Trajectory traj;
            for (const auto& r : results) traj.push_back(r.box);

            std::ifstream gt_in(eval_gt);
            if (!gt_in) throw std::runtime_error("cannot open: " + eval_gt);
            Trajectory gt;
            std::string line;
            int lineno = 0;
            while (std::getline(gt_in, line)) {
                ++lineno;
                if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
                gt.push_back(parse_gt_line(line, lineno));
            }
            write_metrics_json(eval_out, compute_metrics(traj, gt));
            std::printf("wrote %s\n", eval_out.c_str());
            return 0;
        }
        if (*synth) {
            SynthSequence seq =
                synth_sequence(parse_synth_kind(synth_kind), sp, synth_seed);
            write_sequence(synth_out, seq);
            std::printf("wrote %zu frames to %s\n", seq.frames.size(),
                        synth_out.c_str());
            return 0;
        }
        if (*bench) {
            RunConfig rc = resolve_config(bench_opts);
            BenchResult r = run_bench(rc, bench_root);
            for (const auto& s : r.sequences)
                std::printf("%-24s PR@20 %.3f  SR-AUC %.3f  mIoU %.3f\n",
                            s.name.c_str(), s.report.precision.pr_at_20,
                            s.report.success.auc, s.report.mean_iou);
            std::printf("mean over %zu sequences: PR@20 %.3f  SR-AUC %.3f  mIoU %.3f\n",
                        r.sequences.size(), r.mean_pr20, r.mean_auc, r.mean_iou);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "pawss: %s\n", e.what());
        return 1;
    }
    return 0;
}
