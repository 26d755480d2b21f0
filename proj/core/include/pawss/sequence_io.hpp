#ifndef PAWSS_SEQUENCE_IO_HPP
#define PAWSS_SEQUENCE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pawss/evaluation.hpp"
#include "pawss/geometry.hpp"
#include "pawss/image.hpp"
#include "pawss/tracker.hpp"

namespace pawss {

struct SequenceSpec {
    std::filesystem::path frames_dir;
    std::filesystem::path gt_path;          // empty: no ground truth
    std::optional<std::pair<int, int>> frame_range;  // inclusive, 0-based
    std::string name;
};

struct LoadedSequence {
    std::vector<Image> frames;
    Trajectory gt;  // empty when no ground-truth file was given
    std::string name;
};

/// Decodes the frame images (sorted lexicographically) and parses the OTB
/// ground-truth file ("x,y,w,h" per line, 1-based, comma or whitespace
/// separated). Fails hard on unreadable frames, malformed lines, or a
/// frame/ground-truth count mismatch.
LoadedSequence load_sequence(const SequenceSpec& spec);

Image load_image(const std::filesystem::path& path);
void save_image(const Image& rgb, const std::filesystem::path& path);

/// Parses one ground-truth line into a 0-based box.
BoundingBox parse_gt_line(const std::string& line, int line_number);

enum class SynthKind { Translate, Grow, Jump, Occlude };

struct SynthParams {
    int width = 160;
    int height = 120;
    int frames = 100;
    BoundingBox init_box{12, 40, 40, 40};
    double dx_per_frame = 1.0;
    double dy_per_frame = 0.0;
    double growth = 1.5;       // total factor over the sequence (Grow)
    double jump_factor = 1.6;  // abrupt factor (Jump)
    int jump_frame = 50;
    int occlude_start = 45;
    int occlude_frames = 10;
};

struct SynthSequence {
    std::vector<Image> frames;
    std::vector<BoundingBox> gt;
    std::vector<bool> occluded;
};

SynthKind parse_synth_kind(const std::string& name);

/// Textured target over a contrasting textured background; ground truth is
/// exact by construction. Generation fails if the target would leave the
/// frame.
SynthSequence synth_sequence(SynthKind kind, const SynthParams& params,
                             uint64_t seed);

/// Writes frames as 0-padded PNGs plus a 1-based groundtruth_rect.txt.
void write_sequence(const std::filesystem::path& dir, const SynthSequence& seq);

struct RunConfig {
    Config tracker;
    std::filesystem::path output_dir;
    bool overlay = false;
};

/// Flat key-value config file ("key = value", '#' comments).
RunConfig parse_run_config_file(const std::filesystem::path& path);
RunConfig parse_run_config_text(const std::string& text);
std::string emit_run_config(const RunConfig& config);

struct FrameResult {
    int frame = 0;
    BoundingBox box;
    double scale = 1.0;
    double score = 0.0;
};

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<FrameResult>& results);
std::vector<FrameResult> read_results_csv(const std::filesystem::path& path);

void write_metrics_json(const std::filesystem::path& path,
                        const MetricReport& report);

/// Frame with the tracked box outlined and a patch-weight heat tile in the
/// top-left corner (warmer = higher weight).
Image render_overlay(const Image& rgb, const BoundingBox& box,
                     const std::vector<double>& patch_weights, int grid_side);

/// Runs one sequence end to end: per-frame results CSV, optional overlays,
/// and a metrics JSON when ground truth is present. Returns the process exit
/// status.
int run_track(const RunConfig& config, const SequenceSpec& spec);

struct BenchSequenceResult {
    std::string name;
    MetricReport report;
    std::vector<std::string> attributes;
};

struct BenchResult {
    std::vector<BenchSequenceResult> sequences;
    double mean_pr20 = 0.0;
    double mean_auc = 0.0;
    double mean_iou = 0.0;
};

/// Runs every sequence directory under `root` (each holding frames or an
/// img/ subdirectory plus groundtruth_rect.txt, optional attributes.txt) and
/// aggregates per-attribute means into <output>/bench.json.
BenchResult run_bench(const RunConfig& config, const std::filesystem::path& root);

}  // namespace pawss

#endif
