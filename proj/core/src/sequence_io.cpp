#include "pawss/sequence_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "json.hpp"

namespace fs = std::filesystem;

namespace pawss {

Image load_image(const fs::path& path) {
    cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (bgr.empty())
        throw std::runtime_error("failed to decode image: " + path.string());
    Image out(bgr.cols, bgr.rows, 3);
    for (int y = 0; y < bgr.rows; ++y) {
        const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            out.at(x, y, 0) = row[x][2] / 255.0f;
            out.at(x, y, 1) = row[x][1] / 255.0f;
            out.at(x, y, 2) = row[x][0] / 255.0f;
        }
    }
    return out;
}

void save_image(const Image& rgb, const fs::path& path) {
    if (rgb.channels != 3) throw std::invalid_argument("save_image: expected RGB");
    cv::Mat bgr(rgb.height, rgb.width, CV_8UC3);
    for (int y = 0; y < rgb.height; ++y) {
        cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < rgb.width; ++x) {
            auto q = [&](int c) {
                float v = std::clamp(rgb.at(x, y, c), 0.0f, 1.0f);
                return static_cast<unsigned char>(std::lround(v * 255.0f));
            };
            row[x] = {q(2), q(1), q(0)};
        }
    }
    if (!cv::imwrite(path.string(), bgr))
        throw std::runtime_error("failed to write image: " + path.string());
}

BoundingBox parse_gt_line(const std::string& line, int line_number) {
    std::string cleaned = line;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::replace(cleaned.begin(), cleaned.end(), '\t', ' ');
    std::istringstream iss(cleaned);
    double x, y, w, h;
    if (!(iss >> x >> y >> w >> h))
        throw std::runtime_error("malformed ground-truth line " +
                                 std::to_string(line_number) + ": \"" + line + "\"");
    // 1-based OTB coordinates to 0-based internal.
    return {x - 1.0, y - 1.0, w, h};
}

namespace {

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

std::vector<fs::path> list_frames(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw std::runtime_error("frame directory not found: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && is_image_file(e.path())) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

LoadedSequence load_sequence(const SequenceSpec& spec) {
    std::vector<fs::path> paths = list_frames(spec.frames_dir);
    if (paths.empty())
        throw std::runtime_error("no frames in: " + spec.frames_dir.string());

    Trajectory gt;
    if (!spec.gt_path.empty()) {
        std::ifstream in(spec.gt_path);
        if (!in) throw std::runtime_error("cannot open ground truth: " +
                                          spec.gt_path.string());
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            gt.push_back(parse_gt_line(line, lineno));
        }
        if (gt.empty()) throw std::runtime_error("empty ground truth: " +
                                                 spec.gt_path.string());
        if (gt.size() != paths.size())
            throw std::runtime_error(
                "frame/ground-truth count mismatch in " + spec.frames_dir.string() +
                ": " + std::to_string(paths.size()) + " frames vs " +
                std::to_string(gt.size()) + " annotations");
    }

    size_t first = 0, last = paths.size() - 1;
    if (spec.frame_range) {
        first = static_cast<size_t>(std::max(0, spec.frame_range->first));
        last = std::min(paths.size() - 1,
                        static_cast<size_t>(spec.frame_range->second));
        if (first > last) throw std::runtime_error("empty frame range");
    }

    LoadedSequence seq;
    seq.name = spec.name.empty() ? spec.frames_dir.filename().string() : spec.name;
    for (size_t i = first; i <= last; ++i)
        seq.frames.push_back(load_image(paths[i]));
    if (!gt.empty())
        seq.gt.assign(gt.begin() + first, gt.begin() + last + 1);
    return seq;
}

// ---------------------------------------------------------------------------
// Synthetic sequences

namespace {

// Smooth value-noise texture in a hue band: coarse random HSV grid bilinearly
// upsampled with a finer second octave on the V channel.
Image make_texture(int w, int h, double hue0, double hue1, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int cell = 8;
    int gw = w / cell + 2, gh = h / cell + 2;
    std::vector<float> gridh(gw * gh), grids(gw * gh), gridv(gw * gh);
    for (int i = 0; i < gw * gh; ++i) {
        gridh[i] = static_cast<float>(hue0 + u01(rng) * (hue1 - hue0));
        grids[i] = static_cast<float>(0.6 + 0.4 * u01(rng));
        gridv[i] = static_cast<float>(0.35 + 0.6 * u01(rng));
    }
    int cell2 = 3;
    int g2w = w / cell2 + 2, g2h = h / cell2 + 2;
    std::vector<float> fine(g2w * g2h);
    for (int i = 0; i < g2w * g2h; ++i)
        fine[i] = static_cast<float>(u01(rng) - 0.5);

    auto lerp_grid = [](const std::vector<float>& g, int gw_, double x, double y) {
        int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
        double fx = x - x0, fy = y - y0;
        float v00 = g[y0 * gw_ + x0], v10 = g[y0 * gw_ + x0 + 1];
        float v01 = g[(y0 + 1) * gw_ + x0], v11 = g[(y0 + 1) * gw_ + x0 + 1];
        double top = v00 + fx * (v10 - v00);
        double bot = v01 + fx * (v11 - v01);
        return top + fy * (bot - top);
    };

    Image hsv(w, h, 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double gx = static_cast<double>(x) / cell;
            double gy = static_cast<double>(y) / cell;
            double v = lerp_grid(gridv, gw, gx, gy) +
                       0.18 * lerp_grid(fine, g2w, static_cast<double>(x) / cell2,
                                        static_cast<double>(y) / cell2);
            hsv.at(x, y, 0) = static_cast<float>(lerp_grid(gridh, gw, gx, gy));
            hsv.at(x, y, 1) = static_cast<float>(lerp_grid(grids, gw, gx, gy));
            hsv.at(x, y, 2) = static_cast<float>(std::clamp(v, 0.05, 1.0));
        }
    return hsv_to_rgb(hsv);
}

// Block mosaic of distinct warm hues with a fine brightness octave. The
// coarse layout makes the appearance sensitive to where a patch lands, so
// an off-scale or off-center box genuinely looks different.
Image mosaic_texture(int size, int blocks, double hue0, double hue1,
                     std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<float> hue(blocks * blocks), sat(blocks * blocks), val(blocks * blocks);
    for (int i = 0; i < blocks * blocks; ++i) {
        hue[i] = static_cast<float>(hue0 + (hue1 - hue0) * u01(rng));
        sat[i] = static_cast<float>(0.7 + 0.3 * u01(rng));
        val[i] = static_cast<float>(0.4 + 0.55 * u01(rng));
    }
    // Brightness octave coarser than the block grid noise: structures that
    // survive a moderate zoom keep point tracking correlated across it.
    int cell2 = 12;
    int g2 = size / cell2 + 2;
    std::vector<float> fine(g2 * g2);
    for (float& v : fine) v = static_cast<float>(u01(rng) - 0.5);
    auto lerp = [&](double x, double y) {
        int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
        double fx = x - x0, fy = y - y0;
        double top = fine[y0 * g2 + x0] +
                     fx * (fine[y0 * g2 + x0 + 1] - fine[y0 * g2 + x0]);
        double bot = fine[(y0 + 1) * g2 + x0] +
                     fx * (fine[(y0 + 1) * g2 + x0 + 1] - fine[(y0 + 1) * g2 + x0]);
        return top + fy * (bot - top);
    };

    Image hsv(size, size, 3);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            int bx = std::min(blocks - 1, x * blocks / size);
            int by = std::min(blocks - 1, y * blocks / size);
            int b = by * blocks + bx;
            double n = lerp(static_cast<double>(x) / cell2,
                            static_cast<double>(y) / cell2);
            hsv.at(x, y, 0) = hue[b];
            hsv.at(x, y, 1) = sat[b];
            hsv.at(x, y, 2) =
                std::clamp(val[b] + 0.3f * static_cast<float>(n), 0.05f, 1.0f);
        }
    return hsv_to_rgb(hsv);
}

void draw_target(Image& frame, const Image& atlas, const BoundingBox& box) {
    int x0 = std::max(0, static_cast<int>(std::lround(box.x)));
    int y0 = std::max(0, static_cast<int>(std::lround(box.y)));
    int x1 = std::min(frame.width, static_cast<int>(std::lround(box.x2())));
    int y1 = std::min(frame.height, static_cast<int>(std::lround(box.y2())));
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
            double u = (x + 0.5 - box.x) / box.w * (atlas.width - 1);
            double v = (y + 0.5 - box.y) / box.h * (atlas.height - 1);
            for (int c = 0; c < 3; ++c)
                frame.at(x, y, c) = atlas.sample_bilinear(u, v, c);
        }
}

}  // namespace

SynthKind parse_synth_kind(const std::string& name) {
    if (name == "translate") return SynthKind::Translate;
    if (name == "grow") return SynthKind::Grow;
    if (name == "jump") return SynthKind::Jump;
    if (name == "occlude") return SynthKind::Occlude;
    throw std::invalid_argument("unknown synthetic kind: " + name);
}

SynthSequence synth_sequence(SynthKind kind, const SynthParams& params,
                             uint64_t seed) {
    std::mt19937_64 rng(seed);
    Image background = make_texture(params.width, params.height, 0.52, 0.68, rng);
    Image target = mosaic_texture(128, 4, 0.0, 0.18, rng);
    Image occluder = make_texture(128, 128, 0.52, 0.68, rng);

    SynthSequence seq;
    for (int t = 0; t < params.frames; ++t) {
        BoundingBox box = params.init_box;
        switch (kind) {
            case SynthKind::Translate:
                box = box.translated(params.dx_per_frame * t, params.dy_per_frame * t);
                break;
            case SynthKind::Grow: {
                double s = params.frames > 1
                               ? std::pow(params.growth,
                                          static_cast<double>(t) / (params.frames - 1))
                               : 1.0;
                box = box.scaled_about_center(s);
                break;
            }
            case SynthKind::Jump:
                if (t >= params.jump_frame)
                    box = box.scaled_about_center(params.jump_factor);
                break;
            case SynthKind::Occlude:
                box = box.translated(params.dx_per_frame * t, params.dy_per_frame * t);
                break;
        }
        if (box.x < 0 || box.y < 0 || box.x2() > params.width ||
            box.y2() > params.height)
            throw std::runtime_error("synth_sequence: target leaves the frame at frame " +
                                     std::to_string(t));

        Image frame = background;
        draw_target(frame, target, box);
        bool occ = kind == SynthKind::Occlude && t >= params.occlude_start &&
                   t < params.occlude_start + params.occlude_frames;
        if (occ) draw_target(frame, occluder, box.scaled_about_center(1.3));

        seq.frames.push_back(std::move(frame));
        seq.gt.push_back(box);
        seq.occluded.push_back(occ);
    }
    return seq;
}

void write_sequence(const fs::path& dir, const SynthSequence& seq) {
    fs::create_directories(dir);
    char name[32];
    for (size_t i = 0; i < seq.frames.size(); ++i) {
        std::snprintf(name, sizeof(name), "%04zu.png", i + 1);
        save_image(seq.frames[i], dir / name);
    }
    std::ofstream gt(dir / "groundtruth_rect.txt");
    gt.precision(17);
    for (const BoundingBox& b : seq.gt)
        gt << b.x + 1.0 << ',' << b.y + 1.0 << ',' << b.w << ',' << b.h << '\n';
}

// ---------------------------------------------------------------------------
// Run configuration

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig parse_run_config_text(const std::string& text) {
    RunConfig rc;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        Config& t = rc.tracker;
        if (key == "delta") t.delta = std::stod(val);
        else if (key == "lambda") t.lambda = std::stod(val);
        else if (key == "n_r") t.n_r = std::stoi(val);
        else if (key == "n_p") t.n_p = std::stoi(val);
        else if (key == "n_pt") t.n_pt = std::stoi(val);
        else if (key == "eta") t.eta = std::stod(val);
        else if (key == "n_phi") t.n_phi = std::stoi(val);
        else if (key == "r_s") t.r_s = std::stod(val);
        else if (key == "first_level_stride") t.first_level_stride = std::stoi(val);
        else if (key == "transition_stay") t.transition_stay = std::stod(val);
        else if (key == "seg_bins") t.seg_bins = std::stoi(val);
        else if (key == "svm_c") t.learner.c = std::stod(val);
        else if (key == "svm_budget") t.learner.budget = std::stoi(val);
        else if (key == "svm_reprocess") t.learner.reprocess_steps = std::stoi(val);
        else if (key == "pattern_capacity") t.pattern_capacity = std::stoi(val);
        else if (key == "seed") t.seed = std::stoull(val);
        else if (key == "mode") t.mode = parse_mode(val);
        else if (key == "overlay") rc.overlay = (val == "true" || val == "1");
        else if (key == "output_dir") rc.output_dir = val;
        else throw std::runtime_error("config line " + std::to_string(lineno) +
                                      ": unknown key \"" + key + "\"");
    }
    return rc;
}

RunConfig parse_run_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config_text(ss.str());
}

std::string emit_run_config(const RunConfig& rc) {
    std::ostringstream os;
    os.precision(17);
    const Config& t = rc.tracker;
    os << "delta = " << t.delta << '\n'
       << "lambda = " << t.lambda << '\n'
       << "n_r = " << t.n_r << '\n'
       << "n_p = " << t.n_p << '\n'
       << "n_pt = " << t.n_pt << '\n'
       << "eta = " << t.eta << '\n'
       << "n_phi = " << t.n_phi << '\n'
       << "r_s = " << t.r_s << '\n'
       << "first_level_stride = " << t.first_level_stride << '\n'
       << "transition_stay = " << t.transition_stay << '\n'
       << "seg_bins = " << t.seg_bins << '\n'
       << "svm_c = " << t.learner.c << '\n'
       << "svm_budget = " << t.learner.budget << '\n'
       << "svm_reprocess = " << t.learner.reprocess_steps << '\n'
       << "pattern_capacity = " << t.pattern_capacity << '\n'
       << "seed = " << t.seed << '\n'
       << "mode = " << mode_name(t.mode) << '\n'
       << "overlay = " << (rc.overlay ? "true" : "false") << '\n'
       << "output_dir = " << rc.output_dir.string() << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Results, metrics, overlays

void write_results_csv(const fs::path& path,
                       const std::vector<FrameResult>& results) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path.string());
    out << "frame,x,y,w,h,scale,score\n";
    char buf[256];
    for (const FrameResult& r : results) {
        std::snprintf(buf, sizeof(buf), "%d,%.4f,%.4f,%.4f,%.4f,%.6f,%.6f\n",
                      r.frame, r.box.x, r.box.y, r.box.w, r.box.h, r.scale, r.score);
        out << buf;
    }
}

std::vector<FrameResult> read_results_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results: " + path.string());
    std::vector<FrameResult> out;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (trim(line).empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream iss(line);
        FrameResult r;
        if (!(iss >> r.frame >> r.box.x >> r.box.y >> r.box.w >> r.box.h >>
              r.scale >> r.score))
            throw std::runtime_error("malformed results row: " + line);
        out.push_back(r);
    }
    return out;
}

void write_metrics_json(const fs::path& path, const MetricReport& report) {
    nlohmann::json j;
    j["pr_at_20"] = report.precision.pr_at_20;
    j["sr_auc"] = report.success.auc;
    j["mean_iou"] = report.mean_iou;
    j["frames"] = report.frames;
    j["precision_curve"] = report.precision.curve;
    j["success_curve"] = report.success.curve;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path.string());
    out << j.dump(2) << '\n';
}

Image render_overlay(const Image& rgb, const BoundingBox& box,
                     const std::vector<double>& patch_weights, int grid_side) {
    Image out = rgb;
    auto put = [&](int x, int y, float r, float g, float b) {
        if (x < 0 || y < 0 || x >= out.width || y >= out.height) return;
        out.at(x, y, 0) = r;
        out.at(x, y, 1) = g;
        out.at(x, y, 2) = b;
    };
    int x0 = static_cast<int>(std::lround(box.x));
    int y0 = static_cast<int>(std::lround(box.y));
    int x1 = static_cast<int>(std::lround(box.x2()));
    int y1 = static_cast<int>(std::lround(box.y2()));
    for (int x = x0; x <= x1; ++x) {
        put(x, y0, 1, 0, 0);
        put(x, y1, 1, 0, 0);
    }
    for (int y = y0; y <= y1; ++y) {
        put(x0, y, 1, 0, 0);
        put(x1, y, 1, 0, 0);
    }

    // Weight thumbnail: one grid cell per patch, warmer = higher.
    const int cell = 6;
    for (int r = 0; r < grid_side; ++r)
        for (int c = 0; c < grid_side; ++c) {
            double w = patch_weights[r * grid_side + c];
            float red = static_cast<float>(w);
            float blue = static_cast<float>(1.0 - w);
            for (int dy = 0; dy < cell; ++dy)
                for (int dx = 0; dx < cell; ++dx)
                    put(1 + c * cell + dx, 1 + r * cell + dy, red, 0.15f, blue);
        }
    return out;
}

// ---------------------------------------------------------------------------
// End-to-end runners

int run_track(const RunConfig& config, const SequenceSpec& spec) {
    try {
        LoadedSequence seq = load_sequence(spec);
        if (seq.frames.empty()) throw std::runtime_error("empty sequence");
        if (seq.gt.empty() || !seq.gt[0])
            throw std::runtime_error("ground truth required to initialize the tracker");

        fs::create_directories(config.output_dir);
        fs::path overlay_dir = config.output_dir / (seq.name + "_overlay");
        if (config.overlay) fs::create_directories(overlay_dir);

        Tracker tracker(config.tracker);
        tracker.init(seq.frames[0], *seq.gt[0]);

        std::vector<FrameResult> results;
        Trajectory traj;
        results.push_back({0, *seq.gt[0], 1.0, 0.0});
        traj.push_back(*seq.gt[0]);

        int g = static_cast<int>(std::lround(
            std::sqrt(static_cast<double>(config.tracker.n_phi))));
        if (config.overlay) {
            std::vector<double> w0(config.tracker.n_phi, 1.0);
            save_image(render_overlay(seq.frames[0], *seq.gt[0], w0, g),
                       overlay_dir / "0000.png");
        }

        char name[32];
        for (size_t t = 1; t < seq.frames.size(); ++t) {
            BoundingBox box = tracker.track(seq.frames[t]);
            results.push_back({static_cast<int>(t), box, tracker.current_scale(),
                               tracker.last_score()});
            traj.push_back(box);
            if (config.overlay) {
                std::snprintf(name, sizeof(name), "%04zu.png", t);
                save_image(render_overlay(seq.frames[t], box,
                                          tracker.patch_weights().w, g),
                           overlay_dir / name);
            }
        }

        write_results_csv(config.output_dir / (seq.name + "_results.csv"), results);
        if (!seq.gt.empty())
            write_metrics_json(config.output_dir / (seq.name + "_metrics.json"),
                               compute_metrics(traj, seq.gt));
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "pawss: %s\n", e.what());
        return 1;
    }
}

namespace {

std::vector<std::string> read_attributes(const fs::path& dir) {
    std::vector<std::string> attrs;
    std::ifstream in(dir / "attributes.txt");
    if (!in) return attrs;
    std::string tok;
    while (in >> tok) {
        std::replace(tok.begin(), tok.end(), ',', ' ');
        std::istringstream iss(tok);
        std::string t;
        while (iss >> t) attrs.push_back(t);
    }
    return attrs;
}

}  // namespace

BenchResult run_bench(const RunConfig& config, const fs::path& root) {
    if (!fs::is_directory(root))
        throw std::runtime_error("bench root not found: " + root.string());

    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(root))
        if (e.is_directory()) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) throw std::runtime_error("no sequences under " + root.string());

    BenchResult bench;
    for (const fs::path& dir : dirs) {
        fs::path frames_dir = fs::is_directory(dir / "img") ? dir / "img" : dir;
        fs::path gt = dir / "groundtruth_rect.txt";
        if (!fs::exists(gt)) continue;

        SequenceSpec spec;
        spec.frames_dir = frames_dir;
        spec.gt_path = gt;
        spec.name = dir.filename().string();

        LoadedSequence seq = load_sequence(spec);
        Tracker tracker(config.tracker);
        tracker.init(seq.frames[0], *seq.gt[0]);
        Trajectory traj;
        traj.push_back(*seq.gt[0]);
        for (size_t t = 1; t < seq.frames.size(); ++t)
            traj.push_back(tracker.track(seq.frames[t]));

        BenchSequenceResult r;
        r.name = spec.name;
        r.report = compute_metrics(traj, seq.gt);
        r.attributes = read_attributes(dir);
        bench.sequences.push_back(std::move(r));
    }
    if (bench.sequences.empty())
        throw std::runtime_error("no valid sequences under " + root.string());

    for (const auto& s : bench.sequences) {
        bench.mean_pr20 += s.report.precision.pr_at_20;
        bench.mean_auc += s.report.success.auc;
        bench.mean_iou += s.report.mean_iou;
    }
    double n = static_cast<double>(bench.sequences.size());
    bench.mean_pr20 /= n;
    bench.mean_auc /= n;
    bench.mean_iou /= n;

    // Per-attribute aggregates.
    nlohmann::json j;
    j["mean_pr_at_20"] = bench.mean_pr20;
    j["mean_sr_auc"] = bench.mean_auc;
    j["mean_iou"] = bench.mean_iou;
    nlohmann::json seqs = nlohmann::json::array();
    std::map<std::string, std::vector<const BenchSequenceResult*>> by_attr;
    for (const auto& s : bench.sequences) {
        nlohmann::json e;
        e["name"] = s.name;
        e["pr_at_20"] = s.report.precision.pr_at_20;
        e["sr_auc"] = s.report.success.auc;
        e["mean_iou"] = s.report.mean_iou;
        e["attributes"] = s.attributes;
        seqs.push_back(e);
        for (const auto& a : s.attributes) by_attr[a].push_back(&s);
    }
    j["sequences"] = seqs;
    nlohmann::json attrs;
    for (const auto& [attr, list] : by_attr) {
        double pr = 0, auc = 0, miou = 0;
        for (const auto* s : list) {
            pr += s->report.precision.pr_at_20;
            auc += s->report.success.auc;
            miou += s->report.mean_iou;
        }
        double m = static_cast<double>(list.size());
        attrs[attr] = {{"pr_at_20", pr / m},
                       {"sr_auc", auc / m},
                       {"mean_iou", miou / m},
                       {"sequences", list.size()}};
    }
    j["attributes"] = attrs;

    fs::create_directories(config.output_dir);
    std::ofstream out(config.output_dir / "bench.json");
    out << j.dump(2) << '\n';
    return bench;
}

}  // namespace pawss
