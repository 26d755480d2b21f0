// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "pawss/evaluation.hpp"
#include "pawss/features.hpp"
#include "pawss/flow.hpp"
#include "pawss/learner.hpp"
#include "pawss/scale.hpp"
#include "pawss/segmentation.hpp"
#include "pawss/sequence_io.hpp"
#include "pawss/tracker.hpp"

using namespace pawss;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail = "") {
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// --------------------------------------------------------------------------
// 1. Core model arithmetic: posterior normalization, weighted distributions,
//    convex update blends, max-normalized weights.

bool criterion_model_arithmetic(std::string& detail) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ColourQuantizer q{2};
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<double> fg(q.total_bins()), bg(q.total_bins());
        for (auto& v : fg) v = u(rng);
        for (auto& v : bg) v = u(rng);
        double stay = 0.5 + 0.5 * u(rng);
        SegmentationModel m = SegmentationModel::from_histograms(fg, bg, q, stay);
        double prior = u(rng);
        int bin = trial % q.total_bins();
        double p1 = m.pixel_posterior(bin, prior);
        double pred = stay * prior + (1 - stay) * (1 - prior);
        double den = m.fg_hist()[bin] * pred + m.bg_hist()[bin] * (1 - pred);
        double p0 = den > 0 ? m.bg_hist()[bin] * (1 - pred) / den : 1 - prior;
        if (!near(p1 + p0, 1.0, 1e-9) || p1 < 0.0 || p1 > 1.0) {
            detail = "posterior normalization broke at trial " + std::to_string(trial);
            return false;
        }
    }

    // Patch-weighted distribution: 2 red + 1 red pixel at weights 1 and 0.5.
    ColourQuantizer q16{16};
    Image frame(4, 2, 3);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 4; ++x) {
            frame.at(x, y, 0) = 0.6f;
            frame.at(x, y, 1) = 1.0f;
            frame.at(x, y, 2) = 1.0f;
        }
    frame.at(0, 0, 0) = 0.01f;
    frame.at(1, 0, 0) = 0.01f;
    frame.at(2, 0, 0) = 0.01f;
    PatchGrid grid;
    grid.grid_side = 1;
    grid.patches = {{0, 0, 2, 2}, {2, 0, 2, 2}};
    SegmentationModel m = SegmentationModel::init_model(frame, {0, 0, 4, 2}, q16);
    double red = m.weighted_colour_distribution(frame, grid, {1.0, 0.5})
                     [q16.bin_of(0.01f, 1.0f, 1.0f)];
    if (!near(red, 2.5 / 6.0, 1e-12)) {
        detail = "weighted distribution expected 2.5/6, got " + std::to_string(red);
        return false;
    }

    // Convex histogram blend at the delta extremes and in between.
    for (double delta : {0.0, 0.1, 1.0}) {
        std::vector<double> fg{0.2, 0.8}, bg{0.5, 0.5};
        SegmentationModel s = SegmentationModel::from_histograms(fg, bg, q, 0.8);
        std::vector<double> cur{0.6, 0.4};
        s.update_histograms(cur, bg, delta);
        double expect = delta * 0.6 + (1 - delta) * 0.2;
        if (!near(s.fg_hist()[0], expect, 1e-12)) {
            detail = "histogram blend wrong at delta " + std::to_string(delta);
            return false;
        }
    }
    for (double delta : {0.0, 0.1, 1.0}) {
        PatchWeights w(2);
        w.w = {0.4, 0.8};
        update_weights(w, {0.3, 0.6}, delta);
        if (!near(w.w[0], delta * 0.5 + (1 - delta) * 0.4, 1e-12) ||
            !near(w.w[1], delta * 1.0 + (1 - delta) * 0.8, 1e-12)) {
            detail = "weight blend wrong at delta " + std::to_string(delta);
            return false;
        }
    }
    // The best patch is pinned to weight 1 under repeated updates.
    PatchWeights w(3);
    w.w = {0.2, 0.9, 0.5};
    for (int i = 0; i < 300; ++i) update_weights(w, {0.9, 0.1, 0.4}, 0.1);
    if (!near(w.w[0], 1.0, 1e-6)) {
        detail = "max-normalized weight did not converge to 1";
        return false;
    }
    return true;
}

// --------------------------------------------------------------------------
// 2. Scale estimation: exact and outlier-contaminated point-cloud recovery,
//    plus closed-form ladders.

bool criterion_scale(std::string& detail) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> us(0.7, 1.4);
    for (int trial = 0; trial < 100; ++trial) {
        double s = us(rng);
        std::vector<FlowPoint> pts;
        std::uniform_real_distribution<double> uc(0.0, 200.0);
        for (int i = 0; i < 14; ++i) {
            FlowPoint p{uc(rng), uc(rng), 0, {}, true};
            p.tracked = {p.x * s + 7.0, p.y * s - 4.0};
            pts.push_back(p);
        }
        auto r = median_pair_ratio(pts);
        if (!r.reliable || !near(r.s_p, s, 1e-6)) {
            detail = "clean cloud " + std::to_string(trial) + ": got " +
                     std::to_string(r.s_p) + " want " + std::to_string(s);
            return false;
        }
    }
    // 30% of the points perturbed; widely spaced inliers keep every pair
    // ratio within the tolerance band.
    std::uniform_real_distribution<double> noise(-0.8, 0.8);
    for (int trial = 0; trial < 100; ++trial) {
        double s = us(rng);
        std::vector<FlowPoint> pts;
        for (int gy = 0; gy < 4; ++gy)
            for (int gx = 0; gx < 5; ++gx) {
                FlowPoint p{gx * 40.0, gy * 40.0, 0, {}, true};
                p.tracked = {p.x * s, p.y * s};
                pts.push_back(p);
            }
        for (size_t i = 0; i < pts.size(); i += 3)  // ~30% outliers
            pts[i].tracked = {pts[i].tracked->first + noise(rng),
                              pts[i].tracked->second + noise(rng)};
        auto r = median_pair_ratio(pts);
        if (!r.reliable || !near(r.s_p, s, 5e-2)) {
            detail = "contaminated cloud " + std::to_string(trial) + ": got " +
                     std::to_string(r.s_p) + " want " + std::to_string(s);
            return false;
        }
    }

    ScaleSet sr = build_scale_set_r(1.0, 1.003, 11);
    for (int m = -5; m <= 5; ++m)
        if (!near(sr.scales[m + 5], std::pow(1.003, m), 1e-12)) {
            detail = "geometric ladder mismatch at m=" + std::to_string(m);
            return false;
        }
    ScaleSet sp = build_scale_set_p(1.0, 1.2, 11);
    for (int i = 0; i < 11; ++i)
        if (!near(sp.scales[i], 1.0 + 0.02 * i, 1e-12)) {
            detail = "arithmetic ladder mismatch at i=" + std::to_string(i);
            return false;
        }
    if (fuse_scale_sets(sr, sp).size() != 21) {
        detail = "fused ladder should merge the shared scale";
        return false;
    }
    return true;
}

// --------------------------------------------------------------------------
// 3. Optical flow: sub-pixel recovery of known shifts, flat regions flagged.

// Mixed incommensurate wavelengths so no shift in the tested range lands near
// a half-period at any pyramid level.
Image broadband(int w, int h, double dx, double dy) {
    Image img(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double X = x - dx, Y = y - dy;
            img.at(x, y) = static_cast<float>(
                0.5 + 0.15 * std::sin(2 * M_PI * (X * 0.866 + Y * 0.5) / 36.0) +
                0.15 * std::sin(2 * M_PI * (X * 0.2588 - Y * 0.9659) / 28.0) +
                0.12 * std::sin(2 * M_PI * (X * 0.5 - Y * 0.866) / 22.0) +
                0.05 * std::sin(2 * M_PI * (X * 0.9 - Y * 0.1) / 9.0));
        }
    return img;
}

bool criterion_flow(std::string& detail) {
    const int w = 96, h = 80;
    Image prev = broadband(w, h, 0, 0);
    for (int mag = 1; mag <= 8; ++mag) {
        for (double sign : {1.0, -1.0}) {
            double dx = sign * mag, dy = sign * 0.5 * mag;
            Image next = broadband(w, h, dx, dy);
            std::vector<FlowPoint> pts;
            for (int y = 16; y <= h - 16; y += 16)
                for (int x = 16; x <= w - 16; x += 16)
                    pts.push_back({static_cast<double>(x), static_cast<double>(y),
                                   0, {}, false});
            auto out = track_points(prev, next, pts);
            double se = 0;
            int n = 0;
            for (const auto& p : out) {
                if (!p.well_tracked) continue;
                double ex = p.tracked->first - (p.x + dx);
                double ey = p.tracked->second - (p.y + dy);
                se += ex * ex + ey * ey;
                ++n;
            }
            if (n < static_cast<int>(out.size() * 3 / 4) ||
                std::sqrt(se / n) >= 0.1) {
                detail = "shift " + std::to_string(dx) + "," + std::to_string(dy) +
                         " rms " + std::to_string(n ? std::sqrt(se / n) : -1.0);
                return false;
            }
        }
    }
    Image flat(64, 64, 1, 0.3f);
    auto out = track_points(flat, flat, {{32, 32, 0, {}, false}});
    if (out[0].well_tracked) {
        detail = "gradient-free point reported as tracked";
        return false;
    }
    return true;
}

// --------------------------------------------------------------------------
// 4. Structured learner: dual feasibility, monotone objective, eviction oracle.

SupportPattern random_pattern(int frame_id, int dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    SupportPattern p;
    p.frame_id = frame_id;
    p.true_index = 0;
    for (int i = 0; i < 10; ++i) {
        Descriptor d(dim);
        for (float& v : d) v = u(rng);
        p.descriptors.push_back(std::move(d));
        p.boxes.push_back(BoundingBox{i * 2.0, 0, 10, 10});
    }
    return p;
}

bool criterion_learner(std::string& detail) {
    const int dim = 6;
    std::mt19937_64 rng(4);

    Learner l({100.0, 100000, 0}, dim, 9);
    for (int f = 0; f < 8; ++f) l.update(random_pattern(f, dim, rng));
    double prev = l.dual_objective();
    for (int step = 0; step < 100; ++step) {
        l.reprocess(1);
        double cur = l.dual_objective();
        if (cur < prev - 1e-9) {
            detail = "dual objective decreased at step " + std::to_string(step);
            return false;
        }
        prev = cur;
    }
    for (const SupportPattern* p : l.patterns()) {
        double sum = 0.0;
        for (size_t i = 0; i < p->beta.size(); ++i) {
            sum += p->beta[i];
            bool is_true = static_cast<int>(i) == p->true_index;
            if ((is_true && (p->beta[i] < -1e-9 || p->beta[i] > 100.0 + 1e-9)) ||
                (!is_true && p->beta[i] > 1e-9)) {
                detail = "beta bound violated";
                return false;
            }
        }
        if (!near(sum, 0.0, 1e-9)) {
            detail = "per-pattern beta sum is " + std::to_string(sum);
            return false;
        }
    }

    // Eviction choice equals the brute-force minimum weight perturbation.
    for (int trial = 0; trial < 10; ++trial) {
        Learner e({100.0, 100000, 5}, dim, 50 + trial);
        for (int f = 0; f < 5; ++f) e.update(random_pattern(f, dim, rng));
        int expected = -1;
        double best = std::numeric_limits<double>::infinity();
        int idx = 0;
        for (const SupportPattern* p : e.patterns()) {
            const Descriptor& dt = p->descriptors[p->true_index];
            for (size_t i = 0; i < p->beta.size(); ++i) {
                if (p->beta[i] == 0.0) continue;
                if (p->beta[i] < 0.0) {
                    double n2 = 0.0;
                    for (int k = 0; k < dim; ++k) {
                        double diff = static_cast<double>(p->descriptors[i][k]) - dt[k];
                        n2 += diff * diff;
                    }
                    double cost = p->beta[i] * p->beta[i] * n2;
                    if (cost < best) {
                        best = cost;
                        expected = idx;
                    }
                }
                ++idx;
            }
        }
        if (e.choose_eviction() != expected) {
            detail = "eviction oracle mismatch at trial " + std::to_string(trial);
            return false;
        }
    }
    return true;
}

// --------------------------------------------------------------------------
// 5. Tracking regressions on the synthetic suite.

double run_mean_iou(Tracker& tracker, const SynthSequence& seq, size_t from,
                    size_t to) {
    double sum = 0.0;
    size_t n = 0;
    tracker.init(seq.frames[0], seq.gt[0]);
    for (size_t t = 1; t < seq.frames.size(); ++t) {
        BoundingBox box = tracker.track(seq.frames[t]);
        if (t >= from && t <= to) {
            sum += iou(box, seq.gt[t]);
            ++n;
        }
    }
    return n ? sum / n : 0.0;
}

bool criterion_tracking(std::string& detail) {
    SynthParams params;

    {
        SynthSequence seq = synth_sequence(SynthKind::Translate, params, 101);
        Tracker tracker{Config{}};
        double m = run_mean_iou(tracker, seq, 1, seq.frames.size() - 1);
        if (m < 0.7) {
            detail = "translate mean overlap " + std::to_string(m);
            return false;
        }
    }
    {
        // Growth must move the box edges by whole pixels to be observable, so
        // the grow fixture uses a larger target than the other cases.
        SynthParams grow = params;
        grow.frames = 100;
        grow.width = 240;
        grow.height = 180;
        grow.init_box = {85, 55, 70, 70};
        SynthSequence seq = synth_sequence(SynthKind::Grow, grow, 103);
        Tracker tracker{Config{}};  // pawssb default
        double m = run_mean_iou(tracker, seq, 1, seq.frames.size() - 1);
        if (m < 0.6) {
            detail = "grow mean overlap " + std::to_string(m);
            return false;
        }
    }
    {
        SynthParams jump = params;
        jump.init_box = {60, 40, 40, 40};
        SynthSequence seq = synth_sequence(SynthKind::Jump, jump, 107);
        Tracker b{mode_select(Config{}, TrackerMode::PAWSSb)};
        Tracker a{mode_select(Config{}, TrackerMode::PAWSSa)};
        double mb = run_mean_iou(b, seq, 50, 60);
        double ma = run_mean_iou(a, seq, 50, 60);
        if (!(mb > ma)) {
            detail = "jump recovery pawssb " + std::to_string(mb) +
                     " vs pawssa " + std::to_string(ma);
            return false;
        }
    }
    {
        SynthSequence seq = synth_sequence(SynthKind::Occlude, params, 109);
        Tracker tracker{Config{}};
        tracker.init(seq.frames[0], seq.gt[0]);
        for (size_t t = 1; t < seq.frames.size(); ++t) {
            uint64_t before = tracker.learner_state_hash();
            tracker.track(seq.frames[t]);
            if (*tracker.last_similarity() < tracker.config().eta &&
                tracker.learner_state_hash() != before) {
                detail = "low-similarity frame " + std::to_string(t) +
                         " still updated the model";
                return false;
            }
        }
    }
    return true;
}

// --------------------------------------------------------------------------
// 6. Metric oracles including the scripted re-initialization protocol.

class ScriptedTracker : public OnlineTracker {
public:
    explicit ScriptedTracker(std::vector<double> dx) : dx_(std::move(dx)) {}
    void init(const Image&, const BoundingBox& box) override { box_ = box; }
    BoundingBox track(const Image&) override {
        double d = next_ < dx_.size() ? dx_[next_++] : 0.0;
        return box_.translated(d, 0.0);
    }

private:
    BoundingBox box_;
    std::vector<double> dx_;
    size_t next_ = 0;
};

bool criterion_metrics(std::string& detail) {
    BoundingBox b{10, 10, 10, 10};
    Trajectory gt(4, b), traj;
    traj.push_back(b);
    traj.push_back(b.translated(3, 4));
    traj.push_back(b.translated(0, 30));
    traj.push_back(std::nullopt);
    PrecisionResult pr = precision_curve(traj, gt);
    if (!near(pr.curve[5], 0.5, 1e-12) || !near(pr.pr_at_20, 0.5, 1e-12) ||
        !near(pr.curve[30], 0.75, 1e-12)) {
        detail = "precision curve hand values";
        return false;
    }
    Trajectory self(10, b);
    SuccessResult sr = success_auc(self, self);
    if (!near(sr.auc, 20.0 / 21.0, 1e-12)) {
        detail = "self success AUC " + std::to_string(sr.auc);
        return false;
    }

    auto dx_for = [](double o) { return 10.0 * (1.0 - o) / (1.0 + o); };
    std::vector<Image> frames(6, Image(8, 8, 3, 0.5f));
    std::vector<BoundingBox> gtv(6, BoundingBox{20, 20, 10, 10});
    ScriptedTracker scripted({dx_for(0.8), dx_for(0.5), 10.0, dx_for(0.9)});
    VotResult v = vot_run(scripted, frames, gtv);
    if (v.failures != 1 || !near(v.accuracy, (0.8 + 0.5 + 0.9) / 3.0, 1e-9)) {
        detail = "reinit protocol: failures " + std::to_string(v.failures) +
                 " accuracy " + std::to_string(v.accuracy);
        return false;
    }
    return true;
}

// --------------------------------------------------------------------------
// 7. Benchmark harness over generated fixtures (plus an optional external
//    dataset smoke run via PAWSS_OTB_DIR).

bool criterion_bench(std::string& detail) {
    fs::path root = fs::temp_directory_path() /
                    ("pawss_acc_bench_" + std::to_string(::getpid()));
    fs::remove_all(root);
    SynthParams params;
    params.frames = 30;
    write_sequence(root / "translate",
                   synth_sequence(SynthKind::Translate, params, 201));
    {
        std::ofstream attrs(root / "translate" / "attributes.txt");
        attrs << "MOTION";
    }
    SynthParams grow = params;
    grow.init_box = {55, 35, 36, 36};
    write_sequence(root / "grow", synth_sequence(SynthKind::Grow, grow, 203));

    RunConfig rc;
    rc.output_dir = root / "out";
    BenchResult r = run_bench(rc, root);
    bool ok = r.sequences.size() == 2 && r.mean_iou >= 0.5 &&
              fs::exists(rc.output_dir / "bench.json");
    if (!ok) detail = "fixture bench mean overlap " + std::to_string(r.mean_iou);
    fs::remove_all(root);
    if (!ok) return false;

    if (const char* otb = std::getenv("PAWSS_OTB_DIR")) {
        RunConfig ext;
        ext.output_dir = fs::temp_directory_path() /
                         ("pawss_acc_otb_" + std::to_string(::getpid()));
        BenchResult er = run_bench(ext, otb);
        bool eok = !er.sequences.empty();
        fs::remove_all(ext.output_dir);
        if (!eok) {
            detail = "external dataset produced no sequences";
            return false;
        }
        detail = "external dataset mean overlap " + std::to_string(er.mean_iou);
    }
    return true;
}

// --------------------------------------------------------------------------
// 8. Determinism: two identical runs emit byte-identical results.

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool criterion_determinism(std::string& detail) {
    fs::path root = fs::temp_directory_path() /
                    ("pawss_acc_det_" + std::to_string(::getpid()));
    fs::remove_all(root);
    SynthParams params;
    params.frames = 15;
    write_sequence(root / "seq", synth_sequence(SynthKind::Translate, params, 301));

    SequenceSpec spec;
    spec.frames_dir = root / "seq";
    spec.gt_path = root / "seq" / "groundtruth_rect.txt";
    spec.name = "seq";

    std::string runs[2];
    for (int i = 0; i < 2; ++i) {
        RunConfig rc;
        rc.output_dir = root / ("out" + std::to_string(i));
        if (run_track(rc, spec) != 0) {
            detail = "tracking run failed";
            fs::remove_all(root);
            return false;
        }
        runs[i] = slurp(rc.output_dir / "seq_results.csv");
    }
    bool ok = !runs[0].empty() && runs[0] == runs[1];
    if (!ok) detail = "result files differ between identical runs";
    fs::remove_all(root);
    return ok;
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        bool (*fn)(std::string&);
    };
    const Entry entries[] = {
        {"model arithmetic", criterion_model_arithmetic},
        {"scale estimation", criterion_scale},
        {"optical flow", criterion_flow},
        {"structured learner", criterion_learner},
        {"synthetic tracking", criterion_tracking},
        {"evaluation metrics", criterion_metrics},
        {"benchmark harness", criterion_bench},
        {"determinism", criterion_determinism},
    };
    for (const Entry& e : entries) {
        std::string detail;
        bool ok = false;
        try {
            ok = e.fn(detail);
        } catch (const std::exception& ex) {
            detail = std::string("exception: ") + ex.what();
        }
        report(e.name, ok, detail);
    }
    return g_failures == 0 ? 0 : 1;
}
