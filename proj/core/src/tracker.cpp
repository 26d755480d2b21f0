#include "pawss/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "pawss/parallel.hpp"

namespace pawss {

void Config::validate() const {
    if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("Config: delta out of [0,1]");
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("Config: eta out of [0,1]");
    if (lambda <= 1.0) throw std::invalid_argument("Config: lambda must exceed 1");
    if (n_r < 1 || n_r % 2 == 0) throw std::invalid_argument("Config: n_r must be odd");
    if (n_p < 2) throw std::invalid_argument("Config: n_p must be at least 2");
    if (n_pt < 1) throw std::invalid_argument("Config: n_pt must be positive");
    int g = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_phi))));
    if (g * g != n_phi) throw std::invalid_argument("Config: n_phi must be a perfect square");
    if (r_s <= 0.0 || first_level_stride < 1)
        throw std::invalid_argument("Config: bad search parameters");
    if (transition_stay <= 0.5 || transition_stay > 1.0)
        throw std::invalid_argument("Config: transition_stay out of (0.5,1]");
    if (seg_bins < 2) throw std::invalid_argument("Config: seg_bins too small");
    if (pattern_capacity < 2) throw std::invalid_argument("Config: pattern_capacity too small");
}

Config mode_select(Config config, TrackerMode mode) {
    config.mode = mode;
    return config;
}

TrackerMode parse_mode(const std::string& name) {
    if (name == "pawssa" || name == "PAWSSa") return TrackerMode::PAWSSa;
    if (name == "pawssb" || name == "PAWSSb") return TrackerMode::PAWSSb;
    throw std::invalid_argument("unknown tracker mode: " + name);
}

std::string mode_name(TrackerMode mode) {
    return mode == TrackerMode::PAWSSa ? "pawssa" : "pawssb";
}

namespace {

struct FrameData {
    Image hsv;
    Image grey;
    FrameFeatures feats;
};

struct Candidate {
    BoundingBox box;
    double scale = 1.0;
};

FrameData prepare_frame(const Image& rgb, int width, int height,
                        const ColourQuantizer& seg_q) {
    FrameData fd;
    const Image* src = &rgb;
    Image scaled;
    if (rgb.width != width || rgb.height != height) {
        scaled = resize_bilinear(rgb, width, height);
        src = &scaled;
    }
    fd.hsv = to_hsv(*src);
    fd.grey = value_channel(fd.hsv);
    auto [mag, ori] = gradient_magnitude_orientation(fd.grey);
    fd.feats = FrameFeatures::compute(fd.hsv, mag, ori, seg_q);
    return fd;
}

std::vector<double> score_candidates(const Learner& learner,
                                     const FrameFeatures& feats,
                                     const std::vector<Candidate>& candidates,
                                     int n_phi, const PatchWeights& weights) {
    std::vector<double> scores(candidates.size(), 0.0);
    parallel_for(candidates.size(), [&](size_t i) {
        Descriptor d = candidate_descriptor(feats, candidates[i].box, n_phi, weights);
        scores[i] = learner.score(d);
    });
    return scores;
}

}  // namespace

struct Tracker::State {
    int orig_width = 0, orig_height = 0;
    int width = 0, height = 0;  // internal (pre-scaled) size
    double prescale = 1.0;
    double first_w = 0.0, first_h = 0.0;
    double r_w = 0.0;

    BoundingBox box;     // internal coordinates
    double scale = 1.0;  // relative to the first frame
    int frame_counter = 0;
    double last_score = 0.0;
    std::optional<double> last_similarity;

    SegmentationModel seg;
    PatchWeights weights;
    std::unique_ptr<Learner> learner;
    Image prev_grey;
    bool initialized = false;
};

Tracker::Tracker(Config config) : config_(std::move(config)), state_(new State) {
    config_.validate();
}

Tracker::~Tracker() = default;
Tracker::Tracker(Tracker&&) noexcept = default;
Tracker& Tracker::operator=(Tracker&&) noexcept = default;

double Tracker::current_scale() const { return state_->scale; }
double Tracker::prescale_factor() const { return state_->prescale; }
double Tracker::last_score() const { return state_->last_score; }
std::optional<double> Tracker::last_similarity() const { return state_->last_similarity; }
const PatchWeights& Tracker::patch_weights() const { return state_->weights; }

const Learner& Tracker::learner() const {
    if (!state_->learner) throw std::logic_error("Tracker: not initialized");
    return *state_->learner;
}

uint64_t Tracker::learner_state_hash() const { return learner().state_hash(); }

namespace {

// Pattern from a candidate subset: the chosen candidate first plus an even
// subsample of the rest, capped at `capacity`. Descriptors use the weights
// that were active during the search.
SupportPattern make_pattern(const FrameFeatures& feats,
                            const std::vector<Candidate>& candidates,
                            size_t true_idx, const PatchWeights& weights,
                            int n_phi, int capacity, int frame_id) {
    SupportPattern p;
    p.frame_id = frame_id;
    p.true_index = 0;

    std::vector<size_t> picked;
    picked.push_back(true_idx);
    size_t others = candidates.size() - 1;
    size_t want = std::min(others, static_cast<size_t>(capacity - 1));
    if (want > 0) {
        double step = static_cast<double>(candidates.size()) / want;
        for (size_t k = 0; k < want; ++k) {
            size_t idx = static_cast<size_t>(k * step);
            if (idx >= candidates.size()) idx = candidates.size() - 1;
            if (idx != true_idx) picked.push_back(idx);
        }
    }

    p.descriptors.reserve(picked.size());
    p.boxes.reserve(picked.size());
    for (size_t idx : picked) {
        p.descriptors.push_back(
            candidate_descriptor(feats, candidates[idx].box, n_phi, weights));
        p.boxes.push_back(candidates[idx].box);
    }
    return p;
}

}  // namespace

void Tracker::init(const Image& rgb_frame, const BoundingBox& box) {
    State& s = *state_;
    if (!box.valid() || box.x < 0 || box.y < 0 || box.x2() > rgb_frame.width ||
        box.y2() > rgb_frame.height)
        throw std::invalid_argument("Tracker::init: box outside frame");

    s.orig_width = rgb_frame.width;
    s.orig_height = rgb_frame.height;
    s.prescale = prescale_for_min_side(box);
    s.width = static_cast<int>(std::lround(rgb_frame.width * s.prescale));
    s.height = static_cast<int>(std::lround(rgb_frame.height * s.prescale));

    ColourQuantizer seg_q{config_.seg_bins};
    FrameData fd = prepare_frame(rgb_frame, s.width, s.height, seg_q);

    s.box = box.scaled(s.prescale);
    s.first_w = s.box.w;
    s.first_h = s.box.h;
    s.r_w = 0.5 * (s.first_w + s.first_h);
    s.scale = 1.0;
    s.frame_counter = 0;
    s.last_score = 0.0;
    s.last_similarity.reset();

    s.seg = SegmentationModel::init_model(fd.hsv, s.box, seg_q,
                                          config_.transition_stay);
    s.weights = PatchWeights(config_.n_phi);
    s.learner = std::make_unique<Learner>(config_.learner,
                                          config_.n_phi * kPatchFeatureDim,
                                          config_.seed);

    // First-frame pattern: fixed-scale translations around the initial box.
    std::vector<Candidate> candidates;
    int r = static_cast<int>(std::lround(config_.r_s));
    size_t true_idx = 0;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
            if (dx == 0 && dy == 0) true_idx = candidates.size();
            candidates.push_back({s.box.translated(dx, dy), 1.0});
        }
    s.learner->update(make_pattern(fd.feats, candidates, true_idx, s.weights,
                                   config_.n_phi, config_.pattern_capacity, 0));

    s.prev_grey = std::move(fd.grey);
    s.initialized = true;
}

BoundingBox Tracker::track(const Image& rgb_frame) {
    State& s = *state_;
    if (!s.initialized) throw std::logic_error("Tracker::track: not initialized");
    if (rgb_frame.width != s.orig_width || rgb_frame.height != s.orig_height)
        throw std::invalid_argument("Tracker::track: frame size mismatch");

    ++s.frame_counter;
    ColourQuantizer seg_q{config_.seg_bins};
    FrameData fd = prepare_frame(rgb_frame, s.width, s.height, seg_q);
    BoundingBox prev_box = s.box;

    // (1) First level: fixed-scale candidates on a stride grid inside radius
    // r_w; the argmax becomes the search center, not the decision.
    std::vector<Candidate> level1;
    {
        int r = static_cast<int>(std::lround(s.r_w));
        int stride = config_.first_level_stride;
        double bw = s.first_w * s.scale;
        double bh = s.first_h * s.scale;
        for (int dy = -r; dy <= r; dy += stride)
            for (int dx = -r; dx <= r; dx += stride) {
                double cx = prev_box.cx() + dx;
                double cy = prev_box.cy() + dy;
                if (cx < 0 || cy < 0 || cx >= s.width || cy >= s.height) continue;
                level1.push_back({{cx - 0.5 * bw, cy - 0.5 * bh, bw, bh}, s.scale});
            }
    }
    BoundingBox center_box = prev_box;
    if (!level1.empty()) {
        std::vector<double> scores = score_candidates(*s.learner, fd.feats, level1,
                                                      config_.n_phi, s.weights);
        size_t best = std::max_element(scores.begin(), scores.end()) - scores.begin();
        center_box = level1[best].box;
    }

    // (2) Scale sets: incremental ladder S_r, plus the KLT-estimated S_p in
    // PAWSSb mode, fused.
    ScaleSet fused = build_scale_set_r(s.scale, config_.lambda, config_.n_r);
    if (config_.mode == TrackerMode::PAWSSb) {
        PatchGrid prev_grid = decompose_patches(prev_box, config_.n_phi);
        uint64_t flow_seed =
            config_.seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(s.frame_counter);
        std::vector<FlowPoint> points =
            pick_points(prev_grid, config_.n_pt, flow_seed);
        points = track_points(s.prev_grey, fd.grey, std::move(points), config_.lk);
        PairRatioResult ratio = median_pair_ratio(points);
        fused = fuse_scale_sets(
            fused, build_scale_set_p(s.scale, ratio.s_p, config_.n_p));
    }

    // (3) Second level: per-pixel candidates within radius r_s at every fused
    // scale; ties resolved toward the frame-relative scale closest to 1.
    std::vector<Candidate> level2;
    {
        int r = static_cast<int>(std::lround(config_.r_s));
        for (double scale : fused.scales) {
            double bw = s.first_w * scale;
            double bh = s.first_h * scale;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    double cx = center_box.cx() + dx;
                    double cy = center_box.cy() + dy;
                    if (cx < 0 || cy < 0 || cx >= s.width || cy >= s.height) continue;
                    level2.push_back({{cx - 0.5 * bw, cy - 0.5 * bh, bw, bh}, scale});
                }
        }
    }
    if (level2.empty()) level2.push_back({prev_box, s.scale});

    std::vector<double> scores = score_candidates(*s.learner, fd.feats, level2,
                                                  config_.n_phi, s.weights);
    size_t best_idx = 0;
    for (size_t i = 1; i < level2.size(); ++i) {
        if (scores[i] > scores[best_idx]) {
            best_idx = i;
        } else if (scores[i] == scores[best_idx]) {
            double cur = std::abs(level2[i].scale / s.scale - 1.0);
            double old = std::abs(level2[best_idx].scale / s.scale - 1.0);
            if (cur < old) best_idx = i;
        }
    }
    s.box = level2[best_idx].box;
    s.scale = level2[best_idx].scale;
    s.last_score = scores[best_idx];

    // (4) Segmentation posterior over a 2x region, then patch weights.
    PatchGrid grid = decompose_patches(s.box, config_.n_phi);
    SegmentationModel::PosteriorMap post =
        s.seg.posterior_map(fd.hsv, s.box.scaled_about_center(2.0));
    std::vector<double> patch_fg =
        mean_patch_foreground(post.map, post.x0, post.y0, grid);

    // (5) Colour distribution uses the pre-update weights; then weights, then
    // histograms.
    std::vector<double> fg_dist =
        s.seg.weighted_colour_distribution(fd.hsv, grid, s.weights.w);
    PatchWeights search_weights = s.weights;
    update_weights(s.weights, patch_fg, config_.delta);
    std::vector<double> bg_dist = s.seg.ring_colour_distribution(fd.hsv, s.box);
    s.seg.update_histograms(fg_dist, bg_dist, config_.delta);

    // (6) Gated classifier update with the second-level pattern.
    Descriptor selected =
        candidate_descriptor(fd.feats, s.box, config_.n_phi, search_weights);
    double sim = s.learner->positive_similarity(selected);
    s.last_similarity = sim;
    if (sim >= config_.eta) {
        s.learner->update(make_pattern(fd.feats, level2, best_idx, search_weights,
                                       config_.n_phi, config_.pattern_capacity,
                                       s.frame_counter));
    }

    s.prev_grey = std::move(fd.grey);

    BoundingBox reported = s.box.scaled(1.0 / s.prescale);
    return reported.clipped(s.orig_width, s.orig_height);
}

}  // namespace pawss
