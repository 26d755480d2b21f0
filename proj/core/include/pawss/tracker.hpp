#ifndef PAWSS_TRACKER_HPP
#define PAWSS_TRACKER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "pawss/features.hpp"
#include "pawss/flow.hpp"
#include "pawss/geometry.hpp"
#include "pawss/image.hpp"
#include "pawss/learner.hpp"
#include "pawss/online_tracker.hpp"
#include "pawss/scale.hpp"
#include "pawss/segmentation.hpp"

namespace pawss {

enum class TrackerMode {
    PAWSSa,  // incremental scale ladder only
    PAWSSb,  // incremental ladder fused with the KLT-estimated set
};

struct Config {
    double delta = 0.1;            // model update factor
    double lambda = 1.003;         // incremental scale step
    int n_r = 11;                  // scales in S_r (odd)
    int n_p = 11;                  // scales in S_p
    int n_pt = 5;                  // flow points per patch
    double eta = 0.3;              // classifier update gate
    int n_phi = 49;                // patches per box (perfect square)
    double r_s = 5.0;              // second-level search radius, px
    int first_level_stride = 2;
    double transition_stay = 0.8;
    int seg_bins = 16;             // segmentation bins per HSV channel
    LearnerConfig learner;
    int pattern_capacity = 64;     // candidates kept per learning pattern
    uint64_t seed = 0;
    TrackerMode mode = TrackerMode::PAWSSb;
    LkParams lk;

    void validate() const;
};

/// Switches the scale-estimation ablation mode.
Config mode_select(Config config, TrackerMode mode);

TrackerMode parse_mode(const std::string& name);
std::string mode_name(TrackerMode mode);

/// The full per-frame pipeline: two-level coarse-to-fine search over the
/// fused scale set, then the ordered segmentation / weight / histogram /
/// classifier updates.
class Tracker : public OnlineTracker {
public:
    explicit Tracker(Config config);
    ~Tracker() override;
    Tracker(Tracker&&) noexcept;
    Tracker& operator=(Tracker&&) noexcept;

    void init(const Image& rgb_frame, const BoundingBox& box) override;
    BoundingBox track(const Image& rgb_frame) override;

    const Config& config() const { return config_; }
    double current_scale() const;
    double prescale_factor() const;
    double last_score() const;
    /// Similarity of the last tracked box against the positive SVs, before
    /// the gate decision (nullopt before the first tracked frame).
    std::optional<double> last_similarity() const;
    const PatchWeights& patch_weights() const;
    const Learner& learner() const;
    uint64_t learner_state_hash() const;

private:
    Config config_;
    struct State;
    std::unique_ptr<State> state_;
};

}  // namespace pawss

#endif
