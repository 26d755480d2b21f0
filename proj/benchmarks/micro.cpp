#include <random>

#include <benchmark/benchmark.h>

#include "pawss/features.hpp"
#include "pawss/flow.hpp"
#include "pawss/segmentation.hpp"

using namespace pawss;

namespace {

Image random_rgb(int w, int h, uint32_t seed) {
    Image img(w, h, 3);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    for (float& v : img.data) v = u(rng);
    return img;
}

struct FramePrep {
    Image hsv;
    Image grey;
    FrameFeatures feats;

    FramePrep() {
        Image rgb = random_rgb(320, 240, 7);
        hsv = to_hsv(rgb);
        grey = value_channel(hsv);
        auto [mag, ori] = gradient_magnitude_orientation(grey);
        feats = FrameFeatures::compute(hsv, mag, ori, ColourQuantizer{16});
    }
};

const FramePrep& prep() {
    static FramePrep p;
    return p;
}

}  // namespace

static void BM_FrameFeatures(benchmark::State& state) {
    const auto& p = prep();
    auto [mag, ori] = gradient_magnitude_orientation(p.grey);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            FrameFeatures::compute(p.hsv, mag, ori, ColourQuantizer{16}));
}
BENCHMARK(BM_FrameFeatures);

static void BM_CandidateDescriptor(benchmark::State& state) {
    const auto& p = prep();
    PatchWeights w(49);
    BoundingBox box{100, 80, 60, 50};
    for (auto _ : state)
        benchmark::DoNotOptimize(candidate_descriptor(p.feats, box, 49, w));
}
BENCHMARK(BM_CandidateDescriptor);

static void BM_PosteriorMap(benchmark::State& state) {
    const auto& p = prep();
    BoundingBox box{100, 80, 60, 50};
    SegmentationModel m = SegmentationModel::init_model(p.hsv, box, ColourQuantizer{16});
    for (auto _ : state)
        benchmark::DoNotOptimize(m.posterior_map(p.hsv, box.scaled_about_center(2.0)));
}
BENCHMARK(BM_PosteriorMap);

static void BM_LkTrack(benchmark::State& state) {
    Image a = random_rgb(320, 240, 1);
    Image prev_grey = value_channel(to_hsv(a));
    Image next_grey = prev_grey;  // identity motion, full iteration path
    PatchGrid grid = decompose_patches({100, 80, 70, 70}, 49);
    std::vector<FlowPoint> pts = pick_points(grid, 5, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(track_points(prev_grey, next_grey, pts));
}
BENCHMARK(BM_LkTrack);

BENCHMARK_MAIN();
