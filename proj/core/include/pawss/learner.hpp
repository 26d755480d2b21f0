#ifndef PAWSS_LEARNER_HPP
#define PAWSS_LEARNER_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "pawss/features.hpp"
#include "pawss/geometry.hpp"

namespace pawss {

struct LearnerConfig {
    double c = 100.0;
    int budget = 100;
    int reprocess_steps = 10;
};

/// One training frame: the candidate descriptors, their boxes, and the index
/// of the chosen (true) candidate. Dual coefficients live alongside the
/// candidates once the pattern is retained.
struct SupportPattern {
    int frame_id = -1;
    int true_index = 0;
    std::vector<Descriptor> descriptors;
    std::vector<BoundingBox> boxes;
    std::vector<double> beta;  // dual coefficients, 0 unless support vector
    int sv_count = 0;

    double loss(int candidate) const {
        return 1.0 - iou(boxes[candidate], boxes[true_index]);
    }
};

struct SupportVectorRef {
    int pattern_frame_id;
    int candidate;
    double beta;
};

/// Budgeted online structured-output SVM with a linear kernel. The primal
/// weight vector is maintained incrementally, so scoring is a single dot
/// product.
class Learner {
public:
    Learner(LearnerConfig config, int descriptor_dim, uint64_t seed);

    double score(std::span<const float> descriptor) const;

    /// ProcessNew on the pattern followed by reprocess_steps alternations of
    /// ProcessOld/Optimize; the budget is enforced after each addition.
    void update(SupportPattern pattern);

    /// One ProcessOld + Optimize pass over the retained patterns.
    void reprocess(int steps = 1);

    /// Evicts support vectors until the budget holds; each eviction removes
    /// the negative SV whose beta transfer to its pattern's true SV least
    /// perturbs the weight vector.
    void budget_maintain();

    /// Max cosine similarity against the positive support vectors; 1 when no
    /// positive SV exists yet.
    double positive_similarity(std::span<const float> descriptor) const;

    double dual_objective() const;
    uint64_t state_hash() const;

    int descriptor_dim() const { return dim_; }
    size_t support_vector_count() const;
    size_t pattern_count() const { return patterns_.size(); }
    std::vector<SupportVectorRef> support_vectors() const;
    /// Retained patterns in internal order (matching support_vectors()).
    std::vector<const SupportPattern*> patterns() const;
    const std::vector<double>& weight_vector() const { return w_; }
    const LearnerConfig& config() const { return config_; }

    /// Index into support_vectors() of the SV the next eviction would remove,
    /// or -1 when none qualifies.
    int choose_eviction() const;

    void save(std::ostream& os) const;
    static Learner load(std::istream& is);

private:
    LearnerConfig config_;
    int dim_ = 0;
    std::vector<std::unique_ptr<SupportPattern>> patterns_;
    std::vector<double> w_;
    std::mt19937_64 rng_;

    double gradient(const SupportPattern& p, int candidate) const;
    bool smo_step(SupportPattern& p, int iplus, int iminus);
    void process_new(SupportPattern& p);
    void process_old();
    void optimize_step();
    void drop_empty_patterns();
    double dot(const Descriptor& a, const Descriptor& b) const;
    double dot_w(std::span<const float> d) const;
};

}  // namespace pawss

#endif
