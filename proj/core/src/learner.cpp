#include "pawss/learner.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pawss {

namespace {

constexpr char kMagic[] = "PAWSS_LEARNER";
constexpr int kFormatVersion = 1;

uint64_t fnv1a(uint64_t h, const void* data, size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

Learner::Learner(LearnerConfig config, int descriptor_dim, uint64_t seed)
    : config_(config), dim_(descriptor_dim),
      w_(static_cast<size_t>(descriptor_dim), 0.0), rng_(seed) {
    if (descriptor_dim <= 0) throw std::invalid_argument("Learner: bad dimension");
    if (config_.c <= 0.0 || config_.budget <= 0 || config_.reprocess_steps < 0)
        throw std::invalid_argument("Learner: bad config");
}

double Learner::dot(const Descriptor& a, const Descriptor& b) const {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
    return s;
}

double Learner::dot_w(std::span<const float> d) const {
    double s = 0.0;
    for (size_t i = 0; i < d.size(); ++i) s += w_[i] * d[i];
    return s;
}

double Learner::score(std::span<const float> descriptor) const {
    if (static_cast<int>(descriptor.size()) != dim_)
        throw std::invalid_argument("Learner::score: dimension mismatch");
    return dot_w(descriptor);
}

double Learner::gradient(const SupportPattern& p, int candidate) const {
    return -p.loss(candidate) - dot_w(p.descriptors[candidate]);
}

bool Learner::smo_step(SupportPattern& p, int iplus, int iminus) {
    if (iplus < 0 || iminus < 0 || iplus == iminus) return false;
    const Descriptor& dp = p.descriptors[iplus];
    const Descriptor& dm = p.descriptors[iminus];
    double denom = dot(dp, dp) + dot(dm, dm) - 2.0 * dot(dp, dm);
    if (denom <= 1e-12) return false;

    double gp = gradient(p, iplus);
    double gm = gradient(p, iminus);
    double lambda = (gp - gm) / denom;
    double cap = config_.c * (iplus == p.true_index ? 1.0 : 0.0) - p.beta[iplus];
    lambda = std::max(0.0, std::min(lambda, cap));
    if (lambda <= 0.0) return false;

    bool was_sv_p = p.beta[iplus] != 0.0;
    bool was_sv_m = p.beta[iminus] != 0.0;
    p.beta[iplus] += lambda;
    p.beta[iminus] -= lambda;
    for (int i = 0; i < dim_; ++i)
        w_[i] += lambda * (static_cast<double>(dp[i]) - dm[i]);

    auto adjust = [&](int idx, bool was_sv) {
        bool is_sv = p.beta[idx] != 0.0;
        if (is_sv && !was_sv) ++p.sv_count;
        if (!is_sv && was_sv) --p.sv_count;
    };
    adjust(iplus, was_sv_p);
    adjust(iminus, was_sv_m);
    return true;
}

void Learner::process_new(SupportPattern& p) {
    int iminus = -1;
    double gmin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < p.descriptors.size(); ++i) {
        double g = gradient(p, static_cast<int>(i));
        if (g < gmin) {
            gmin = g;
            iminus = static_cast<int>(i);
        }
    }
    smo_step(p, p.true_index, iminus);
}

void Learner::process_old() {
    if (patterns_.empty()) return;
    size_t pick = std::uniform_int_distribution<size_t>(0, patterns_.size() - 1)(rng_);
    SupportPattern& p = *patterns_[pick];

    int iplus = -1, iminus = -1;
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < p.descriptors.size(); ++i) {
        int idx = static_cast<int>(i);
        double g = gradient(p, idx);
        double cap = config_.c * (idx == p.true_index ? 1.0 : 0.0);
        if (p.beta[idx] < cap && g > gmax) {
            gmax = g;
            iplus = idx;
        }
        if (g < gmin) {
            gmin = g;
            iminus = idx;
        }
    }
    if (smo_step(p, iplus, iminus)) {
        budget_maintain();
        drop_empty_patterns();
    }
}

void Learner::optimize_step() {
    if (patterns_.empty()) return;
    size_t pick = std::uniform_int_distribution<size_t>(0, patterns_.size() - 1)(rng_);
    SupportPattern& p = *patterns_[pick];

    int iplus = -1, iminus = -1;
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < p.descriptors.size(); ++i) {
        int idx = static_cast<int>(i);
        if (p.beta[idx] == 0.0 && idx != p.true_index) continue;
        double g = gradient(p, idx);
        double cap = config_.c * (idx == p.true_index ? 1.0 : 0.0);
        if (p.beta[idx] < cap && g > gmax) {
            gmax = g;
            iplus = idx;
        }
        if (g < gmin) {
            gmin = g;
            iminus = idx;
        }
    }
    if (smo_step(p, iplus, iminus)) drop_empty_patterns();
}

void Learner::reprocess(int steps) {
    for (int i = 0; i < steps; ++i) {
        process_old();
        optimize_step();
    }
}

void Learner::update(SupportPattern pattern) {
    if (pattern.descriptors.empty() ||
        pattern.descriptors.size() != pattern.boxes.size())
        throw std::invalid_argument("Learner::update: malformed pattern");
    if (static_cast<int>(pattern.descriptors[0].size()) != dim_)
        throw std::invalid_argument("Learner::update: dimension mismatch");
    pattern.beta.assign(pattern.descriptors.size(), 0.0);
    pattern.sv_count = 0;

    patterns_.push_back(std::make_unique<SupportPattern>(std::move(pattern)));
    process_new(*patterns_.back());
    budget_maintain();
    drop_empty_patterns();
    reprocess(config_.reprocess_steps);
}

size_t Learner::support_vector_count() const {
    size_t n = 0;
    for (const auto& p : patterns_) n += static_cast<size_t>(p->sv_count);
    return n;
}

std::vector<SupportVectorRef> Learner::support_vectors() const {
    std::vector<SupportVectorRef> out;
    for (const auto& p : patterns_)
        for (size_t i = 0; i < p->beta.size(); ++i)
            if (p->beta[i] != 0.0)
                out.push_back({p->frame_id, static_cast<int>(i), p->beta[i]});
    return out;
}

std::vector<const SupportPattern*> Learner::patterns() const {
    std::vector<const SupportPattern*> out;
    out.reserve(patterns_.size());
    for (const auto& p : patterns_) out.push_back(p.get());
    return out;
}

int Learner::choose_eviction() const {
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    int sv_index = 0;
    for (const auto& p : patterns_) {
        const Descriptor& dt = p->descriptors[p->true_index];
        double ktt = dot(dt, dt);
        for (size_t i = 0; i < p->beta.size(); ++i) {
            if (p->beta[i] == 0.0) continue;
            if (p->beta[i] < 0.0) {
                const Descriptor& ds = p->descriptors[i];
                double cost = p->beta[i] * p->beta[i] *
                              (dot(ds, ds) - 2.0 * dot(ds, dt) + ktt);
                if (cost < best_cost) {
                    best_cost = cost;
                    best = sv_index;
                }
            }
            ++sv_index;
        }
    }
    return best;
}

void Learner::budget_maintain() {
    while (support_vector_count() > static_cast<size_t>(config_.budget)) {
        int target = choose_eviction();
        if (target < 0) break;  // nothing negative left to evict
        int sv_index = 0;
        for (auto& p : patterns_) {
            bool done = false;
            for (size_t i = 0; i < p->beta.size() && !done; ++i) {
                if (p->beta[i] == 0.0) continue;
                if (sv_index == target) {
                    double b = p->beta[i];
                    int t = p->true_index;
                    const Descriptor& ds = p->descriptors[i];
                    const Descriptor& dt = p->descriptors[t];
                    // Transfer beta to the pattern's true SV.
                    for (int k = 0; k < dim_; ++k)
                        w_[k] += b * (static_cast<double>(dt[k]) - ds[k]);
                    bool true_was_sv = p->beta[t] != 0.0;
                    p->beta[t] += b;
                    p->beta[i] = 0.0;
                    --p->sv_count;
                    bool true_is_sv = p->beta[t] != 0.0;
                    if (true_is_sv && !true_was_sv) ++p->sv_count;
                    if (!true_is_sv && true_was_sv) --p->sv_count;
                    done = true;
                }
                ++sv_index;
            }
            if (done) break;
        }
        drop_empty_patterns();
    }
}

void Learner::drop_empty_patterns() {
    patterns_.erase(std::remove_if(patterns_.begin(), patterns_.end(),
                                   [](const auto& p) { return p->sv_count == 0; }),
                    patterns_.end());
}

double Learner::positive_similarity(std::span<const float> descriptor) const {
    double dn = 0.0;
    for (float v : descriptor) dn += static_cast<double>(v) * v;
    dn = std::sqrt(dn);

    bool any = false;
    double best = -1.0;
    for (const auto& p : patterns_)
        for (size_t i = 0; i < p->beta.size(); ++i) {
            if (p->beta[i] <= 0.0) continue;
            any = true;
            const Descriptor& d = p->descriptors[i];
            double num = 0.0, nd = 0.0;
            for (size_t k = 0; k < d.size(); ++k) {
                num += static_cast<double>(d[k]) * descriptor[k];
                nd += static_cast<double>(d[k]) * d[k];
            }
            nd = std::sqrt(nd);
            if (nd <= 0.0 || dn <= 0.0) continue;
            best = std::max(best, num / (nd * dn));
        }
    if (!any) return 1.0;
    return std::max(best, -1.0);
}

double Learner::dual_objective() const {
    double obj = 0.0;
    for (const auto& p : patterns_)
        for (size_t i = 0; i < p->beta.size(); ++i)
            if (p->beta[i] != 0.0)
                obj -= p->loss(static_cast<int>(i)) * p->beta[i];
    double wn = 0.0;
    for (double v : w_) wn += v * v;
    return obj - 0.5 * wn;
}

uint64_t Learner::state_hash() const {
    uint64_t h = 1469598103934665603ULL;
    for (const auto& p : patterns_) {
        h = fnv1a(h, &p->frame_id, sizeof(p->frame_id));
        for (size_t i = 0; i < p->beta.size(); ++i) {
            if (p->beta[i] == 0.0) continue;
            h = fnv1a(h, &i, sizeof(i));
            h = fnv1a(h, &p->beta[i], sizeof(double));
        }
    }
    return h;
}

void Learner::save(std::ostream& os) const {
    os << kMagic << ' ' << kFormatVersion << '\n';
    os.precision(17);
    os << dim_ << ' ' << config_.c << ' ' << config_.budget << ' '
       << config_.reprocess_steps << '\n';
    os << rng_ << '\n';
    // The weight vector is stored rather than rebuilt from the betas: the
    // incremental updates and the rebuilt sum differ in the last ulp, which
    // would fork the SMO trajectory after a reload.
    for (double v : w_) os << v << ' ';
    os << '\n';
    os << patterns_.size() << '\n';
    for (const auto& p : patterns_) {
        os << p->frame_id << ' ' << p->true_index << ' ' << p->descriptors.size()
           << '\n';
        for (size_t i = 0; i < p->descriptors.size(); ++i) {
            const BoundingBox& b = p->boxes[i];
            os << b.x << ' ' << b.y << ' ' << b.w << ' ' << b.h << ' '
               << p->beta[i] << '\n';
            for (float v : p->descriptors[i]) os << v << ' ';
            os << '\n';
        }
    }
}

Learner Learner::load(std::istream& is) {
    std::string magic;
    int version = 0;
    is >> magic >> version;
    if (magic != kMagic || version != kFormatVersion)
        throw std::runtime_error("Learner::load: unrecognized dump format");
    int dim;
    LearnerConfig cfg;
    is >> dim >> cfg.c >> cfg.budget >> cfg.reprocess_steps;
    Learner l(cfg, dim, 0);
    is >> l.rng_;
    for (double& v : l.w_) is >> v;
    size_t np;
    is >> np;
    for (size_t pi = 0; pi < np; ++pi) {
        auto p = std::make_unique<SupportPattern>();
        size_t nc;
        is >> p->frame_id >> p->true_index >> nc;
        p->descriptors.resize(nc);
        p->boxes.resize(nc);
        p->beta.resize(nc);
        for (size_t i = 0; i < nc; ++i) {
            BoundingBox& b = p->boxes[i];
            is >> b.x >> b.y >> b.w >> b.h >> p->beta[i];
            p->descriptors[i].resize(dim);
            for (int k = 0; k < dim; ++k) is >> p->descriptors[i][k];
            if (p->beta[i] != 0.0) ++p->sv_count;
        }
        l.patterns_.push_back(std::move(p));
    }
    if (!is) throw std::runtime_error("Learner::load: truncated dump");
    return l;
}

}  // namespace pawss
