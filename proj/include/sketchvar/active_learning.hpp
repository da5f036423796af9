#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sketchvar/common.hpp"
#include "sketchvar/dataset.hpp"
#include "sketchvar/kernels.hpp"
#include "sketchvar/rng.hpp"
#include "sketchvar/rules.hpp"
#include "sketchvar/sketch.hpp"
#include "sketchvar/sketched_krr.hpp"

namespace sketchvar {

/// Assembles the grown block product
///   [ f*cached + S12 K21 , S1 K12 + S12 K22 ]
///   [ S21 K1   + S2  K21 , S21 K12 + S2 K22 ]
/// where cached = S1 K1 from the previous step is reused, never recomputed
/// (f rescales retained sketch rows when m grew). Empty blocks are allowed:
/// pass 0-row S21/S22 when m is unchanged. Returns the number of
/// multiply-adds spent, which is O(m * n0 * ns) when m is fixed.
std::uint64_t extend_sketch_product(const Matrix& cached_s1k1, const Matrix& k1,
                                    const Matrix& k12, const Matrix& k21, const Matrix& k22,
                                    const Matrix& s1, const Matrix& s12, const Matrix& s21,
                                    const Matrix& s22, double kept_factor, Matrix& out);

struct AcquisitionBatch {
    std::vector<Eigen::Index> indices;  // positions into the weight vector, distinct
    Vector weights_used;                // scores of the chosen positions at selection time
};

/// Sequential weighted draws without replacement: each draw picks among the
/// remaining candidates with probability proportional to weight. All-zero
/// remaining weight falls back to a uniform draw. Deterministic given the
/// stream state.
AcquisitionBatch weighted_sample_without_replacement(const Eigen::Ref<const Vector>& weights,
                                                     Eigen::Index n_draw, rng::Stream& stream);

enum class AcquisitionMode { v2_weighted, uniform };

inline const char* acquisition_mode_name(AcquisitionMode m) {
    return m == AcquisitionMode::v2_weighted ? "v2" : "uniform";
}

struct ALConfig {
    KernelSpec kernel;
    Eigen::Index initial_labeled = 100;
    Eigen::Index batch_size = 30;  // n_s
    int iterations = 20;           // acquisition rounds after the initial fit
    GrowthRule m_rule = GrowthRule::ceil_c_log(1.0);
    LambdaRule lambda_rule = LambdaRule::sqrt_log_over_n();
    AcquisitionMode acquisition = AcquisitionMode::v2_weighted;
    double sigma = 1.0;          // reported with the scores; acquisition is sigma-invariant
    bool sigma_estimate = false; // re-estimate sigma^2 from an exact fit each iteration
    std::uint64_t seed = 1;
    bool early_stop = false;
    double early_stop_tol = 1e-4;
    bool rescale_on_grow = true;
    SketchDistribution sketch_distribution = SketchDistribution::gaussian;
};

struct ALRecord {
    int iteration = 0;
    Eigen::Index n_labeled = 0;
    Eigen::Index m = 0;  // sketch rows actually used by the fit
    double lambda = 0.0;
    double test_mse = 0.0;
    std::string acquisition_mode;
    std::uint64_t seed = 0;
    double wall_time_ms = 0.0;
    // not part of the CSV surface:
    std::uint64_t update_madds = 0;  // block-update multiply-adds that produced this state
    int conditioning_retries = 0;    // sketch rows dropped to keep M well conditioned
    double sigma_used = 1.0;
};

struct ALHistory {
    std::vector<ALRecord> records;
    bool truncated = false;      // unlabeled pool ran out before the budget
    bool early_stopped = false;  // MSE improvement fell below the tolerance
};

std::string history_csv(const ALHistory& history);
std::string history_csv_header();

/// Incrementally maintained loop state: index sets, the unscaled labeled
/// Gram block G, the sketch S and the cached product S*G. The 1/n0 kernel
/// scaling is applied at fit time, so the cache survives changes of n0.
class ActiveLearningState {
public:
    ActiveLearningState(const Dataset& master, const KernelSpec& kernel,
                        std::vector<Eigen::Index> labeled, std::vector<Eigen::Index> unlabeled,
                        Eigen::Index m0, std::uint64_t sketch_seed,
                        SketchDistribution dist = SketchDistribution::gaussian,
                        bool rescale_on_grow = true);

    const std::vector<Eigen::Index>& labeled() const { return labeled_; }
    const std::vector<Eigen::Index>& unlabeled() const { return unlabeled_; }
    const Matrix& gram() const { return gram_; }              // unscaled kernel block
    const Matrix& sketch_gram() const { return sketch_gram_; }  // S * G
    const SketchMatrix& sketch() const { return sketch_; }
    Eigen::Index n0() const { return static_cast<Eigen::Index>(labeled_.size()); }

    /// S * K over the labeled set, K carrying its 1/n0 scale.
    Matrix sk_cache() const { return sketch_gram_ / static_cast<double>(n0()); }

    /// Moves `batch` (positions into unlabeled()) to the labeled set, grows
    /// the sketch to new_m rows and updates S*G by block assembly. Returns
    /// the multiply-adds spent.
    std::uint64_t acquire(const std::vector<Eigen::Index>& batch, Eigen::Index new_m);

    /// Max-entry deviation between the cache and a from-scratch S * G.
    double cache_deviation() const;

    Vector labeled_responses() const;
    Matrix labeled_inputs() const;

private:
    const Dataset* master_;
    KernelSpec kernel_;
    std::vector<Eigen::Index> labeled_, unlabeled_;
    Matrix gram_;
    Matrix sketch_gram_;
    SketchMatrix sketch_;
    std::uint64_t sketch_seed_;
    bool rescale_on_grow_;
};

ALHistory run_active_learning(const Dataset& master, const Dataset& test, const ALConfig& config);

}  // namespace sketchvar
