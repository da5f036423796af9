#include "sketchvar/active_learning.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sketchvar/csv.hpp"
#include "sketchvar/exact_krr.hpp"
#include "sketchvar/threads.hpp"

namespace sketchvar {

namespace {

// rows: point set as matrix rows; returns k(x)_i = K(x, rows_i).
Vector section_against(const KernelSpec& kernel, const Matrix& rows,
                       const Eigen::Ref<const Vector>& x) {
    Vector k(rows.rows());
    for (Eigen::Index i = 0; i < rows.rows(); ++i)
        k[i] = evaluate_kernel(kernel, x, rows.row(i).transpose());
    return k;
}

Matrix gather_rows(const Matrix& source, const std::vector<Eigen::Index>& idx) {
    Matrix out(static_cast<Eigen::Index>(idx.size()), source.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = source.row(idx[i]);
    return out;
}

std::uint64_t counted_product(const Matrix& a, const Matrix& b, Matrix& out) {
    out.noalias() = a * b;
    return static_cast<std::uint64_t>(a.rows()) * static_cast<std::uint64_t>(a.cols()) *
           static_cast<std::uint64_t>(b.cols());
}

std::uint64_t counted_add_product(const Matrix& a, const Matrix& b, Eigen::Ref<Matrix> out) {
    out.noalias() += a * b;
    return static_cast<std::uint64_t>(a.rows()) * static_cast<std::uint64_t>(a.cols()) *
           static_cast<std::uint64_t>(b.cols());
}

}  // namespace

std::uint64_t extend_sketch_product(const Matrix& cached_s1k1, const Matrix& k1,
                                    const Matrix& k12, const Matrix& k21, const Matrix& k22,
                                    const Matrix& s1, const Matrix& s12, const Matrix& s21,
                                    const Matrix& s22, double kept_factor, Matrix& out) {
    const Eigen::Index m1 = cached_s1k1.rows();
    const Eigen::Index n0 = cached_s1k1.cols();
    const Eigen::Index ns = k12.cols();
    const Eigen::Index dm = s21.rows();

    require(s1.rows() == m1 && s1.cols() == n0, errc::dimension_mismatch, "S1 shape mismatch");
    require(k12.rows() == n0, errc::dimension_mismatch, "K12 shape mismatch");
    require(k21.rows() == ns && k21.cols() == n0, errc::dimension_mismatch, "K21 shape mismatch");
    require(k22.rows() == ns && k22.cols() == ns, errc::dimension_mismatch, "K22 shape mismatch");
    require(s12.rows() == m1 && s12.cols() == ns, errc::dimension_mismatch, "S12 shape mismatch");
    require(s22.rows() == dm && s22.cols() == ns, errc::dimension_mismatch, "S22 shape mismatch");
    require(dm == 0 || (s21.cols() == n0 && k1.rows() == n0 && k1.cols() == n0),
            errc::dimension_mismatch, "S21/K1 shape mismatch");

    std::uint64_t madds = 0;
    out.resize(m1 + dm, n0 + ns);

    // Top-left: f * S1 K1 + S12 K21 — the cached product is reused.
    out.topLeftCorner(m1, n0) = kept_factor * cached_s1k1;
    if (ns > 0) madds += counted_add_product(s12, k21, out.topLeftCorner(m1, n0));

    if (ns > 0) {
        Matrix block;
        madds += counted_product(s1, k12, block);  // S1 K12
        out.topRightCorner(m1, ns) = block;
        madds += counted_add_product(s12, k22, out.topRightCorner(m1, ns));
    }
    if (dm > 0) {
        Matrix block;
        madds += counted_product(s21, k1, block);  // S21 K1
        out.bottomLeftCorner(dm, n0) = block;
        if (ns > 0) madds += counted_add_product(s22, k21, out.bottomLeftCorner(dm, n0));
        if (ns > 0) {
            Matrix br;
            madds += counted_product(s21, k12, br);
            out.bottomRightCorner(dm, ns) = br;
            madds += counted_add_product(s22, k22, out.bottomRightCorner(dm, ns));
        }
    }
    return madds;
}

AcquisitionBatch weighted_sample_without_replacement(const Eigen::Ref<const Vector>& weights,
                                                     Eigen::Index n_draw, rng::Stream& stream) {
    const Eigen::Index pool = weights.size();
    require(n_draw >= 0, errc::invalid_argument, "draw count must be nonnegative");
    require(n_draw <= pool, errc::invalid_argument, "draw count exceeds candidate pool");
    require((weights.array() >= 0.0).all(), errc::invalid_argument, "weights must be nonnegative");
    require_finite(weights, "weights");

    std::vector<char> alive(static_cast<std::size_t>(pool), 1);
    double total = weights.sum();
    Eigen::Index remaining = pool;

    AcquisitionBatch batch;
    batch.indices.reserve(static_cast<std::size_t>(n_draw));
    batch.weights_used.resize(n_draw);

    for (Eigen::Index d = 0; d < n_draw; ++d) {
        Eigen::Index pick = -1;
        if (total > 0.0) {
            const double u = stream.uniform() * total;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < pool; ++i) {
                if (!alive[static_cast<std::size_t>(i)]) continue;
                acc += weights[i];
                if (acc >= u) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) {  // rounding slipped past the last positive weight
                for (Eigen::Index i = pool - 1; i >= 0; --i)
                    if (alive[static_cast<std::size_t>(i)]) { pick = i; break; }
            }
        } else {
            // All remaining weight is zero: uniform among the remaining pool.
            std::uint64_t target = stream.below(static_cast<std::uint64_t>(remaining));
            for (Eigen::Index i = 0; i < pool; ++i) {
                if (!alive[static_cast<std::size_t>(i)]) continue;
                if (target == 0) { pick = i; break; }
                --target;
            }
        }
        alive[static_cast<std::size_t>(pick)] = 0;
        total -= weights[pick];
        if (total < 0.0) total = 0.0;
        --remaining;
        batch.indices.push_back(pick);
        batch.weights_used[d] = weights[pick];
    }
    return batch;
}

ActiveLearningState::ActiveLearningState(const Dataset& master, const KernelSpec& kernel,
                                         std::vector<Eigen::Index> labeled,
                                         std::vector<Eigen::Index> unlabeled, Eigen::Index m0,
                                         std::uint64_t sketch_seed, SketchDistribution dist,
                                         bool rescale_on_grow)
    : master_(&master),
      kernel_(kernel),
      labeled_(std::move(labeled)),
      unlabeled_(std::move(unlabeled)),
      sketch_seed_(sketch_seed),
      rescale_on_grow_(rescale_on_grow) {
    require(!labeled_.empty(), errc::invalid_argument, "initial labeled set is empty");
    for (auto i : labeled_)
        require(i >= 0 && i < master.n(), errc::invalid_argument, "labeled index out of range");
    for (auto i : unlabeled_)
        require(i >= 0 && i < master.n(), errc::invalid_argument, "unlabeled index out of range");

    const Eigen::Index n = n0();
    const Matrix pts = labeled_inputs();
    gram_.resize(n, n);
    parallel_for(n, [&](std::int64_t i) {
        const Vector xi = pts.row(i).transpose();
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = evaluate_kernel(kernel_, xi, pts.row(j).transpose());
            gram_(i, j) = v;
            gram_(j, i) = v;
        }
    });
    sketch_ = generate_sketch(dist, sketch_seed_, m0, n);
    sketch_gram_.noalias() = sketch_.entries * gram_;
}

std::uint64_t ActiveLearningState::acquire(const std::vector<Eigen::Index>& batch,
                                           Eigen::Index new_m) {
    const Eigen::Index n_old = n0();
    const Eigen::Index ns = static_cast<Eigen::Index>(batch.size());
    require(new_m >= sketch_.m(), errc::invalid_argument, "sketch rows cannot shrink");

    // Map batch positions to master indices and pull them out of the pool.
    std::vector<Eigen::Index> chosen;
    chosen.reserve(batch.size());
    std::vector<char> taken(unlabeled_.size(), 0);
    for (auto pos : batch) {
        require(pos >= 0 && pos < static_cast<Eigen::Index>(unlabeled_.size()),
                errc::invalid_argument, "batch position out of range");
        require(!taken[static_cast<std::size_t>(pos)], errc::invalid_argument,
                "batch positions must be distinct");
        taken[static_cast<std::size_t>(pos)] = 1;
        chosen.push_back(unlabeled_[static_cast<std::size_t>(pos)]);
    }

    // Kernel blocks against the new points (each value evaluated once).
    const Matrix old_pts = labeled_inputs();
    const Matrix new_pts = gather_rows(master_->inputs, chosen);
    Matrix k12(n_old, ns), k22(ns, ns);
    parallel_for(n_old, [&](std::int64_t i) {
        const Vector xi = old_pts.row(i).transpose();
        for (Eigen::Index j = 0; j < ns; ++j)
            k12(i, j) = evaluate_kernel(kernel_, xi, new_pts.row(j).transpose());
    });
    for (Eigen::Index i = 0; i < ns; ++i) {
        const Vector xi = new_pts.row(i).transpose();
        for (Eigen::Index j = i; j < ns; ++j) {
            const double v = evaluate_kernel(kernel_, xi, new_pts.row(j).transpose());
            k22(i, j) = v;
            k22(j, i) = v;
        }
    }
    const Matrix k21 = k12.transpose();

    const Eigen::Index m_old = sketch_.m();
    const SketchMatrix grown =
        extend_sketch(sketch_, new_m, n_old + ns, sketch_seed_, rescale_on_grow_);
    const double kept_factor =
        (rescale_on_grow_ && new_m > m_old)
            ? std::sqrt(static_cast<double>(m_old) / static_cast<double>(new_m))
            : 1.0;

    const Matrix s1 = grown.entries.topLeftCorner(m_old, n_old);
    const Matrix s12 = grown.entries.topRightCorner(m_old, ns);
    const Matrix s21 = grown.entries.bottomLeftCorner(new_m - m_old, n_old);
    const Matrix s22 = grown.entries.bottomRightCorner(new_m - m_old, ns);

    Matrix updated;
    const std::uint64_t madds = extend_sketch_product(sketch_gram_, gram_, k12, k21, k22, s1,
                                                      s12, s21, s22, kept_factor, updated);
    sketch_gram_ = std::move(updated);
    sketch_ = grown;

    // Grow the unscaled Gram block.
    Matrix g(n_old + ns, n_old + ns);
    g.topLeftCorner(n_old, n_old) = gram_;
    g.topRightCorner(n_old, ns) = k12;
    g.bottomLeftCorner(ns, n_old) = k21;
    g.bottomRightCorner(ns, ns) = k22;
    gram_ = std::move(g);

    labeled_.insert(labeled_.end(), chosen.begin(), chosen.end());
    std::vector<Eigen::Index> rest;
    rest.reserve(unlabeled_.size() - batch.size());
    for (std::size_t i = 0; i < unlabeled_.size(); ++i)
        if (!taken[i]) rest.push_back(unlabeled_[i]);
    unlabeled_ = std::move(rest);
    return madds;
}

double ActiveLearningState::cache_deviation() const {
    const Matrix fresh = sketch_.entries * gram_;
    return (fresh - sketch_gram_).cwiseAbs().maxCoeff();
}

Vector ActiveLearningState::labeled_responses() const {
    Vector y(n0());
    for (std::size_t i = 0; i < labeled_.size(); ++i)
        y[static_cast<Eigen::Index>(i)] = master_->responses[labeled_[i]];
    return y;
}

Matrix ActiveLearningState::labeled_inputs() const { return gather_rows(master_->inputs, labeled_); }

std::string history_csv_header() {
    return "iteration,n_labeled,m,lambda,test_mse,acquisition_mode,seed,wall_time_ms";
}

std::string history_csv(const ALHistory& history) {
    std::ostringstream os;
    os << history_csv_header() << '\n';
    for (const auto& r : history.records) {
        os << r.iteration << ',' << r.n_labeled << ',' << r.m << ',' << csv::field(r.lambda) << ','
           << csv::field(r.test_mse) << ',' << r.acquisition_mode << ',' << r.seed << ','
           << csv::field(r.wall_time_ms) << '\n';
    }
    return os.str();
}

namespace {

struct RetriedFit {
    SketchedFit fit;
    Eigen::Index m_used;
    int retries;
};

// Builds the sketched fit from the cached product, dropping sketch rows one
// at a time if M is numerically singular (fewer rows probe fewer tiny
// eigendirections of lambda K + K^2, so shrinking always converges).
RetriedFit fit_from_state(const ActiveLearningState& state, double lambda) {
    const Eigen::Index n = state.n0();
    const Eigen::Index m_full = state.sketch().m();
    int retries = 0;
    for (Eigen::Index k = m_full; k >= 1; --k) {
        const double rescale = std::sqrt(static_cast<double>(m_full) / static_cast<double>(k));
        Matrix a = (rescale / static_cast<double>(n)) * state.sketch_gram().topRows(k);
        Matrix s = rescale * state.sketch().entries.topRows(k);
        try {
            return {SketchedFit(std::move(a), s, lambda), k, retries};
        } catch (const Error& e) {
            if (e.code() != errc::numerical || k == 1) throw;
            ++retries;
        }
    }
    fail(errc::numerical, "sketched fit failed at every sketch size");
}

}  // namespace

ALHistory run_active_learning(const Dataset& master, const Dataset& test, const ALConfig& config) {
    master.validate();
    test.validate();
    require(config.initial_labeled >= 1 && config.initial_labeled <= master.n(),
            errc::invalid_argument, "initial labeled size out of range");
    require(config.batch_size >= 1, errc::invalid_argument, "batch size must be >= 1");
    require(config.iterations >= 0, errc::invalid_argument, "iteration budget must be >= 0");
    require(master.dim() == test.dim(), errc::dimension_mismatch,
            "master and test dimensions differ");

    // Seeded shuffle picks the initial labeled subset.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(master.n()));
    std::iota(order.begin(), order.end(), 0);
    rng::Stream shuffle(config.seed, 9001);
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[shuffle.below(i)]);
    std::vector<Eigen::Index> labeled(order.begin(), order.begin() + config.initial_labeled);
    std::vector<Eigen::Index> unlabeled(order.begin() + config.initial_labeled, order.end());

    ActiveLearningState state(master, config.kernel, std::move(labeled), std::move(unlabeled),
                              config.m_rule.eval(config.initial_labeled), config.seed,
                              config.sketch_distribution, config.rescale_on_grow);

    ALHistory history;
    std::uint64_t pending_madds = 0;  // update cost that produced the current state

    for (int it = 0; it <= config.iterations; ++it) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::uint64_t state_madds = pending_madds;
        pending_madds = 0;
        const Eigen::Index n0 = state.n0();
        const double lambda = config.lambda_rule.eval(n0);

        RetriedFit rf = fit_from_state(state, lambda);
        const Vector y = state.labeled_responses();
        const Vector coeffs = rf.fit.mean_coefficients(y);
        const Matrix pts = state.labeled_inputs();

        double sigma_used = config.sigma;
        if (config.sigma_estimate) {
            KernelMatrix km{state.gram() / static_cast<double>(n0)};
            sigma_used = std::sqrt(estimate_noise_variance(fit_krr(km, y, lambda)));
        }

        Vector errors(test.n());
        parallel_for(test.n(), [&](std::int64_t i) {
            const Vector kx = section_against(config.kernel, pts, test.inputs.row(i).transpose());
            errors[i] = kx.dot(coeffs) - test.responses[i];
        });
        const double mse = errors.squaredNorm() / static_cast<double>(test.n());

#ifndef NDEBUG
        if (it % 5 == 0)
            require(state.cache_deviation() <= 1e-10, errc::numerical,
                    "incremental sketch product drifted from a fresh computation");
#endif

        bool acquired = false;
        if (it < config.iterations) {
            if (state.unlabeled().empty()) {
                history.truncated = true;
            } else {
                const Eigen::Index pool = static_cast<Eigen::Index>(state.unlabeled().size());
                const Eigen::Index draw = std::min(config.batch_size, pool);
                if (draw < config.batch_size) history.truncated = true;

                Vector weights;
                if (config.acquisition == AcquisitionMode::v2_weighted) {
                    // Scores use sigma = 1: acquisition is invariant to sigma.
                    weights.resize(pool);
                    parallel_for(pool, [&](std::int64_t i) {
                        const Vector ku = section_against(
                            config.kernel, pts,
                            master.inputs.row(state.unlabeled()[static_cast<std::size_t>(i)])
                                .transpose());
                        weights[i] = rf.fit.variance_v2(ku, 1.0).value;
                    });
                } else {
                    weights = Vector::Ones(pool);
                }
                rng::Stream acq(config.seed, 100000 + static_cast<std::uint64_t>(it));
                const AcquisitionBatch batch =
                    weighted_sample_without_replacement(weights, draw, acq);
                const Eigen::Index next_m = config.m_rule.eval(n0 + draw);
                pending_madds = state.acquire(batch.indices, std::max(next_m, state.sketch().m()));
                acquired = true;
            }
        }

        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        history.records.push_back({it, n0, rf.m_used, lambda, mse,
                                   acquisition_mode_name(config.acquisition), config.seed, wall_ms,
                                   state_madds, rf.retries, sigma_used});

        if (!acquired && it < config.iterations) break;  // pool exhausted

        if (config.early_stop && history.records.size() >= 4) {
            const auto& r = history.records;
            const double improvement =
                r[r.size() - 4].test_mse - r[r.size() - 1].test_mse;
            if (improvement < config.early_stop_tol) {
                history.early_stopped = true;
                break;
            }
        }
    }
    return history;
}

}  // namespace sketchvar
