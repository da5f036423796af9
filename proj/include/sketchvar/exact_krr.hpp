#pragma once

#include <Eigen/Cholesky>

#include "sketchvar/common.hpp"
#include "sketchvar/kernels.hpp"

namespace sketchvar {

enum class VarianceKind { v1, v2, v3 };

struct VarianceEstimate {
    double value = 0.0;
    VarianceKind kind = VarianceKind::v1;
};

/// Clamps tiny negative rounding residue to zero; anything below
/// -1e-12 * sigma^2 indicates a real numerical problem and is rejected.
double clamp_variance(double value, double sigma);

/// Ridge solution omega = (1/n)(K + lambda I)^{-1} y held together with the
/// Cholesky factor of the shifted system, so per-query work is O(n^2).
struct ExactFit {
    Eigen::LLT<Matrix> factor;  // K + lambda I
    Vector weights;             // omega
    Vector responses;
    Matrix kernel;              // the 1/n-scaled matrix the fit was built from
    double lambda = 0.0;

    Eigen::Index n() const { return weights.size(); }
};

ExactFit fit_krr(const KernelMatrix& K, const Vector& y, double lambda);

/// Mean prediction k(x)^T omega; k_x carries no 1/n factor.
double predict_mean(const ExactFit& fit, const Eigen::Ref<const Vector>& k_x);

/// V1 = sigma^2 / n^2 * ||(K + lambda I)^{-1} k(x)||^2.
VarianceEstimate variance_v1(const ExactFit& fit, const Eigen::Ref<const Vector>& k_x, double sigma);

/// Fitted values at the training points, n * K * omega.
Vector fitted_values(const ExactFit& fit);

/// (K + lambda I)^{-1} evaluated as (1/lambda)(I - K (lambda K + K^2)^{-1} K).
/// When lambda K + K^2 is numerically singular the inner solve falls back to
/// a spectral pseudo-inverse and `degraded` is set.
struct WoodburyResult {
    Matrix inverse;
    bool degraded = false;
};

WoodburyResult woodbury_ridge_inverse(const KernelMatrix& K, double lambda);

/// Residual-based noise variance estimate ||y - yhat||^2 / (n - tr(H))
/// with H = K (K + lambda I)^{-1}.
double estimate_noise_variance(const ExactFit& fit);

}  // namespace sketchvar
