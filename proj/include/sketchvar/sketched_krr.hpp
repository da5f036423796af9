#pragma once

#include <Eigen/Cholesky>

#include "sketchvar/common.hpp"
#include "sketchvar/exact_krr.hpp"
#include "sketchvar/kernels.hpp"
#include "sketchvar/sketch.hpp"

namespace sketchvar {

/// Sketched ridge system. Holds A = S K and a factorization of
/// M = lambda S K S^T + S K^2 S^T, assembled as lambda A S^T + A A^T so the
/// n x n product K^2 is never formed. Immutable after construction; the
/// per-query operations are read-only and O(n m + m^2).
class SketchedFit {
public:
    SketchedFit(const KernelMatrix& K, const SketchMatrix& S, double lambda);

    /// Builds the fit from an already-computed product A = S K (the active
    /// learning loop maintains that product incrementally). sketch_entries
    /// must be the S that produced A.
    SketchedFit(Matrix projected_gram, const Eigen::Ref<const Matrix>& sketch_entries,
                double lambda);

    Eigen::Index m() const { return A_.rows(); }
    Eigen::Index n() const { return A_.cols(); }
    double lambda() const { return lambda_; }
    const Matrix& projected_gram() const { return A_; }  // A = S K
    const Matrix& gram_outer() const { return G2_; }     // A A^T = S K^2 S^T

    /// M^{-1} rhs with one step of iterative refinement.
    Vector solve_m(const Eigen::Ref<const Vector>& rhs) const;
    Matrix solve_m(const Eigen::Ref<const Matrix>& rhs) const;

    /// Residual r = k_x - A^T M^{-1} A k_x of the sketched reconstruction.
    Vector projection_residual(const Eigen::Ref<const Vector>& k_x) const;

    /// V2 = sigma^2 / (n^2 lambda^2) * ||r||^2.
    VarianceEstimate variance_v2(const Eigen::Ref<const Vector>& k_x, double sigma) const;

    /// V3 = sigma^2 / n^2 * (S k_x)^T M^{-1} (S K^2 S^T) M^{-1} (S k_x), the
    /// plug-in variance of the sketched-weight estimator. Needs S itself,
    /// which is why it takes the sketch as an argument.
    VarianceEstimate variance_v3(const SketchMatrix& S, const Eigen::Ref<const Vector>& k_x,
                                 double sigma) const;

    /// Coefficient vector c with yhat(x) = k(x)^T c, where
    /// c = (y - A^T M^{-1} A y) / (n lambda). Computing it once makes
    /// repeated mean predictions O(n) per query.
    Vector mean_coefficients(const Eigen::Ref<const Vector>& y) const;

    double predict_mean(const Eigen::Ref<const Vector>& y,
                        const Eigen::Ref<const Vector>& k_x) const;

    /// Sketched weights alpha = (1/n) M^{-1} S K y.
    Vector sketched_weights(const Eigen::Ref<const Vector>& y) const;

private:
    void factorize();

    Matrix A_;   // m x n
    Matrix M_;   // m x m
    Matrix G2_;  // A A^T
    Eigen::LDLT<Matrix> ldlt_;
    double lambda_ = 0.0;
};

/// Shrinkage residual norms behind the variance gap: T1 for the exact
/// system, T2 for the sketched one, both scaled by 1/sqrt(n), with g* = k_x.
struct GapDiagnostics {
    double t1 = 0.0;
    double t2 = 0.0;
    double lambda = 0.0;
    double ratio1 = 0.0;  // T1^2 / lambda
    double ratio2 = 0.0;  // T2^2 / lambda
};

GapDiagnostics gap_diagnostics(const SketchedFit& fit, const SpectralDecomposition& spec,
                               const Eigen::Ref<const Vector>& k_x);

GapDiagnostics gap_diagnostics(const KernelMatrix& K, const SpectralDecomposition& spec,
                               const SketchMatrix& S, double lambda,
                               const Eigen::Ref<const Vector>& k_x);

}  // namespace sketchvar
