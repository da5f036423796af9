#include "sketchvar/sketched_krr.hpp"

#include <cmath>

namespace sketchvar {

SketchedFit::SketchedFit(const KernelMatrix& K, const SketchMatrix& S, double lambda)
    : lambda_(lambda) {
    require(lambda > 0.0, errc::invalid_argument, "lambda must be positive");
    require(S.n() == K.n(), errc::dimension_mismatch,
            "sketch ambient dimension does not match kernel matrix");
    A_.noalias() = S.entries * K.entries;
    G2_.noalias() = A_ * A_.transpose();
    M_.noalias() = lambda * (A_ * S.entries.transpose());
    M_ += G2_;
    factorize();
}

SketchedFit::SketchedFit(Matrix projected_gram, const Eigen::Ref<const Matrix>& sketch_entries,
                         double lambda)
    : A_(std::move(projected_gram)), lambda_(lambda) {
    require(lambda > 0.0, errc::invalid_argument, "lambda must be positive");
    require(sketch_entries.rows() == A_.rows() && sketch_entries.cols() == A_.cols(),
            errc::dimension_mismatch, "sketch does not match the cached product");
    G2_.noalias() = A_ * A_.transpose();
    M_.noalias() = lambda * (A_ * sketch_entries.transpose());
    M_ += G2_;
    factorize();
}

void SketchedFit::factorize() {
    // Symmetrize; the two m x m products are only symmetric up to rounding.
    M_ = 0.5 * (M_ + M_.transpose()).eval();
    ldlt_.compute(M_);
    const bool ok = ldlt_.info() == Eigen::Success && ldlt_.rcond() > 1e-12;
    require(ok, errc::numerical,
            "sketched system lambda*SKS^T + SK^2S^T is numerically singular "
            "(m too small or lambda too small)");
}

Vector SketchedFit::solve_m(const Eigen::Ref<const Vector>& rhs) const {
    Vector x = ldlt_.solve(rhs);
    x += ldlt_.solve(rhs - M_ * x);  // one refinement step
    return x;
}

Matrix SketchedFit::solve_m(const Eigen::Ref<const Matrix>& rhs) const {
    Matrix x = ldlt_.solve(rhs);
    x += ldlt_.solve(rhs - M_ * x);
    return x;
}

Vector SketchedFit::projection_residual(const Eigen::Ref<const Vector>& k_x) const {
    require(k_x.size() == n(), errc::dimension_mismatch, "kernel section has wrong length");
    const Vector t = A_ * k_x;
    return k_x - A_.transpose() * solve_m(t);
}

VarianceEstimate SketchedFit::variance_v2(const Eigen::Ref<const Vector>& k_x,
                                          double sigma) const {
    require(sigma > 0.0, errc::invalid_argument, "sigma must be positive");
    require_finite(k_x, "kernel section");
    const double nn = static_cast<double>(n());
    const double value =
        sigma * sigma / (nn * nn * lambda_ * lambda_) * projection_residual(k_x).squaredNorm();
    return {clamp_variance(value, sigma), VarianceKind::v2};
}

VarianceEstimate SketchedFit::variance_v3(const SketchMatrix& S,
                                          const Eigen::Ref<const Vector>& k_x,
                                          double sigma) const {
    require(sigma > 0.0, errc::invalid_argument, "sigma must be positive");
    require(S.m() == m() && S.n() == n(), errc::dimension_mismatch,
            "sketch does not match this fit");
    require(k_x.size() == n(), errc::dimension_mismatch, "kernel section has wrong length");
    const Vector sk = S.entries * k_x;
    const Vector u = solve_m(sk);
    const double nn = static_cast<double>(n());
    const double value = sigma * sigma / (nn * nn) * u.dot(G2_ * u);
    return {clamp_variance(value, sigma), VarianceKind::v3};
}

Vector SketchedFit::mean_coefficients(const Eigen::Ref<const Vector>& y) const {
    require(y.size() == n(), errc::dimension_mismatch, "response length does not match fit");
    const Vector t = A_ * y;
    return (y - A_.transpose() * solve_m(t)) / (static_cast<double>(n()) * lambda_);
}

double SketchedFit::predict_mean(const Eigen::Ref<const Vector>& y,
                                 const Eigen::Ref<const Vector>& k_x) const {
    require(k_x.size() == n(), errc::dimension_mismatch, "kernel section has wrong length");
    return k_x.dot(mean_coefficients(y));
}

Vector SketchedFit::sketched_weights(const Eigen::Ref<const Vector>& y) const {
    require(y.size() == n(), errc::dimension_mismatch, "response length does not match fit");
    return solve_m(Vector(A_ * y)) / static_cast<double>(n());
}

GapDiagnostics gap_diagnostics(const SketchedFit& fit, const SpectralDecomposition& spec,
                               const Eigen::Ref<const Vector>& k_x) {
    require(spec.n() == fit.n(), errc::dimension_mismatch,
            "decomposition does not match fit dimension");
    const double lambda = fit.lambda();
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(fit.n()));

    // Exact shrinkage residual in the eigenbasis:
    // (I - K (lambda K + K^2)^{-1} K) g* has coefficient lambda/(lambda + mu).
    const Vector z = spec.eigenvectors.transpose() * k_x;
    const Vector shrunk = ((lambda / (spec.eigenvalues.array() + lambda)) * z.array()).matrix();

    GapDiagnostics d;
    d.lambda = lambda;
    d.t1 = inv_sqrt_n * shrunk.norm();
    d.t2 = inv_sqrt_n * fit.projection_residual(k_x).norm();
    d.ratio1 = d.t1 * d.t1 / lambda;
    d.ratio2 = d.t2 * d.t2 / lambda;
    return d;
}

GapDiagnostics gap_diagnostics(const KernelMatrix& K, const SpectralDecomposition& spec,
                               const SketchMatrix& S, double lambda,
                               const Eigen::Ref<const Vector>& k_x) {
    return gap_diagnostics(SketchedFit(K, S, lambda), spec, k_x);
}

}  // namespace sketchvar
