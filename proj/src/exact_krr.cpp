#include "sketchvar/exact_krr.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace sketchvar {

double clamp_variance(double value, double sigma) {
    if (value >= 0.0) return value;
    require(value >= -1e-12 * sigma * sigma, errc::numerical,
            "variance evaluation produced a significantly negative value");
    return 0.0;
}

ExactFit fit_krr(const KernelMatrix& K, const Vector& y, double lambda) {
    const Eigen::Index n = K.n();
    require(lambda > 0.0, errc::invalid_argument, "lambda must be positive");
    require(y.size() == n, errc::dimension_mismatch, "response length does not match kernel matrix");
    require_finite(y, "responses");

    ExactFit fit;
    fit.lambda = lambda;
    fit.kernel = K.entries;
    fit.responses = y;

    Matrix shifted = K.entries;
    shifted.diagonal().array() += lambda;
    fit.factor.compute(shifted);
    require(fit.factor.info() == Eigen::Success, errc::numerical,
            "factorization failed: K + lambda I is not numerically positive definite");

    fit.weights = fit.factor.solve(y / static_cast<double>(n));

    const double residual = (shifted * fit.weights - y / static_cast<double>(n)).norm();
    require(residual <= 1e-8 * y.norm() / static_cast<double>(n) + 1e-300, errc::numerical,
            "ridge solve residual exceeds tolerance");
    return fit;
}

double predict_mean(const ExactFit& fit, const Eigen::Ref<const Vector>& k_x) {
    require(k_x.size() == fit.n(), errc::dimension_mismatch, "kernel section has wrong length");
    return k_x.dot(fit.weights);
}

VarianceEstimate variance_v1(const ExactFit& fit, const Eigen::Ref<const Vector>& k_x, double sigma) {
    require(sigma > 0.0, errc::invalid_argument, "sigma must be positive");
    require(k_x.size() == fit.n(), errc::dimension_mismatch, "kernel section has wrong length");
    const Vector z = fit.factor.solve(k_x);
    const double n = static_cast<double>(fit.n());
    const double value = sigma * sigma / (n * n) * z.squaredNorm();
    return {clamp_variance(value, sigma), VarianceKind::v1};
}

Vector fitted_values(const ExactFit& fit) {
    return static_cast<double>(fit.n()) * (fit.kernel * fit.weights);
}

WoodburyResult woodbury_ridge_inverse(const KernelMatrix& K, double lambda) {
    require(lambda > 0.0, errc::invalid_argument, "lambda must be positive");
    const Eigen::Index n = K.n();
    Matrix inner = K.entries * K.entries;  // K^2; this op is O(n^3) by design, it is the exact path
    inner += lambda * K.entries;

    WoodburyResult out;
    Matrix x;  // (lambda K + K^2)^{-1} K
    Eigen::LDLT<Matrix> ldlt(inner);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.rcond() > 1e-14) {
        x = ldlt.solve(K.entries);
    } else {
        // Rank-deficient K: invert on the span and flag degraded mode.
        Eigen::SelfAdjointEigenSolver<Matrix> es(inner);
        require(es.info() == Eigen::Success, errc::numerical, "eigendecomposition failed");
        const Vector& ev = es.eigenvalues();
        const double cutoff = std::max(ev.cwiseAbs().maxCoeff(), 0.0) * 1e-14 * static_cast<double>(n);
        Vector inv = Vector::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i)
            if (ev[i] > cutoff) inv[i] = 1.0 / ev[i];
        x = es.eigenvectors() * inv.asDiagonal() * (es.eigenvectors().transpose() * K.entries);
        out.degraded = true;
    }
    out.inverse = Matrix::Identity(n, n) - K.entries * x;
    out.inverse /= lambda;
    return out;
}

double estimate_noise_variance(const ExactFit& fit) {
    const Eigen::Index n = fit.n();
    // dof = n - tr(H) = lambda * tr((K + lambda I)^{-1}), via the Cholesky factor.
    const Matrix linv =
        fit.factor.matrixL().solve(Matrix::Identity(n, n));
    const double dof = fit.lambda * linv.squaredNorm();
    require(dof > 1e-12 * static_cast<double>(n), errc::invalid_argument,
            "degrees of freedom n - tr(H) is not positive");
    const double rss = (fit.responses - fitted_values(fit)).squaredNorm();
    return rss / dof;
}

}  // namespace sketchvar
