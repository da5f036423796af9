#include "sketchvar/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "sketchvar/threads.hpp"

namespace sketchvar {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double sobolev_check_scalar(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& v) {
    require(u.size() == 1 && v.size() == 1, errc::invalid_argument,
            "sobolev kernels are defined for 1-d inputs");
    const double a = u[0], b = v[0];
    require(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0, errc::invalid_argument,
            "sobolev kernel inputs must lie in [0,1]");
    return a;
}

double spectrum_value(const KernelSpec& spec, int k) {  // k is 1-based
    if (spec.decay == SpectrumDecay::polynomial) return std::pow(static_cast<double>(k), -2.0 * spec.alpha);
    return std::exp(-spec.rate_a * std::pow(static_cast<double>(k), spec.rate_p));
}

double cosine_basis(int k, double x) {  // k is 1-based; orthonormal in L2[0,1]
    if (k == 1) return 1.0;
    return std::sqrt(2.0) * std::cos(static_cast<double>(k - 1) * kPi * x);
}

}  // namespace

std::string KernelSpec::tag() const {
    std::ostringstream os;
    switch (family) {
        case KernelFamily::gaussian:
            os << "gaussian(h=" << bandwidth << ")";
            break;
        case KernelFamily::sobolev_first_order:
            os << "sobolev1";
            break;
        case KernelFamily::sobolev_cubic:
            os << "sobolev_cubic";
            break;
        case KernelFamily::explicit_spectrum:
            if (decay == SpectrumDecay::polynomial)
                os << "spectrum(k^-" << 2.0 * alpha << ",T=" << num_terms << ")";
            else
                os << "spectrum(exp(-" << rate_a << "k^" << rate_p << "),T=" << num_terms << ")";
            break;
    }
    return os.str();
}

double evaluate_kernel(const KernelSpec& spec, const Eigen::Ref<const Vector>& u,
                       const Eigen::Ref<const Vector>& v) {
    require(u.size() == v.size(), errc::dimension_mismatch, "kernel arguments have different dimensions");
    require(u.allFinite() && v.allFinite(), errc::invalid_argument, "kernel arguments must be finite");

    switch (spec.family) {
        case KernelFamily::gaussian: {
            const double d2 = (u - v).squaredNorm();
            return std::exp(-d2 / (2.0 * spec.bandwidth * spec.bandwidth));
        }
        case KernelFamily::sobolev_first_order: {
            sobolev_check_scalar(u, v);
            return 1.0 + std::min(u[0], v[0]);
        }
        case KernelFamily::sobolev_cubic: {
            // Reproducing kernel of the second-order Sobolev space on [0,1]:
            // 1 + uv + int_0^1 (u-t)_+ (v-t)_+ dt, with eigenvalues ~ k^-4.
            sobolev_check_scalar(u, v);
            const double a = u[0], b = v[0], mn = std::min(a, b);
            return 1.0 + a * b + a * b * mn - (a + b) * mn * mn / 2.0 + mn * mn * mn / 3.0;
        }
        case KernelFamily::explicit_spectrum: {
            sobolev_check_scalar(u, v);
            require(spec.num_terms >= 1, errc::invalid_argument,
                    "explicit_spectrum kernel needs num_terms >= 1");
            double acc = 0.0;
            for (int k = 1; k <= spec.num_terms; ++k)
                acc += spectrum_value(spec, k) * cosine_basis(k, u[0]) * cosine_basis(k, v[0]);
            return acc;
        }
    }
    fail(errc::invalid_argument, "unknown kernel family");
}

KernelMatrix build_kernel_matrix(const KernelSpec& spec, const Dataset& data) {
    data.validate();
    const Eigen::Index n = data.n();
    const double scale = 1.0 / static_cast<double>(n);

    Matrix K(n, n);
    // Each (i, j) pair is evaluated once and mirrored, so the matrix is
    // exactly symmetric and entries do not depend on the row partition.
    parallel_for(n, [&](std::int64_t i) {
        const Vector xi = data.inputs.row(i).transpose();
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = scale * evaluate_kernel(spec, xi, data.inputs.row(j).transpose());
            require(std::isfinite(v), errc::numerical, "kernel evaluation produced a non-finite value");
            K(i, j) = v;
            K(j, i) = v;
        }
    });
    return KernelMatrix{std::move(K)};
}

Vector kernel_section(const KernelSpec& spec, const Dataset& data,
                      const Eigen::Ref<const Vector>& x) {
    const Eigen::Index n = data.n();
    Vector k(n);
    for (Eigen::Index i = 0; i < n; ++i)
        k[i] = evaluate_kernel(spec, x, data.inputs.row(i).transpose());
    return k;
}

SpectralDecomposition decompose(const KernelMatrix& K) {
    const Eigen::Index n = K.n();
    require(n >= 1, errc::invalid_argument, "empty kernel matrix");
    require(K.entries.isApprox(K.entries.transpose(), 1e-12), errc::invalid_argument,
            "kernel matrix must be symmetric");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(K.entries);
    require(solver.info() == Eigen::Success, errc::numerical, "eigendecomposition did not converge");

    // Eigen returns ascending order; flip to descending.
    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();

    const double top = out.eigenvalues[0];
    require(out.eigenvalues[n - 1] >= -1e-10 * std::max(top, 0.0) - 1e-300, errc::numerical,
            "matrix is not positive semidefinite within tolerance");
    const double clamp_tol = 1e-12 * std::max(top, 0.0);
    for (Eigen::Index i = 0; i < n; ++i)
        if (out.eigenvalues[i] < 0.0 && out.eigenvalues[i] >= -clamp_tol - 1e-300) out.eigenvalues[i] = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (out.eigenvalues[i] < 0.0) out.eigenvalues[i] = 0.0;  // residual rounding below -clamp_tol was rejected above
    return out;
}

Eigen::Index effective_dimension(const Eigen::Ref<const Vector>& eigenvalues_desc, double lambda) {
    require(lambda > 0.0, errc::invalid_argument, "lambda must be positive");
    const Eigen::Index n = eigenvalues_desc.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        require(eigenvalues_desc[i] >= eigenvalues_desc[i + 1], errc::invalid_argument,
                "eigenvalues must be sorted in descending order");
    require(n == 0 || eigenvalues_desc[n - 1] >= 0.0, errc::invalid_argument,
            "eigenvalues must be nonnegative");

    Eigen::Index count = 0;
    while (count < n && eigenvalues_desc[count] > lambda) ++count;
    return count;
}

}  // namespace sketchvar
