#pragma once

#include <string>

#include "sketchvar/common.hpp"
#include "sketchvar/dataset.hpp"

namespace sketchvar {

enum class KernelFamily {
    gaussian,             // exp(-|u-v|^2 / (2 h^2))
    sobolev_first_order,  // 1 + min(u,v) on [0,1], 1-d
    sobolev_cubic,        // second-order Sobolev reproducing kernel on [0,1], 1-d
    explicit_spectrum,    // cosine-basis kernel with a prescribed eigenvalue sequence
};

enum class SpectrumDecay {
    polynomial,   // mu_k = k^(-2 alpha)
    exponential,  // mu_k = exp(-a k^p)
};

/// Kernel family plus parameters. Instances are cheap value types.
///
/// The explicit_spectrum family sums `num_terms` cosine basis functions
/// phi_1 = 1, phi_k(x) = sqrt(2) cos((k-1) pi x) weighted by the prescribed
/// eigenvalue sequence. On the midpoint grid x_i = (2i-1)/(2n) with
/// num_terms = n the resulting 1/n-scaled kernel matrix has exactly that
/// spectrum, which makes eigendecay experiments exact.
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double bandwidth = 1.0;                          // gaussian
    SpectrumDecay decay = SpectrumDecay::polynomial; // explicit_spectrum
    double alpha = 2.0;                              // polynomial decay exponent
    double rate_a = 1.0;                             // exponential decay: exp(-a k^p)
    double rate_p = 1.0;
    int num_terms = 0;                               // explicit_spectrum basis size

    static KernelSpec gaussian_kernel(double h) {
        require(h > 0.0, errc::invalid_argument, "gaussian bandwidth must be positive");
        KernelSpec s;
        s.family = KernelFamily::gaussian;
        s.bandwidth = h;
        return s;
    }
    static KernelSpec sobolev_first() {
        KernelSpec s;
        s.family = KernelFamily::sobolev_first_order;
        return s;
    }
    static KernelSpec sobolev_cubic_kernel() {
        KernelSpec s;
        s.family = KernelFamily::sobolev_cubic;
        return s;
    }
    static KernelSpec explicit_polynomial(double alpha, int num_terms) {
        require(alpha > 0.0, errc::invalid_argument, "decay exponent must be positive");
        require(num_terms >= 1, errc::invalid_argument, "explicit_spectrum needs num_terms >= 1");
        KernelSpec s;
        s.family = KernelFamily::explicit_spectrum;
        s.decay = SpectrumDecay::polynomial;
        s.alpha = alpha;
        s.num_terms = num_terms;
        return s;
    }
    static KernelSpec explicit_exponential(double a, double p, int num_terms) {
        require(a > 0.0 && p > 0.0, errc::invalid_argument, "exponential decay needs a > 0, p > 0");
        require(num_terms >= 1, errc::invalid_argument, "explicit_spectrum needs num_terms >= 1");
        KernelSpec s;
        s.family = KernelFamily::explicit_spectrum;
        s.decay = SpectrumDecay::exponential;
        s.rate_a = a;
        s.rate_p = p;
        s.num_terms = num_terms;
        return s;
    }

    std::string tag() const;
};

/// Pointwise kernel value K(u, v). Symmetric in its arguments.
double evaluate_kernel(const KernelSpec& spec, const Eigen::Ref<const Vector>& u,
                       const Eigen::Ref<const Vector>& v);

/// The 1/n-scaled Gram matrix K_ij = (1/n) K(X_i, X_j), exactly symmetric.
struct KernelMatrix {
    Matrix entries;  // n x n
    Eigen::Index n() const { return entries.rows(); }
};

KernelMatrix build_kernel_matrix(const KernelSpec& spec, const Dataset& data);

/// Kernel section k(x)_i = K(x, X_i); carries no 1/n factor.
Vector kernel_section(const KernelSpec& spec, const Dataset& data,
                      const Eigen::Ref<const Vector>& x);

/// Eigensystem K = U diag(values) U^T with values sorted descending and
/// clamped to be nonnegative. split_index(lambda) partitions (U1, D1) from
/// (U2, D2) at the effective dimension.
struct SpectralDecomposition {
    Matrix eigenvectors;  // n x n, orthonormal columns
    Vector eigenvalues;   // descending, >= 0
    Eigen::Index n() const { return eigenvalues.size(); }
};

SpectralDecomposition decompose(const KernelMatrix& K);

/// Number of eigenvalues strictly greater than lambda. Expects a descending
/// spectrum; ties with lambda are excluded. Returns 0 when the top eigenvalue
/// is already <= lambda and n when every eigenvalue exceeds lambda.
Eigen::Index effective_dimension(const Eigen::Ref<const Vector>& eigenvalues_desc, double lambda);

}  // namespace sketchvar
