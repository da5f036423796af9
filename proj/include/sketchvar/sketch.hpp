#pragma once

#include <cstdint>
#include <string>

#include "sketchvar/common.hpp"
#include "sketchvar/kernels.hpp"

namespace sketchvar {

enum class SketchDistribution : std::uint32_t {
    gaussian = 0,
    rademacher = 1,
    custom = 2,  // explicit entries (identity, test fixtures); not regenerable
};

/// An m x n random projection with i.i.d. entries of variance 1/m, so that
/// S U1 has singular values near 1 for any orthonormal U1.
///
/// Entries are addressed by (seed, row, column) through the counter RNG:
/// generate() is a pure function of its arguments and extending a sketch
/// with the same seed reproduces exactly the top-left block of the larger
/// matrix (after the deterministic 1/sqrt(m) -> 1/sqrt(m2) rescale).
struct SketchMatrix {
    Matrix entries;  // m x n
    SketchDistribution distribution = SketchDistribution::gaussian;
    std::uint64_t seed = 0;
    bool oversketched = false;  // m > n was requested

    Eigen::Index m() const { return entries.rows(); }
    Eigen::Index n() const { return entries.cols(); }
};

SketchMatrix generate_sketch(SketchDistribution dist, std::uint64_t seed, Eigen::Index m,
                             Eigen::Index n);

/// Grows a sketch to m2 x n2. Retained entries are rescaled from 1/sqrt(m)
/// to 1/sqrt(m2) when rescale_on_grow is set (default); otherwise they are
/// kept verbatim and only new blocks carry the 1/sqrt(m2) scale. New blocks
/// are drawn from seed2, one RNG sub-stream per row, so the result does not
/// depend on the order blocks are filled in.
SketchMatrix extend_sketch(const SketchMatrix& s, Eigen::Index m2, Eigen::Index n2,
                           std::uint64_t seed2, bool rescale_on_grow = true);

/// Square identity sketch (m = n); useful as the exactness oracle.
SketchMatrix identity_sketch(Eigen::Index n);

/// Wraps explicit entries as a sketch.
SketchMatrix custom_sketch(Matrix entries);

/// Flat binary serialization. Layout, all little-endian:
///   u32 distribution tag, u64 seed, u64 m, u64 n, then m*n f64 row-major.
void save_sketch(const SketchMatrix& s, const std::string& path);
SketchMatrix load_sketch(const std::string& path);

/// Diagnostics for the sketch conditions that back the variance guarantee:
/// extreme singular values of S U1 must land in [1/2, 3/2] and the sketched
/// spectral tail ||S U2 D2^(1/2)||_op must stay below cprime * sqrt(lambda).
struct AssumptionReport {
    double smin = 1.0;         // smallest singular value of S U1
    double smax = 1.0;         // largest singular value of S U1
    double tail_opnorm = 0.0;  // ||S U2 D2^(1/2)||_op
    double lambda = 0.0;
    Eigen::Index s_lambda = 0;
    double cprime = 2.0;
    bool passed = false;
};

/// Evaluates both conditions at the split index effective_dimension(D, lambda).
/// When s_lambda = 0 the report uses smin = smax = 1 by convention and only
/// the tail condition decides.
AssumptionReport check_assumption(const SketchMatrix& s, const SpectralDecomposition& spec,
                                  double lambda, double cprime = 2.0);

}  // namespace sketchvar
