#include "sketchvar/sketch.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "sketchvar/rng.hpp"
#include "sketchvar/threads.hpp"

namespace sketchvar {

namespace {

double unit_entry(SketchDistribution dist, std::uint64_t seed, Eigen::Index i, Eigen::Index j) {
    switch (dist) {
        case SketchDistribution::gaussian:
            return rng::normal(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
        case SketchDistribution::rademacher:
            return rng::rademacher(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
        case SketchDistribution::custom:
            break;
    }
    fail(errc::invalid_argument, "custom sketches cannot be regenerated from a seed");
}

template <typename T>
void write_le(std::ofstream& out, T value) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if constexpr (sizeof(T) > 1) {
        std::uint16_t probe = 1;
        unsigned char probe_b;
        std::memcpy(&probe_b, &probe, 1);
        if (probe_b == 0) {  // big-endian host
            for (std::size_t k = 0; k < sizeof(T) / 2; ++k) std::swap(buf[k], buf[sizeof(T) - 1 - k]);
        }
    }
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::ifstream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    require(static_cast<bool>(in), errc::io, "sketch file truncated");
    std::uint16_t probe = 1;
    unsigned char probe_b;
    std::memcpy(&probe_b, &probe, 1);
    if (probe_b == 0 && sizeof(T) > 1) {
        for (std::size_t k = 0; k < sizeof(T) / 2; ++k) std::swap(buf[k], buf[sizeof(T) - 1 - k]);
    }
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

}  // namespace

SketchMatrix generate_sketch(SketchDistribution dist, std::uint64_t seed, Eigen::Index m,
                             Eigen::Index n) {
    require(m >= 1, errc::invalid_argument, "sketch dimension m must be >= 1");
    require(n >= 1, errc::invalid_argument, "ambient dimension n must be >= 1");
    require(dist != SketchDistribution::custom, errc::invalid_argument,
            "use custom_sketch() for explicit entries");

    SketchMatrix s;
    s.distribution = dist;
    s.seed = seed;
    s.oversketched = m > n;
    s.entries.resize(m, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    parallel_for(m, [&](std::int64_t i) {
        for (Eigen::Index j = 0; j < n; ++j) s.entries(i, j) = scale * unit_entry(dist, seed, i, j);
    });
    return s;
}

SketchMatrix extend_sketch(const SketchMatrix& s, Eigen::Index m2, Eigen::Index n2,
                           std::uint64_t seed2, bool rescale_on_grow) {
    const Eigen::Index m = s.m(), n = s.n();
    require(m2 >= m && n2 >= n, errc::invalid_argument, "extend cannot shrink a sketch");
    require(s.distribution != SketchDistribution::custom, errc::invalid_argument,
            "custom sketches cannot be extended");
    if (m2 == m && n2 == n) return s;

    SketchMatrix out;
    out.distribution = s.distribution;
    out.seed = seed2;
    out.oversketched = m2 > n2;
    out.entries.resize(m2, n2);

    const double new_scale = 1.0 / std::sqrt(static_cast<double>(m2));
    const double kept_factor =
        rescale_on_grow ? std::sqrt(static_cast<double>(m) / static_cast<double>(m2)) : 1.0;
    out.entries.topLeftCorner(m, n) = kept_factor * s.entries;

    parallel_for(m2, [&](std::int64_t i) {
        const Eigen::Index j0 = (i < m) ? n : 0;
        for (Eigen::Index j = j0; j < n2; ++j)
            out.entries(i, j) = new_scale * unit_entry(s.distribution, seed2, i, j);
    });
    return out;
}

SketchMatrix identity_sketch(Eigen::Index n) {
    require(n >= 1, errc::invalid_argument, "identity sketch needs n >= 1");
    SketchMatrix s;
    s.distribution = SketchDistribution::custom;
    s.entries = Matrix::Identity(n, n);
    return s;
}

SketchMatrix custom_sketch(Matrix entries) {
    require(entries.rows() >= 1 && entries.cols() >= 1, errc::invalid_argument,
            "custom sketch must be non-empty");
    require_finite(entries, "sketch entries");
    SketchMatrix s;
    s.distribution = SketchDistribution::custom;
    s.oversketched = entries.rows() > entries.cols();
    s.entries = std::move(entries);
    return s;
}

void save_sketch(const SketchMatrix& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), errc::io, "cannot open '" + path + "' for writing");
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.distribution));
    write_le<std::uint64_t>(out, s.seed);
    write_le<std::uint64_t>(out, static_cast<std::uint64_t>(s.m()));
    write_le<std::uint64_t>(out, static_cast<std::uint64_t>(s.n()));
    for (Eigen::Index i = 0; i < s.m(); ++i)
        for (Eigen::Index j = 0; j < s.n(); ++j) write_le<double>(out, s.entries(i, j));
    require(out.good(), errc::io, "write to '" + path + "' failed");
}

SketchMatrix load_sketch(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), errc::io, "cannot open '" + path + "'");
    const auto tag = read_le<std::uint32_t>(in);
    require(tag <= 2, errc::io, "unknown sketch distribution tag in '" + path + "'");
    SketchMatrix s;
    s.distribution = static_cast<SketchDistribution>(tag);
    s.seed = read_le<std::uint64_t>(in);
    const auto m = static_cast<Eigen::Index>(read_le<std::uint64_t>(in));
    const auto n = static_cast<Eigen::Index>(read_le<std::uint64_t>(in));
    require(m >= 1 && n >= 1 && m < (1 << 24) && n < (1 << 24), errc::io,
            "implausible sketch dimensions in '" + path + "'");
    s.oversketched = m > n;
    s.entries.resize(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) s.entries(i, j) = read_le<double>(in);
    return s;
}

AssumptionReport check_assumption(const SketchMatrix& s, const SpectralDecomposition& spec,
                                  double lambda, double cprime) {
    require(lambda > 0.0, errc::invalid_argument, "lambda must be positive");
    require(s.n() == spec.n(), errc::dimension_mismatch,
            "sketch and decomposition dimensions differ");

    AssumptionReport rep;
    rep.lambda = lambda;
    rep.cprime = cprime;
    rep.s_lambda = effective_dimension(spec.eigenvalues, lambda);

    const Eigen::Index n = spec.n();
    const Eigen::Index sl = rep.s_lambda;

    if (sl > 0) {
        const Matrix su1 = s.entries * spec.eigenvectors.leftCols(sl);
        Eigen::JacobiSVD<Matrix> svd(su1);
        rep.smax = svd.singularValues()[0];
        rep.smin = svd.singularValues()[svd.singularValues().size() - 1];
    }
    if (sl < n) {
        const Eigen::Index tail = n - sl;
        Matrix su2 = s.entries * spec.eigenvectors.rightCols(tail);
        su2.array().rowwise() *= spec.eigenvalues.tail(tail).array().sqrt().transpose();
        Eigen::JacobiSVD<Matrix> svd(su2);
        rep.tail_opnorm = svd.singularValues()[0];
    }
    rep.passed = rep.smin >= 0.5 && rep.smax <= 1.5 && rep.tail_opnorm <= cprime * std::sqrt(lambda);
    return rep;
}

}  // namespace sketchvar
