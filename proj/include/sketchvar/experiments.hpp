#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sketchvar/common.hpp"
#include "sketchvar/dataset.hpp"
#include "sketchvar/kernels.hpp"
#include "sketchvar/rules.hpp"
#include "sketchvar/sketch.hpp"

namespace sketchvar {

enum class Generator { uniform_quadratic, clustered, gaussian_mixture };

const char* generator_name(Generator g);
Generator generator_from_name(const std::string& name);

/// Target function shared by all synthetic settings.
inline double f_star(double x) { return -1.0 + 2.0 * x * x; }

struct SyntheticSpec {
    Generator generator = Generator::uniform_quadratic;
    Eigen::Index n = 100;
    double sigma = 1.0;
    std::uint64_t seed = 1;
};

/// uniform_quadratic: X ~ U[0,1].
/// clustered: ceil(sqrt(n)) points from U[0,1/2], the rest at 1 + N(0, 1/n).
/// gaussian_mixture: equal mixture of N(0.5, 0.5^2) and N(5, 5^2)
/// (standard-deviation parameterization). Responses are f*(x) + N(0, sigma^2).
Dataset generate(const SyntheticSpec& spec);

/// Equispaced evaluation grid covering the generator's support.
Vector evaluation_grid(Generator g, Eigen::Index n, int grid_size);

struct GapReport {
    Eigen::Index n = 0;
    Eigen::Index m = 0;
    double sigma = 1.0;
    double lambda = 0.0;
    std::string kernel;
    std::uint64_t seed = 0;
    double sup_gap = 0.0;
    double mean_gap = 0.0;
    int grid_size = 0;
    double wall_exact_ms = 0.0;
    double wall_sketched_ms = 0.0;
    std::optional<double> sigma_ratio;  // sigma sweeps: sup_gap(sigma)/sup_gap(1)
};

std::string gap_report_csv(const std::vector<GapReport>& rows, bool with_sigma_ratio);

struct SweepCommon {
    KernelSpec kernel;
    Generator generator = Generator::uniform_quadratic;
    int grid_size = 100;
    std::vector<std::uint64_t> seeds = {1};
    SketchDistribution sketch = SketchDistribution::gaussian;
};

/// sup/mean |V1 - V2| over the grid for each (n, seed) cell.
std::vector<GapReport> gap_sweep_n(const SweepCommon& common,
                                   const std::vector<Eigen::Index>& n_list,
                                   const GrowthRule& m_rule, const LambdaRule& lambda_rule,
                                   double sigma);

/// Projection-dimension sweep at fixed n. The sketch size law maps the swept
/// exponent c to m: power -> ceil(base * n^(c/denom)); loglaw ->
/// ceil(base * (log n)^(c/2)).
enum class MSweepLaw { power, loglaw };

Eigen::Index m_for_c(MSweepLaw law, double base, double denom, Eigen::Index n, double c);

std::vector<GapReport> gap_sweep_m(const SweepCommon& common, Eigen::Index n, MSweepLaw law,
                                   double base, double denom, const std::vector<double>& c_list,
                                   const LambdaRule& lambda_rule, double sigma);

/// Noise-scale sweep; datasets are reused across sigma so the exact
/// sigma^2 law is visible in the ratio column.
std::vector<GapReport> gap_sweep_sigma(const SweepCommon& common, Eigen::Index n,
                                       const GrowthRule& m_rule, const LambdaRule& lambda_rule,
                                       const std::vector<double>& sigma_list);

struct TimingReport {
    Eigen::Index n = 0;
    Eigen::Index m = 0;
    int queries = 0;
    double exact_factor_ms = 0.0;
    double exact_query_ms = 0.0;
    double sketched_build_ms = 0.0;
    double sketched_query_ms = 0.0;
    double exact_total_ms() const { return exact_factor_ms + exact_query_ms; }
    double sketched_total_ms() const { return sketched_build_ms + sketched_query_ms; }
};

/// Wall-clock split of the exact path (factor + V1 queries) against the
/// sketched path (build + V2 queries) on one synthetic instance.
TimingReport timing_benchmark(const KernelSpec& kernel, Generator generator, Eigen::Index n,
                              Eigen::Index m, int queries, double lambda, std::uint64_t seed);

std::string timing_report_csv(const TimingReport& r);

/// Feature standardization statistics, reusable across splits.
struct Standardization {
    Vector mean;
    Vector stddev;
};

struct LoadedCsv {
    Dataset data;
    Standardization stats;  // identity transform when standardize was off
    bool standardized = false;
};

/// Reads a comma-separated file with a header row. Any missing or
/// non-numeric cell in a referenced column fails with the 1-based data row
/// number. When `reuse` is given its statistics are applied instead of
/// fitting new ones (test splits).
LoadedCsv load_csv_dataset(const std::string& path, const std::string& response_column,
                           const std::vector<std::string>& feature_columns, bool standardize,
                           const Standardization* reuse = nullptr);

}  // namespace sketchvar
