#pragma once

#include <optional>

#include "sketchvar/common.hpp"

namespace sketchvar {

/// A regression sample: n rows of d-dimensional inputs with scalar responses.
struct Dataset {
    Matrix inputs;      // n x d
    Vector responses;   // n
    std::optional<double> noise_scale;  // sigma, when known

    Dataset() = default;
    Dataset(Matrix x, Vector y, std::optional<double> sigma = std::nullopt)
        : inputs(std::move(x)), responses(std::move(y)), noise_scale(sigma) {
        validate();
    }

    Eigen::Index n() const { return inputs.rows(); }
    Eigen::Index dim() const { return inputs.cols(); }

    void validate() const {
        require(inputs.rows() >= 1, errc::invalid_argument, "dataset must contain at least one row");
        require(inputs.rows() == responses.size(), errc::dimension_mismatch,
                "inputs and responses row counts differ");
        require_finite(inputs, "inputs");
        require_finite(responses, "responses");
        if (noise_scale) require(*noise_scale > 0.0, errc::invalid_argument, "noise scale must be positive");
    }
};

/// 1-d convenience constructor used throughout the synthetic experiments.
inline Dataset make_dataset_1d(const Vector& x, const Vector& y,
                               std::optional<double> sigma = std::nullopt) {
    Matrix inputs(x.size(), 1);
    inputs.col(0) = x;
    return Dataset(std::move(inputs), y, sigma);
}

}  // namespace sketchvar
