#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sketchvar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Error categories, mirrored one-to-one by the C API status codes.
enum class errc {
    invalid_argument,
    dimension_mismatch,
    numerical,
    io,
    config,
    unsupported,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

inline void require_finite(const Eigen::Ref<const Matrix>& m, const char* name) {
    if (!m.allFinite()) fail(errc::invalid_argument, std::string(name) + " contains non-finite values");
}

}  // namespace sketchvar
